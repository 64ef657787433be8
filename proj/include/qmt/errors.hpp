// errors.hpp — Exception types thrown across the library

#pragma once

#include <stdexcept>
#include <string>

namespace qmt {

struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotFaithful : std::runtime_error {
    explicit NotFaithful(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotPrimitive : std::runtime_error {
    explicit NotPrimitive(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGenerator : std::runtime_error {
    explicit DegenerateGenerator(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundaryHit : std::runtime_error {
    explicit BoundaryHit(const std::string& msg) : std::runtime_error(msg) {}
};

struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qmt
