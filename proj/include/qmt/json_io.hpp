// json_io.hpp — JSON (de)serialization: complex matrices as [[ [re,im], ... ]],
// generator files, and small helpers shared by reports.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "qmt/generator.hpp"

namespace qmt {

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

// Schema: {"dim": int, "sigma": [[[re,im],...]], "modes":
//          [{"c": real, "omega": real, "L": [[[re,im],...]]}]}
nlohmann::json generator_to_json(const DetailedBalanceGenerator& gen);

// Re-validates every structure-theorem invariant; throws InvalidInput naming
// the violated condition.
DetailedBalanceGenerator generator_from_json(const nlohmann::json& j);

void save_generator(const DetailedBalanceGenerator& gen, const std::string& path);
DetailedBalanceGenerator load_generator(const std::string& path);

// Parses without validating the structure-theorem conditions (diagnostics).
DetailedBalanceGenerator load_generator_unchecked(const std::string& path);

// FNV-1a over the canonical serialized form; identifies a generator in reports.
std::string generator_hash(const DetailedBalanceGenerator& gen);

} // namespace qmt
