// json_io.cpp — Matrix and generator JSON formats

#include "qmt/json_io.hpp"

#include <fstream>

namespace qmt {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int jj = 0; jj < m.cols(); ++jj)
            row.push_back({m(i, jj).real(), m(i, jj).imag()});
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InvalidInput("matrix_from_json: expected array of rows");
    const int r = static_cast<int>(j.size());
    const int c = static_cast<int>(j[0].size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(j[i].size()) != c)
            throw InvalidInput("matrix_from_json: ragged rows");
        for (int jj = 0; jj < c; ++jj) {
            const auto& e = j[i][jj];
            if (!e.is_array() || e.size() != 2)
                throw InvalidInput("matrix_from_json: entries must be [re, im]");
            m(i, jj) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json generator_to_json(const DetailedBalanceGenerator& gen) {
    json j;
    j["dim"] = gen.dim();
    j["sigma"] = matrix_to_json(gen.sigma().matrix());
    json modes = json::array();
    for (const auto& m : gen.modes())
        modes.push_back({{"c", m.c}, {"omega", m.omega}, {"L", matrix_to_json(m.L)}});
    j["modes"] = modes;
    return j;
}

DetailedBalanceGenerator generator_from_json(const json& j) {
    if (!j.contains("dim") || !j.contains("sigma") || !j.contains("modes"))
        throw InvalidInput("generator_from_json: missing dim/sigma/modes");
    const int d = j["dim"].get<int>();
    Matrix sig = matrix_from_json(j["sigma"]);
    if (sig.rows() != d || sig.cols() != d)
        throw InvalidInput("generator_from_json: sigma dimension mismatch");
    DensityMatrix sigma(sig);
    std::vector<JumpMode> modes;
    for (const auto& mj : j["modes"]) {
        JumpMode m;
        m.c = mj.at("c").get<double>();
        m.omega = mj.at("omega").get<double>();
        m.L = matrix_from_json(mj.at("L"));
        if (m.L.rows() != d || m.L.cols() != d)
            throw InvalidInput("generator_from_json: mode dimension mismatch");
        modes.push_back(std::move(m));
    }
    return DetailedBalanceGenerator::from_modes(sigma, std::move(modes));
}

void save_generator(const DetailedBalanceGenerator& gen, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_generator: cannot open " + path);
    out << generator_to_json(gen).dump(2) << "\n";
}

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("load_generator: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("load_generator: parse error: ") + e.what());
    }
    return j;
}

} // namespace

DetailedBalanceGenerator load_generator(const std::string& path) {
    return generator_from_json(read_json_file(path));
}

DetailedBalanceGenerator load_generator_unchecked(const std::string& path) {
    json j = read_json_file(path);
    if (!j.contains("dim") || !j.contains("sigma") || !j.contains("modes"))
        throw InvalidInput("load_generator: missing dim/sigma/modes");
    const int d = j["dim"].get<int>();
    DensityMatrix sigma{matrix_from_json(j["sigma"])};
    std::vector<JumpMode> modes;
    for (const auto& mj : j["modes"]) {
        JumpMode m;
        m.c = mj.at("c").get<double>();
        m.omega = mj.at("omega").get<double>();
        m.L = matrix_from_json(mj.at("L"));
        if (m.L.rows() != d || m.L.cols() != d)
            throw InvalidInput("load_generator: mode dimension mismatch");
        modes.push_back(std::move(m));
    }
    return DetailedBalanceGenerator::from_modes_unchecked(sigma, std::move(modes));
}

std::string generator_hash(const DetailedBalanceGenerator& gen) {
    const std::string s = generator_to_json(gen).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace qmt
