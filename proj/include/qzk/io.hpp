// io.hpp
// JSON input formats (graphs, LCDM instances, Kraus channels) and the
// machine-readable run report. Complex numbers are encoded as [re, im]
// pairs; matrices are row-major nested arrays.

#pragma once

#include "qzk/lcdm.hpp"
#include "qzk/qmath.hpp"
#include "qzk/threecol.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qzk::io {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline qmath::Complex parse_complex(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw IoError("complex values must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline qmath::Matrix parse_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw IoError("matrix must be a nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    qmath::Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
            throw IoError("matrix rows have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = parse_complex(
                j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

// {vertices: int, edges: [[u, v], ...]}
inline compiler::Graph parse_graph(const json& j) {
    compiler::Graph g;
    try {
        g.vertices = j.at("vertices").get<int>();
        for (const auto& e : j.at("edges")) {
            g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed graph JSON: ") + e.what());
    }
    compiler::validate_graph(g);
    return g;
}

// {n, t, pairs: [[i, j], ...], matrices: {"i,j": 4x4 complex matrix}}
inline lcdm::LCDMInstance parse_instance(const json& j) {
    lcdm::LCDMInstance inst;
    try {
        inst.n = j.at("n").get<int>();
        inst.t = j.at("t").get<int>();
        for (const auto& p : j.at("pairs")) {
            inst.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        }
        for (const auto& pr : inst.pairs) {
            const std::string key =
                std::to_string(pr.first) + "," + std::to_string(pr.second);
            inst.matrices.emplace(
                pr, qmath::DensityMatrix(2, parse_matrix(j.at("matrices").at(key))));
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed instance JSON: ") + e.what());
    }
    lcdm::validate_instance(inst);
    return inst;
}

struct Channel {
    int n = 0;
    std::vector<qmath::Matrix> kraus;
};

// {n, kraus: [matrix, ...]}
inline Channel parse_channel(const json& j) {
    Channel ch;
    try {
        ch.n = j.at("n").get<int>();
        for (const auto& k : j.at("kraus")) ch.kraus.push_back(parse_matrix(k));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("malformed channel JSON: ") + e.what());
    }
    if (ch.kraus.empty()) throw IoError("channel needs at least one Kraus operator");
    return ch;
}

// --- Run reports -------------------------------------------------------------

struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    // Pass direction: value <= threshold (distances) or >= (probabilities).
    bool at_most = true;
    bool pass = false;
};

inline Check check_at_most(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, true, value <= threshold};
}

inline Check check_at_least(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, false, value >= threshold};
}

struct RunReport {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    bool pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    // Deterministic given seed and flags; wall time deliberately excluded.
    json to_json() const {
        json j;
        j["command"] = command;
        j["seed"] = seed;
        j["checks"] = json::array();
        for (const auto& c : checks) {
            json cj;
            cj["name"] = c.name;
            cj["value"] = c.value;
            cj["threshold"] = c.threshold;
            cj["direction"] = c.at_most ? "at_most" : "at_least";
            cj["pass"] = c.pass;
            j["checks"].push_back(cj);
        }
        j["pass"] = pass();
        return j;
    }
};

}  // namespace qzk::io
