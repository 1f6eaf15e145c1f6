#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixrate/certificates.hpp"
#include "mixrate/grid.hpp"
#include "mixrate/hyperbolic_bounds.hpp"
#include "mixrate/map_model.hpp"
#include "mixrate/stochastic.hpp"
#include "mixrate/tower.hpp"

namespace mixrate {

using Json = nlohmann::ordered_json;

Json read_json_file(const std::string& path);

// Map document:
//   {"preset": "doubling" | "moebius_test" | "lsv_induced", ...preset params}
//   or {"lambda", "K", "eta", "truncation_mass", "branches": [...]}
// Branch kinds: affine {lo, hi, reversed}, moebius {a, b, c, d},
// tabulated {y, x}, lsv_induced {alpha, depth}.
MapSpec parse_map(const Json& j);

TailLaw parse_law(const Json& j);

// Observable document: {"kind": "polynomial", "coefficients": [...]} or
// {"kind": "sine", "amplitude", "frequency", "phase"}, optional "center": true
// subtracting the Lebesgue mean.
GridObservable parse_observable(const Json& j, int cells, double eta);

struct TowerConfig {
    MapSpec base;
    std::vector<int> tau;
    TailLaw law;
    TowerOptions options;
};

// {"base": map, "tau": [...], "law": {...}, "R": override, "formal_zero_R", "L_max", "n_max", "cells"}
// or {"preset": "lsv_induced", "alpha", "count", "law"} with tau = depth + 1
TowerConfig parse_tower(const Json& j);

struct PSequenceConfig {
    PSequence pseq;
    std::optional<std::vector<double>> q;  // second sequence to couple against
    double R = 0.0;
};

// {"p_minus1", "p0", "p": [...], "N", "R", "q": [...]}
PSequenceConfig parse_pseq(const Json& j);

NUHConstants parse_nuh(const Json& j);

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

}  // namespace mixrate
