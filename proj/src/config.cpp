#include "mixrate/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "mixrate/errors.hpp"

namespace mixrate {

namespace {

double need(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number()) throw InvalidSpec(std::string("missing numeric field '") + key + "'");
    return it->get<double>();
}

Branch parse_branch(const Json& b) {
    const std::string kind = b.value("kind", "");
    if (kind == "affine") return Branch::affine(need(b, "lo"), need(b, "hi"), get_or(b, "reversed", false));
    if (kind == "moebius") return Branch::moebius(need(b, "a"), need(b, "b"), need(b, "c"), need(b, "d"));
    if (kind == "tabulated") return Branch::tabulated(b.at("y").get<std::vector<double>>(), b.at("x").get<std::vector<double>>());
    if (kind == "lsv_induced") return Branch::lsv_induced(need(b, "alpha"), static_cast<int>(need(b, "depth")));
    throw InvalidSpec("unknown branch kind '" + kind + "'");
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open config '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidSpec("malformed JSON in '" + path + "': " + e.what());
    }
}

MapSpec parse_map(const Json& j) {
    if (!j.is_object()) throw InvalidSpec("map document must be an object");
    try {
        if (j.contains("preset")) {
            const std::string p = j.at("preset").get<std::string>();
            if (p == "doubling") return doubling_map();
            if (p == "moebius_test") return moebius_test_map(get_or(j, "c", 0.5), get_or(j, "a", 0.5));
            if (p == "lsv_induced") return lsv_induced_map(get_or(j, "alpha", 0.5), get_or(j, "count", 64));
            throw InvalidSpec("unknown map preset '" + p + "'");
        }
        MapSpec s;
        s.lambda = need(j, "lambda");
        s.K = need(j, "K");
        s.eta = need(j, "eta");
        s.truncation_mass = get_or(j, "truncation_mass", 0.0);
        if (!j.contains("branches") || !j.at("branches").is_array()) throw InvalidSpec("map needs a branches array");
        for (const auto& b : j.at("branches")) s.branches.push_back(parse_branch(b));
        return s;
    } catch (const Json::exception& e) {
        throw InvalidSpec(std::string("bad map document: ") + e.what());
    }
}

TailLaw parse_law(const Json& j) {
    if (!j.is_object()) throw InvalidSpec("tail law must be an object");
    const std::string kind = j.value("kind", "");
    if (kind == "polynomial") return TailLaw::polynomial(need(j, "C_tau"), need(j, "beta"));
    if (kind == "stretched") return TailLaw::stretched(need(j, "C_tau"), need(j, "A"), need(j, "gamma"));
    throw InvalidSpec("tail law kind must be 'polynomial' or 'stretched'");
}

GridObservable parse_observable(const Json& j, int cells, double eta) {
    if (!j.is_object()) throw InvalidSpec("observable must be an object");
    const std::string kind = j.value("kind", "");
    GridObservable g;
    try {
        if (kind == "polynomial") {
            const auto c = j.at("coefficients").get<std::vector<double>>();
            g = GridObservable::sample(
                cells,
                [&](double x) {
                    double v = 0.0;
                    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
                    return v;
                },
                eta);
        } else if (kind == "sine") {
            const double a = need(j, "amplitude"), f = get_or(j, "frequency", 1.0), ph = get_or(j, "phase", 0.0);
            g = GridObservable::sample(
                cells, [&](double x) { return a * std::sin(2.0 * std::numbers::pi * f * x + ph); }, eta);
        } else {
            throw InvalidSpec("observable kind must be 'polynomial' or 'sine'");
        }
    } catch (const Json::exception& e) {
        throw InvalidSpec(std::string("bad observable: ") + e.what());
    }
    if (get_or(j, "center", false)) {
        const double m = integrate(g);
        for (double& v : g.values) v -= m;
    }
    return g;
}

TowerConfig parse_tower(const Json& j) {
    if (!j.is_object()) throw InvalidSpec("tower document must be an object");
    TowerConfig t;
    try {
        if (j.value("preset", "") == "lsv_induced") {
            const int count = get_or(j, "count", 64);
            t.base = lsv_induced_map(get_or(j, "alpha", 0.5), count);
            for (int k = 0; k < count; ++k) t.tau.push_back(k + 1);
        } else {
            t.base = parse_map(j.at("base"));
            t.tau = j.at("tau").get<std::vector<int>>();
        }
        t.law = parse_law(j.at("law"));
        t.options.L_max = get_or(j, "L_max", t.options.L_max);
        t.options.n_max = get_or(j, "n_max", t.options.n_max);
        t.options.cells = get_or(j, "cells", t.options.cells);
        t.options.R_floor = get_or(j, "R_floor", t.options.R_floor);
        t.options.formal_zero_R = get_or(j, "formal_zero_R", false);
        if (j.contains("R"))
            t.options.cert = override_certificate(t.base.lambda, t.base.K, t.base.eta, need(j, "R"));
    } catch (const Json::exception& e) {
        throw InvalidSpec(std::string("bad tower document: ") + e.what());
    }
    return t;
}

PSequenceConfig parse_pseq(const Json& j) {
    if (!j.is_object()) throw InvalidSpec("p-sequence document must be an object");
    PSequenceConfig c;
    try {
        c.pseq.p_minus1 = need(j, "p_minus1");
        c.pseq.p0 = need(j, "p0");
        c.pseq.p = j.at("p").get<std::vector<double>>();
        c.pseq.N = static_cast<long>(need(j, "N"));
        c.pseq.tail_mass = get_or(j, "tail_mass", 0.0);
        c.R = need(j, "R");
        if (j.contains("q")) c.q = j.at("q").get<std::vector<double>>();
    } catch (const Json::exception& e) {
        throw InvalidSpec(std::string("bad p-sequence document: ") + e.what());
    }
    c.pseq.validate();
    return c;
}

NUHConstants parse_nuh(const Json& j) {
    return nuh_constants(need(j, "K"), need(j, "theta"), need(j, "K0"), get_or(j, "eta", 1.0), need(j, "rho0"));
}

}  // namespace mixrate
