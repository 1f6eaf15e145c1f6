#include <doctest.h>

#include <cmath>

#include "mixrate/errors.hpp"
#include "mixrate/map_model.hpp"

using namespace mixrate;

TEST_SUITE("map_model") {

TEST_CASE("doubling preimages at the endpoints") {
    const MapSpec d = doubling_map();
    auto at0 = branch_preimages(d, 0.0);
    REQUIRE(at0.size() == 2);
    CHECK(at0[0].x == doctest::Approx(0.0));
    CHECK(at0[1].x == doctest::Approx(0.5));
    CHECK(at0[0].weight == doctest::Approx(0.5));
    CHECK(at0[1].weight == doctest::Approx(0.5));
    auto at1 = branch_preimages(d, 1.0);
    CHECK(at1[0].x == doctest::Approx(0.5));
    CHECK(at1[1].x == doctest::Approx(1.0));
}

TEST_CASE("doubling validates with zero distortion; a false lambda fails") {
    MapSpec d = doubling_map();
    auto ok = validate_spec(d, 1000);
    CHECK(ok.pass);
    CHECK(ok.worst_distortion == 0.0);
    CHECK(ok.observed_expansion == doctest::Approx(2.0));
    d.lambda = 3.0;
    auto bad = validate_spec(d, 1000);
    CHECK_FALSE(bad.pass);
    CHECK(bad.observed_expansion == doctest::Approx(2.0));
}

TEST_CASE("overlapping cells are rejected") {
    MapSpec s;
    s.lambda = 1.5;
    s.branches = {Branch::affine(0.0, 0.6), Branch::affine(0.4, 1.0)};
    CHECK_THROWS_AS(validate_spec(s, 100), InvalidSpec);
}

TEST_CASE("truncation error bound") {
    MapSpec s = doubling_map();
    CHECK(truncation_error_bound(s, 7.0) == 0.0);
    s.truncation_mass = 0.01;
    CHECK(truncation_error_bound(s, 1.0) == doctest::Approx(0.01).epsilon(1e-14));
    s.K = 1.0;
    CHECK(truncation_error_bound(s, 2.0) == doctest::Approx(2.0 * std::exp(1.0) * 0.01).epsilon(1e-14));
    CHECK(truncation_error_bound(s, 2.0) == doctest::Approx(0.05437).epsilon(1e-4));
}

TEST_CASE("moebius branches round-trip and are nonlinear") {
    const MapSpec m = moebius_test_map();
    auto rep = validate_spec(m, 2000);
    CHECK(rep.pass);
    CHECK(rep.worst_distortion > 0.0);
    CHECK(rep.max_roundtrip_error < 1e-12);
    CHECK(midpoint_integral(m, 1 << 14) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("tabulated branch reproduces an affine branch") {
    std::vector<double> y, x;
    for (int i = 0; i <= 32; ++i) {
        y.push_back(i / 32.0);
        x.push_back(0.5 * i / 32.0);
    }
    MapSpec s;
    s.lambda = 2.0;
    s.branches = {Branch::tabulated(y, x), Branch::affine(0.5, 1.0)};
    CHECK(validate_spec(s, 500).pass);
    CHECK(s.branches[0].inverse(0.3) == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("LSV induced map with 64 branches") {
    const MapSpec s = lsv_induced_map(0.5, 64);
    CHECK(s.branches.size() == 64);
    CHECK(s.truncation_mass > 0.0);
    CHECK(s.truncation_mass < 1e-2);
    auto rep = validate_spec(s, 400, 1 << 12);
    CHECK(rep.pass);
    auto pre = branch_preimages(s, 0.75);
    REQUIRE(pre.size() == 64);
    double w = 0.0;
    for (auto& p : pre) {
        CHECK(p.weight > 0.0);
        w += p.weight;
    }
    // sum of weights is within e^{+-K} of 1 minus the dropped mass
    CHECK(w <= std::exp(s.K));
    CHECK(w >= std::exp(-s.K) * (1.0 - s.truncation_mass));
    double cells = 0.0;
    for (const auto& b : s.branches) cells += b.cell().length();
    CHECK(cells + s.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));
}

}
