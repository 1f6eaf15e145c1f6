#include <doctest.h>

#include <cmath>
#include <random>

#include "mixrate/certificates.hpp"
#include "mixrate/errors.hpp"
#include "mixrate/tower.hpp"
#include "oracles/tower_oracle.hpp"

using namespace mixrate;

namespace {

TowerConstants golden_formal() {
    TowerConstantsOptions o;
    o.formal_zero_R = true;
    o.n_max = 50;
    return tower_constants(ue_certificate(2, 0, 1), TauDistribution({0.5, 0.5}), o);
}

}  // namespace

TEST_SUITE("certificates") {

TEST_CASE("uniformly expanding certificates") {
    auto c0 = ue_certificate(2, 0, 1);
    CHECK(c0.R == 0.0);
    CHECK(c0.xi == 0.25);
    CHECK(c0.C == 4.0);
    CHECK(c0.gamma == 0.75);
    CHECK(c0.degenerate);
    CHECK(c0.source == "remark-default");

    auto c = ue_certificate(2, 1, 1);
    const double e4 = std::exp(4.0);
    CHECK(c.R == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(c.xi == doctest::Approx(0.25 / e4).epsilon(1e-13));
    CHECK(c.C == doctest::Approx(20.0 * e4).epsilon(1e-13));
    CHECK(c.gamma == doctest::Approx(0.9954211).epsilon(1e-7));
    CHECK_FALSE(c.degenerate);
    CHECK(std::abs(validate_constants(2, 1, 1, c.R, c.xi).slack) <= 1e-12);

    auto big = ue_certificate(1e6, 1, 1);
    CHECK(std::abs(big.R - 2.0) < 1e-5);
    CHECK(big.xi == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-5));

    CHECK_THROWS_AS(ue_certificate(1.0, 1, 1), InvalidParameter);
    CHECK_THROWS_AS(ue_certificate(0.5, 1, 1), InvalidParameter);
}

TEST_CASE("override certificate") {
    auto c = override_certificate(2, 0, 1, 0.1);
    CHECK(c.source == "override");
    CHECK(c.R == 0.1);
    CHECK(c.xi == doctest::Approx(0.25 * std::exp(-0.1)));
    CHECK(validate_constants(2, 0, 1, c.R, c.xi).ok);
    // the constraint cannot hold when R is too small for K
    CHECK_THROWS_AS(override_certificate(2, 1, 1, 0.5), InvalidParameter);
}

TEST_CASE("constraint slack") {
    auto a = validate_constants(2, 1, 1, 4, 0.001);
    CHECK(a.ok);
    CHECK(a.slack == doctest::Approx(4.0 * (1.0 - 0.001 * std::exp(4.0)) - 3.0).epsilon(1e-12));
    CHECK(a.slack == doctest::Approx(0.7816).epsilon(1e-3));
    auto b = validate_constants(2, 1, 1, 1, 0.01);
    CHECK_FALSE(b.ok);
    CHECK_THROWS_AS(validate_constants(2, 1, 1, 1, std::exp(-1.0)), InvalidParameter);
}

TEST_CASE("measure-change constant") {
    CHECK(k_mu_constant(2, 1, 1, 0) == doctest::Approx(1.0));
    CHECK(k_mu_constant(2, 1, 1, 2) == doctest::Approx(4.0));
    CHECK(k_mu_constant(4, 0.5, 0.5, 1) == doctest::Approx(2.0));
}

TEST_CASE("golden tower constants") {
    const auto tc = golden_formal();
    CHECK(tc.tau_bar == 1.5);
    CHECK(tc.I_set == std::vector<int>{1, 2});
    CHECK(tc.delta == 0.5);
    CHECK(tc.d == 1);
    CHECK(tc.N1 == 4);
    CHECK(tc.N2 == 1);
    CHECK(tc.N == 5);
    CHECK(tc.eps == doctest::Approx(1.0 / 96).epsilon(1e-14));
    CHECK(tc.p_minus1 == doctest::Approx(1.0 / 384).epsilon(1e-14));
    CHECK(tc.p0 == doctest::Approx(1.0 / 128).epsilon(1e-14));
    CHECK(tc.p(1) == doctest::Approx(95.0 / 96).epsilon(1e-14));
    for (long n = 2; n <= 60; ++n) CHECK(tc.p(n) == 0.0);
    CHECK(std::abs(tc.total_mass() - 1.0) <= 1e-12);
}

TEST_CASE("golden tower with R = 0.1 matches the direct evaluation") {
    const auto cert = override_certificate(2, 0, 1, 0.1);
    const auto tc = tower_constants(cert, TauDistribution({0.5, 0.5}));
    const auto o = oracle::tower_numbers({0.5, 0.5}, {1, 2}, 0.1, cert.xi);
    CHECK(tc.N1 == o.N1);
    CHECK(tc.N2 == o.N2);
    CHECK(tc.N == 6);
    CHECK(tc.eps == doctest::Approx(o.eps).epsilon(1e-13));
    CHECK(tc.eps == doctest::Approx(0.0025863817905802575).epsilon(1e-12));
    CHECK(tc.p_minus1 == doctest::Approx(0.00058506375536096554).epsilon(1e-12));
    CHECK(tc.p0 == doctest::Approx(o.p0).epsilon(1e-13));
    CHECK(tc.p(1) == doctest::Approx(o.p[1]).epsilon(1e-13));
}

TEST_CASE("random finite return tables against the direct evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::uniform_int_distribution<int> len(2, 9);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> mass(len(rng));
        double s = 0.0;
        for (double& m : mass) s += (m = u(rng));
        for (double& m : mass) m /= s;
        const auto cert = override_certificate(2, 0, 1, 0.05 + 0.1 * (trial % 5));
        const auto tc = tower_constants(cert, TauDistribution(mass));
        const auto o = oracle::tower_numbers(mass, tc.I_set, cert.R, cert.xi);
        CHECK(tc.tau_bar == doctest::Approx(o.tau_bar).epsilon(1e-14));
        CHECK(tc.N1 == o.N1);
        CHECK(tc.N2 == o.N2);
        CHECK(tc.delta == doctest::Approx(o.delta).epsilon(1e-14));
        CHECK(tc.log_eps == doctest::Approx(std::log(o.eps)).epsilon(1e-12));
        for (size_t n = 1; n < o.p.size(); ++n) CHECK(tc.p(n) == doctest::Approx(o.p[n]).epsilon(1e-12));
        CHECK(std::abs(tc.total_mass() - 1.0) <= 1e-12);
    }
}

TEST_CASE("trivial tower") {
    TowerConstantsOptions o;
    o.formal_zero_R = true;
    const auto tc = tower_constants(ue_certificate(2, 0, 1), TauDistribution({1.0}), o);
    CHECK(tc.N1 == 1);
    CHECK(tc.N2 == 1);
    CHECK(tc.p(1) == doctest::Approx(1.0 - tc.eps));
    for (long n = 2; n < 10; ++n) CHECK(tc.p(n) == 0.0);
}

TEST_CASE("N2 for a polynomial table truncated at 1000") {
    std::vector<double> ge(1002, 0.0);
    for (int n = 1; n <= 1000; ++n) ge[n] = std::pow(n, -2.0);
    std::vector<double> mass(1000);
    for (int t = 1; t <= 1000; ++t) mass[t - 1] = ge[t] - ge[t + 1];
    const auto cert = override_certificate(2, 0, 1, 0.1);
    const auto tc = tower_constants(cert, TauDistribution(mass, TailLaw::polynomial(1, 2)));
    // table mass beyond 1000 is 1001^{-2}: too small to move the scan, so the finite oracle applies
    const auto o = oracle::tower_numbers(mass, tc.I_set, cert.R, cert.xi);
    CHECK(tc.N2 == o.N2);
}

TEST_CASE("return-set selection") {
    auto g = select_returns(TauDistribution({0.5, 0.5}), ReturnTarget::Mixing, 0.0, 1);
    CHECK(g.I == std::vector<int>{1, 2});
    CHECK(g.delta == 0.5);
    CHECK(g.d == 1);
    CHECK_THROWS_AS(select_returns(TauDistribution({0.0, 0.5, 0.0, 0.5}), ReturnTarget::Mixing, 0.1, 1), NotMixing);
    auto nm = select_returns(TauDistribution({0.0, 0.5, 0.0, 0.5}), ReturnTarget::Nonmixing, 0.1, 1);
    CHECK(nm.d == 2);

    // support {2,3,5,...}: the chosen set maximizes the objective over subsets of the top values
    std::vector<double> mass{0.0, 0.5, 0.3, 0.0, 0.1, 0.05, 0.05};
    auto r = select_returns(TauDistribution(mass), ReturnTarget::Mixing, 0.1, 2);
    CHECK(gcd_of(r.I) == 1);
    double best = -1e300;
    const std::vector<int> vals{2, 3, 5, 6, 7};
    for (int s = 1; s < 32; ++s) {
        std::vector<int> I;
        for (int k = 0; k < 5; ++k)
            if (s >> k & 1) I.push_back(vals[k]);
        if (I.size() < 2 || gcd_of(I) != 1) continue;
        double dl = 1.0;
        for (int v : I) dl = std::min(dl, mass[v - 1]);
        const long N = static_cast<long>(I.back()) * I.back() + 2;
        best = std::max(best, N * (std::log(dl) - 0.1));
    }
    const long Nr = static_cast<long>(r.I.back()) * r.I.back() + 2;
    CHECK(Nr * (std::log(r.delta) - 0.1) == doctest::Approx(best));
}

TEST_CASE("tail laws") {
    auto p = TailLaw::polynomial(1, 2);
    CHECK(p.tail_ge(10) == doctest::Approx(0.01));
    // sum_{j>=11} j^{-2} lies under the reported bound
    double s = 0.0;
    for (int j = 11; j < 2000000; ++j) s += 1.0 / (double(j) * j);
    CHECK(s <= p.tail_sum(11));
    CHECK(p.tail_sum(11) <= 2.0 / 10.0);
    auto st = TailLaw::stretched(1, 1, 0.5);
    double ss = 0.0;
    for (int j = 4; j < 4000000; ++j) ss += std::exp(-std::sqrt(double(j)));
    CHECK(ss <= st.tail_sum(4));
    CHECK(c_A_gamma(1, 1) == 1.0);
    CHECK(c_A_gamma(0.5, 1) == doctest::Approx(2.0));
    CHECK(c_A_gamma(1, 0.5) == doctest::Approx(4.0));  // (2*1)^1 * 1 / 0.5
}

TEST_CASE("declared period must match the support") {
    CHECK_THROWS_AS(TauDistribution({0.0, 0.5, 0.0, 0.5}, {}, 1), InconsistentData);
}

TEST_CASE("hyperbolic constants") {
    auto a = nuh_constants(1, 0.5, 2, 1, 0.5);
    CHECK(a.K1 == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-12));
    CHECK(std::abs(a.K1 - 14.7781122) < 1e-6);
    CHECK(a.K2 == doctest::Approx(1.0 + a.K1 * a.K1 + 4.0).epsilon(1e-12));
    CHECK(std::abs(a.K2 - 223.393) < 1e-3);
    CHECK(a.rho == 0.5);
    auto z = nuh_constants(0, 0.5, 0, 1, 0.5);
    CHECK(z.K1 == 0.0);
    CHECK(z.K2 == 1.0);
    auto h = nuh_constants(1, 0.3, 1, 0.5, 0.09);
    CHECK(h.K1 == doctest::Approx(std::exp(10.0 / 7) * 10.0 / 7).epsilon(1e-12));
    CHECK(std::abs(h.K1 - 5.962) < 1e-3);
    CHECK_THROWS_AS(nuh_constants(1, 0.4, 1, 1, 0.5), InvalidParameter);
}

TEST_CASE("representability") {
    CHECK_FALSE(representable(7, {3, 5}));
    CHECK(representable(8, {3, 5}));
    for (long n = 1; n < 30; ++n) CHECK(representable(n, {1}));
    CHECK_THROWS_AS(representable(10, {2, 4}), NotCoprime);
    for (long n = 0; n < 60; ++n) CHECK(representable(n, {4, 7, 9}) == oracle::brute_representable(n, {4, 7, 9}));
}

}
