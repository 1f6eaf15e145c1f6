#include <doctest.h>

#include <cmath>
#include <random>

#include "mixrate/certificates.hpp"
#include "mixrate/errors.hpp"
#include "mixrate/stochastic.hpp"
#include "oracles/tower_oracle.hpp"

using namespace mixrate;

namespace {

// random pair with q cumulatively dominating p and equal totals
std::pair<std::vector<double>, std::vector<double>> dominated_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 50);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = len(rng);
    std::vector<double> p(n), q(n);
    double s = 0.0;
    for (double& v : p) s += (v = u(rng) * (u(rng) < 0.2 ? 0.0 : 1.0) + 1e-3);
    for (double& v : p) v /= s;
    // move mass of p toward lower indices to get q
    q = p;
    for (int k = n - 1; k > 0; --k) {
        const double shift = q[k] * u(rng);
        q[k] -= shift;
        q[k - 1] += shift;
    }
    return {p, q};
}

PSequence golden_pseq() {
    PSequence s;
    s.p_minus1 = 1.0 / 384;
    s.p0 = 1.0 / 128;
    s.p = {95.0 / 96};
    s.N = 5;
    return s;
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("coupling matrix hand example") {
    auto m = coupling_matrix({0.5, 0.5}, {0.7, 0.3});
    CHECK(m.at(0, 0) == doctest::Approx(5.0 / 7).epsilon(1e-15));
    CHECK(m.at(1, 0) == doctest::Approx(2.0 / 7).epsilon(1e-15));
    CHECK(m.at(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m.at(0, 1) == 0.0);
}

TEST_CASE("coupling matrix identity for equal sequences") {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    auto m = coupling_matrix(p, p);
    for (int k = 0; k < 4; ++k)
        for (int j = 0; j <= k; ++j) CHECK(m.at(k, j) == doctest::Approx(k == j ? 1.0 : 0.0));
}

TEST_CASE("coupling matrix randomized identities") {
    std::mt19937_64 rng(99);
    double worst_row = 0.0, worst_col = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        auto [p, q] = dominated_pair(rng);
        auto m = coupling_matrix(p, q);
        const int n = static_cast<int>(p.size());
        for (int k = 0; k < n; ++k) {
            double row = 0.0;
            for (int j = 0; j <= k; ++j) {
                CHECK(m.at(k, j) >= 0.0);
                row += m.at(k, j) * q[j];
            }
            worst_row = std::max(worst_row, std::abs(row - p[k]));
        }
        for (int j = 0; j < n; ++j) {
            if (q[j] == 0.0) continue;
            double col = 0.0;
            for (int k = j; k < n; ++k) col += m.at(k, j);
            worst_col = std::max(worst_col, std::abs(col - 1.0));
        }
    }
    CHECK(worst_row <= 1e-12);
    CHECK(worst_col <= 1e-12);
}

TEST_CASE("coupling matrix rejects undominated input") {
    CHECK_THROWS_AS(coupling_matrix({0.7, 0.3}, {0.5, 0.5}), NotDominated);
    CHECK_THROWS_AS(coupling_matrix({0.5, 0.5}, {0.5, 0.4}), InvalidParameter);
}

TEST_CASE("word lengths") {
    CHECK(word_h({}, 5) == 0);
    CHECK(word_h({3}, 5) == 8);
    CHECK(word_h({0, 2, 7}, 5) == 24);
    const std::vector<long> u{1, 4}, v{0, 0, 9};
    std::vector<long> uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    CHECK(word_h(uv, 3) == word_h(u, 3) + word_h(v, 3));
}

TEST_CASE("counter generator is reproducible and stream-separated") {
    CounterRng a(1, 2), b(1, 2), c(1, 3);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        differs |= x != c.uniform();
    }
    CHECK(differs);
}

TEST_CASE("Wilson envelope") {
    CHECK(wilson_upper(0.0, 1000000) > 0.0);
    CHECK(wilson_upper(0.0, 1000000) < 1e-5);
    CHECK(wilson_upper(0.5, 100) > 0.5);
    CHECK(wilson_upper(1.0, 100) == doctest::Approx(1.0));
}

TEST_CASE("sampler: empty words only") {
    PSequence s;
    s.p_minus1 = 1.0;
    s.N = 3;
    auto e = sample_h(s, 1000, 5, 20);
    for (double t : e.tail) CHECK(t == 0.0);
    CHECK(e.atom_zero == 1.0);
}

TEST_CASE("sampler against the exact law of h") {
    const PSequence s = golden_pseq();
    auto e = sample_h(s, 1000000, 12345, 4000);
    const auto exact = oracle::h_tail(s.p_minus1, {s.p0, s.p[0]}, s.N, 4000);
    const double sd0 = std::sqrt(s.p_minus1 * (1 - s.p_minus1) / 1e6);
    CHECK(std::abs(e.atom_zero - s.p_minus1) <= 3.0 * sd0);
    const double mean = (1 - s.p_minus1) / s.p_minus1;
    const double sdm = std::sqrt((1 - s.p_minus1) / (s.p_minus1 * s.p_minus1) / 1e6);
    CHECK(std::abs(e.mean_length - mean) <= 3.0 * sdm);
    for (long n : {0L, 100L, 500L, 1000L, 2000L, 4000L}) {
        const double sd = std::sqrt(exact[n] * (1 - exact[n]) / 1e6) + 1e-12;
        CHECK(std::abs(e.tail[n] - exact[n]) <= 4.0 * sd);
    }
    // identical seeds give identical tails; worker count does not matter
    auto e2 = sample_h(s, 200000, 77, 300, 1);
    auto e3 = sample_h(s, 200000, 77, 300, 3);
    CHECK(e2.tail == e3.tail);
}

TEST_CASE("power series") {
    CHECK(power_series(2, 0.5) == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(power_series(3, 0.5) == doctest::Approx(26.0).epsilon(1e-13));
    long double s = 0;
    for (int k = 1; k < 20000; ++k) s += std::pow((long double)k, 2.5L) * std::pow(0.97L, (long double)k);
    CHECK(power_series(2.5, 0.97) == doctest::Approx(static_cast<double>(s)).epsilon(1e-12));
}

TEST_CASE("polynomial tail bound constants") {
    auto b = poly_tail_bound(1, 2, 0, 1, 0.5);
    CHECK(b.C1 == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(b.series == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(b.C1prime == doctest::Approx(12.0).epsilon(1e-13));
    for (double n : {1.0, 2.0, 7.0, 50.0}) CHECK(b(n) == doctest::Approx(24.0 / n + std::pow(0.5, n / 2)).epsilon(1e-12));
    CHECK(b(1) >= 1.0);  // raw bound, not capped
    CHECK_THROWS_AS(poly_tail_bound(1, 1, 0, 1, 0.5), NotIntegrable);

    // golden parameters: C1 = C_tau e^R (1 - p)^{-1} beta / (beta - 1)
    auto g = poly_tail_bound(1, 2, 0.1, 5, 1.0 / 384);
    CHECK(g.C1 == doctest::Approx(std::exp(0.1) * 384.0 / 383 * 2).epsilon(1e-14));
    CHECK(g.C1 == doctest::Approx(2.2161).epsilon(1e-4));
}

TEST_CASE("stretched tail bound constants") {
    auto b = stretched_tail_bound(1, 1, 1, 0, 1, 0.5);
    CHECK(b.C_Agamma == 1.0);
    CHECK(b.c_w == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(b.B > 0.0);
    CHECK(b.B <= 0.25);
    CHECK(b.r <= 0.75 + 1e-15);
    CHECK(b.r == doctest::Approx((1 + b.B * b.C1) * 0.5));
    for (double n = 1; n < 200; n += 1) CHECK(b(n + 1) <= b(n));

    // nearly always empty words: the geometric term dominates
    auto e = stretched_tail_bound(1, 1, 1, 0, 1, 0.99);
    for (double n : {20.0, 60.0}) {
        const double geo = std::pow(0.01, n / 2);
        CHECK(e(n) >= geo);
    }
}

TEST_CASE("bounds grow with C_tau") {
    auto a = poly_tail_bound(1, 2, 0.1, 5, 0.01), b = poly_tail_bound(2, 2, 0.1, 5, 0.01);
    auto c = stretched_tail_bound(1, 1, 0.5, 0.1, 5, 0.01), d = stretched_tail_bound(2, 1, 0.5, 0.1, 5, 0.01);
    for (double n : {1.0, 10.0, 100.0, 1000.0}) {
        CHECK(a(n) <= b(n));
        CHECK(c(n) <= d(n));
    }
}

TEST_CASE("golden p-sequence under both tail classes is dominated by the bounds") {
    const PSequence s = golden_pseq();
    auto e = sample_h(s, 200000, 3, 200);
    auto pb = poly_tail_bound(1, 2, 0, 5, s.p_minus1);
    auto sb = stretched_tail_bound(1, 1, 0.5, 0, 5, s.p_minus1);
    for (long n = 0; n <= 200; ++n) {
        CHECK(e.wilson_upper[n] <= pb(n + 1.0));
        CHECK(e.wilson_upper[n] <= sb(n + 1.0));
    }
}

}
