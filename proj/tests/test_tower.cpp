#include <doctest.h>

#include <cmath>

#include "mixrate/errors.hpp"
#include "mixrate/tower.hpp"

using namespace mixrate;

namespace {

TowerSpec golden(double R = 0.1, int cells = 1024, TailLaw law = TailLaw::polynomial(1, 2)) {
    TowerOptions o;
    o.cells = cells;
    o.cert = override_certificate(2, 0, 1, R);
    return build_tower(doubling_map(), {1, 2}, law, o);
}

}  // namespace

TEST_SUITE("tower") {

TEST_CASE("single-level tower is the base map") {
    TowerOptions o;
    o.cells = 256;
    auto s = build_tower(doubling_map(), {1, 1}, TailLaw::polynomial(1, 2), o);
    CHECK(s.levels == 1);
    CHECK(s.level_masses[0] == doctest::Approx(1.0));
    CHECK(s.tau_bar == 1.0);
}

TEST_CASE("golden tower layout") {
    auto s = golden();
    CHECK(s.levels == 2);
    CHECK(s.d == 1);
    CHECK(s.tau_bar == 1.5);
    CHECK(s.level_masses[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(s.level_masses[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    // m(tau >= 2) = 1/2 exceeds 2^{-2}, so the effective law constant rises to 2
    CHECK(s.law.C_tau == doctest::Approx(2.0));
    CHECK(s.declared_law.C_tau == 1.0);
}

TEST_CASE("infinite mean is rejected") {
    CHECK_THROWS_AS(build_tower(doubling_map(), {1, 2}, TailLaw::polynomial(1, 1)), NotIntegrable);
}

TEST_CASE("LSV level masses are return-time tail sums") {
    const MapSpec base = lsv_induced_map(0.5, 64);
    std::vector<int> tau(64);
    for (int k = 0; k < 64; ++k) tau[k] = k + 1;
    TowerOptions o;
    o.cells = 1024;
    auto s = build_tower(base, tau, TailLaw::polynomial(3.07, 2), o);
    REQUIRE(s.levels == 64);
    for (int l = 0; l < 64; l += 7) {
        double m = base.truncation_mass;  // every dropped branch returns later than 64
        for (int a = 0; a < 64; ++a)
            if (tau[a] >= l + 1) m += base.branches[a].cell().length();
        CHECK(s.level_masses[l] == doctest::Approx(m / s.tau_bar).epsilon(1e-12));
    }
}

TEST_CASE("tower transfer operator") {
    auto s = golden();
    auto one = tower_apply(s, tower_constant(s, 1.0));
    CHECK(tower_integral(s, one) == doctest::Approx(1.0).epsilon(1e-13));
    for (int l = 0; l < 2; ++l)
        for (int i : s.support_nodes[l]) CHECK(one.levels[l][i] == doctest::Approx(1.0).epsilon(1e-13));

    auto ind = tower_from_function(s, [](double, int l) { return l == 0 ? 1.0 : 0.0; });
    auto li = tower_apply(s, ind);
    for (int i : s.support_nodes[0]) CHECK(li.levels[0][i] == doctest::Approx(0.5).epsilon(1e-13));
    for (int i : s.support_nodes[1]) CHECK(li.levels[1][i] == doctest::Approx(1.0).epsilon(1e-13));

    auto g = tower_from_function(s, [](double y, int l) { return l == 0 ? std::cos(6.0 * y) + y * y : 0.0; });
    double in = tower_integral(s, g);
    for (int n = 0; n < 5; ++n) {
        g = tower_apply(s, g);
        CHECK(tower_integral(s, g) == doctest::Approx(in).epsilon(1e-12));
    }
}

TEST_CASE("golden decay matches the closed form") {
    auto s = golden();
    auto phi = tower_base_indicator_centred(s);
    CHECK(std::abs(tower_integral(s, phi)) < 1e-14);
    auto d = measure_decay(s, phi, 40);
    // level values follow [[1/2, 1/2], [1, 0]] with eigenvalue -1/2
    for (long n = 0; n <= 40; ++n) CHECK(std::abs(d[n].measured - 4.0 / 9 * std::ldexp(1.0, -n)) <= d[n].budget + 1e-14);
    auto z = measure_decay(s, tower_constant(s, 0.0), 5);
    for (auto& p : z) CHECK(p.measured == 0.0);
    CHECK_THROWS_AS(measure_decay(s, tower_constant(s, 1.0), 3), NotMeanZero);
}

TEST_CASE("decay bound") {
    auto s = golden();
    const long N = s.constants.N;
    CHECK(N == 6);
    CHECK_THROWS_AS(tower_decay_bound(s, 1.0, N - 1), NotYetValid);
    CHECK(tower_decay_bound(s, 1.0, N) <= 2.0 * (1.0 + 10.0) + 1e-12);
    auto tb = tower_tail_bound(s);
    REQUIRE(tb);
    const double expect = 2.0 * 1.7 * 11.0 * std::min(1.0, (*tb)(11.0));
    CHECK(tower_decay_bound(s, 1.7, N + 10) == doctest::Approx(expect));

    auto st = golden(0.1, 256, TailLaw::stretched(1, 1, 0.5));
    auto sb = tower_tail_bound(st);
    REQUIRE(sb);
    CHECK(sb->kind == TailBound::Kind::Stretched);
    for (long n = st.constants.N; n < st.constants.N + 30; n += 7)
        CHECK(tower_decay_bound(st, 1.0, n) ==
              doctest::Approx(22.0 * std::min(1.0, (*sb)(double(n - st.constants.N + 1)))));
    CHECK_THROWS_AS(tower_decay_bound(golden(0.1), 1.0, -1), NotYetValid);
}

TEST_CASE("nonmixing tower reduces to the golden constants") {
    TowerOptions o;
    o.cells = 512;
    o.cert = override_certificate(2, 0, 1, 0.1);
    auto s = build_tower(doubling_map(), {2, 4}, TailLaw::polynomial(1, 2), o);
    CHECK(s.d == 2);
    CHECK_FALSE(s.mixing());
    auto g = golden();
    CHECK(s.constants.N == g.constants.N);
    CHECK(s.constants.N1 == 4);
    CHECK(s.constants.eps == doctest::Approx(g.constants.eps).epsilon(1e-14));
    CHECK(s.constants.p_minus1 == doctest::Approx(g.constants.p_minus1).epsilon(1e-14));
    CHECK_THROWS_AS(tower_decay_bound(s, 1.0, 10), NotMixing);
    CHECK_THROWS_AS(nonmixing_bound(g, 1.0, 10), UseMixingPath);
    const double R = 0.1;
    CHECK(nonmixing_constant(s) == doctest::Approx(2.0 * s.tau_bar * std::exp(R) * (1 + R) * (1 + 1 / R)));
    // below the sub-tower's N the bound is frozen at its value there
    CHECK(nonmixing_bound(s, 1.0, 0) == doctest::Approx(nonmixing_bound(s, 1.0, s.constants.N)));
    CHECK(nonmixing_correlation_bound(s, 1.0, 2.0, 8) == doctest::Approx(2.0 * nonmixing_bound(s, 1.0, 8)));
}

TEST_CASE("decomposition of the constant observable") {
    TowerOptions o;
    o.cells = 1024;
    o.formal_zero_R = true;
    auto s = build_tower(doubling_map(), {1, 2}, TailLaw::polynomial(1, 2), o);
    BMember b{tower_constant(s, 1.0), tower_constant(s, 1.0)};
    auto d = decompose_once(s, b);
    CHECK(d.mass == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.piece_mass[0] == doctest::Approx(1.0 / 384).epsilon(1e-12));
    CHECK(d.piece_mass[1] == doctest::Approx(1.0 / 128).epsilon(1e-12));
    CHECK(d.piece_mass[2] == doctest::Approx(95.0 / 96).epsilon(1e-12));
    CHECK(d.max_mass_error <= 1e-10);
    CHECK(d.max_sum_error <= 1e-10);
}

TEST_CASE("random class-A members and their images decompose") {
    auto s = golden();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto a = random_A_member(s, seed);
        CHECK(check_class_A(s, a).ok);
        auto b = make_B_member(s, a);
        auto d = decompose_once(s, b);
        CHECK(d.max_mass_error <= 1e-10);
        CHECK(d.max_sum_error <= 1e-10);
        // E-tail: mass on levels tau - k with k >= n is at most t_n
        for (long n = 1; n < static_cast<long>(d.q.size()); ++n) {
            double tail = 0.0;
            for (size_t j = n; j < d.q.size(); ++j) tail += d.q[j];
            CHECK(tail <= s.constants.t(n) * d.mass + 1e-12);
        }
    }
}

TEST_CASE("representability of random coprime sets") {
    std::uint64_t x = 11;
    auto next = [&x] { return (x = x * 6364136223846793005ULL + 1442695040888963407ULL) >> 33; };
    int tested = 0;
    while (tested < 50) {
        std::vector<int> I;
        const int k = 1 + next() % 4;
        for (int i = 0; i < k; ++i) I.push_back(1 + next() % 12);
        if (gcd_of(I) != 1) continue;
        ++tested;
        const int mx = *std::max_element(I.begin(), I.end());
        for (long n = static_cast<long>(mx) * mx; n <= static_cast<long>(mx) * mx + mx; ++n) CHECK(representable(n, I));
    }
}

}
