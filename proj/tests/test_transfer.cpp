#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mixrate/certificates.hpp"
#include "mixrate/errors.hpp"
#include "mixrate/grid.hpp"
#include "mixrate/transfer.hpp"
#include "oracles/ulam.hpp"

using namespace mixrate;

TEST_SUITE("grid") {

TEST_CASE("holder seminorm spot values") {
    CHECK(holder_seminorm(GridObservable::sample(1024, [](double x) { return x - 0.5; }), 1.0) ==
          doctest::Approx(1.0));
    CHECK(holder_seminorm(GridObservable(512, 3.0), 1.0) == 0.0);
    const double h = 1.0 / 1024;
    CHECK(holder_seminorm(GridObservable::sample(1024, [](double x) { return std::sqrt(x); }), 1.0) ==
          doctest::Approx(std::sqrt(h) / h).epsilon(1e-9));
}

TEST_CASE("log holder seminorm") {
    CHECK(log_holder_seminorm(GridObservable(256, 5.0), 1.0) == 0.0);
    CHECK(log_holder_seminorm(GridObservable::sample(256, [](double x) { return std::exp(x); }), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(log_holder_seminorm(GridObservable::sample(4096, [](double x) { return 1.0 + x / 2.0; }), 1.0) ==
          doctest::Approx(0.5).epsilon(1e-3));
    CHECK_THROWS_AS(log_holder_seminorm(GridObservable::sample(256, [](double x) { return x - 0.1; }), 1.0),
                    NotPositive);
}

}

TEST_SUITE("transfer") {

TEST_CASE("doubling closed forms") {
    const TransferOperator op(doubling_map(), 4096);
    auto one = op.apply_once(GridObservable(4096, 1.0));
    for (double v : one.values) CHECK(v == 1.0);

    auto phi = GridObservable::sample(4096, [](double x) { return x - 0.5; });
    auto p1 = op.apply_once(phi);
    CHECK(p1.error_budget <= phi.h());
    for (int i = 0; i < p1.nodes(); i += 97) CHECK(std::abs(p1.values[i] - 0.5 * phi.values[i]) <= p1.error_budget + 1e-15);

    auto c = GridObservable::sample(4096, [](double x) { return std::cos(2.0 * std::numbers::pi * x); });
    auto pc = op.apply_once(c);
    CHECK(sup_norm(pc) <= pc.error_budget + 1e-12);

    auto p10 = op.apply_n(phi, 10);
    for (int i = 0; i < p10.nodes(); i += 31)
        CHECK(std::abs(p10.values[i] - std::ldexp(phi.values[i], -10)) <= p10.error_budget + 1e-15);
}

TEST_CASE("constants are fixed by a piecewise affine map") {
    const TransferOperator op(affine_map({0.0, 0.3, 1.0}), 2048);
    auto r = op.apply_n(GridObservable(2048, 2.5), 7);
    for (double v : r.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("budget ceiling") {
    const TransferOperator op(moebius_test_map(), 256);
    auto phi = GridObservable::sample(256, [](double x) { return std::sin(40.0 * x); });
    CHECK_THROWS_AS(op.apply_n(phi, 5, 1e-9), ErrorBudgetExceeded);
}

TEST_CASE("invariant densities") {
    auto d = invariant_density(doubling_map(), 1e-12, 1024);
    for (double v : d.rho.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    auto a = invariant_density(affine_map({0.0, 0.3, 1.0}), 1e-12, 1024);
    for (double v : a.rho.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

    const MapSpec m = moebius_test_map();
    const TransferOperator op(m, 4096);
    auto mr = invariant_density(op, 1e-12);
    CHECK(mr.residual <= 1e-8);
    CHECK(integrate(mr.rho) == doctest::Approx(1.0).epsilon(1e-10));
    const double c = 0.5;
    double worst = 0.0;
    for (int i = 0; i < mr.rho.nodes(); ++i)
        worst = std::max(worst, std::abs(mr.rho.values[i] - c / (std::log1p(c) * (1.0 + c * mr.rho.x(i)))));
    CHECK(worst < 1e-5);
    // independent Ulam oracle, compared at cell midpoints
    auto u = oracle::ulam_density(m, 4096);
    double uw = 0.0;
    for (int j = 0; j < 4096; ++j) uw = std::max(uw, std::abs(u[j] - mr.rho((j + 0.5) / 4096)));
    CHECK(uw <= 1e-4);
}

TEST_CASE("doubling correlations") {
    const TransferOperator op(doubling_map(), 4096);
    auto rho = GridObservable(4096, 1.0);
    auto phi = GridObservable::sample(4096, [](double x) { return x - 0.5; });
    for (int n : {1, 3, 6}) CHECK(correlation_ue(op, rho, phi, phi, n) == doctest::Approx(std::ldexp(1.0 / 12, -n)).epsilon(1e-6));
    CHECK(std::abs(correlation_ue(op, rho, phi, GridObservable(4096, 1.0), 4)) < 1e-10);
}

TEST_CASE("nonlinear map decays within the certificate") {
    const MapSpec m = moebius_test_map();
    const TransferOperator op(m, 4096);
    const auto cert = ue_certificate(m.lambda, m.K, m.eta);
    auto rho = invariant_density(op, 1e-12).rho;
    auto x = GridObservable::sample(4096, [](double t) { return t; });
    const double mean = integrate_product(x.values, rho.values, 4096);
    // mean-zero against Lebesgue after multiplying by the density
    GridObservable phi(4096, 0.0);
    for (int i = 0; i < phi.nodes(); ++i) phi.values[i] = (x.values[i] - mean) * rho.values[i];
    auto r = op.apply_n(phi, 20);
    const double norm = sup_norm(r) + holder_seminorm(r, 1.0);
    CHECK(norm <= cert.C * std::pow(cert.gamma, 20) * holder_seminorm(phi, 1.0) + r.error_budget);
}

}
