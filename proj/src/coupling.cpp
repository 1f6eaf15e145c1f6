#include "mixrate/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixrate/errors.hpp"

namespace mixrate {

SplitObservable split_observable(const GridObservable& phi) {
    const double mean = integrate(phi);
    if (std::abs(mean) > 1e-10) throw NotMeanZero("observable has mean " + std::to_string(mean));
    SplitObservable s{GridObservable(phi.cells, 1.0, phi.eta), GridObservable(phi.cells, 1.0, phi.eta)};
    for (int i = 0; i < phi.nodes(); ++i) {
        s.plus.values[i] = 1.0 + std::max(0.0, phi.values[i]);
        s.minus.values[i] = 1.0 - std::min(0.0, phi.values[i]);
    }
    s.plus.error_budget = s.minus.error_budget = phi.error_budget;
    return s;
}

GridObservable coupling_step(const TransferOperator& op, const GridObservable& psi, double xi) {
    const double mass = integrate(psi);
    GridObservable out = op.apply_once(psi);
    const double sub = xi * mass;
    for (int i = 0; i < out.nodes(); ++i) {
        out.values[i] -= sub;
        if (!(out.values[i] > 0.0))
            throw CouplingBroken("coupling step produced a nonpositive value at node " + std::to_string(i));
    }
    return out;
}

GridObservable coupling_step(const MapSpec& spec, const GridObservable& psi, double xi) {
    return coupling_step(TransferOperator(spec, psi.cells), psi, xi);
}

CouplingTrace run_coupling(const TransferOperator& op, const DecayCertificate& cert, const GridObservable& phi,
                           int n_steps) {
    if (n_steps < 0) throw InvalidParameter("n_steps must be nonnegative");
    const double R = cert.R;
    CouplingTrace tr;
    tr.R = R;
    tr.xi = cert.xi;
    tr.gamma = 1.0 - cert.xi;

    GridObservable u = phi;
    const double semi = holder_seminorm(phi, phi.eta);
    if (semi > R) {
        if (!(R > 0.0)) throw DegenerateCertificate("R = 0 admits only the zero observable; override R first");
        tr.scale = R / semi;
        for (double& v : u.values) v *= tr.scale;
    }
    SplitObservable s = split_observable(u);
    GridObservable plus = std::move(s.plus), minus = std::move(s.minus);
    const double m0 = integrate(plus);
    const double step_slack = 4.0 * R * std::pow(phi.h(), phi.eta);
    const double eR = std::exp(R);

    auto record = [&](int n) {
        CouplingRecord r;
        r.n = n;
        r.mass_plus = integrate(plus);
        r.mass_minus = integrate(minus);
        r.expected_mass = m0 * std::pow(tr.gamma, n);
        r.log_seminorm_plus = log_holder_seminorm(plus, phi.eta);
        r.log_seminorm_minus = log_holder_seminorm(minus, phi.eta);
        r.sup_plus = sup_norm(plus);
        r.sup_minus = sup_norm(minus);
        std::vector<double> diff(plus.values.size());
        for (size_t i = 0; i < diff.size(); ++i) diff[i] = plus.values[i] - minus.values[i];
        r.difference_seminorm = holder_seminorm(diff, phi.cells, phi.eta);
        r.sup_bound = eR * (1.0 + R) * std::pow(tr.gamma, n);
        r.holder_bound = 2.0 * eR * R * (1.0 + R) * std::pow(tr.gamma, n);
        r.budget = std::max(plus.error_budget, minus.error_budget);
        r.seminorm_slack = step_slack * n;
        tr.steps.push_back(r);
    };
    record(0);
    for (int n = 1; n <= n_steps; ++n) {
        plus = coupling_step(op, plus, cert.xi);
        minus = coupling_step(op, minus, cert.xi);
        record(n);
    }
    return tr;
}

CouplingTrace run_coupling(const MapSpec& spec, const DecayCertificate& cert, const GridObservable& phi, int n_steps) {
    return run_coupling(TransferOperator(spec, phi.cells), cert, phi, n_steps);
}

}  // namespace mixrate
