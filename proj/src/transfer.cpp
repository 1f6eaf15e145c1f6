#include "mixrate/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "mixrate/errors.hpp"

namespace mixrate {

TransferOperator::TransferOperator(const MapSpec& spec, int cells, bool conservative)
    : spec_(spec), cells_(cells), branches_(static_cast<int>(spec.branches.size())), conservative_(conservative) {
    if (cells < 2) throw InvalidParameter("transfer grid needs at least 2 cells");
    st_.resize(static_cast<size_t>(cells + 1) * branches_);
    std::vector<Preimage> pre;
    for (int i = 0; i <= cells; ++i) {
        branch_preimages(spec, static_cast<double>(i) / cells, pre);
        for (int a = 0; a < branches_; ++a) {
            double s = std::clamp(pre[a].x, 0.0, 1.0) * cells;
            int j = std::min(static_cast<int>(s), cells - 1);
            st_[static_cast<size_t>(i) * branches_ + a] = {j, s - j, pre[a].weight};
        }
    }
    std::vector<Interval> all;
    for (const auto& b : spec.branches) {
        auto w = quadrature_weights(cells, {b.cell()});
        int first = 0, last = cells;
        while (first < cells && w[first] == 0.0) ++first;
        while (last > first && w[last] == 0.0) --last;
        cell_w_.push_back({first, std::vector<double>(w.begin() + first, w.begin() + last + 1)});
        all.push_back(b.cell());
    }
    retained_w_ = quadrature_weights(cells, all);
}

double TransferOperator::cell_integral(int a, const std::vector<double>& v) const {
    const auto& cw = cell_w_[a];
    double s = 0.0;
    for (size_t k = 0; k < cw.w.size(); ++k) s += cw.w[k] * v[cw.first + k];
    return s;
}

double TransferOperator::correct(double target, std::vector<double>& out) const {
    if (!conservative_) return 0.0;
    double delta = target - integrate(out, cells_);
    for (double& v : out) v += delta;
    return delta;
}

double TransferOperator::sweep(const std::vector<double>& in, std::vector<double>& out) const {
    out.assign(cells_ + 1, 0.0);
    for (int i = 0; i <= cells_; ++i) {
        const Stencil* s = &st_[static_cast<size_t>(i) * branches_];
        double acc = 0.0;
        for (int a = 0; a < branches_; ++a) acc += s[a].w * (in[s[a].j] * (1.0 - s[a].t) + in[s[a].j + 1] * s[a].t);
        out[i] = acc;
    }
    if (!conservative_) return 0.0;
    double target = 0.0;
    for (int i = 0; i <= cells_; ++i) target += retained_w_[i] * in[i];
    return correct(target, out);
}

double TransferOperator::sweep_per_branch(const std::vector<const std::vector<double>*>& in,
                                          std::vector<double>& out) const {
    out.assign(cells_ + 1, 0.0);
    for (int i = 0; i <= cells_; ++i) {
        const Stencil* s = &st_[static_cast<size_t>(i) * branches_];
        double acc = 0.0;
        for (int a = 0; a < branches_; ++a) {
            const auto& v = *in[a];
            acc += s[a].w * (v[s[a].j] * (1.0 - s[a].t) + v[s[a].j + 1] * s[a].t);
        }
        out[i] = acc;
    }
    if (!conservative_) return 0.0;
    double target = 0.0;
    for (int a = 0; a < branches_; ++a) target += cell_integral(a, *in[a]);
    return correct(target, out);
}

double TransferOperator::grid_weight_sum() const {
    double best = 0.0;
    for (int i = 0; i <= cells_; ++i) {
        double acc = 0.0;
        for (int a = 0; a < branches_; ++a) acc += st_[static_cast<size_t>(i) * branches_ + a].w;
        best = std::max(best, acc);
    }
    return best;
}

double TransferOperator::amplification() const {
    return std::exp(spec_.K / (1.0 - std::pow(spec_.lambda, -spec_.eta)));
}

GridObservable TransferOperator::apply_once(const GridObservable& phi) const {
    if (phi.cells != cells_) throw InvalidParameter("observable grid does not match operator grid");
    GridObservable out(cells_, 0.0, phi.eta);
    double delta = sweep(phi.values, out.values);
    const double S = weight_sum_bound(spec_);
    const double local = holder_seminorm(phi, phi.eta) * std::pow(phi.h(), phi.eta);
    out.error_budget =
        S * (phi.error_budget + local) + truncation_error_bound(spec_, sup_norm(phi)) + std::abs(delta);
    return out;
}

GridObservable TransferOperator::apply_n(const GridObservable& phi, int n, double ceiling) const {
    if (n < 1) throw InvalidParameter("apply_n needs n >= 1");
    if (phi.cells != cells_) throw InvalidParameter("observable grid does not match operator grid");
    // e_n <= A (b_0 + sum_k (|G_k|_eta h^eta + trunc_k)), A bounding every |P^j| on L^inf
    const double A = amplification();
    const double heta = std::pow(phi.h(), phi.eta);
    GridObservable cur = phi;
    double acc = phi.error_budget;
    std::vector<double> next;
    for (int k = 0; k < n; ++k) {
        acc += holder_seminorm(cur, cur.eta) * heta + truncation_error_bound(spec_, sup_norm(cur));
        acc += std::abs(sweep(cur.values, next));
        cur.values.swap(next);
        cur.error_budget = A * acc;
        if (cur.error_budget > ceiling)
            throw ErrorBudgetExceeded("error budget " + std::to_string(cur.error_budget) + " exceeds ceiling after " +
                                      std::to_string(k + 1) + " steps");
    }
    return cur;
}

GridObservable apply_once(const MapSpec& spec, const GridObservable& phi) {
    return TransferOperator(spec, phi.cells).apply_once(phi);
}

GridObservable apply_n(const MapSpec& spec, const GridObservable& phi, int n, double ceiling) {
    return TransferOperator(spec, phi.cells).apply_n(phi, n, ceiling);
}

DensityResult invariant_density(const TransferOperator& op, double tol, int max_iter) {
    if (!(tol > 0.0)) throw InvalidParameter("density tolerance must be positive");
    const int m = op.cells();
    DensityResult res;
    std::vector<double> cur(m + 1, 1.0), next;
    for (int it = 1; it <= max_iter; ++it) {
        op.sweep(cur, next);
        double mass = integrate(next, m);
        for (double& v : next) v /= mass;
        double change = 0.0;
        for (int i = 0; i <= m; ++i) change = std::max(change, std::abs(next[i] - cur[i]));
        cur.swap(next);
        if (change <= tol) {
            res.iterations = it;
            op.sweep(cur, next);
            double mass2 = integrate(next, m);
            double r = 0.0;
            for (int i = 0; i <= m; ++i) r = std::max(r, std::abs(next[i] / mass2 - cur[i]));
            res.residual = r;
            res.rho = GridObservable(m, 0.0, op.spec().eta);
            res.rho.values = cur;
            res.rho.error_budget = op.amplification() * holder_seminorm(cur, m, op.spec().eta) *
                                   std::pow(1.0 / m, op.spec().eta);
            return res;
        }
    }
    throw NoConvergence("invariant density did not converge within " + std::to_string(max_iter) + " iterations");
}

DensityResult invariant_density(const MapSpec& spec, double tol, int cells, int max_iter) {
    return invariant_density(TransferOperator(spec, cells), tol, max_iter);
}

double correlation_ue(const TransferOperator& op, const GridObservable& rho, const GridObservable& phi,
                      const GridObservable& psi, int n) {
    const int m = op.cells();
    if (rho.cells != m || phi.cells != m || psi.cells != m) throw InvalidParameter("grid mismatch in correlation");
    double mean = integrate_product(phi.values, rho.values, m);
    std::vector<double> f(m + 1), next;
    for (int i = 0; i <= m; ++i) f[i] = (phi.values[i] - mean) * rho.values[i];
    for (int k = 0; k < n; ++k) {
        op.sweep(f, next);
        f.swap(next);
    }
    return integrate_product(f, psi.values, m);
}

}  // namespace mixrate
