#include "mixrate/grid.hpp"

#include <algorithm>
#include <cmath>

#include "mixrate/errors.hpp"

namespace mixrate {

GridObservable::GridObservable(int m, double fill, double e) : cells(m), values(m + 1, fill), eta(e) {
    if (m < 1) throw InvalidParameter("grid needs at least one cell");
}

GridObservable GridObservable::sample(int m, const std::function<double(double)>& f, double e) {
    GridObservable g(m, 0.0, e);
    for (int i = 0; i <= m; ++i) g.values[i] = f(g.x(i));
    return g;
}

double GridObservable::operator()(double y) const {
    double s = std::clamp(y, 0.0, 1.0) * cells;
    int j = std::min(static_cast<int>(s), cells - 1);
    double t = s - j;
    return values[j] * (1.0 - t) + values[j + 1] * t;
}

double integrate(const std::vector<double>& v, int cells) {
    double s = 0.5 * (v.front() + v.back());
    for (int i = 1; i < cells; ++i) s += v[i];
    return s / cells;
}

double integrate(const GridObservable& f) { return integrate(f.values, f.cells); }

namespace {

double interp(const std::vector<double>& v, int cells, double y) {
    double s = y * cells;
    int j = std::clamp(static_cast<int>(s), 0, cells - 1);
    double t = s - j;
    return v[j] * (1.0 - t) + v[j + 1] * t;
}

// visits maximal linear pieces of the interpolant inside [a,b]
template <class F>
void for_pieces(const std::vector<double>& v, int cells, double a, double b, F&& fn) {
    a = std::max(a, 0.0);
    b = std::min(b, 1.0);
    if (!(b > a)) return;
    int j0 = std::clamp(static_cast<int>(a * cells), 0, cells - 1);
    int j1 = std::clamp(static_cast<int>(std::ceil(b * cells)) - 1, 0, cells - 1);
    for (int j = j0; j <= j1; ++j) {
        double l = std::max(a, static_cast<double>(j) / cells);
        double r = std::min(b, static_cast<double>(j + 1) / cells);
        if (r <= l) continue;
        double fl, fr;
        if (l == static_cast<double>(j) / cells) fl = v[j];
        else fl = interp(v, cells, l);
        if (r == static_cast<double>(j + 1) / cells) fr = v[j + 1];
        else fr = interp(v, cells, r);
        fn(l, r, fl, fr);
    }
}

}  // namespace

double integrate_over(const std::vector<double>& v, int cells, double a, double b) {
    double s = 0.0;
    for_pieces(v, cells, a, b, [&](double l, double r, double fl, double fr) { s += 0.5 * (fl + fr) * (r - l); });
    return s;
}

double integrate_abs_over(const std::vector<double>& v, int cells, double a, double b) {
    double s = 0.0;
    for_pieces(v, cells, a, b, [&](double l, double r, double fl, double fr) {
        double w = r - l;
        if ((fl >= 0.0) == (fr >= 0.0)) {
            s += 0.5 * std::abs(fl + fr) * w;
        } else {
            // sign change inside the piece: two triangles
            s += 0.5 * w * (fl * fl + fr * fr) / (std::abs(fl) + std::abs(fr));
        }
    });
    return s;
}

double integrate_product(const std::vector<double>& f, const std::vector<double>& g, int cells) {
    double s = 0.0;
    for (int i = 0; i < cells; ++i)
        s += 2.0 * f[i] * g[i] + f[i] * g[i + 1] + f[i + 1] * g[i] + 2.0 * f[i + 1] * g[i + 1];
    return s / (6.0 * cells);
}

std::vector<double> quadrature_weights(int cells, const std::vector<Interval>& support) {
    std::vector<double> w(cells + 1, 0.0);
    for (const auto& iv : support) {
        double a = std::max(iv.lo, 0.0), b = std::min(iv.hi, 1.0);
        if (!(b > a)) continue;
        int j0 = std::clamp(static_cast<int>(a * cells), 0, cells - 1);
        int j1 = std::clamp(static_cast<int>(std::ceil(b * cells)) - 1, 0, cells - 1);
        for (int j = j0; j <= j1; ++j) {
            double xl = static_cast<double>(j) / cells;
            double l = std::max(a, xl), r = std::min(b, static_cast<double>(j + 1) / cells);
            if (r <= l) continue;
            // integral over [l,r] of the two hat functions on cell j
            double tl = (l - xl) * cells, tr = (r - xl) * cells;
            double len = r - l;
            double mean_t = 0.5 * (tl + tr);
            w[j] += len * (1.0 - mean_t);
            w[j + 1] += len * mean_t;
        }
    }
    return w;
}

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double sup_norm(const GridObservable& f) { return sup_norm(f.values); }

double holder_seminorm_on(const std::vector<double>& v, int cells, const std::vector<int>& idx, double eta) {
    const size_t n = idx.size();
    if (n < 2) return 0.0;
    const double h = 1.0 / cells;
    double best = 0.0;
    auto ratio = [&](size_t a, size_t b) {
        double dx = (idx[b] - idx[a]) * h;
        return std::abs(v[idx[b]] - v[idx[a]]) / (eta == 1.0 ? dx : std::pow(dx, eta));
    };
    for (size_t i = 0; i + 1 < n; ++i) best = std::max(best, ratio(i, i + 1));
    if (eta == 1.0) return best;  // adjacent pairs attain the maximum for eta = 1
    double lo = INFINITY, hi = -INFINITY;
    for (int i : idx) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
    }
    const double osc = hi - lo;
    for (size_t k = 2; k < n; ++k) {
        // any pair k apart in the list is at least k*h apart
        if (osc / std::pow(k * h, eta) <= best) break;
        for (size_t i = 0; i + k < n; ++i) best = std::max(best, ratio(i, i + k));
    }
    return best;
}

double holder_seminorm(const std::vector<double>& v, int cells, double eta) {
    std::vector<int> idx(v.size());
    for (size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);
    return holder_seminorm_on(v, cells, idx, eta);
}

double holder_seminorm(const GridObservable& f, double eta) { return holder_seminorm(f.values, f.cells, eta); }

double log_holder_seminorm(const std::vector<double>& v, int cells, double eta) {
    std::vector<double> lv(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw NotPositive("log-Hoelder seminorm needs strictly positive node values");
        lv[i] = std::log(v[i]);
    }
    return holder_seminorm(lv, cells, eta);
}

double log_holder_seminorm(const GridObservable& f, double eta) { return log_holder_seminorm(f.values, f.cells, eta); }

}  // namespace mixrate
