#include "mixrate/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixrate/errors.hpp"

namespace mixrate {

LsvFamily::LsvFamily(double alpha) : alpha_(alpha), c_(std::pow(2.0, alpha)) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("LSV alpha must lie in (0,1)");
}

double LsvFamily::g(double x) const { return x + c_ * std::pow(x, 1.0 + alpha_); }

double LsvFamily::g_prime(double x) const { return 1.0 + (1.0 + alpha_) * c_ * std::pow(x, alpha_); }

double LsvFamily::h(double w) const {
    if (w <= 0.0) return 0.0;
    // g is convex and increasing, so Newton from the right converges monotonically
    double x = std::min(w, 0.5);
    for (int it = 0; it < 100; ++it) {
        double step = (g(x) - w) / g_prime(x);
        double nx = x - step;
        if (nx <= 0.0) nx = 0.5 * x;
        if (std::abs(nx - x) <= 1e-17 * std::max(x, 1e-300)) {
            x = nx;
            break;
        }
        x = nx;
    }
    return x;
}

std::vector<double> LsvFamily::thresholds(int count) const {
    std::vector<double> x(static_cast<size_t>(count) + 1);
    x[0] = 1.0;
    for (int k = 1; k <= count; ++k) x[k] = h(x[k - 1]);
    return x;
}

Branch Branch::affine(double lo, double hi, bool reversed) {
    if (!(lo < hi) || lo < 0.0 || hi > 1.0) throw InvalidSpec("affine branch needs 0 <= lo < hi <= 1");
    Branch b;
    b.kind_ = BranchKind::Affine;
    b.p_[0] = lo;
    b.p_[1] = hi;
    b.p_[2] = reversed ? 1.0 : 0.0;
    b.finish();
    return b;
}

Branch Branch::moebius(double a, double b, double c, double d) {
    Branch br;
    br.kind_ = BranchKind::Moebius;
    br.p_[0] = a;
    br.p_[1] = b;
    br.p_[2] = c;
    br.p_[3] = d;
    // pole must stay outside [0,1]
    if (d == 0.0 || c + d == 0.0 || (d > 0.0) != (c + d > 0.0))
        throw InvalidSpec("moebius branch has a pole in [0,1]");
    if (a * d - b * c == 0.0) throw InvalidSpec("moebius branch is constant");
    br.finish();
    return br;
}

Branch Branch::tabulated(std::vector<double> y, std::vector<double> x) {
    if (y.size() != x.size() || y.size() < 2) throw InvalidSpec("tabulated branch needs matching samples (>= 2)");
    if (std::abs(y.front()) > 1e-12 || std::abs(y.back() - 1.0) > 1e-12)
        throw InvalidSpec("tabulated branch samples must span y in [0,1]");
    for (size_t i = 1; i < y.size(); ++i)
        if (!(y[i] > y[i - 1])) throw InvalidSpec("tabulated y samples must increase");
    bool inc = x[1] > x[0];
    for (size_t i = 1; i < x.size(); ++i)
        if ((inc && !(x[i] > x[i - 1])) || (!inc && !(x[i] < x[i - 1])))
            throw InvalidSpec("tabulated inverse branch is not strictly monotone");
    Branch b;
    b.kind_ = BranchKind::Tabulated;
    const size_t n = y.size();
    std::vector<double> h(n - 1), del(n - 1), m(n);
    for (size_t k = 0; k + 1 < n; ++k) {
        h[k] = y[k + 1] - y[k];
        del[k] = (x[k + 1] - x[k]) / h[k];
    }
    m[0] = del[0];
    m[n - 1] = del[n - 2];
    for (size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] * del[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            double w1 = 2.0 * h[k] + h[k - 1], w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    b.ty_ = std::move(y);
    b.tx_ = std::move(x);
    b.tm_ = std::move(m);
    b.finish();
    return b;
}

Branch Branch::lsv_induced(double alpha, int depth) {
    if (depth < 0) throw InvalidSpec("LSV branch depth must be >= 0");
    LsvFamily fam(alpha);
    Branch b;
    b.kind_ = BranchKind::LsvInduced;
    b.p_[0] = alpha;
    b.depth_ = depth;
    auto x = fam.thresholds(depth + 1);
    b.cell_ = {x[depth + 1], x[depth]};
    b.increasing_ = true;
    return b;
}

void Branch::finish() {
    double a = inverse(0.0), b = inverse(1.0);
    increasing_ = b > a;
    cell_ = {std::min(a, b), std::max(a, b)};
    if (cell_.lo < -1e-12 || cell_.hi > 1.0 + 1e-12) throw InvalidSpec("branch cell leaves [0,1]");
}

double Branch::pchip(double y, double* deriv) const {
    size_t n = ty_.size();
    size_t k = std::upper_bound(ty_.begin(), ty_.end(), y) - ty_.begin();
    k = std::clamp<size_t>(k, 1, n - 1) - 1;
    double h = ty_[k + 1] - ty_[k];
    double t = (y - ty_[k]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (deriv) {
        double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1, d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
        *deriv = (d00 * tx_[k] + d01 * tx_[k + 1]) / h + d10 * tm_[k] + d11 * tm_[k + 1];
    }
    return h00 * tx_[k] + h10 * h * tm_[k] + h01 * tx_[k + 1] + h11 * h * tm_[k + 1];
}

std::pair<double, double> Branch::preimage(double y) const {
    switch (kind_) {
    case BranchKind::Affine: {
        double len = p_[1] - p_[0];
        double x = p_[2] != 0.0 ? p_[1] - len * y : p_[0] + len * y;
        return {x, std::log(len)};
    }
    case BranchKind::Moebius: {
        double den = p_[2] * y + p_[3];
        double x = (p_[0] * y + p_[1]) / den;
        return {x, std::log(std::abs(p_[0] * p_[3] - p_[1] * p_[2])) - 2.0 * std::log(std::abs(den))};
    }
    case BranchKind::Tabulated: {
        double d = 0.0;
        double x = pchip(y, &d);
        return {x, std::log(std::abs(d))};
    }
    case BranchKind::LsvInduced: {
        LsvFamily fam(p_[0]);
        double z = 0.5 * (y + 1.0);
        double lw = -std::log(2.0);
        for (int j = 0; j < depth_; ++j) {
            z = fam.h(z);
            lw -= std::log(fam.g_prime(z));
        }
        return {z, lw};
    }
    }
    throw InternalError("unknown branch kind");
}

double Branch::inverse(double y) const { return preimage(y).first; }
double Branch::log_weight(double y) const { return preimage(y).second; }
double Branch::weight(double y) const { return std::exp(log_weight(y)); }

double Branch::forward(double x) const {
    switch (kind_) {
    case BranchKind::Affine: {
        double len = p_[1] - p_[0];
        return p_[2] != 0.0 ? (p_[1] - x) / len : (x - p_[0]) / len;
    }
    case BranchKind::Moebius:
        return (p_[3] * x - p_[1]) / (p_[0] - p_[2] * x);
    case BranchKind::Tabulated: {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            double mid = 0.5 * (lo + hi);
            bool below = increasing_ ? pchip(mid, nullptr) < x : pchip(mid, nullptr) > x;
            (below ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    case BranchKind::LsvInduced: {
        LsvFamily fam(p_[0]);
        double z = x;
        for (int j = 0; j < depth_; ++j) z = fam.g(z);
        return 2.0 * z - 1.0;
    }
    }
    throw InternalError("unknown branch kind");
}

void branch_preimages(const MapSpec& spec, double y, std::vector<Preimage>& out) {
    out.resize(spec.branches.size());
    // consecutive LSV branches of increasing depth share one inverse chain
    double chain_alpha = -1.0, z = 0.0, lw = 0.0;
    int chain_depth = -1;
    std::unique_ptr<LsvFamily> fam;
    for (size_t i = 0; i < spec.branches.size(); ++i) {
        const Branch& b = spec.branches[i];
        if (b.kind() == BranchKind::LsvInduced) {
            if (b.lsv_alpha() != chain_alpha || b.lsv_depth() < chain_depth) {
                chain_alpha = b.lsv_alpha();
                fam = std::make_unique<LsvFamily>(chain_alpha);
                z = 0.5 * (y + 1.0);
                lw = -std::log(2.0);
                chain_depth = 0;
            }
            while (chain_depth < b.lsv_depth()) {
                z = fam->h(z);
                lw -= std::log(fam->g_prime(z));
                ++chain_depth;
            }
            out[i] = {z, std::exp(lw)};
        } else {
            auto [x, l] = b.preimage(y);
            out[i] = {x, std::exp(l)};
        }
    }
}

std::vector<Preimage> branch_preimages(const MapSpec& spec, double y) {
    std::vector<Preimage> out;
    branch_preimages(spec, y, out);
    return out;
}

double truncation_error_bound(const MapSpec& spec, double sup_norm) {
    return std::exp(spec.K) * spec.truncation_mass * sup_norm;
}

double weight_sum_bound(const MapSpec& spec) { return std::exp(spec.K); }

double midpoint_integral(const MapSpec& spec, int nodes) {
    std::vector<Preimage> pre;
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
        double y = (i + 0.5) / nodes;
        branch_preimages(spec, y, pre);
        double s = 0.0;
        for (const auto& p : pre) s += p.weight;
        total += s;
    }
    return total / nodes;
}

ValidationReport validate_spec(const MapSpec& spec, int n_samples, int quadrature_nodes) {
    if (n_samples < 2) throw InvalidParameter("validate_spec needs n_samples >= 2");
    if (spec.branches.empty()) throw InvalidSpec("map has no branches");
    if (!(spec.lambda > 1.0) || spec.K < 0.0 || !(spec.eta > 0.0 && spec.eta <= 1.0))
        throw InvalidSpec("declared constants out of range (lambda > 1, K >= 0, eta in (0,1])");
    if (spec.truncation_mass < 0.0 || spec.truncation_mass >= 1.0)
        throw InvalidSpec("truncation_mass must lie in [0,1)");

    std::vector<Interval> cells;
    for (const auto& b : spec.branches) cells.push_back(b.cell());
    std::sort(cells.begin(), cells.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (size_t i = 1; i < cells.size(); ++i)
        if (cells[i].lo < cells[i - 1].hi - 1e-12) throw InvalidSpec("branch cells overlap");

    ValidationReport rep;
    rep.truncation_mass = spec.truncation_mass;
    const double tol = 1e-9;
    double min_ratio = INFINITY;
    const int n = n_samples;
    // extra far-apart pairs matter when eta < 1
    const int coarse = std::min(n, 65);

    for (const auto& b : spec.branches) {
        std::vector<double> xs(n), lws(n);
        for (int i = 0; i < n; ++i) {
            double y = static_cast<double>(i) / (n - 1);
            auto [x, lw] = b.preimage(y);
            xs[i] = x;
            lws[i] = lw;
            double back = b.forward(x);
            rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, std::abs(back - y));
        }
        bool inc = xs[n - 1] > xs[0];
        for (int i = 1; i < n; ++i)
            if ((inc && !(xs[i] > xs[i - 1])) || (!inc && !(xs[i] < xs[i - 1])))
                throw InvalidSpec("non-monotone inverse branch detected");
        double worst = 0.0;
        auto visit = [&](int i, int j) {
            double dy = static_cast<double>(j - i) / (n - 1);
            double dx = std::abs(xs[j] - xs[i]);
            min_ratio = std::min(min_ratio, dy / dx);
            worst = std::max(worst, std::abs(lws[j] - lws[i]) / std::pow(dy, spec.eta));
        };
        for (int i = 0; i + 1 < n; ++i) visit(i, i + 1);
        int stride = std::max(1, (n - 1) / (coarse - 1));
        for (int i = 0; i < n; i += stride)
            for (int j = i + stride; j < n; j += stride) visit(i, j);
        rep.branch_distortion.push_back(worst);
        rep.worst_distortion = std::max(rep.worst_distortion, worst);
    }
    rep.observed_expansion = min_ratio;
    for (const auto& c : cells) rep.cell_mass += c.length();
    rep.quadrature_mass = midpoint_integral(spec, quadrature_nodes);

    if (rep.observed_expansion < spec.lambda * (1.0 - tol))
        rep.failures.push_back("observed expansion below declared lambda");
    if (rep.worst_distortion > spec.K * (1.0 + tol) + tol)
        rep.failures.push_back("observed distortion above declared K");
    if (std::abs(rep.cell_mass + spec.truncation_mass - 1.0) > 1e-8)
        rep.failures.push_back("cell masses plus truncation_mass differ from 1");
    if (std::abs(rep.quadrature_mass - rep.cell_mass) > 1e-8)
        rep.failures.push_back("integral of P1 differs from retained mass");
    if (rep.max_roundtrip_error > 1e-9) rep.failures.push_back("forward(inverse(y)) differs from y");
    rep.pass = rep.failures.empty();
    return rep;
}

MapSpec doubling_map() {
    MapSpec s;
    s.branches = {Branch::affine(0.0, 0.5), Branch::affine(0.5, 1.0)};
    s.lambda = 2.0;
    s.K = 0.0;
    s.eta = 1.0;
    return s;
}

MapSpec affine_map(const std::vector<double>& cuts) {
    if (cuts.size() < 3 || cuts.front() != 0.0 || cuts.back() != 1.0)
        throw InvalidSpec("affine map cuts must run from 0 to 1");
    MapSpec s;
    double widest = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        s.branches.push_back(Branch::affine(cuts[i], cuts[i + 1]));
        widest = std::max(widest, cuts[i + 1] - cuts[i]);
    }
    s.lambda = 1.0 / widest;
    s.K = 0.0;
    return s;
}

MapSpec moebius_test_map(double c, double a) {
    if (!(c > 0.0) || !(a > 0.0 && a < 1.0)) throw InvalidParameter("moebius test map needs c > 0, a in (0,1)");
    // v1(y) = a y / (1 + b y), v2 affine onto [p,1]; b = c(1-a) makes 1/(1+cx) invariant
    const double b = c * (1.0 - a);
    const double p = a / (1.0 + b);
    MapSpec s;
    s.branches = {Branch::moebius(a, 0.0, b, 1.0), Branch::affine(p, 1.0)};
    // |v1'| <= a, |v2'| = 1 - p; |(log v1')'| = 2b/(1+by) <= 2b
    s.lambda = 1.0 / std::max(a, 1.0 - p);
    s.K = 2.0 * b;
    s.eta = 1.0;
    return s;
}

double moebius_test_density(double c, double x) { return c / (std::log1p(c) * (1.0 + c * x)); }

double lsv_sampled_distortion(double alpha, int count, int n_samples) {
    MapSpec s;
    for (int k = 0; k < count; ++k) s.branches.push_back(Branch::lsv_induced(alpha, k));
    std::vector<std::vector<double>> lw(n_samples);
    std::vector<Preimage> pre;
    for (int i = 0; i < n_samples; ++i) {
        branch_preimages(s, static_cast<double>(i) / (n_samples - 1), pre);
        for (const auto& p : pre) lw[i].push_back(std::log(p.weight));
    }
    double worst = 0.0;
    for (int k = 0; k < count; ++k)
        for (int i = 0; i + 1 < n_samples; ++i)
            worst = std::max(worst, std::abs(lw[i + 1][k] - lw[i][k]) * (n_samples - 1));
    return worst;
}

MapSpec lsv_induced_map(double alpha, int count) {
    if (count < 1) throw InvalidParameter("LSV map needs at least one branch");
    MapSpec s;
    for (int k = 0; k < count; ++k) s.branches.push_back(Branch::lsv_induced(alpha, k));
    s.truncation_mass = LsvFamily(alpha).thresholds(count).back();
    s.lambda = 2.0;
    s.eta = 1.0;
    s.K = 1.05 * lsv_sampled_distortion(alpha, count, 4097);
    return s;
}

}  // namespace mixrate
