#include "mixrate/tower.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixrate/errors.hpp"

namespace mixrate {

namespace {

std::vector<Interval> merge(std::vector<Interval> v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi + 1e-15)
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

TailLaw cover_table(const TailLaw& law, const std::vector<double>& mass) {
    TailLaw out = law;
    if (law.kind == TailLaw::Kind::None) return out;
    double ge = 1.0;
    for (size_t n = 1; n <= mass.size() + 1; ++n) {
        if (ge <= 0.0) break;
        const double x = static_cast<double>(n);
        const double need = law.kind == TailLaw::Kind::Polynomial ? ge * std::pow(x, law.beta)
                                                                  : ge * std::exp(law.A * std::pow(x, law.gamma));
        out.C_tau = std::max(out.C_tau, need);
        if (n <= mass.size()) ge -= mass[n - 1];
        ge = std::max(ge, 0.0);
    }
    return out;
}

double interp(const std::vector<double>& v, int cells, double x) {
    double s = std::clamp(x, 0.0, 1.0) * cells;
    int j = std::min(static_cast<int>(s), cells - 1);
    double t = s - j;
    return v[j] * (1.0 - t) + v[j + 1] * t;
}

}  // namespace

TowerSpec build_tower(const MapSpec& base, const std::vector<int>& tau, const TailLaw& law, const TowerOptions& opt) {
    const int nb = static_cast<int>(base.branches.size());
    if (static_cast<int>(tau.size()) != nb) throw InvalidParameter("one return time per branch is required");
    if (nb == 0) throw InvalidSpec("tower base has no branches");
    for (int t : tau)
        if (t < 1) throw InvalidParameter("return times must be positive");
    if (law.kind == TailLaw::Kind::Polynomial && !(law.beta > 1.0))
        throw NotIntegrable("polynomial tail with beta <= 1 has infinite mean return time");
    if (law.kind == TailLaw::Kind::Stretched && !(law.A > 0.0 && law.gamma > 0.0 && law.gamma <= 1.0))
        throw InvalidParameter("stretched tail needs A > 0 and gamma in (0,1]");
    if (opt.L_max < 1) throw InvalidParameter("L_max must be positive");

    TowerSpec s;
    s.base = base;
    s.tau = tau;
    s.declared_law = law;
    s.L_max = opt.L_max;

    const int T = *std::max_element(tau.begin(), tau.end());
    std::vector<double> mass(T, 0.0);
    for (int a = 0; a < nb; ++a) mass[tau[a] - 1] += base.branches[a].cell().length();
    s.law = cover_table(law, mass);
    TauDistribution dist(mass, s.law);
    s.d = dist.support_gcd();
    s.tau_bar = dist.tau_bar();

    if (opt.cert)
        s.cert = *opt.cert;
    else if (opt.formal_zero_R)
        s.cert = ue_certificate(base.lambda, base.K, base.eta);
    else
        s.cert = tower_certificate(base.lambda, base.K, base.eta, opt.R_floor);
    TowerConstantsOptions to;
    to.n_max = opt.n_max;
    to.formal_zero_R = opt.formal_zero_R;
    s.constants = s.d == 1 ? tower_constants(s.cert, dist, to) : tower_constants(s.cert, dist.reduced(s.d), to);

    s.retained.resize(nb);
    double represented = 0.0;
    s.levels = 0;
    for (int a = 0; a < nb; ++a) {
        s.retained[a] = tau[a] <= opt.L_max;
        if (s.retained[a]) {
            s.levels = std::max(s.levels, tau[a]);
            represented += tau[a] * base.branches[a].cell().length();
        }
    }
    if (s.levels == 0) throw InvalidParameter("no column fits below L_max");
    s.omitted_mass = std::max(0.0, 1.0 - represented / s.tau_bar);
    for (int l = 0; l < s.levels; ++l) s.level_masses.push_back(dist.m_ge(l + 1) / s.tau_bar);
    s.retained_tail_bound = std::exp(s.cert.R) * dist.level_sum(opt.L_max + 1);

    s.op = std::make_shared<TransferOperator>(base, opt.cells);
    const int M = opt.cells;
    s.support.resize(s.levels);
    s.support_nodes.resize(s.levels);
    for (int l = 0; l < s.levels; ++l) {
        std::vector<Interval> cells;
        for (int a = 0; a < nb; ++a)
            if (s.retained[a] && tau[a] >= l + 1) cells.push_back(base.branches[a].cell());
        s.support[l] = merge(cells);
        auto& idx = s.support_nodes[l];
        for (const auto& iv : s.support[l]) {
            int i0 = static_cast<int>(std::ceil(iv.lo * M - 1e-9));
            int i1 = static_cast<int>(std::floor(iv.hi * M + 1e-9));
            for (int i = std::max(i0, 0); i <= std::min(i1, M); ++i)
                if (idx.empty() || idx.back() < i) idx.push_back(i);
        }
    }
    return s;
}

namespace {

// nodes whose hat functions meet the support of a level
std::vector<int> stencil_nodes(const TowerSpec& spec, int l) {
    const int M = spec.cells();
    std::vector<int> idx;
    for (const auto& iv : spec.support[l]) {
        int i0 = static_cast<int>(std::floor(iv.lo * M)) ;
        int i1 = static_cast<int>(std::ceil(iv.hi * M));
        for (int i = std::max(i0, 0); i <= std::min(i1, M); ++i)
            if (idx.empty() || idx.back() < i) idx.push_back(i);
    }
    return idx;
}

double level_sup(const TowerSpec& spec, const std::vector<double>& v, int l) {
    double m = 0.0;
    for (int i : spec.support_nodes[l]) m = std::max(m, std::abs(v[i]));
    for (const auto& iv : spec.support[l])
        m = std::max({m, std::abs(interp(v, spec.cells(), iv.lo)), std::abs(interp(v, spec.cells(), iv.hi))});
    return m;
}

void level_range(const TowerSpec& spec, const std::vector<double>& v, int l, double& lo, double& hi) {
    auto upd = [&](double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    };
    for (int i : spec.support_nodes[l]) upd(v[i]);
    for (const auto& iv : spec.support[l]) {
        upd(interp(v, spec.cells(), iv.lo));
        upd(interp(v, spec.cells(), iv.hi));
    }
}

}  // namespace

TowerObservable tower_constant(const TowerSpec& spec, double c) {
    TowerObservable o;
    o.cells = spec.cells();
    o.eta = spec.base.eta;
    o.levels.assign(spec.levels, std::vector<double>(o.cells + 1, c));
    o.tail_sup = std::abs(c);
    return o;
}

TowerObservable tower_from_function(const TowerSpec& spec, const std::function<double(double, int)>& f) {
    TowerObservable o;
    o.cells = spec.cells();
    o.eta = spec.base.eta;
    o.levels.resize(spec.levels);
    for (int l = 0; l < spec.levels; ++l) {
        auto& v = o.levels[l];
        v.resize(o.cells + 1);
        for (int i = 0; i <= o.cells; ++i) {
            v[i] = f(static_cast<double>(i) / o.cells, l);
            o.tail_sup = std::max(o.tail_sup, std::abs(v[i]));
        }
    }
    return o;
}

double represented_mass(const TowerSpec& spec) {
    double s = 0.0;
    for (size_t a = 0; a < spec.tau.size(); ++a)
        if (spec.retained[a]) s += spec.tau[a] * spec.base.branches[a].cell().length();
    return s / spec.tau_bar;
}

TowerObservable tower_base_indicator_centred(const TowerSpec& spec) {
    double base = 0.0;
    for (size_t a = 0; a < spec.tau.size(); ++a)
        if (spec.retained[a]) base += spec.base.branches[a].cell().length();
    const double c = (base / spec.tau_bar) / represented_mass(spec);
    return tower_from_function(spec, [c](double, int l) { return (l == 0 ? 1.0 : 0.0) - c; });
}

double tower_level_integral(const TowerSpec& spec, const TowerObservable& phi, int l) {
    double s = 0.0;
    for (size_t a = 0; a < spec.tau.size(); ++a)
        if (spec.retained[a] && spec.tau[a] >= l + 1) s += spec.op->cell_integral(static_cast<int>(a), phi.levels[l]);
    return s / spec.tau_bar;
}

double tower_integral(const TowerSpec& spec, const TowerObservable& phi) {
    double s = 0.0;
    for (int l = 0; l < spec.levels; ++l) s += tower_level_integral(spec, phi, l);
    return s;
}

double tower_l1(const TowerSpec& spec, const TowerObservable& phi) {
    double s = 0.0;
    for (int l = 0; l < spec.levels; ++l)
        for (const auto& iv : spec.support[l]) s += integrate_abs_over(phi.levels[l], phi.cells, iv.lo, iv.hi);
    return s / spec.tau_bar;
}

double tower_sup(const TowerSpec& spec, const TowerObservable& phi) {
    double m = 0.0;
    for (int l = 0; l < spec.levels; ++l) m = std::max(m, level_sup(spec, phi.levels[l], l));
    return m;
}

double tower_level_seminorm(const TowerSpec& spec, const TowerObservable& phi) {
    double m = 0.0;
    for (int l = 0; l < spec.levels; ++l)
        m = std::max(m, holder_seminorm_on(phi.levels[l], phi.cells, spec.support_nodes[l], phi.eta));
    return m;
}

double tower_norm(const TowerSpec& spec, const TowerObservable& phi) {
    double lo = INFINITY, hi = -INFINITY;
    for (int l = 0; l < spec.levels; ++l) level_range(spec, phi.levels[l], l, lo, hi);
    return tower_sup(spec, phi) + std::max(tower_level_seminorm(spec, phi), hi - lo);
}

double tower_log_seminorm(const TowerSpec& spec, const TowerObservable& phi) {
    double m = 0.0;
    std::vector<double> lv(phi.cells + 1, 0.0);
    for (int l = 0; l < spec.levels; ++l) {
        const auto& v = phi.levels[l];
        const auto& idx = spec.support_nodes[l];
        bool any_pos = false, any_zero = false;
        for (int i : idx) (v[i] > 0.0 ? any_pos : any_zero) = true;
        if (!any_pos) continue;
        if (any_zero) throw NotPositive("level " + std::to_string(l) + " is neither positive nor zero");
        for (int i : idx) lv[i] = std::log(v[i]);
        m = std::max(m, holder_seminorm_on(lv, phi.cells, idx, phi.eta));
    }
    return m;
}

TowerObservable tower_apply(const TowerSpec& spec, const TowerObservable& phi) {
    if (phi.cells != spec.cells() || static_cast<int>(phi.levels.size()) != spec.levels)
        throw InvalidParameter("tower observable does not match the tower grid");
    const int nb = static_cast<int>(spec.tau.size());
    const int M = phi.cells;
    TowerObservable out;
    out.cells = M;
    out.eta = phi.eta;
    out.tail_sup = phi.tail_sup;
    out.levels.resize(spec.levels);

    static const std::vector<double> none;
    std::vector<double> zero(M + 1, 0.0);
    std::vector<const std::vector<double>*> in(nb);
    std::vector<bool> top(spec.levels, false);
    for (int a = 0; a < nb; ++a) {
        in[a] = spec.retained[a] ? &phi.levels[spec.tau[a] - 1] : &zero;
        if (spec.retained[a]) top[spec.tau[a] - 1] = true;
    }
    std::vector<double> base;
    const double delta = spec.op->sweep_per_branch(in, base);

    // pointwise interpolation error on level 0, integrated over a set of m_Delta-mass <= 1/tau_bar
    double semi = 0.0;
    for (int l = 0; l < spec.levels; ++l)
        if (top[l]) semi = std::max(semi, holder_seminorm_on(phi.levels[l], M, stencil_nodes(spec, l), phi.eta));
    const double local = weight_sum_bound(spec.base) * semi * std::pow(1.0 / M, phi.eta);

    // mass pushed into columns that are not represented
    double leak = 0.0;
    double lo = 0.0;
    for (const auto& iv : spec.support[0]) {
        if (iv.lo > lo) leak += integrate_abs_over(base, M, lo, iv.lo);
        lo = iv.hi;
    }
    if (lo < 1.0) leak += integrate_abs_over(base, M, lo, 1.0);

    out.levels[0] = std::move(base);
    for (int l = 1; l < spec.levels; ++l) out.levels[l] = phi.levels[l - 1];
    out.error_budget = phi.error_budget + (local + std::abs(delta) + leak) / spec.tau_bar;
    return out;
}

TowerObservable tower_apply_n(const TowerSpec& spec, const TowerObservable& phi, long n) {
    TowerObservable cur = phi;
    for (long k = 0; k < n; ++k) cur = tower_apply(spec, cur);
    return cur;
}

ClassCheck check_class_A(const TowerSpec& spec, const TowerObservable& psi, double slack) {
    ClassCheck c;
    const double mass = tower_integral(spec, psi);
    bool nonneg = true;
    for (int l = 0; l < spec.levels; ++l)
        for (int i : spec.support_nodes[l])
            if (psi.levels[l][i] < -1e-15) nonneg = false;
    if (!nonneg || !(mass > 0.0)) return c;
    c.sup_ratio = tower_sup(spec, psi) / (std::exp(spec.cert.R) * spec.tau_bar * mass);
    c.log_seminorm = tower_log_seminorm(spec, psi);
    c.ok = c.sup_ratio <= 1.0 + slack && c.log_seminorm <= spec.cert.R * (1.0 + slack) + slack;
    return c;
}

TowerObservable random_A_member(const TowerSpec& spec, std::uint64_t seed) {
    CounterRng rng(seed, 0xA11CEULL);
    const double R = spec.cert.R;
    const int L = spec.levels;
    std::vector<double> v(L), th(L), c(L);
    for (int l = 0; l < L; ++l) {
        v[l] = -0.5 * R * rng.uniform();
        th[l] = 2.0 * M_PI * rng.uniform();
        c[l] = 4.0 * rng.uniform();
    }
    // log-Lipschitz R/4 * c <= R, log-range <= R across all levels
    const double th0 = 2.0 * M_PI * rng.uniform();
    const double c0 = rng.uniform();
    const double w0 = 2.0 * rng.uniform();
    return tower_from_function(spec, [&](double y, int l) {
        double val = std::exp(v[l] + 0.25 * R * std::sin(th[l] + c[l] * y));
        if (l == 0) val += w0 * std::exp(R * 0.5 * std::sin(th0 + 2.0 * c0 * y));
        return val;
    });
}

BMember make_B_member(const TowerSpec& spec, const TowerObservable& a) {
    auto chk = check_class_A(spec, a);
    if (!chk.ok)
        throw InvalidParameter("preimage is not in the cone A (sup ratio " + std::to_string(chk.sup_ratio) +
                               ", log seminorm " + std::to_string(chk.log_seminorm) + ")");
    return {a, tower_apply_n(spec, a, spec.constants.N)};
}

namespace {

// E-index per level and node; -1 off the support
std::vector<std::vector<int>> e_index(const TowerSpec& spec) {
    const int M = spec.cells();
    std::vector<std::vector<int>> e(spec.levels, std::vector<int>(M + 1, -1));
    for (int i : spec.support_nodes[0]) e[0][i] = 0;
    for (size_t a = 0; a < spec.tau.size(); ++a) {
        if (!spec.retained[a]) continue;
        const Interval cell = spec.base.branches[a].cell();
        int i0 = std::max(0, static_cast<int>(std::ceil(cell.lo * M - 1e-9)));
        int i1 = std::min(M, static_cast<int>(std::floor(cell.hi * M + 1e-9)));
        for (int l = 1; l < spec.tau[a]; ++l)
            for (int i = i0; i <= i1; ++i)
                if (e[l][i] < 0) e[l][i] = spec.tau[a] - l;
    }
    return e;
}

}  // namespace

TowerObservable Decomposition::piece(const TowerSpec& spec, const BMember& b, int k) const {
    auto e = e_index(spec);
    TowerObservable o = tower_constant(spec, 0.0);
    o.error_budget = 0.0;
    for (int l = 0; l < spec.levels; ++l) {
        for (int i = 0; i <= o.cells; ++i) {
            const int j = e[l][i];
            if (j < 0) continue;
            if (k == -1) {
                o.levels[l][i] = l == 0 ? base_coefficient : 0.0;
                continue;
            }
            const double g = b.psi.levels[l][i] - (l == 0 ? base_coefficient : 0.0);
            o.levels[l][i] = (k <= s.k_max && j <= k) ? s.at(k, j) * g : 0.0;
        }
    }
    return o;
}

Decomposition decompose_once(const TowerSpec& spec, const BMember& b) {
    if (!spec.mixing()) throw NotMixing("decomposition is defined on mixing towers");
    const auto& tc = spec.constants;
    const auto& psi = b.psi;
    Decomposition dec;
    dec.mass = tower_integral(spec, psi);
    if (!(dec.mass > 0.0)) throw InvalidParameter("decomposition needs positive mass");
    dec.base_level_mass = tower_level_integral(spec, psi, 0);
    const double need = tc.eps * dec.mass;
    if (dec.base_level_mass < need - psi.error_budget)
        throw NotInB("base-level mass " + std::to_string(dec.base_level_mass) + " is below eps * mass " +
                     std::to_string(need));
    dec.within_budget_only = dec.base_level_mass < need;
    dec.base_coefficient = tc.p_minus1 * spec.tau_bar * dec.mass;

    const int nb = static_cast<int>(spec.tau.size());
    const double tb = spec.tau_bar;
    // q_j: mass of psi (minus psi_{-1} on the base level) on E_j
    std::vector<double> q(spec.levels, 0.0);
    double base_measure = 0.0;
    for (int a = 0; a < nb; ++a) {
        if (!spec.retained[a]) continue;
        base_measure += spec.base.branches[a].cell().length() / tb;
        for (int l = 0; l < spec.tau[a]; ++l) {
            const int j = l == 0 ? 0 : spec.tau[a] - l;
            q[j] += spec.op->cell_integral(a, psi.levels[l]) / tb;
        }
    }
    q[0] -= dec.base_coefficient * base_measure;

    // rows until the p-sequence is exhausted
    long k_max = std::max<long>(static_cast<long>(q.size()) - 1, 1);
    while (tc.t(k_max + 1) * dec.mass > 1e-13) {
        if (k_max >= tc.horizon())
            throw InvalidParameter("p-sequence is not exhausted within the horizon; decomposition needs a finite tower");
        ++k_max;
    }
    dec.q = q;
    dec.q.resize(k_max + 1, 0.0);
    dec.p.resize(k_max + 1);
    for (long k = 0; k <= k_max; ++k) dec.p[k] = tc.p(k) * dec.mass;
    dec.s = coupling_matrix(dec.p, dec.q, static_cast<int>(k_max));

    // masses of the materialized pieces, cell by cell
    dec.piece_mass.assign(k_max + 2, 0.0);
    dec.piece_mass[0] = dec.base_coefficient * base_measure;
    for (int a = 0; a < nb; ++a) {
        if (!spec.retained[a]) continue;
        const double cell_len = spec.base.branches[a].cell().length();
        for (int l = 0; l < spec.tau[a]; ++l) {
            const int j = l == 0 ? 0 : spec.tau[a] - l;
            double g = spec.op->cell_integral(a, psi.levels[l]);
            if (l == 0) g -= dec.base_coefficient * cell_len;
            for (long k = j; k <= k_max; ++k) dec.piece_mass[k + 1] += dec.s.at(static_cast<int>(k), j) * g / tb;
        }
    }
    dec.max_mass_error = std::abs(dec.piece_mass[0] - tc.p_minus1 * dec.mass);
    for (long k = 0; k <= k_max; ++k)
        dec.max_mass_error = std::max(dec.max_mass_error, std::abs(dec.piece_mass[k + 1] - dec.p[k]));

    // nodewise reconstruction
    auto e = e_index(spec);
    std::vector<double> colsum(k_max + 1, 0.0);
    for (long k = 0; k <= k_max; ++k)
        for (long j = 0; j <= k; ++j) colsum[j] += dec.s.at(static_cast<int>(k), static_cast<int>(j));
    for (int l = 0; l < spec.levels; ++l)
        for (int i = 0; i <= psi.cells; ++i) {
            const int j = e[l][i];
            if (j < 0) continue;
            const double off = l == 0 ? dec.base_coefficient : 0.0;
            const double g = psi.levels[l][i] - off;
            dec.max_sum_error = std::max(dec.max_sum_error, std::abs(off + colsum[j] * g - psi.levels[l][i]));
        }
    return dec;
}

std::vector<DecayPoint> measure_decay(const TowerSpec& spec, const TowerObservable& phi, long n_max) {
    const double mean = tower_integral(spec, phi);
    if (std::abs(mean) > 1e-10) throw NotMeanZero("tower observable has mean " + std::to_string(mean));
    const double start = tower_l1(spec, phi);
    const double columns = phi.tail_sup * spec.omitted_mass;
    if (columns > start)
        throw ErrorBudgetExceeded("unrepresented columns carry more mass than the observable itself");
    std::vector<DecayPoint> out;
    TowerObservable cur = phi;
    for (long n = 0; n <= n_max; ++n) {
        out.push_back({n, tower_l1(spec, cur), cur.error_budget + columns});
        if (n < n_max) cur = tower_apply(spec, cur);
    }
    return out;
}

std::optional<TailBound> tower_tail_bound(const TowerSpec& spec) {
    const auto& tc = spec.constants;
    const TailLaw& law = tc.dist->law();
    if (!(tc.p_minus1 > 0.0 && tc.p_minus1 < 1.0)) return std::nullopt;
    if (law.kind == TailLaw::Kind::Polynomial) return poly_tail_bound(law.C_tau, law.beta, tc.R, tc.N, tc.p_minus1);
    if (law.kind == TailLaw::Kind::Stretched)
        return stretched_tail_bound(law.C_tau, law.A, law.gamma, tc.R, tc.N, tc.p_minus1);
    return std::nullopt;
}

double tower_tail_probability(const TowerSpec& spec, long k) {
    if (spec.constants.dist->law().kind == TailLaw::Kind::None)
        throw InvalidParameter("analytic bounds need a declared tail law");
    auto tb = tower_tail_bound(spec);
    if (!tb) return 1.0;
    // h is integer valued: P(h > k) = P(h >= k+1)
    return std::min(1.0, (*tb)(static_cast<double>(k + 1)));
}

double tower_decay_bound(const TowerSpec& spec, double phi_norm, long n) {
    if (!spec.mixing()) throw NotMixing("tower is not mixing; use the nonmixing bound");
    if (!(spec.cert.R > 0.0)) throw DegenerateCertificate("tower decay bound needs R > 0");
    if (n < spec.constants.N)
        throw NotYetValid("bound starts at N = " + std::to_string(spec.constants.N) + ", got n = " + std::to_string(n));
    const double R = spec.cert.R;
    return 2.0 * phi_norm * (1.0 + 1.0 / R) * tower_tail_probability(spec, n - spec.constants.N);
}

double nonmixing_constant(const TowerSpec& spec) {
    const double R = spec.cert.R;
    return 2.0 * spec.tau_bar * std::exp(R) * (1.0 + R) * (1.0 + 1.0 / R);
}

double nonmixing_bound(const TowerSpec& spec, double phi_norm, long n) {
    if (spec.mixing()) throw UseMixingPath("tower is mixing; use tower_decay_bound");
    if (!(spec.cert.R > 0.0)) throw DegenerateCertificate("nonmixing bound needs R > 0");
    const long Ns = spec.constants.N;
    const long m = std::max(n, Ns);
    const double R = spec.cert.R;
    const double sub = 2.0 * (1.0 + 1.0 / R) * tower_tail_probability(spec, m - Ns);
    return nonmixing_constant(spec) * spec.d * phi_norm * sub;
}

double nonmixing_correlation_bound(const TowerSpec& spec, double phi_norm, double psi_sup, long n) {
    return nonmixing_bound(spec, phi_norm, n) * psi_sup;
}

bool representable(long n, const std::vector<int>& I_set) {
    if (I_set.empty()) throw InvalidParameter("generator set is empty");
    for (int v : I_set)
        if (v < 1) throw InvalidParameter("generators must be positive");
    if (gcd_of(I_set) != 1) throw NotCoprime("generators share a common factor");
    if (n < 0) return false;
    std::vector<char> ok(n + 1, 0);
    ok[0] = 1;
    for (long k = 1; k <= n; ++k)
        for (int v : I_set)
            if (v <= k && ok[k - v]) {
                ok[k] = 1;
                break;
            }
    return ok[n];
}

}  // namespace mixrate
