#include "mixrate/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixrate/errors.hpp"

namespace mixrate {

namespace {

void check_ue_args(double lambda, double K, double eta) {
    if (!(lambda > 1.0)) throw InvalidParameter("lambda must exceed 1");
    if (!(K >= 0.0)) throw InvalidParameter("K must be nonnegative");
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0,1]");
}

}  // namespace

DecayCertificate ue_certificate(double lambda, double K, double eta) {
    check_ue_args(lambda, K, eta);
    const double q = 1.0 - std::pow(lambda, -eta);
    DecayCertificate c;
    c.lambda = lambda;
    c.K = K;
    c.eta = eta;
    c.R = 2.0 * K / q;
    c.xi = 0.5 * std::exp(-c.R) * q;
    c.C = 4.0 * std::exp(c.R) * (1.0 + c.R);
    c.gamma = 1.0 - c.xi;
    c.degenerate = (K == 0.0);
    c.source = "remark-default";
    return c;
}

DecayCertificate override_certificate(double lambda, double K, double eta, double R_floor) {
    check_ue_args(lambda, K, eta);
    if (!(R_floor > 0.0)) throw InvalidParameter("R override must be positive");
    const double q = 1.0 - std::pow(lambda, -eta);
    DecayCertificate c;
    c.lambda = lambda;
    c.K = K;
    c.eta = eta;
    c.R = R_floor;
    c.xi = 0.5 * std::exp(-c.R) * q;
    auto chk = validate_constants(lambda, K, eta, c.R, c.xi);
    if (!chk.ok)
        throw InvalidParameter("override R = " + std::to_string(R_floor) + " violates the (R, xi) constraint, slack " +
                               std::to_string(chk.slack));
    c.C = 4.0 * std::exp(c.R) * (1.0 + c.R);
    c.gamma = 1.0 - c.xi;
    c.degenerate = false;
    c.source = "override";
    return c;
}

DecayCertificate tower_certificate(double lambda, double K, double eta, double R_floor) {
    auto c = ue_certificate(lambda, K, eta);
    if (c.degenerate) return override_certificate(lambda, K, eta, R_floor);
    return c;
}

ConstantsCheck validate_constants(double lambda, double K, double eta, double R, double xi) {
    check_ue_args(lambda, K, eta);
    if (!(R > 0.0)) throw InvalidParameter("validate_constants needs R > 0");
    if (!(xi > 0.0)) throw InvalidParameter("validate_constants needs xi > 0");
    if (xi >= std::exp(-R)) throw InvalidParameter("xi must be below e^{-R}");
    ConstantsCheck r;
    r.slack = R * (1.0 - xi * std::exp(R)) - (K + std::pow(lambda, -eta) * R);
    r.ok = r.slack >= -1e-12 * std::max(1.0, R);
    return r;
}

double k_mu_constant(double lambda, double K, double eta, double L_mu) {
    return K + (std::pow(lambda, -eta) + 1.0) * L_mu;
}

TailLaw TailLaw::polynomial(double C_tau, double beta) {
    if (!(beta > 1.0)) throw NotIntegrable("polynomial tail needs beta > 1 for a finite mean return time");
    if (!(C_tau > 0.0)) throw InvalidParameter("C_tau must be positive");
    TailLaw t;
    t.kind = Kind::Polynomial;
    t.C_tau = C_tau;
    t.beta = beta;
    return t;
}

TailLaw TailLaw::stretched(double C_tau, double A, double gamma) {
    if (!(C_tau > 0.0) || !(A > 0.0)) throw InvalidParameter("stretched tail needs C_tau > 0 and A > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("stretched tail needs gamma in (0,1]");
    TailLaw t;
    t.kind = Kind::Stretched;
    t.C_tau = C_tau;
    t.A = A;
    t.gamma = gamma;
    return t;
}

double c_A_gamma(double A, double gamma) {
    const double q = 1.0 / gamma - 1.0;
    const double pq = q == 0.0 ? 1.0 : std::pow(2.0 * q, q);
    return std::max(1.0, pq * std::pow(A, -1.0 / gamma) / gamma);
}

double TailLaw::tail_ge(double n) const {
    switch (kind) {
    case Kind::Polynomial: return C_tau * std::pow(std::max(n, 1.0), -beta);
    case Kind::Stretched: return C_tau * std::exp(-A * std::pow(std::max(n, 0.0), gamma));
    case Kind::None: return 0.0;
    }
    return 0.0;
}

double TailLaw::tail_sum(double n) const {
    n = std::max(n, 1.0);
    switch (kind) {
    case Kind::Polynomial:
        // first term plus the integral from n
        return C_tau * (std::pow(n, -beta) + std::pow(n, 1.0 - beta) / (beta - 1.0));
    case Kind::Stretched: {
        const double q = 1.0 / gamma - 1.0;
        const double pq = q == 0.0 ? 1.0 : std::pow(2.0 * q, q);
        const double integral = 2.0 * pq * std::pow(A, -1.0 / gamma) / gamma * std::exp(-0.5 * A * std::pow(n, gamma));
        return C_tau * (std::exp(-A * std::pow(n, gamma)) + integral);
    }
    case Kind::None: return 0.0;
    }
    return 0.0;
}

std::string TailLaw::name() const {
    switch (kind) {
    case Kind::Polynomial: return "polynomial";
    case Kind::Stretched: return "stretched";
    case Kind::None: return "none";
    }
    return "none";
}

int gcd_of(const std::vector<int>& v) {
    int g = 0;
    for (int x : v) g = std::gcd(g, x);
    return g;
}

TauDistribution::TauDistribution(std::vector<double> mass, TailLaw law, std::optional<int> declared_d)
    : mass_(std::move(mass)), law_(law), declared_d_(declared_d) {
    if (mass_.empty()) throw InvalidParameter("return-time table is empty");
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0)) throw InvalidParameter("return-time masses must be nonnegative");
        total += m;
    }
    if (total > 1.0 + 1e-12) throw InconsistentData("return-time masses sum above 1");
    tail_mass_ = std::max(0.0, 1.0 - total);
    if (tail_mass_ <= 1e-13) tail_mass_ = 0.0;
    if (tail_mass_ > 0.0 && law_.kind == TailLaw::Kind::None)
        throw InconsistentData("return-time table leaves mass " + std::to_string(tail_mass_) + " without a tail law");
    const long T = table_length();
    ge_.assign(T + 2, 0.0);
    suffix_.assign(T + 2, 0.0);
    ge_[T + 1] = tail_mass_;
    for (long j = T; j >= 1; --j) ge_[j] = ge_[j + 1] + mass_[j - 1];
    for (long j = T; j >= 1; --j) suffix_[j] = suffix_[j + 1] + ge_[j];
    std::vector<int> support;
    for (long n = 1; n <= T; ++n)
        if (mass_[n - 1] > 0.0) support.push_back(static_cast<int>(n));
    if (support.empty()) throw InvalidParameter("return-time table has no support");
    gcd_ = gcd_of(support);
    if (declared_d_ && *declared_d_ != gcd_)
        throw InconsistentData("declared d = " + std::to_string(*declared_d_) + " but support gcd is " +
                               std::to_string(gcd_));
    tau_bar_ = level_sum(0);
}

double TauDistribution::m_eq(long n) const {
    if (n >= 1 && n <= table_length()) return mass_[n - 1];
    return 0.0;
}

double TauDistribution::m_ge(long n) const {
    if (n <= 1) return 1.0;
    const long T = table_length();
    if (n <= T + 1) return ge_[n];
    return tail_mass_ > 0.0 ? std::min(tail_mass_, law_.tail_ge(static_cast<double>(n))) : 0.0;
}

double TauDistribution::level_sum(long n) const {
    const long T = table_length();
    const double beyond_table = tail_mass_ > 0.0 ? law_.tail_sum(static_cast<double>(T + 1)) : 0.0;
    if (n + 1 <= T) return suffix_[std::max(n + 1, 1L)] + beyond_table;
    return tail_mass_ > 0.0 ? law_.tail_sum(static_cast<double>(n + 1)) : 0.0;
}

TauDistribution TauDistribution::reduced(int d) const {
    if (d < 1) throw InvalidParameter("reduction factor must be positive");
    const long T = table_length();
    std::vector<double> m(T / d, 0.0);
    for (long n = 1; n <= T; ++n) {
        if (mass_[n - 1] == 0.0) continue;
        if (n % d != 0) throw InconsistentData("return value not divisible by d");
        m[n / d - 1] = mass_[n - 1];
    }
    TailLaw law = law_;
    if (law.kind == TailLaw::Kind::Polynomial) law.C_tau *= std::pow(d, -law.beta);
    if (law.kind == TailLaw::Kind::Stretched) law.A *= std::pow(d, law.gamma);
    return TauDistribution(std::move(m), law);
}

ReturnSet select_returns(const TauDistribution& dist, ReturnTarget target, double R, long N2) {
    const int d = dist.support_gcd();
    if (target == ReturnTarget::Mixing && d != 1)
        throw NotMixing("all return times share the factor " + std::to_string(d));
    std::vector<int> support;
    for (long n = 1; n <= dist.table_length(); ++n)
        if (dist.m_eq(n) > 0.0) support.push_back(static_cast<int>(n));
    std::stable_sort(support.begin(), support.end(),
                     [&](int a, int b) { return dist.m_eq(a) > dist.m_eq(b); });
    std::vector<int> cand(support.begin(), support.begin() + std::min<size_t>(8, support.size()));
    // extend by probability until the candidates can reach gcd d
    for (size_t k = cand.size(); gcd_of(cand) != d && k < support.size(); ++k) cand.push_back(support[k]);

    ReturnSet best;
    double best_val = -INFINITY;
    const size_t c = cand.size();
    if (c > 20) {
        best.I = cand;
        std::sort(best.I.begin(), best.I.end());
        best.delta = INFINITY;
        for (int v : best.I) best.delta = std::min(best.delta, dist.m_eq(v));
        best.d = d;
        return best;
    }
    for (unsigned long mask = 1; mask < (1UL << c); ++mask) {
        std::vector<int> I;
        for (size_t k = 0; k < c; ++k)
            if (mask & (1UL << k)) I.push_back(cand[k]);
        if (gcd_of(I) != d) continue;
        // a single return value is reserved for single-valued supports
        if (I.size() < 2 && support.size() >= 2) continue;
        std::sort(I.begin(), I.end());
        double delta = INFINITY;
        for (int v : I) delta = std::min(delta, dist.m_eq(v));
        const double N1 = static_cast<double>(I.back() / d) * (I.back() / d);
        const double val = (N1 + static_cast<double>(N2)) * (std::log(delta) - R);
        bool better = best.I.empty() || val > best_val + 1e-12 * std::abs(best_val);
        if (!better && std::abs(val - best_val) <= 1e-12 * std::abs(best_val)) {
            better = I.back() < best.I.back() || (I.back() == best.I.back() && I.size() < best.I.size());
        }
        if (better) {
            best_val = val;
            best.I = I;
            best.delta = delta;
        }
    }
    best.d = d;
    return best;
}

namespace {

long find_N2(const TauDistribution& dist, double thr) {
    auto ok = [&](long n) { return dist.level_sum(n) <= thr; };
    const long T = dist.table_length();
    for (long n = 1; n <= T + 1; ++n)
        if (ok(n)) return n;
    if (dist.tail_mass() == 0.0) return T + 1;
    long lo = T + 1, hi = 2 * (T + 1);
    while (!ok(hi)) {
        lo = hi;
        if (hi > (1L << 60)) throw NotIntegrable("level tail never falls below the recurrence threshold");
        hi *= 2;
    }
    while (hi - lo > 1) {
        long mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TowerConstants tower_constants(const DecayCertificate& cert, const TauDistribution& dist,
                               const TowerConstantsOptions& opt) {
    if (cert.R < 0.0) throw InvalidParameter("negative R");
    if (cert.R == 0.0 && !opt.formal_zero_R)
        throw DegenerateCertificate("tower constants need R > 0; override R before building the tower");
    if (!(cert.xi > 0.0 && cert.xi < 1.0)) throw InvalidParameter("xi must lie in (0,1)");
    if (opt.n_max < 1) throw InvalidParameter("horizon n_max must be positive");

    TowerConstants tc;
    tc.R = cert.R;
    tc.xi = cert.xi;
    tc.dist = std::make_shared<TauDistribution>(dist);
    tc.tau_bar = dist.tau_bar();
    if (!std::isfinite(tc.tau_bar)) throw NotIntegrable("mean return time is infinite");

    const double eR = std::exp(cert.R);
    tc.N2 = find_N2(dist, 0.5 / eR);
    ReturnSet rs = select_returns(dist, ReturnTarget::Mixing, cert.R, tc.N2);
    tc.I_set = rs.I;
    tc.delta = rs.delta;
    tc.d = rs.d;
    tc.N1 = static_cast<long>(rs.I.back()) * rs.I.back();
    tc.N = tc.N1 + tc.N2;
    tc.log_eps = std::log(0.5) - cert.R - std::log(tc.tau_bar) +
                 static_cast<double>(tc.N) * (std::log(tc.delta) - cert.R);
    tc.eps = std::exp(tc.log_eps);
    tc.p_minus1 = cert.xi * tc.eps;
    tc.p0 = (1.0 - cert.xi) * tc.eps;

    const double t1 = 1.0 - tc.eps;
    tc.t_seq.resize(opt.n_max + 1);
    tc.t_seq[0] = t1;
    for (long n = 2; n <= opt.n_max + 1; ++n) tc.t_seq[n - 1] = std::min(t1, eR * dist.level_sum(n));
    tc.p_seq.resize(opt.n_max);
    for (long n = 1; n <= opt.n_max; ++n) tc.p_seq[n - 1] = tc.t_seq[n - 1] - tc.t_seq[n];
    tc.p_tail = tc.t_seq[opt.n_max];
    return tc;
}

double TowerConstants::t(long n) const {
    if (n < 1) throw InvalidParameter("t_n is defined for n >= 1");
    if (n <= static_cast<long>(t_seq.size())) return t_seq[n - 1];
    return std::min(t_seq[0], std::exp(R) * dist->level_sum(n));
}

double TowerConstants::p(long n) const {
    if (n == -1) return p_minus1;
    if (n == 0) return p0;
    if (n < -1) throw InvalidParameter("p_n is defined for n >= -1");
    if (n <= horizon()) return p_seq[n - 1];
    return t(n) - t(n + 1);
}

double TowerConstants::total_mass() const {
    double s = p_minus1 + p0 + p_tail;
    for (double v : p_seq) s += v;
    return s;
}

NUHConstants nuh_constants(double K, double theta, double K0, double eta, double rho0) {
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidParameter("theta must lie in (0,1)");
    if (!(rho0 > 0.0 && rho0 < 1.0)) throw InvalidParameter("rho0 must lie in (0,1)");
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in (0,1]");
    if (K < 0.0 || K0 < 0.0) throw InvalidParameter("K and K0 must be nonnegative");
    const double rho = std::pow(rho0, eta);
    if (std::abs(theta - rho) > 1e-12 * rho)
        throw InvalidParameter("theta is forced to equal rho0^eta = " + std::to_string(rho) + ", got " +
                               std::to_string(theta));
    NUHConstants c;
    c.K = K;
    c.theta = theta;
    c.rho = rho;
    c.rho0 = rho0;
    c.K0 = K0;
    c.eta = eta;
    const double s = K / (1.0 - theta);
    c.K1 = std::exp(s) * s;
    c.K2 = 1.0 + c.K1 * c.K1 + std::pow(2.0, eta) * std::pow(K0, eta);
    return c;
}

}  // namespace mixrate
