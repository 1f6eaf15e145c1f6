#include "mixrate/hyperbolic_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "mixrate/errors.hpp"

namespace mixrate {

namespace {

void check_laws(const NUHInput& in) {
    const bool poly = in.quotient_tail.kind == TailBound::Kind::Polynomial;
    if (in.tau_law.kind == TailLaw::Kind::None) throw InvalidParameter("return-time tail law is required");
    if (poly != (in.tau_law.kind == TailLaw::Kind::Polynomial))
        throw InconsistentData("quotient tail bound and return-time law belong to different tail classes");
    if (!(in.nuh.rho > 0.0 && in.nuh.rho < 1.0)) throw InvalidParameter("rho must lie in (0,1)");
}

}  // namespace

KappaConstants kappa_constants(const NUHInput& in) {
    check_laws(in);
    KappaConstants k;
    const double rho = in.nuh.rho;
    const TailLaw& law = in.tau_law;
    if (law.kind == TailLaw::Kind::Polynomial) {
        k.C2 = law.C_tau * power_series(law.beta + 1.0, rho);
        return k;
    }
    k.C1 = 2.0 * in.nuh.K1 * law.C_tau / law.A;
    const double target = 1.0 - 0.5 * (1.0 - rho);
    k.B = bisect_rate(law.A / 2.0, k.C1, rho, target);
    if (!(k.B > 0.0)) throw NoFeasibleRate("no positive rate keeps the return-count series summable");
    k.rate_shrunk = k.B < law.A / 2.0;
    k.geometric = rho / (1.0 - rho * (1.0 + k.B * k.C1));
    return k;
}

namespace {

KappaTerms raw_terms(const NUHInput& in, const KappaConstants& k, long n) {
    const TailLaw& law = in.tau_law;
    const double third = static_cast<double>(n) / 3.0;
    KappaTerms t;
    t.first = 2.0 / in.tau_bar * law.tail_sum(std::floor(third) + 1.0);
    if (law.kind == TailLaw::Kind::Polynomial)
        t.second = static_cast<double>(n) * std::pow(third, -law.beta) * in.nuh.rho * k.C2;
    else
        t.second = static_cast<double>(n) * k.geometric * std::exp(-k.B * std::pow(third, law.gamma));
    return t;
}

}  // namespace

KappaTerms kappa_terms(const NUHInput& in, long n) {
    if (n < 3) throw InvalidParameter("kappa bound needs n >= 3");
    return raw_terms(in, kappa_constants(in), n);
}

// rho^{kappa_n} is pointwise nonincreasing in n and at most 1, so the running
// minimum of the raw bound is still a bound. The polynomial raw bound already
// decreases; the stretched second term increases up to m* = 3 (B gamma)^{-1/gamma}
// and decreases after, so the scan stops there.
double kappa_tail_bound(const NUHInput& in, long n) {
    if (n < 3) throw InvalidParameter("kappa bound needs n >= 3");
    const KappaConstants k = kappa_constants(in);
    double best = std::min(1.0, raw_terms(in, k, n).total());
    if (in.tau_law.kind == TailLaw::Kind::Polynomial) return best;
    const double peak = 3.0 * std::pow(k.B * in.tau_law.gamma, -1.0 / in.tau_law.gamma);
    const long stop = static_cast<long>(std::min<double>(static_cast<double>(n), std::ceil(peak)));
    for (long j = 3; j <= stop && best > 0.0; ++j) best = std::min(best, raw_terms(in, k, j).total());
    return best;
}

double quotient_decay(const NUHInput& in, long n) {
    check_laws(in);
    const TailBound& tb = in.quotient_tail;
    if (!(tb.R > 0.0)) throw DegenerateCertificate("quotient tower needs R > 0");
    const long k = std::max<long>(n - tb.N, 1);
    return 2.0 * (1.0 + 1.0 / tb.R) * tb(static_cast<double>(k));
}

NUHBoundTerms nuh_bound_terms(const NUHInput& in, double v_norm, double w_norm, long n) {
    if (n < 2) throw InvalidParameter("correlation bound needs n >= 2");
    if (v_norm < 0.0 || w_norm < 0.0) throw InvalidParameter("norms must be nonnegative");
    check_laws(in);
    const long m = n / 2;
    const double eta = in.nuh.eta;
    NUHBoundTerms t;
    t.kappa_term = std::pow(2.0, eta) * std::pow(in.nuh.K0, eta) * (m >= 3 ? kappa_tail_bound(in, m) : 1.0) * v_norm * w_norm;
    t.tower_term = 2.0 * in.nuh.K2 * quotient_decay(in, m) * v_norm * w_norm;
    t.total = t.kappa_term + t.tower_term;
    return t;
}

double nuh_correlation_bound(const NUHInput& in, double v_norm, double w_norm, long n) {
    return nuh_bound_terms(in, v_norm, w_norm, n).total;
}

}  // namespace mixrate
