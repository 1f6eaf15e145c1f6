#pragma once

#include "mixrate/certificates.hpp"
#include "mixrate/stochastic.hpp"

namespace mixrate {

struct NUHInput {
    NUHConstants nuh;
    double eta = 1.0;
    TailBound quotient_tail;  // tail of h for the quotient tower; carries R and N
    TailLaw tau_law;          // m(tau >= n) on the quotient base
    double tau_bar = 1.0;
};

struct KappaConstants {
    // polynomial: C2 = C_tau sum_k rho^k k^{beta+1}
    double C2 = 0.0;
    // stretched: return-count tail (1 + B C1)^k e^{-B t^gamma} with C1 = 2 K1 C_tau / A
    double B = 0.0, C1 = 0.0, geometric = 0.0;  // geometric = rho / (1 - rho (1 + B C1))
    bool rate_shrunk = false;  // B pushed below A/2 to keep rho (1 + B C1) < 1
};

KappaConstants kappa_constants(const NUHInput& in);

struct KappaTerms {
    double first = 0.0;   // 2 tau_bar^{-1} sum_{j > n/3} m(tau >= j)
    double second = 0.0;  // return-count term
    double total() const { return first + second; }
};

KappaTerms kappa_terms(const NUHInput& in, long n);
// raw terms at n; the bound below is their running minimum capped at 1
double kappa_tail_bound(const NUHInput& in, long n);

// b_n: L^1 decay bound of the quotient tower for unit-norm observables
double quotient_decay(const NUHInput& in, long n);

struct NUHBoundTerms {
    double kappa_term = 0.0;
    double tower_term = 0.0;
    double total = 0.0;
};

NUHBoundTerms nuh_bound_terms(const NUHInput& in, double v_norm, double w_norm, long n);
double nuh_correlation_bound(const NUHInput& in, double v_norm, double w_norm, long n);

}  // namespace mixrate
