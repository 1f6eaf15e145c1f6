#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mixrate/certificates.hpp"

namespace mixrate {

// Counter-based generator: stream (seed, index) is a pure function of its key,
// so results do not depend on how samples are split across workers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next();
    double uniform();       // [0,1)
    double uniform_pos();   // (0,1]
    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t state_;
};

struct PSequence {
    double p_minus1 = 0.0;
    double p0 = 0.0;
    std::vector<double> p;  // p[n-1] = p_n
    double tail_mass = 0.0; // sum of p_n beyond p.size()
    // t(n) = sum_{j >= n} p_j for n beyond the table (needed only when tail_mass > 0)
    std::function<double(long)> tail_t;
    long N = 0;

    static PSequence from_tower(const TowerConstants& tc);
    double total() const;
    void validate() const;
};

struct CouplingMatrix {
    int k_max = -1;
    std::vector<std::vector<double>> s;  // s[k][j], 0 <= j <= k
    double at(int k, int j) const { return j <= k ? s[k][j] : 0.0; }
};

CouplingMatrix coupling_matrix(const std::vector<double>& p, const std::vector<double>& q, int k_max = -1);

long word_h(const std::vector<long>& w, long N);

struct EmpiricalTail {
    long n_samples = 0;
    std::vector<double> tail;          // tail[n] = fraction with h > n, n = 0..n_max
    std::vector<double> wilson_upper;  // 99% upper envelope
    double mean_length = 0.0;          // sample mean of |w|
    double atom_zero = 0.0;            // fraction with h = 0
};

double wilson_upper(double phat, long n, double z = 2.5758293035489004);

EmpiricalTail sample_h(const PSequence& pseq, long n_samples, std::uint64_t seed, long n_max = 200,
                       int workers = 0);

struct TailBound {
    enum class Kind { Polynomial, Stretched };
    Kind kind = Kind::Polynomial;
    long N = 0;
    double p_minus1 = 0.0;
    double R = 0.0;
    double C_tau = 0.0;
    // polynomial
    double beta = 0.0, C1 = 0.0, C1prime = 0.0, series = 0.0;
    // stretched
    double A = 0.0, gamma = 1.0, C_Agamma = 0.0, c_w = 0.0, B = 0.0, r = 0.0, Cprime = 0.0;
    // P(h >= n) <= final_C n^{-(beta-1)} or final_C e^{-final_B n^gamma}, n >= 1
    double final_C = 0.0, final_B = 0.0;

    // two-term curve from the proof; may exceed 1
    double operator()(double n) const;
};

// sum_{k>=1} k^beta r^k with a remainder bound added (upper bound, 1e-14 relative)
double power_series(double beta, double r);

TailBound poly_tail_bound(double C_tau, double beta, double R, long N, double p_minus1);
TailBound stretched_tail_bound(double C_tau, double A, double gamma, double R, long N, double p_minus1);

// Largest B in (0, B_max] with (1 + B C1) base <= target, by 48 bisection steps.
double bisect_rate(double B_max, double C1, double base, double target);

}  // namespace mixrate
