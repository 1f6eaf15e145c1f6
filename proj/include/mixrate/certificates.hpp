#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mixrate {

struct DecayCertificate {
    double lambda = 2.0, K = 0.0, eta = 1.0;
    double R = 0.0;
    double xi = 0.0;
    double C = 0.0;
    double gamma = 0.0;
    bool degenerate = false;
    std::string source = "remark-default";
};

DecayCertificate ue_certificate(double lambda, double K, double eta);
// R = R_floor, xi = e^{-R}(1 - lambda^-eta)/2; must pass validate_constants
DecayCertificate override_certificate(double lambda, double K, double eta, double R_floor = 0.1);
// the remark certificate, or the override when it is degenerate
DecayCertificate tower_certificate(double lambda, double K, double eta, double R_floor = 0.1);

struct ConstantsCheck {
    bool ok = false;
    double slack = 0.0;
};
ConstantsCheck validate_constants(double lambda, double K, double eta, double R, double xi);

double k_mu_constant(double lambda, double K, double eta, double L_mu);

// Declared bound on m(tau >= n) beyond a tabulated range.
struct TailLaw {
    enum class Kind { None, Polynomial, Stretched };
    Kind kind = Kind::None;
    double C_tau = 0.0;
    double beta = 0.0;   // polynomial
    double A = 0.0;      // stretched
    double gamma = 1.0;  // stretched

    static TailLaw polynomial(double C_tau, double beta);
    static TailLaw stretched(double C_tau, double A, double gamma);

    double tail_ge(double n) const;   // bound on m(tau >= n)
    double tail_sum(double n) const;  // bound on sum_{j >= n} m(tau >= j)
    std::string name() const;
};

// max{1, gamma^-1 A^{-1/gamma} (2q)^q}, q = 1/gamma - 1, 0^0 = 1
double c_A_gamma(double A, double gamma);

// Return-time law: exact masses m(tau = n) for n = 1..T plus a declared tail.
class TauDistribution {
public:
    TauDistribution(std::vector<double> mass, TailLaw law = {}, std::optional<int> declared_d = std::nullopt);

    long table_length() const { return static_cast<long>(mass_.size()); }
    double m_eq(long n) const;
    double m_ge(long n) const;
    // S(n) = sum_{l >= n} m(tau >= l+1); level masses are S-differences over tau_bar
    double level_sum(long n) const;
    double tau_bar() const { return tau_bar_; }
    double tail_mass() const { return tail_mass_; }
    int support_gcd() const { return gcd_; }
    std::optional<int> declared_d() const { return declared_d_; }
    const TailLaw& law() const { return law_; }
    // distribution of tau/d; needs every tabulated return divisible by d
    TauDistribution reduced(int d) const;

private:
    std::vector<double> mass_;
    std::vector<double> ge_;      // ge_[j] = m(tau >= j), j = 1..T+1
    std::vector<double> suffix_;  // suffix_[j] = sum_{i=j}^{T} ge_[i]
    TailLaw law_;
    std::optional<int> declared_d_;
    double tail_mass_ = 0.0;
    double tau_bar_ = 0.0;
    int gcd_ = 1;
};

enum class ReturnTarget { Mixing, Nonmixing };

struct ReturnSet {
    std::vector<int> I;
    double delta = 0.0;
    int d = 1;
};

// epsilon-maximizing subset of the 8 most probable return values with gcd d
ReturnSet select_returns(const TauDistribution& dist, ReturnTarget target, double R, long N2);

int gcd_of(const std::vector<int>& v);

struct TowerConstantsOptions {
    long n_max = 10000;
    // accept R = 0 with e^{-R} = 1 (hand-checkable golden example)
    bool formal_zero_R = false;
};

struct TowerConstants {
    double R = 0.0, xi = 0.0;
    double tau_bar = 0.0;
    long N1 = 0, N2 = 0, N = 0;
    double eps = 0.0;
    double log_eps = 0.0;
    double p_minus1 = 0.0, p0 = 0.0;
    std::vector<double> t_seq;  // t_seq[n-1] = t_n, n = 1..n_max+1
    std::vector<double> p_seq;  // p_seq[n-1] = p_n, n = 1..n_max
    double p_tail = 0.0;        // sum of p_n beyond n_max
    std::vector<int> I_set;
    double delta = 0.0;
    int d = 1;
    std::shared_ptr<const TauDistribution> dist;

    double t(long n) const;  // any n >= 1
    double p(long n) const;  // any n >= -1
    long horizon() const { return static_cast<long>(p_seq.size()); }
    double total_mass() const;
};

TowerConstants tower_constants(const DecayCertificate& cert, const TauDistribution& dist,
                               const TowerConstantsOptions& opt = {});

struct NUHConstants {
    double K = 0.0;
    double theta = 0.0;
    double rho = 0.0;
    double rho0 = 0.0;
    double K0 = 0.0;
    double eta = 1.0;
    double K1 = 0.0;
    double K2 = 0.0;
};

NUHConstants nuh_constants(double K, double theta, double K0, double eta, double rho0);

}  // namespace mixrate
