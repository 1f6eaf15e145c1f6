#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "mixrate/certificates.hpp"
#include "mixrate/map_model.hpp"
#include "mixrate/stochastic.hpp"
#include "mixrate/transfer.hpp"

namespace mixrate {

struct TowerOptions {
    int cells = 1 << 12;
    long L_max = 128;
    long n_max = 10000;
    double R_floor = 0.1;
    // use this certificate instead of the remark default / R_floor override
    std::optional<DecayCertificate> cert;
    bool formal_zero_R = false;
};

struct TowerSpec {
    MapSpec base;
    std::vector<int> tau;        // per base branch
    TailLaw declared_law;
    TailLaw law;                 // declared law with C_tau raised to cover the table
    long L_max = 0;
    int levels = 0;              // retained levels 0..levels-1
    DecayCertificate cert;
    // constants of the tower itself when d = 1, of the sub-tower f^d when d >= 2
    TowerConstants constants;
    int d = 1;
    double tau_bar = 0.0;
    std::vector<double> level_masses;  // m_Delta(Delta_l) for retained levels
    double retained_tail_bound = 0.0;  // e^R tau_bar m_Delta(levels above L_max)
    double omitted_mass = 0.0;         // m_Delta of columns not represented on the grid
    std::vector<bool> retained;        // per branch: column fully represented
    std::vector<std::vector<Interval>> support;  // per level
    std::vector<std::vector<int>> support_nodes; // nodes whose hat function meets the support
    std::shared_ptr<const TransferOperator> op;

    int cells() const { return op->cells(); }
    bool mixing() const { return d == 1; }
};

TowerSpec build_tower(const MapSpec& base, const std::vector<int>& tau, const TailLaw& law,
                      const TowerOptions& opt = {});

// Level l of the tower sampled on the base grid; values matter only on the level's support.
struct TowerObservable {
    int cells = 0;
    std::vector<std::vector<double>> levels;
    double eta = 1.0;
    double tail_sup = 0.0;      // bound on |phi| over the columns that are not represented
    double error_budget = 0.0;  // L^1(m_Delta) bound on the discretization error

    const std::vector<double>& level(int l) const { return levels[l]; }
};

TowerObservable tower_constant(const TowerSpec& spec, double c);
TowerObservable tower_from_function(const TowerSpec& spec, const std::function<double(double, int)>& f);
// 1 on level 0 minus the constant that centres it over the represented tower
TowerObservable tower_base_indicator_centred(const TowerSpec& spec);

double tower_integral(const TowerSpec& spec, const TowerObservable& phi);
double tower_level_integral(const TowerSpec& spec, const TowerObservable& phi, int level);
double tower_l1(const TowerSpec& spec, const TowerObservable& phi);
double tower_sup(const TowerSpec& spec, const TowerObservable& phi);
// sup over level supports of the within-level seminorm
double tower_level_seminorm(const TowerSpec& spec, const TowerObservable& phi);
// |phi|_inf + |phi|_eta, levels at mutual distance 1
double tower_norm(const TowerSpec& spec, const TowerObservable& phi);
double tower_log_seminorm(const TowerSpec& spec, const TowerObservable& phi);
double represented_mass(const TowerSpec& spec);

TowerObservable tower_apply(const TowerSpec& spec, const TowerObservable& phi);
TowerObservable tower_apply_n(const TowerSpec& spec, const TowerObservable& phi, long n);

// Membership in the cone A: psi >= 0, |psi|_inf <= e^R tau_bar int psi, level log-seminorm <= R.
struct ClassCheck {
    bool ok = false;
    double sup_ratio = 0.0;     // |psi|_inf / (e^R tau_bar int psi)
    double log_seminorm = 0.0;
};
ClassCheck check_class_A(const TowerSpec& spec, const TowerObservable& psi, double slack = 1e-9);

// Random A member: a smooth positive part over every level plus a part on the base level.
TowerObservable random_A_member(const TowerSpec& spec, std::uint64_t seed);

// B = L^N A, certified by carrying the A preimage.
struct BMember {
    TowerObservable preimage;
    TowerObservable psi;
};
BMember make_B_member(const TowerSpec& spec, const TowerObservable& a);

struct Decomposition {
    double mass = 0.0;              // int psi dm_Delta
    double base_coefficient = 0.0;  // psi_{-1} = base_coefficient 1_{Delta_0}
    std::vector<double> q;          // q_j = int g_j, j = 0..
    std::vector<double> p;          // p_k * mass, k = 0..k_max
    CouplingMatrix s;
    std::vector<double> piece_mass; // int psi_k for k = -1..k_max (index k+1)
    double max_mass_error = 0.0;    // max |int psi_k - p_k mass|
    double max_sum_error = 0.0;     // max nodewise |sum_k psi_k - psi|
    double base_level_mass = 0.0;   // int_{Delta_0} psi
    bool within_budget_only = false;  // recurrence held only up to the error budget

    TowerObservable piece(const TowerSpec& spec, const BMember& b, int k) const;
};
Decomposition decompose_once(const TowerSpec& spec, const BMember& b);

struct DecayPoint {
    long n = 0;
    double measured = 0.0;
    double budget = 0.0;
};
// int |L^n phi| dm_Delta for n = 0..n_max
std::vector<DecayPoint> measure_decay(const TowerSpec& spec, const TowerObservable& phi, long n_max);

// P(h > k) bound for the tower's tail law, capped at 1; 1 when the constants underflow
double tower_tail_probability(const TowerSpec& spec, long k);
std::optional<TailBound> tower_tail_bound(const TowerSpec& spec);
double tower_decay_bound(const TowerSpec& spec, double phi_norm, long n);

double nonmixing_constant(const TowerSpec& spec);  // 2 tau_bar e^R (1+R)(1+1/R)
double nonmixing_bound(const TowerSpec& spec, double phi_norm, long n);
double nonmixing_correlation_bound(const TowerSpec& spec, double phi_norm, double psi_sup, long n);

bool representable(long n, const std::vector<int>& I_set);

}  // namespace mixrate
