#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace mixrate {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class BranchKind { Affine, Moebius, Tabulated, LsvInduced };

// Intermittent map x -> x(1 + 2^a x^a) on [0,1/2], 2x-1 on (1/2,1].
// The induced map lives on [1/2,1], rescaled here to [0,1] by u = 2y-1.
class LsvFamily {
public:
    explicit LsvFamily(double alpha);
    double alpha() const { return alpha_; }
    double g(double x) const;
    double g_prime(double x) const;
    // inverse of g on [0,1/2]
    double h(double w) const;
    // thresholds x_0 = 1, x_1 = 1/2, x_{k+1} = h(x_k); branch k has cell [x_{k+1}, x_k]
    std::vector<double> thresholds(int count) const;

private:
    double alpha_;
    double c_;  // 2^alpha
};

class Branch {
public:
    static Branch affine(double lo, double hi, bool reversed = false);
    // y -> (a y + b) / (c y + d)
    static Branch moebius(double a, double b, double c, double d);
    // inverse samples x_i at increasing y_i spanning [0,1], monotone cubic interpolation
    static Branch tabulated(std::vector<double> y, std::vector<double> x);
    static Branch lsv_induced(double alpha, int depth);

    BranchKind kind() const { return kind_; }
    Interval cell() const { return cell_; }
    double inverse(double y) const;
    double log_weight(double y) const;
    double weight(double y) const;
    // (y_a, log zeta(y_a)) in one evaluation
    std::pair<double, double> preimage(double y) const;
    double forward(double x) const;

    double lsv_alpha() const { return p_[0]; }
    int lsv_depth() const { return depth_; }
    bool increasing() const { return increasing_; }

private:
    Branch() = default;
    void finish();
    double pchip(double y, double* deriv) const;

    BranchKind kind_ = BranchKind::Affine;
    double p_[4] = {0, 0, 0, 0};
    int depth_ = 0;
    std::vector<double> ty_, tx_, tm_;
    Interval cell_;
    bool increasing_ = true;
};

struct MapSpec {
    std::vector<Branch> branches;
    double truncation_mass = 0.0;
    double lambda = 2.0;
    double K = 0.0;
    double eta = 1.0;
};

struct Preimage {
    double x;
    double weight;
};

struct ValidationReport {
    bool pass = false;
    double observed_expansion = 0.0;
    std::vector<double> branch_distortion;
    double worst_distortion = 0.0;
    double cell_mass = 0.0;        // sum of retained cell lengths
    double quadrature_mass = 0.0;  // midpoint-rule integral of P1
    double truncation_mass = 0.0;
    double max_roundtrip_error = 0.0;
    std::vector<std::string> failures;
};

ValidationReport validate_spec(const MapSpec& spec, int n_samples, int quadrature_nodes = 1 << 14);

std::vector<Preimage> branch_preimages(const MapSpec& spec, double y);
// writes into out (resized to branch count); avoids allocation in sweeps
void branch_preimages(const MapSpec& spec, double y, std::vector<Preimage>& out);

double truncation_error_bound(const MapSpec& spec, double sup_norm);

double midpoint_integral(const MapSpec& spec, int nodes);

// sup over y of sum_a zeta(y_a), bounded by e^K
double weight_sum_bound(const MapSpec& spec);

// Ready-made maps used by tests, the CLI demo and documentation.
MapSpec doubling_map();
MapSpec affine_map(const std::vector<double>& cuts);
// inverse branches a y/(1 + c(1-a) y) and an affine branch onto the rest;
// the invariant density is proportional to 1/(1 + c x)
MapSpec moebius_test_map(double c = 0.5, double a = 0.5);
double moebius_test_density(double c, double x);
// first-return map of the intermittent map, 'count' branches, declared K from the
// sampled distortion with a 5% margin
MapSpec lsv_induced_map(double alpha, int count);
double lsv_sampled_distortion(double alpha, int count, int n_samples);

}  // namespace mixrate
