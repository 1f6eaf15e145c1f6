#pragma once

#include <vector>

#include "mixrate/grid.hpp"
#include "mixrate/map_model.hpp"

namespace mixrate {

// P_m on a fixed grid. Preimages, weights and interpolation stencils are
// computed once per (spec, grid) pair.
//
// Sweeps are conservative: after the preimage sum, a constant is added so that
// the trapezoid integral of the output equals the exact integral of the input
// interpolant over the retained cells. The constant is O(h^2) and is returned
// so callers can charge it to their error budget.
class TransferOperator {
public:
    TransferOperator(const MapSpec& spec, int cells, bool conservative = true);

    const MapSpec& spec() const { return spec_; }
    int cells() const { return cells_; }
    int branch_count() const { return branches_; }

    // node values only; returns the mass correction that was added
    double sweep(const std::vector<double>& in, std::vector<double>& out) const;
    // sum_a zeta(y_a) f_a(y_a) with a separate input per branch (tower level 0)
    double sweep_per_branch(const std::vector<const std::vector<double>*>& in, std::vector<double>& out) const;
    // exact integral of the interpolant of v over the cell of branch a
    double cell_integral(int a, const std::vector<double>& v) const;

    GridObservable apply_once(const GridObservable& phi) const;
    GridObservable apply_n(const GridObservable& phi, int n, double budget_ceiling = 1.0) const;

    // max over nodes of sum_a zeta(y_a) on this grid
    double grid_weight_sum() const;
    // bound on sup_j |P^j|_{inf->inf}: e^{K/(1-lambda^-eta)}
    double amplification() const;

private:
    struct Stencil {
        int j;
        double t;
        double w;
    };
    struct CellWeights {
        int first;
        std::vector<double> w;
    };
    double correct(double target, std::vector<double>& out) const;

    MapSpec spec_;
    int cells_;
    int branches_;
    bool conservative_;
    std::vector<Stencil> st_;  // (cells+1) x branches
    std::vector<CellWeights> cell_w_;
    std::vector<double> retained_w_;
};

GridObservable apply_once(const MapSpec& spec, const GridObservable& phi);
GridObservable apply_n(const MapSpec& spec, const GridObservable& phi, int n, double budget_ceiling = 1.0);

struct DensityResult {
    GridObservable rho;
    int iterations = 0;
    double residual = 0.0;  // sup |P rho - rho| after normalization
};

DensityResult invariant_density(const TransferOperator& op, double tol, int max_iter = 10000);
DensityResult invariant_density(const MapSpec& spec, double tol, int cells = 1 << 12, int max_iter = 10000);

// int P^n((phi - int phi dmu) rho) psi dm
double correlation_ue(const TransferOperator& op, const GridObservable& rho, const GridObservable& phi,
                      const GridObservable& psi, int n);

}  // namespace mixrate
