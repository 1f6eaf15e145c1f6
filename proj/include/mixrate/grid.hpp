#pragma once

#include <functional>
#include <vector>

#include "mixrate/map_model.hpp"

namespace mixrate {

// Node values on the uniform grid x_i = i/M, i = 0..M (M cells), read between
// nodes by piecewise-linear interpolation.
struct GridObservable {
    int cells = 0;
    std::vector<double> values;
    double eta = 1.0;
    double error_budget = 0.0;

    GridObservable() = default;
    GridObservable(int cells, double fill, double eta = 1.0);
    static GridObservable sample(int cells, const std::function<double(double)>& f, double eta = 1.0);

    int nodes() const { return cells + 1; }
    double h() const { return 1.0 / cells; }
    double x(int i) const { return static_cast<double>(i) / cells; }
    double operator()(double y) const;
};

// exact integral of the interpolant over [0,1]
double integrate(const GridObservable& f);
double integrate(const std::vector<double>& v, int cells);
// exact integral of the interpolant over [a,b]
double integrate_over(const std::vector<double>& v, int cells, double a, double b);
// exact integral of |interpolant| over [a,b]
double integrate_abs_over(const std::vector<double>& v, int cells, double a, double b);
// exact integral of the product of two interpolants over [0,1]
double integrate_product(const std::vector<double>& f, const std::vector<double>& g, int cells);
// linear functional w with sum_i w_i v_i = integral of the interpolant over the intervals
std::vector<double> quadrature_weights(int cells, const std::vector<Interval>& support);

double sup_norm(const GridObservable& f);
double sup_norm(const std::vector<double>& v);

// Max over node pairs of |f_i - f_j| / |x_i - x_j|^eta: a lower bound of the true seminorm.
double holder_seminorm(const GridObservable& f, double eta);
double holder_seminorm(const std::vector<double>& v, int cells, double eta);
// restricted to the listed node indices (sorted, increasing)
double holder_seminorm_on(const std::vector<double>& v, int cells, const std::vector<int>& idx, double eta);
double log_holder_seminorm(const GridObservable& f, double eta);
double log_holder_seminorm(const std::vector<double>& v, int cells, double eta);

}  // namespace mixrate
