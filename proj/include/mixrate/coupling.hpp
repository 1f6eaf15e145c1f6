#pragma once

#include <vector>

#include "mixrate/certificates.hpp"
#include "mixrate/grid.hpp"
#include "mixrate/transfer.hpp"

namespace mixrate {

struct SplitObservable {
    GridObservable plus;   // 1 + max(0, phi)
    GridObservable minus;  // 1 - min(0, phi)
};

SplitObservable split_observable(const GridObservable& phi);

// P psi - xi int psi; throws CouplingBroken on a nonpositive node
GridObservable coupling_step(const TransferOperator& op, const GridObservable& psi, double xi);
GridObservable coupling_step(const MapSpec& spec, const GridObservable& psi, double xi);

struct CouplingRecord {
    int n = 0;
    double mass_plus = 0.0, mass_minus = 0.0;
    double expected_mass = 0.0;  // gamma^n times the initial mass
    double log_seminorm_plus = 0.0, log_seminorm_minus = 0.0;
    double sup_plus = 0.0, sup_minus = 0.0;
    double difference_seminorm = 0.0;  // |psi+ - psi-|_eta
    double sup_bound = 0.0;            // e^R (1+R) gamma^n
    double holder_bound = 0.0;         // 2 e^R R (1+R) gamma^n
    double budget = 0.0;               // larger of the two tracks' error budgets
    double seminorm_slack = 0.0;       // 4 R h^eta per step, accumulated
};

struct CouplingTrace {
    double R = 0.0, xi = 0.0, gamma = 0.0;
    double scale = 1.0;  // phi was multiplied by this before splitting
    std::vector<CouplingRecord> steps;

    // bounds for the original (unscaled) observable
    double raw_holder_bound(int n) const { return steps.at(n).holder_bound / scale; }
    double raw_difference_seminorm(int n) const { return steps.at(n).difference_seminorm / scale; }
};

CouplingTrace run_coupling(const TransferOperator& op, const DecayCertificate& cert, const GridObservable& phi,
                           int n_steps);
CouplingTrace run_coupling(const MapSpec& spec, const DecayCertificate& cert, const GridObservable& phi, int n_steps);

}  // namespace mixrate
