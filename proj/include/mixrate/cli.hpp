#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mixrate {

struct RunConfig {
    std::string subcommand;
    std::string input;   // config document; unused by certificate and demo
    std::string output;  // output directory
    int cells = 1 << 12;
    std::uint64_t seed = 20240601;
    std::optional<double> R_floor;
    std::optional<long> L_max;
    std::optional<long> n_max;
    std::optional<double> tolerance;
    // certificate subcommand
    double lambda = 2.0, K = 0.0, eta = 1.0;
};

// Checks path and grid invariants; throws InvalidParameter.
void validate_run_config(const RunConfig& cfg);

// Runs one subcommand; library errors propagate.
void run_subcommand(const RunConfig& cfg);

// Maps errors to exit codes: 0 ok, 2 configuration, 3 numerical, 4 internal.
int run(const RunConfig& cfg);

// Parses argv and runs; the output directory defaults to $MIXRATE_OUTPUT_DIR, then ".".
int cli_main(int argc, char** argv);

}  // namespace mixrate
