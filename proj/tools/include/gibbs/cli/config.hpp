#pragma once

#include "gibbs/experiments.hpp"

#include <iosfwd>
#include <string>

namespace gibbs::cli {

struct OutputOptions {
    // runtime_ms is recorded as 0 unless this is set, so that repeated runs
    // produce byte-identical results.csv files.
    bool timing = false;
};

struct RunConfig {
    SweepConfig sweep;
    OutputOptions output;
};

// INI-style text with sections [model], [sweep] and [output]:
//
//   [model]
//   model = tfim:g=1
//   beta = 1.0
//   [sweep]
//   chain_length = 12
//   a_size = 1
//   c_size = 1
//   b_range = 2..10          ; or a comma list: 2,4,6
//   quantities = mi, recovery_dist
//   seed = 7
//   q = 2
//   mode = fixed_chain
//   threads = 1
//   corr_restarts = 8
//   corr_max_iters = 200
//   corr_tol = 1e-10
//   [output]
//   timing = false
//
// model, chain_length, b_range and quantities are required. Unknown sections
// or keys raise ConfigInvalid.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text form; parse_config_text(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

std::vector<int> parse_int_range(const std::string& text);

}  // namespace gibbs::cli
