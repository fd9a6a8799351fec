#pragma once

#include "gibbs/hamiltonian.hpp"
#include "gibbs/recovery.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gibbs {

// Samples with |value| below this are treated as numerical noise.
inline constexpr double kNumericalFloor = 1e-12;

enum class ChainMode { FixedChain, GrowChain };

std::string to_string(ChainMode mode);
ChainMode parse_chain_mode(const std::string& text);

// Quantities a sweep can evaluate, in canonical order.
const std::vector<std::string>& sweep_quantities();
// Additional scan names accepted in a quantity list.
inline const char* kUniformCorr = "uniform_corr";
inline const char* kDpiGap = "dpi_gap";

struct SweepConfig {
    ModelSpec model{"tfim", {{"g", 1.0}}};
    double beta = 1.0;
    int chain_length = 8;
    int a_size = 1;
    int c_size = 1;
    std::vector<int> b_range{1, 2, 3};
    std::vector<std::string> quantities{"mi"};
    std::uint64_t seed = 0;
    double q = 2.0;
    ChainMode mode = ChainMode::FixedChain;
    CorrOptions corr;
    int threads = 1;

    // Throws ConfigInvalid (or DimensionOverflow for oversized chains).
    void validate() const;
};

struct FitResult {
    double rate = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int used = 0;
};

using Sample = std::pair<double, double>;  // (l, value)

// Least squares of log(value) against l over samples with value >= floor.
// Throws TooFewSamples with fewer than three usable samples.
FitResult fit_exponential(const std::vector<Sample>& samples, double floor = kNumericalFloor);

// Number of leading above-floor samples over which the log-decrements
// (log v_i - log v_{i+1}) / (l_{i+1} - l_i) strictly increase.
int superexponential_run(const std::vector<Sample>& samples, double floor = kNumericalFloor);

// True when superexponential_run(...) >= 3.
bool superexponential_flag(const std::vector<Sample>& samples, double floor = kNumericalFloor);

struct DecaySeries {
    std::string quantity;
    std::vector<Sample> samples;  // sorted by l
    std::optional<FitResult> fit;
    bool superexp_flag = false;
    int floor_truncated = 0;
    bool nonincreasing = true;  // within 1e-12
};

DecaySeries make_series(std::string quantity, std::vector<Sample> samples);

// One evaluated point of a sweep with the block sizes actually used.
struct SweepPoint {
    int b_size = 0;
    int a_size = 0;
    int c_size = 0;
    int n = 0;
    std::string quantity;
    double value = 0.0;
    double runtime_ms = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<DecaySeries> series;
    std::vector<std::string> findings;  // monotonicity violations and similar
};

// Partition used at shielding size b: fixed chains pad A and C evenly
// (A receives the smaller half), grown chains have length a + b + c.
Partition sweep_partition(const SweepConfig& config, int b);

SweepResult run_sweep(const SweepConfig& config);

// For each l in b_range, the largest covariance correlation over all
// partitions of the chain with |B| = l and nonempty A and C.
DecaySeries uniform_clustering_scan(const SweepConfig& config, SweepResult* detail = nullptr);

DecaySeries dpi_gap_scan(const SweepConfig& config, SweepResult* detail = nullptr);

// Worker count: min(requested, GIBBS_LAB_THREADS) when the variable is set.
int effective_threads(int requested);

}  // namespace gibbs
