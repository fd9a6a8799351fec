#pragma once

#include "gibbs/cli/config.hpp"
#include "gibbs/cli/csv.hpp"
#include "gibbs/cli/verify.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDimension = 3;

// Maps the exception currently being handled to an exit code and writes a
// one-line diagnostic to `err`.
int exit_code_for_current_exception(std::ostream& err);

// Flattens a sweep into CSV rows in evaluation order.
std::vector<ResultRow> result_rows(const RunConfig& config, const SweepResult& result);
std::string format_fits(const SweepResult& result);

// Writes results.csv, fits.csv and meta.json into out_dir. All three are
// computed first and then moved into place, so a failed run leaves no files.
int cmd_run(const std::string& config_path, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);
int cmd_verify(VerifyLevel level, std::ostream& out, std::ostream& err, const VerifyHooks& hooks = {});
int cmd_plot(const std::filesystem::path& results_csv, const std::filesystem::path& out_svg, std::ostream& err);
int cmd_models(std::ostream& out);

}  // namespace gibbs::cli
