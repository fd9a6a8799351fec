#include "gibbs/cli/commands.hpp"

#include "gibbs/cli/plot.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/gibbs.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef GIBBS_LAB_VERSION
#define GIBBS_LAB_VERSION "unknown"
#endif

namespace gibbs::cli {

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const DimensionOverflow& e) {
        err << "error: " << e.what() << '\n';
        return kExitDimension;
    } catch (const ConfigInvalid& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnknownModel& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SchemaMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

std::vector<ResultRow> result_rows(const RunConfig& config, const SweepResult& result) {
    const SweepConfig& s = config.sweep;
    const std::string model = s.model.to_string();
    std::vector<ResultRow> rows;
    rows.reserve(result.points.size());
    for (const auto& p : result.points) {
        const auto ms = config.output.timing ? static_cast<std::int64_t>(std::llround(p.runtime_ms)) : 0;
        rows.push_back(make_row(model, s.beta, p.n, p.a_size, p.b_size, p.c_size, p.quantity, p.value, s.seed, ms));
    }
    return rows;
}

std::string format_fits(const SweepResult& result) {
    std::ostringstream out;
    out << "quantity,rate,intercept,r_squared,superexp_flag\n";
    for (const auto& s : result.series) {
        out << csv_field(s.quantity) << ',';
        if (s.fit) {
            out << format_double(s.fit->rate) << ',' << format_double(s.fit->intercept) << ','
                << format_double(s.fit->r_squared);
        } else {
            out << ",,";
        }
        out << ',' << (s.superexp_flag ? 1 : 0) << '\n';
    }
    return out.str();
}

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

nlohmann::json config_json(const RunConfig& c) {
    const SweepConfig& s = c.sweep;
    return {
        {"model", s.model.to_string()},
        {"beta", s.beta},
        {"chain_length", s.chain_length},
        {"a_size", s.a_size},
        {"c_size", s.c_size},
        {"b_range", s.b_range},
        {"quantities", s.quantities},
        {"seed", s.seed},
        {"q", s.q},
        {"mode", to_string(s.mode)},
        {"threads", s.threads},
        {"corr_restarts", s.corr.restarts},
        {"corr_max_iters", s.corr.max_iters},
        {"corr_tol", s.corr.tol},
        {"timing", c.output.timing},
    };
}

std::string meta_json(const RunConfig& config, const SweepResult& result, double wall_seconds,
                      const std::string& started) {
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& s : result.series) {
        nlohmann::json f{{"quantity", s.quantity},
                         {"samples", s.samples.size()},
                         {"floor_truncated", s.floor_truncated},
                         {"superexp_flag", s.superexp_flag},
                         {"nonincreasing", s.nonincreasing}};
        if (s.fit) {
            f["rate"] = s.fit->rate;
            f["intercept"] = s.fit->intercept;
            f["r_squared"] = s.fit->r_squared;
        }
        fits.push_back(std::move(f));
    }
    const nlohmann::json meta{
        {"config", config_json(config)},
        {"config_text", format_config(config)},
        {"versions",
         {{"gibbs_lab", GIBBS_LAB_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"compiler", __VERSION__},
          {"linear_algebra", linalg::backend_description()}}},
        {"started_utc", started},
        {"wall_seconds", wall_seconds},
        {"threads", effective_threads(config.sweep.threads)},
        {"numerical_floor", kNumericalFloor},
        {"series", fits},
        {"findings", result.findings},
    };
    return meta.dump(2) + "\n";
}

}  // namespace

int cmd_run(const std::string& config_path, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err) {
    try {
        const RunConfig config = load_config(config_path);
        config.sweep.validate();
        std::filesystem::create_directories(out_dir);

        const std::string started = utc_now();
        const auto t0 = std::chrono::steady_clock::now();
        const SweepResult result = run_sweep(config.sweep);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const std::string results = format_results(result_rows(config, result));
        const std::string fits = format_fits(result);
        const std::string meta = meta_json(config, result, wall, started);
        write_file_atomic(out_dir / "results.csv", results);
        write_file_atomic(out_dir / "fits.csv", fits);
        write_file_atomic(out_dir / "meta.json", meta);

        for (const auto& s : result.series) {
            out << s.quantity << ": ";
            if (s.fit) {
                out << "rate " << s.fit->rate << ", r^2 " << s.fit->r_squared;
            } else {
                out << "no fit";
            }
            out << ", " << s.floor_truncated << " below floor" << (s.superexp_flag ? ", superexponential" : "")
                << '\n';
        }
        for (const auto& f : result.findings) out << "finding: " << f << '\n';
        out << "wrote " << (out_dir / "results.csv").string() << " (" << wall << " s)\n";
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

int cmd_verify(VerifyLevel level, std::ostream& out, std::ostream& err, const VerifyHooks& hooks) {
    const auto t0 = std::chrono::steady_clock::now();
    const VerifyReport report = run_verify(level, hooks, &out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (const auto* fail = report.first_failure()) {
        err << "verify failed: first failing invariant " << fail->name << '\n';
        return kExitNumeric;
    }
    out << "all " << report.outcomes.size() << " invariants passed in " << secs << " s\n";
    return kExitOk;
}

int cmd_plot(const std::filesystem::path& results_csv, const std::filesystem::path& out_svg, std::ostream& err) {
    try {
        const auto rows = read_results(results_csv);
        write_file_atomic(out_svg, render_svg(rows));
        return kExitOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

int cmd_models(std::ostream& out) {
    for (const auto& p : preset_catalog()) {
        out << p.name;
        if (!p.parameters.empty()) out << "  [" << p.parameters << "]";
        out << "\n    " << p.description << '\n';
    }
    return kExitOk;
}

}  // namespace gibbs::cli
