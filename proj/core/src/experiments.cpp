#include "gibbs/experiments.hpp"

#include "gibbs/divergences.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

namespace gibbs {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Runs fn(0..count-1) on up to `threads` workers; results keep index order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::size_t next = 0;
    while (next < count) {
        std::vector<std::future<T>> batch;
        const std::size_t end = std::min(count, next + static_cast<std::size_t>(threads));
        for (std::size_t i = next; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, i));
        for (std::size_t i = next; i < end; ++i) out[i] = batch[i - next].get();
        next = end;
    }
    return out;
}

bool is_sweep_quantity(const std::string& q) {
    const auto& all = sweep_quantities();
    return std::find(all.begin(), all.end(), q) != all.end();
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool wants(const SweepConfig& c, const std::string& q) {
    return std::find(c.quantities.begin(), c.quantities.end(), q) != c.quantities.end();
}

// Evaluates the requested per-partition quantities on one ensemble.
std::vector<std::pair<std::string, double>> evaluate_point(const SweepConfig& config, const GibbsEnsemble& ensemble,
                                                           const Partition& p) {
    std::vector<std::pair<std::string, double>> out;
    const Sites a = p.a(), b = p.b(), c = p.c();
    const Operator& state = ensemble.state();

    const bool need_mi_family = wants(config, "trace_dist_product") || wants(config, "bs_mi") ||
                                wants(config, "grmi_q") || wants(config, "mi_norm_bound");
    MutualInformationReport mir;
    if (need_mi_family) mir = mutual_information_report(state, a, c, {config.q});

    for (const std::string& q : sweep_quantities()) {
        if (!wants(config, q)) continue;
        double v = 0.0;
        if (q == "corr") {
            CorrOptions opts = config.corr;
            opts.seed = config.seed;
            v = covariance_correlation(state, a, c, opts).value;
        } else if (q == "trace_dist_product") {
            v = mir.trace_distance;
        } else if (q == "mi") {
            v = mutual_information(state, a, c);
        } else if (q == "bs_mi") {
            v = mir.bs_mi;
        } else if (q == "grmi_q") {
            v = mir.geometric_renyi_mi.at(config.q);
        } else if (q == "mi_norm_bound") {
            v = mir.norm_bound;
        } else if (q == "recovery_dist") {
            v = recovery_distance(ensemble, p);
        } else if (q == "lambda_dev") {
            v = lambda_deviation(ensemble, p);
        } else if (q == "indist_gap") {
            const Operator sz = Operator::on_site(p.interval.lo, pauli::Z());
            v = local_indistinguishability_gap(ensemble.interaction(), p, sz, ensemble.beta());
        } else if (q == "cmi") {
            v = conditional_mutual_information(state, a, b, c);
        }
        out.emplace_back(q, v);
    }
    return out;
}

void record_monotonicity(const DecaySeries& s, std::vector<std::string>& findings) {
    for (std::size_t i = 1; i < s.samples.size(); ++i) {
        if (s.samples[i].second > s.samples[i - 1].second + 1e-12) {
            std::ostringstream os;
            os << s.quantity << " increases from l=" << s.samples[i - 1].first << " (" << s.samples[i - 1].second
               << ") to l=" << s.samples[i].first << " (" << s.samples[i].second << ")";
            findings.push_back(os.str());
        }
    }
}

}  // namespace

std::string to_string(ChainMode mode) { return mode == ChainMode::FixedChain ? "fixed_chain" : "grow_chain"; }

ChainMode parse_chain_mode(const std::string& text) {
    if (text == "fixed_chain") return ChainMode::FixedChain;
    if (text == "grow_chain") return ChainMode::GrowChain;
    throw ConfigInvalid("mode must be fixed_chain or grow_chain, got '" + text + "'");
}

const std::vector<std::string>& sweep_quantities() {
    static const std::vector<std::string> q{"corr",          "trace_dist_product", "mi",         "bs_mi",
                                            "grmi_q",        "mi_norm_bound",      "recovery_dist", "lambda_dev",
                                            "indist_gap",    "cmi"};
    return q;
}

void SweepConfig::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigInvalid("beta must be positive and finite");
    if (a_size < 1 || c_size < 1) throw ConfigInvalid("a_size and c_size must be at least 1");
    if (b_range.empty()) throw ConfigInvalid("b_range is empty");
    for (int b : b_range) {
        if (b < 0) throw ConfigInvalid("b_range entries must be nonnegative");
    }
    if (quantities.empty()) throw ConfigInvalid("no quantities requested");
    for (const auto& q : quantities) {
        if (!is_sweep_quantity(q) && q != kUniformCorr && q != kDpiGap) throw ConfigInvalid("unknown quantity '" + q + "'");
    }
    if (!(q > 1.0)) throw ConfigInvalid("q must exceed 1");
    if (corr.restarts < 1 || corr.max_iters < 1 || !(corr.tol > 0.0)) throw ConfigInvalid("invalid corr options");
    if (threads < 1) throw ConfigInvalid("threads must be at least 1");
    const int bmax = *std::max_element(b_range.begin(), b_range.end());
    if (a_size + bmax + c_size > chain_length) {
        throw ConfigInvalid("a_size + max(b_range) + c_size exceeds chain_length");
    }
    preset_model(model);
    hilbert_dim(2, static_cast<std::size_t>(chain_length));
}

FitResult fit_exponential(const std::vector<Sample>& samples, double floor) {
    std::vector<double> xs, ys;
    for (const auto& [l, v] : samples) {
        if (std::isfinite(v) && v >= floor) {
            xs.push_back(l);
            ys.push_back(std::log(v));
        }
    }
    if (xs.size() < 3) {
        throw TooFewSamples("need at least 3 samples above the floor, have " + std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    FitResult f;
    f.used = static_cast<int>(xs.size());
    f.rate = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.rate * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (f.intercept + f.rate * xs[i]);
            ss_res += r * r;
        }
        f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    } else {
        f.r_squared = 0.0;
    }
    return f;
}

int superexponential_run(const std::vector<Sample>& samples, double floor) {
    std::size_t start = 0;
    while (start < samples.size() && !(samples[start].second >= floor)) ++start;
    std::size_t end = start;
    while (end < samples.size() && std::isfinite(samples[end].second) && samples[end].second >= floor) ++end;
    if (end - start < 2) return static_cast<int>(end - start);

    auto decrement = [&](std::size_t i) {
        const double dl = samples[i + 1].first - samples[i].first;
        return (std::log(samples[i].second) - std::log(samples[i + 1].second)) / dl;
    };
    double prev = decrement(start);
    if (!(prev > 0.0)) return 1;
    int count = 2;
    for (std::size_t i = start + 1; i + 1 < end; ++i) {
        const double d = decrement(i);
        if (!(d > prev + 1e-9 * std::max(1.0, std::abs(prev)))) break;
        prev = d;
        ++count;
    }
    return count;
}

bool superexponential_flag(const std::vector<Sample>& samples, double floor) {
    return superexponential_run(samples, floor) >= 3;
}

DecaySeries make_series(std::string quantity, std::vector<Sample> samples) {
    DecaySeries s;
    s.quantity = std::move(quantity);
    std::sort(samples.begin(), samples.end(), [](const Sample& x, const Sample& y) { return x.first < y.first; });
    s.samples = std::move(samples);
    for (const auto& [l, v] : s.samples) {
        if (!(std::isfinite(v) && v >= kNumericalFloor)) ++s.floor_truncated;
    }
    if (static_cast<int>(s.samples.size()) - s.floor_truncated >= 3) s.fit = fit_exponential(s.samples);
    s.superexp_flag = superexponential_flag(s.samples);
    for (std::size_t i = 1; i < s.samples.size(); ++i) {
        if (s.samples[i].second > s.samples[i - 1].second + 1e-12) s.nonincreasing = false;
    }
    return s;
}

Partition sweep_partition(const SweepConfig& config, int b) {
    if (config.mode == ChainMode::GrowChain) {
        const int n = config.a_size + b + config.c_size;
        return Partition(Interval(1, n), config.a_size, b, config.c_size);
    }
    const int pad = config.chain_length - config.a_size - b - config.c_size;
    if (pad < 0) throw ConfigInvalid("shielding size does not fit in the chain");
    return Partition(Interval(1, config.chain_length), config.a_size + pad / 2, b, config.c_size + pad - pad / 2);
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    const Interaction interaction = preset_model(config.model);
    const std::vector<int> bs = sorted_unique(config.b_range);
    const int threads = effective_threads(config.threads);

    SweepResult result;
    bool any_sweep = false;
    for (const auto& q : config.quantities) any_sweep = any_sweep || is_sweep_quantity(q);

    if (any_sweep) {
        std::optional<GibbsEnsemble> fixed;
        if (config.mode == ChainMode::FixedChain) fixed.emplace(interaction, Interval(1, config.chain_length), config.beta);

        using PointList = std::vector<SweepPoint>;
        const std::function<PointList(std::size_t)> work = [&](std::size_t i) {
            const int b = bs[i];
            const Partition p = sweep_partition(config, b);
            const auto start = std::chrono::steady_clock::now();
            std::optional<GibbsEnsemble> grown;
            if (!fixed) grown.emplace(interaction, p.interval, config.beta);
            const GibbsEnsemble& ensemble = fixed ? *fixed : *grown;
            PointList pts;
            for (auto& [name, value] : evaluate_point(config, ensemble, p)) {
                pts.push_back({b, p.a_size, p.c_size, p.interval.size(), name, value, 0.0});
            }
            const double ms = elapsed_ms(start);
            for (auto& pt : pts) pt.runtime_ms = ms;
            return pts;
        };
        for (auto& pts : parallel_map<PointList>(bs.size(), threads, work)) {
            for (auto& pt : pts) result.points.push_back(std::move(pt));
        }
        for (const std::string& q : sweep_quantities()) {
            if (!wants(config, q)) continue;
            std::vector<Sample> samples;
            for (const auto& pt : result.points) {
                if (pt.quantity == q) samples.emplace_back(pt.b_size, pt.value);
            }
            result.series.push_back(make_series(q, std::move(samples)));
        }
    }
    if (wants(config, kUniformCorr)) result.series.push_back(uniform_clustering_scan(config, &result));
    if (wants(config, kDpiGap)) result.series.push_back(dpi_gap_scan(config, &result));
    for (const auto& s : result.series) record_monotonicity(s, result.findings);
    return result;
}

DecaySeries uniform_clustering_scan(const SweepConfig& config, SweepResult* detail) {
    config.validate();
    const Interaction interaction = preset_model(config.model);
    const int n = config.chain_length;
    const GibbsEnsemble ensemble(interaction, Interval(1, n), config.beta);
    const std::vector<int> ls = sorted_unique(config.b_range);
    CorrOptions opts = config.corr;
    opts.seed = config.seed;

    const std::function<SweepPoint(std::size_t)> work = [&](std::size_t i) {
        const int l = ls[i];
        const auto start = std::chrono::steady_clock::now();
        SweepPoint best{l, 0, 0, n, kUniformCorr, -1.0, 0.0};
        for (int a = 1; a + l + 1 <= n; ++a) {
            const Partition p(Interval(1, n), a, l, n - a - l);
            const double v = covariance_correlation(ensemble.state(), p.a(), p.c(), opts).value;
            if (v > best.value) {
                best.value = v;
                best.a_size = a;
                best.c_size = n - a - l;
            }
        }
        best.value = std::max(best.value, 0.0);
        best.runtime_ms = elapsed_ms(start);
        return best;
    };
    std::vector<Sample> samples;
    for (auto& pt : parallel_map<SweepPoint>(ls.size(), effective_threads(config.threads), work)) {
        samples.emplace_back(pt.b_size, pt.value);
        if (detail) detail->points.push_back(pt);
    }
    return make_series(kUniformCorr, std::move(samples));
}

DecaySeries dpi_gap_scan(const SweepConfig& config, SweepResult* detail) {
    config.validate();
    const Interaction interaction = preset_model(config.model);
    const std::vector<int> bs = sorted_unique(config.b_range);
    std::optional<GibbsEnsemble> fixed;
    if (config.mode == ChainMode::FixedChain) fixed.emplace(interaction, Interval(1, config.chain_length), config.beta);

    const std::function<SweepPoint(std::size_t)> work = [&](std::size_t i) {
        const int b = bs[i];
        const Partition p = sweep_partition(config, b);
        const auto start = std::chrono::steady_clock::now();
        std::optional<GibbsEnsemble> grown;
        if (!fixed) grown.emplace(interaction, p.interval, config.beta);
        const double v = bs_dpi_gap(fixed ? *fixed : *grown, p);
        return SweepPoint{b, p.a_size, p.c_size, p.interval.size(), kDpiGap, v, elapsed_ms(start)};
    };
    std::vector<Sample> samples;
    for (auto& pt : parallel_map<SweepPoint>(bs.size(), effective_threads(config.threads), work)) {
        samples.emplace_back(pt.b_size, pt.value);
        if (detail) detail->points.push_back(pt);
    }
    return make_series(kDpiGap, std::move(samples));
}

int effective_threads(int requested) {
    int cap = requested;
    if (const char* env = std::getenv("GIBBS_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) cap = std::min<long>(cap, v);
    }
    return std::max(1, cap);
}

}  // namespace gibbs
