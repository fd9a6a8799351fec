#include "gibbs/cli/verify.hpp"

#include "gibbs/cli/csv.hpp"
#include "gibbs/gibbs.hpp"
#include "gibbs/rng.hpp"

#include <chrono>
#include <cstring>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace gibbs::cli {

VerifyLevel parse_verify_level(const std::string& text) {
    if (text == "fast") return VerifyLevel::Fast;
    if (text == "full") return VerifyLevel::Full;
    throw ConfigInvalid("verify level must be 'fast' or 'full', got '" + text + "'");
}

bool VerifyReport::passed() const { return first_failure() == nullptr; }

const InvariantOutcome* VerifyReport::first_failure() const {
    for (const auto& o : outcomes) {
        if (!o.passed) return &o;
    }
    return nullptr;
}

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << what;
        }
    }
};

struct Context {
    VerifyLevel level;
    const VerifyHooks& hooks;

    bool full() const { return level == VerifyLevel::Full; }
    int max_n() const { return full() ? 10 : 6; }

    double bs(const Operator& rho, const Operator& sigma) const {
        return hooks.bs_entropy ? hooks.bs_entropy(rho, sigma) : bs_entropy(rho, sigma);
    }
};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(3) << v;
    return s.str();
}

Operator random_state(std::uint64_t seed, const Sites& support) {
    auto gen = make_stream(seed, {0x7e57});
    return Operator(support, random_density(gen, hilbert_dim(2, support.size())));
}

void partial_trace_consistency(const Context&, Check& c) {
    const Sites all = sites_range(1, 4);
    const Operator rho = random_state(11, all);
    const Operator a = partial_trace(partial_trace(rho, {2}), {4});
    const Operator b = partial_trace(rho, {2, 4});
    c.require((a.matrix() - b.matrix()).norm() <= 1e-12, "iterated partial traces disagree");
    c.require(std::abs(b.trace() - 1.0) <= 1e-12, "partial trace does not preserve the trace");
    const Operator one = conditional_expectation(Operator::identity(all), {1, 3});
    c.require((one.matrix() - Matrix::Identity(4, 4)).norm() <= 1e-12, "conditional expectation is not unital");
    auto gen = make_stream(12, {1});
    const Operator x({1, 2}, random_hermitian(gen, 4));
    const Operator y({3}, random_hermitian(gen, 2));
    const cplx lhs = tensor(x, y).trace();
    c.require(std::abs(lhs - x.trace() * y.trace()) <= 1e-12, "trace is not multiplicative on tensor products");
    c.detail << "4-site random density";
}

void gibbs_normalized(const Context& ctx, Check& c) {
    int count = 0;
    for (const char* model : {"tfim:g=1", "heisenberg", "random_nn:seed=4", "random_range_r:seed=9;r=3"}) {
        for (int n = 2; n <= std::min(ctx.max_n(), 8); n += 2) {
            const GibbsEnsemble e(preset_model(model), Interval(1, n), 0.7);
            const Matrix& rho = e.state().matrix();
            c.require(std::abs(rho.trace() - 1.0) <= 1e-12, std::string(model) + ": trace != 1");
            c.require(linalg::hermitian_defect(rho) <= 1e-14, std::string(model) + ": state not Hermitian");
            const Eigen::VectorXd w = Eigen::SelfAdjointEigenSolver<Matrix>(rho).eigenvalues();
            c.require(w.minCoeff() >= -1e-14, std::string(model) + ": state not positive");
            // Independent partition function from Eigen's own solver.
            const Eigen::VectorXd h = Eigen::SelfAdjointEigenSolver<Matrix>(e.hamiltonian().matrix()).eigenvalues();
            const double shift = h.minCoeff();
            const double log_z = -0.7 * shift + std::log((-0.7 * (h.array() - shift)).exp().sum());
            c.require(std::abs(log_z - e.log_partition_function()) <= 1e-10 * std::max(1.0, std::abs(log_z)),
                      std::string(model) + ": log Z mismatch");
            ++count;
        }
    }
    c.detail << count << " ensembles";
}

// 1/2 Corr^2 <= 1/2 ||rho_AC - rho_A rho_C||_1^2 <= I <= BS <= GR_2 <= norm bound
void chain_ordering(const Context& ctx, Check& c) {
    const int instances = ctx.full() ? 120 : 40;
    const char* models[] = {"random_nn", "tfim", "heisenberg", "random_range_r"};
    int done = 0;
    for (int i = 0; i < instances; ++i) {
        const std::string base = models[i % 4];
        std::string spec = base;
        if (base == "random_nn") spec += ":seed=" + std::to_string(100 + i);
        if (base == "random_range_r") spec += ":seed=" + std::to_string(200 + i) + ";r=2";
        if (base == "tfim") spec += ":g=" + std::to_string(0.5 + 0.1 * (i % 15));
        const int n = 3 + i % (ctx.max_n() - 2);
        const double beta = 0.3 + 0.25 * (i % 5);
        const GibbsEnsemble e(preset_model(spec), Interval(1, n), beta);
        const int a = 1 + i % 2;
        const int cs = 1 + (i / 2) % 2;
        if (a + cs > n) continue;
        const Sites sa = sites_range(1, a), sc = sites_range(n - cs + 1, n);
        const Operator rac = e.reduced_state(sites_union(sa, sc));
        const Operator prod = tensor(e.reduced_state(sa), e.reduced_state(sc));
        const CorrResult corr = covariance_correlation(e.state(), sa, sc, {4, 100, 1e-10, static_cast<std::uint64_t>(i)});
        const double t = trace_norm(rac - prod);
        const double values[] = {0.5 * corr.value * corr.value, 0.5 * t * t, umegaki(rac, prod), ctx.bs(rac, prod),
                                 geometric_renyi(rac, prod, 2.0), upper_bound_norm(rac, prod)};
        const char* names[] = {"Corr^2/2", "T^2/2", "I", "BS-I", "GR2-I", "norm bound"};
        for (int k = 0; k + 1 < 6; ++k) {
            if (!(values[k] <= values[k + 1] + 1e-9)) {
                c.require(false, spec + " n=" + std::to_string(n) + ": " + names[k] + " = " + fmt(values[k]) + " > " +
                                     names[k + 1] + " = " + fmt(values[k + 1]));
            }
        }
        ++done;
    }
    c.detail << done << " Gibbs states";
}

void bs_equality(const Context& ctx, Check& c) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        auto gen = make_stream(31, {static_cast<std::uint64_t>(i)});
        std::uniform_real_distribution<double> u(0.05, 1.0);
        const int dim = 2 << (i % 3);
        Eigen::VectorXd p(dim), q(dim);
        for (int k = 0; k < dim; ++k) {
            p(k) = u(gen);
            q(k) = u(gen);
        }
        p /= p.sum();
        q /= q.sum();
        // Common random eigenbasis: the pair commutes without being diagonal.
        const Matrix v = random_unitary(gen, dim);
        const Sites sup = sites_range(1, static_cast<Site>(std::log2(dim)));
        const Operator rho(sup, v * p.cast<cplx>().asDiagonal() * v.adjoint());
        const Operator sigma(sup, v * q.cast<cplx>().asDiagonal() * v.adjoint());
        worst = std::max(worst, std::abs(ctx.bs(rho, sigma) - umegaki(rho, sigma)));
    }
    c.require(worst <= 1e-10, "commuting pair: |BS - Umegaki| = " + fmt(worst));
    Matrix r(2, 2), s(2, 2);
    r << 0.75, 0.0, 0.0, 0.25;
    s << 0.5, 0.25, 0.25, 0.5;
    const Operator rho({1}, r), sigma({1}, s);
    const double gap = ctx.bs(rho, sigma) - umegaki(rho, sigma);
    c.require(gap >= 1e-6, "non-commuting qubit pair: BS - Umegaki = " + fmt(gap));
    c.detail << "max commuting defect " << fmt(worst) << ", non-commuting gap " << fmt(gap);
}

void step1_identity(const Context& ctx, Check& c) {
    double worst = 0.0;
    int count = 0;
    for (const char* model : {"tfim:g=1", "heisenberg", "random_nn:seed=2"}) {
        for (int n = 4; n <= std::min(ctx.max_n(), 8); ++n) {
            const GibbsEnsemble e(preset_model(model), Interval(1, n), 1.0);
            const int a = 1 + count % 2, cs = 1 + (count / 2) % 2;
            const Partition p(e.interval(), a, n - a - cs, cs);
            worst = std::max(worst, step1_factorization(e, p).residual);
            ++count;
        }
    }
    c.require(worst <= 1e-9, "relative residual " + fmt(worst));
    c.detail << count << " instances, worst residual " << fmt(worst);
}

void lambda_routes(const Context& ctx, Check& c) {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const std::string spec = "random_nn:seed=" + std::to_string(40 + i);
        const int n = std::min(ctx.max_n(), 4 + i % 3);
        const GibbsEnsemble e(preset_model(spec), Interval(1, n), 0.8);
        const Partition p(e.interval(), 1, n - 2, 1);
        const double ratio = lambda_partition_ratio(e, p);
        worst = std::max(worst, std::abs(lambda_trace_expression(e, p) - ratio) / std::max(1.0, std::abs(ratio)));
    }
    c.require(worst <= 1e-8, "trace expression vs partition ratio: " + fmt(worst));
    c.detail << "worst relative gap " << fmt(worst);
}

void classical_recovery(const Context& ctx, Check& c) {
    double worst = 0.0;
    for (int seed = 1; seed <= 3; ++seed) {
        const int n = std::min(ctx.max_n(), 6);
        const GibbsEnsemble e(preset_model("classical_nn:seed=" + std::to_string(seed)), Interval(1, n), 1.0);
        worst = std::max(worst, recovery_distance(e, Partition(e.interval(), 2, 2, n - 4)));
    }
    c.require(worst <= 1e-10, "classical chain recovery distance " + fmt(worst));
    c.detail << "max " << fmt(worst);
}

void schmidt_reconstruction(const Context&, Check& c) {
    double worst_rec = 0.0, worst_norm = 0.0;
    for (int i = 0; i < 10; ++i) {
        auto gen = make_stream(77, {static_cast<std::uint64_t>(i)});
        const Sites sup = sites_range(1, 2 + i % 3);
        const Operator q(sup, gaussian_matrix(gen, hilbert_dim(2, sup.size()), hilbert_dim(2, sup.size())));
        const SchmidtDecomposition sd = operator_schmidt(q, 2);
        worst_rec = std::max(worst_rec, (sd.reconstruct().matrix() - q.matrix()).norm() / q.matrix().norm());
        double sum = 0.0;
        for (double l : sd.coefficients) sum += l;
        worst_norm = std::max(worst_norm, std::abs(sum - q.matrix().squaredNorm()) / q.matrix().squaredNorm());
    }
    c.require(worst_rec <= 1e-10, "reconstruction error " + fmt(worst_rec));
    c.require(worst_norm <= 1e-10, "sum of coefficients vs HS norm " + fmt(worst_norm));
    c.detail << "10 random operators";
}

void expansional_inverse(const Context&, Check& c) {
    const Interaction tfim = preset_model("tfim:g=1");
    const Interval x(-1, 0), y(1, 2);
    for (cplx s : default_s_grid()) {
        const Expansional e = expansional(tfim, x, y, s);
        const Matrix prod = compose(e.value, e.inverse).matrix();
        c.require((prod - Matrix::Identity(prod.rows(), prod.cols())).norm() <= 1e-10,
                  "E(s) E(s)^{-1} != 1 at s = " + fmt(s.real()) + "+" + fmt(s.imag()) + "i");
    }
    const Expansional zero = expansional(tfim, x, y, 0.0);
    c.require((zero.value.matrix() - Matrix::Identity(16, 16)).norm() <= 1e-14, "E(0) != 1");
    c.detail << default_s_grid().size() << " values of s";
}

void zero_interaction(const Context&, Check& c) {
    const Interaction zero = preset_model("zero");
    const Operator q = Operator::on_site(1, pauli::Z());
    const double gap = local_indistinguishability_gap(zero, Partition(Interval(1, 5), 1, 2, 2), q, 1.0);
    c.require(gap <= 1e-10, "indistinguishability gap " + fmt(gap));
    const GibbsEnsemble e(zero, Interval(1, 5), 1.0);
    const double mi = mutual_information(e, {1}, {5});
    c.require(std::abs(mi) <= 1e-12, "mutual information " + fmt(mi));
    c.detail << "gap " << fmt(gap);
}

void dpi_nonnegative(const Context& ctx, Check& c) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const int n = std::min(ctx.max_n(), 4 + i % 3);
        const GibbsEnsemble e(preset_model("random_nn:seed=" + std::to_string(60 + i)), Interval(1, n), 1.0);
        worst = std::min(worst, bs_dpi_gap(e, Partition(e.interval(), 1, n - 2, 1)));
    }
    c.require(worst >= -1e-9, "data-processing gap " + fmt(worst));
    c.detail << "min gap " << fmt(worst);
}

void fit_synthetic(const Context&, Check& c) {
    std::vector<Sample> s;
    for (int l = 1; l <= 8; ++l) s.emplace_back(l, std::exp(-2.0 * l));
    const FitResult f = fit_exponential(s);
    c.require(std::abs(f.rate + 2.0) <= 1e-9 && std::abs(f.r_squared - 1.0) <= 1e-12, "exact exponential not recovered");
    std::vector<Sample> fact;
    double v = 1.0;
    for (int l = 1; l <= 10; ++l) fact.emplace_back(l, v /= l);
    c.require(superexponential_flag(fact), "factorial series not flagged superexponential");
    c.require(!superexponential_flag(s), "pure exponential flagged superexponential");
    c.detail << "rate " << fmt(f.rate);
}

void sweep_determinism(const Context& ctx, Check& c) {
    SweepConfig cfg;
    cfg.model = ModelSpec::parse("random_nn:seed=5");
    cfg.chain_length = ctx.full() ? 8 : 6;
    cfg.b_range = {1, 2, 3};
    cfg.quantities = {"mi", "corr", "recovery_dist"};
    cfg.seed = 3;
    const SweepResult a = run_sweep(cfg), b = run_sweep(cfg);
    c.require(a.points.size() == b.points.size(), "point counts differ");
    for (std::size_t i = 0; i < a.points.size() && i < b.points.size(); ++i) {
        c.require(std::memcmp(&a.points[i].value, &b.points[i].value, sizeof(double)) == 0,
                  "value differs at point " + std::to_string(i));
    }
    c.detail << a.points.size() << " points";
}

void csv_roundtrip(const Context&, Check& c) {
    auto gen = make_stream(5, {9});
    std::uniform_real_distribution<double> u(-30, 5);
    std::vector<ResultRow> rows;
    for (int i = 0; i < 200; ++i) {
        const double v = std::pow(10.0, u(gen)) * (i % 7 == 0 ? -1.0 : 1.0);
        rows.push_back(make_row("random_range_r:r=2;seed=1", 0.1 * i, 8, 1, i % 5, 2, "mi", v, 42, i));
    }
    rows.push_back(make_row("zero", 1.0, 4, 1, 1, 1, "corr", 0.0, 0, 0));
    const auto back = parse_results(format_results(rows));
    c.require(back == rows, "CSV round trip altered a row");
    c.detail << rows.size() << " rows";
}

void tfim_decay(const Context& ctx, Check& c) {
    SweepConfig cfg;
    cfg.chain_length = ctx.full() ? 10 : 6;
    cfg.b_range.clear();
    for (int b = 1; b <= cfg.chain_length - 2; ++b) cfg.b_range.push_back(b);
    cfg.quantities = {"mi"};
    const SweepResult r = run_sweep(cfg);
    const DecaySeries& s = r.series.front();
    c.require(s.fit.has_value() && s.fit->rate < 0.0, "mutual information does not decay");
    c.require(s.nonincreasing, "mutual information not monotone in |B|");
    if (s.fit) c.detail << "rate " << fmt(s.fit->rate) << ", r^2 " << fmt(s.fit->r_squared);
}

using Invariant = void (*)(const Context&, Check&);

}  // namespace

VerifyReport run_verify(VerifyLevel level, const VerifyHooks& hooks, std::ostream* log) {
    const std::pair<const char*, Invariant> suite[] = {
        {"operator.partial_trace_consistency", partial_trace_consistency},
        {"hamiltonian.gibbs_normalized", gibbs_normalized},
        {"divergences.chain_ordering", chain_ordering},
        {"divergences.bs_equality_condition", bs_equality},
        {"recovery.step1_identity", step1_identity},
        {"recovery.lambda_routes_agree", lambda_routes},
        {"recovery.classical_exact_recovery", classical_recovery},
        {"recovery.schmidt_reconstruction", schmidt_reconstruction},
        {"araki.expansional_inverse", expansional_inverse},
        {"recovery.zero_interaction", zero_interaction},
        {"recovery.dpi_gap_nonnegative", dpi_nonnegative},
        {"experiments.fit_synthetic", fit_synthetic},
        {"experiments.sweep_deterministic", sweep_determinism},
        {"cli.csv_roundtrip", csv_roundtrip},
        {"experiments.tfim_mi_decay", tfim_decay},
    };
    const Context ctx{level, hooks};
    VerifyReport report;
    for (const auto& [name, fn] : suite) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            fn(ctx, check);
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail.str(std::string("exception: ") + e.what());
        }
        InvariantOutcome o{name, check.ok, check.detail.str(),
                           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
        if (log) {
            *log << (o.passed ? "PASS " : "FAIL ") << o.name << "  (" << o.detail << ")  [" << std::fixed
                 << std::setprecision(2) << o.seconds << " s]" << std::defaultfloat << std::endl;
        }
        report.outcomes.push_back(std::move(o));
    }
    return report;
}

}  // namespace gibbs::cli
