#include "gibbs/hamiltonian.hpp"

#include "gibbs/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace gibbs {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double template_norm(const Matrix& m) { return linalg::operator_norm(m); }

Matrix normalized_random_hermitian(std::uint64_t seed, int width, std::uint64_t stream) {
    auto gen = make_stream(seed, {stream, static_cast<std::uint64_t>(width)});
    const Eigen::Index dim = hilbert_dim(2, static_cast<std::size_t>(width));
    Matrix h = random_hermitian(gen, dim);
    return h / template_norm(h);
}

void check_contiguous(const Sites& sites) {
    for (std::size_t i = 1; i < sites.size(); ++i) {
        if (sites[i] != sites[i - 1] + 1) throw InvalidArgument("site list must be a contiguous interval");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Interaction

Interaction::Interaction(std::string name, int local_dim, std::vector<InteractionTemplate> templates,
                         std::uint64_t seed)
    : name_(std::move(name)), local_dim_(local_dim), seed_(seed), templates_(std::move(templates)) {
    range_ = 1;
    strength_ = 0.0;
    for (auto& t : templates_) {
        if (t.width < 1) throw InvalidArgument("template width must be positive");
        const Eigen::Index dim = hilbert_dim(local_dim_, static_cast<std::size_t>(t.width));
        if (t.matrix.rows() != dim || t.matrix.cols() != dim) throw InvalidArgument("template has wrong dimension");
        if (linalg::hermitian_defect(t.matrix) > 1e-12 * std::max(1.0, t.matrix.norm())) {
            throw NotHermitian("interaction template of " + name_);
        }
        t.matrix = 0.5 * (t.matrix + t.matrix.adjoint()).eval();
        range_ = std::max(range_, t.width);
        strength_ = std::max(strength_, template_norm(t.matrix));
    }
}

Interaction::Interaction(std::string name, int local_dim, int range, double strength, Generator generator,
                         std::uint64_t seed)
    : name_(std::move(name)),
      local_dim_(local_dim),
      range_(range),
      strength_(strength),
      seed_(seed),
      generator_(std::move(generator)) {}

Interaction Interaction::zero(int local_dim) { return Interaction("zero", local_dim, {}); }

std::vector<InteractionTerm> Interaction::terms_at(Site lo) const {
    std::vector<InteractionTerm> out;
    if (generator_) {
        out = generator_(lo);
        for (auto& t : out) {
            if (t.window.lo != lo || t.window.size() > range_) {
                throw InvalidArgument("generator produced a term outside its declared window");
            }
            if (scale_ != 1.0) t.term *= scale_;
        }
        return out;
    }
    for (const auto& t : templates_) {
        Interval w(lo, lo + t.width - 1, local_dim_);
        out.push_back({w, Operator(w.sites(), scale_ * t.matrix, local_dim_)});
    }
    return out;
}

std::vector<InteractionTerm> Interaction::terms_in(const Interval& interval) const {
    std::vector<InteractionTerm> out;
    for (Site lo = interval.lo; lo <= interval.hi; ++lo) {
        for (auto& t : terms_at(lo)) {
            if (t.window.hi <= interval.hi) out.push_back(std::move(t));
        }
    }
    return out;
}

Interaction Interaction::scaled(double factor) const {
    Interaction out = *this;
    out.scale_ *= factor;
    out.strength_ *= std::abs(factor);
    for (auto& t : out.templates_) t.matrix *= factor;
    if (!out.generator_) out.scale_ = 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Presets

ModelSpec ModelSpec::parse(const std::string& text) {
    ModelSpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    spec.name = trim(spec.name);
    if (spec.name.empty()) throw UnknownModel("empty model name");
    if (colon == std::string::npos) return spec;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigInvalid("model parameter without '=': " + item);
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size() || !std::isfinite(v)) throw std::invalid_argument(val);
            spec.params[key] = v;
        } catch (const std::exception&) {
            throw ConfigInvalid("model parameter " + key + " is not a finite number: " + val);
        }
    }
    return spec;
}

std::string ModelSpec::to_string() const {
    std::ostringstream os;
    os << name;
    bool first = true;
    for (const auto& [k, v] : params) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        os << (first ? ':' : ';') << k << '=' << std::string(buf, res.ptr);
        first = false;
    }
    return os.str();
}

double ModelSpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

const std::vector<PresetInfo>& preset_catalog() {
    static const std::vector<PresetInfo> catalog = {
        {"zero", "", "no interaction; Gibbs states are maximally mixed"},
        {"ising_zz", "J=1", "classical Ising chain J sum Z_i Z_{i+1}"},
        {"tfim", "g=1 J=1", "transverse-field Ising chain J sum X_i X_{i+1} + g sum Z_i"},
        {"heisenberg", "Jx=1 Jy=1 Jz=1 h=0",
         "spin-1/2 XYZ chain sum (Jx Sx Sx + Jy Sy Sy + Jz Sz Sz) + h sum Sz, S = sigma/2"},
        {"random_nn", "seed=0", "random Hermitian nearest-neighbour term (Gaussian, unit operator norm)"},
        {"random_range_r", "seed=0 r=3", "random Hermitian term on r consecutive sites (unit operator norm)"},
        {"classical_nn", "seed=0", "random diagonal nearest-neighbour term (commuting, unit operator norm)"},
    };
    return catalog;
}

Interaction preset_model(const ModelSpec& spec) {
    using namespace pauli;
    const std::string& name = spec.name;
    auto known = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : spec.params) {
            bool ok = false;
            for (const char* key : keys) ok = ok || k == key;
            if (!ok) throw ConfigInvalid("model " + name + " has no parameter " + k);
        }
    };
    auto seed_param = [&]() {
        const double s = spec.param("seed", 0.0);
        if (s < 0 || s != std::floor(s)) throw ConfigInvalid("seed must be a nonnegative integer");
        return static_cast<std::uint64_t>(s);
    };

    if (name == "zero") {
        known({});
        return Interaction::zero();
    }
    if (name == "ising_zz") {
        known({"J"});
        const double j = spec.param("J", 1.0);
        return Interaction(spec.to_string(), 2, {{2, j * kron(Z(), Z())}});
    }
    if (name == "tfim") {
        known({"g", "J"});
        const double g = spec.param("g", 1.0);
        const double j = spec.param("J", 1.0);
        std::vector<InteractionTemplate> t{{2, j * kron(X(), X())}};
        if (g != 0.0) t.push_back({1, g * Z()});
        return Interaction(spec.to_string(), 2, std::move(t));
    }
    if (name == "heisenberg") {
        known({"Jx", "Jy", "Jz", "h"});
        const double jx = spec.param("Jx", 1.0);
        const double jy = spec.param("Jy", 1.0);
        const double jz = spec.param("Jz", 1.0);
        const double h = spec.param("h", 0.0);
        Matrix bond = 0.25 * (jx * kron(X(), X()) + jy * kron(Y(), Y()) + jz * kron(Z(), Z()));
        std::vector<InteractionTemplate> t{{2, bond}};
        if (h != 0.0) t.push_back({1, 0.5 * h * Z()});
        return Interaction(spec.to_string(), 2, std::move(t));
    }
    if (name == "random_nn") {
        known({"seed"});
        const auto seed = seed_param();
        return Interaction(spec.to_string(), 2, {{2, normalized_random_hermitian(seed, 2, 1)}}, seed);
    }
    if (name == "random_range_r") {
        known({"seed", "r"});
        const auto seed = seed_param();
        const double r = spec.param("r", 3.0);
        if (r < 1 || r > 8 || r != std::floor(r)) throw ConfigInvalid("random_range_r needs integer r in [1, 8]");
        const int width = static_cast<int>(r);
        return Interaction(spec.to_string(), 2, {{width, normalized_random_hermitian(seed, width, 2)}}, seed);
    }
    if (name == "classical_nn") {
        known({"seed"});
        const auto seed = seed_param();
        auto gen = make_stream(seed, {3});
        std::normal_distribution<double> normal;
        Matrix d = Matrix::Zero(4, 4);
        for (int i = 0; i < 4; ++i) d(i, i) = normal(gen);
        d /= d.cwiseAbs().maxCoeff();
        return Interaction(spec.to_string(), 2, {{2, d}}, seed);
    }
    throw UnknownModel("no preset named '" + name + "'");
}

Interaction preset_model(const std::string& text) { return preset_model(ModelSpec::parse(text)); }

// ---------------------------------------------------------------------------
// Hamiltonians

Operator build_hamiltonian(const Interaction& interaction, const Interval& interval) {
    const int d = interaction.local_dim();
    if (interval.local_dim != d) throw SupportMismatch("interval and interaction have different local dimension");
    const Sites sites = interval.sites();
    const Eigen::Index dim = interval.dim();
    const auto terms = interaction.terms_in(interval);

    bool real = true;
    for (const auto& t : terms) real = real && linalg::is_real(t.term.matrix());

    auto accumulate = [&](auto& h, auto extract) {
        for (const auto& t : terms) {
            const auto own = digit_offsets(sites, t.term.support(), d);
            const auto rest = digit_offsets(sites, sites_difference(sites, t.term.support()), d);
            const auto m = extract(t.term.matrix());
            const auto n = static_cast<Eigen::Index>(own.size());
            for (Eigen::Index r : rest) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    for (Eigen::Index i = 0; i < n; ++i) h(own[i] + r, own[j] + r) += m(i, j);
                }
            }
        }
    };
    if (real) {
        linalg::RMat h = linalg::RMat::Zero(dim, dim);
        accumulate(h, [](const Matrix& m) { return linalg::RMat(m.real()); });
        return Operator(sites, h.cast<cplx>(), d);
    }
    Matrix h = Matrix::Zero(dim, dim);
    accumulate(h, [](const Matrix& m) { return m; });
    return Operator(sites, std::move(h), d);
}

Operator build_hamiltonian(const Interaction& interaction, const Sites& contiguous_sites) {
    if (contiguous_sites.empty()) return Operator::scalar(0.0, interaction.local_dim());
    check_contiguous(contiguous_sites);
    return build_hamiltonian(interaction,
                             Interval(contiguous_sites.front(), contiguous_sites.back(), interaction.local_dim()));
}

GibbsEnsemble::GibbsEnsemble(Interaction interaction, Interval interval, double beta)
    : interaction_(std::move(interaction)), interval_(interval), beta_(beta) {
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw InvalidArgument("beta must be positive and finite");
    hamiltonian_ = build_hamiltonian(interaction_, interval_);
    spectral_ = spectral_decomposition(hamiltonian_);
    const Eigen::VectorXd& w = spectral_.system.values;
    const double lo = w(0);
    Eigen::VectorXd p(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) p(i) = std::exp(-beta_ * (w(i) - lo));
    const double z = p.sum();
    p /= z;
    log_z_ = -beta_ * lo + std::log(z);
    state_ = Operator(hamiltonian_.support(), linalg::reconstruct(spectral_.system, p), interaction_.local_dim());
}

Operator GibbsEnsemble::reduced_state(const Sites& region) const {
    if (!sites_subset(region, state_.support())) throw SiteNotInSupport("region is not inside the ensemble interval");
    return reduce_to(state_, region);
}

GibbsEnsemble GibbsEnsemble::restricted(const Interval& sub) const {
    if (sub.lo < interval_.lo || sub.hi > interval_.hi) throw SiteNotInSupport("sub-interval outside the ensemble");
    return GibbsEnsemble(interaction_, sub, beta_);
}

GibbsEnsemble gibbs_state(const Interaction& interaction, const Interval& interval, double beta) {
    return GibbsEnsemble(interaction, interval, beta);
}

Operator reduced_state(const GibbsEnsemble& ensemble, const Sites& region) { return ensemble.reduced_state(region); }

double log_partition_function(const Interaction& interaction, const Sites& contiguous_sites, double beta) {
    if (contiguous_sites.empty()) return 0.0;
    const Operator h = build_hamiltonian(interaction, contiguous_sites);
    const Eigen::VectorXd w = linalg::hermitian_eigenvalues(h.matrix());
    const double lo = w(0);
    double z = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) z += std::exp(-beta * (w(i) - lo));
    return -beta * lo + std::log(z);
}

}  // namespace gibbs
