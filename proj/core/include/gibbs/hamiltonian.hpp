#pragma once

#include "gibbs/operator.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gibbs {

struct InteractionTerm {
    Interval window;
    Operator term;  // supported on window
};

// Translation-invariant local term acting on `width` consecutive sites.
struct InteractionTemplate {
    int width = 1;
    Matrix matrix;
};

// Finite-range interaction on the chain. Terms are either site-shifts of a
// set of templates or produced by a custom generator keyed on the left end
// of the window.
class Interaction {
public:
    using Generator = std::function<std::vector<InteractionTerm>(Site window_lo)>;

    Interaction() = default;
    Interaction(std::string name, int local_dim, std::vector<InteractionTemplate> templates,
                std::uint64_t seed = 0);
    Interaction(std::string name, int local_dim, int range, double strength, Generator generator,
                std::uint64_t seed = 0);

    static Interaction zero(int local_dim = 2);

    const std::string& name() const { return name_; }
    int local_dim() const { return local_dim_; }
    // Window length in sites of the widest term.
    int range() const { return range_; }
    // Largest operator norm of a term.
    double strength() const { return strength_; }
    bool translation_invariant() const { return !generator_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<InteractionTemplate>& templates() const { return templates_; }

    // Terms whose window starts at `lo`.
    std::vector<InteractionTerm> terms_at(Site lo) const;
    // All terms whose window lies inside `interval`.
    std::vector<InteractionTerm> terms_in(const Interval& interval) const;

    // The interaction multiplied by `factor` (used to absorb beta).
    Interaction scaled(double factor) const;

private:
    std::string name_ = "zero";
    int local_dim_ = 2;
    int range_ = 1;
    double strength_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<InteractionTemplate> templates_;
    Generator generator_;
    double scale_ = 1.0;
};

// Preset name plus numeric parameters, e.g. "tfim:g=1" or "random_nn:seed=7".
struct ModelSpec {
    std::string name;
    std::map<std::string, double> params;

    static ModelSpec parse(const std::string& text);
    std::string to_string() const;
    double param(const std::string& key, double fallback) const;
};

struct PresetInfo {
    std::string name;
    std::string parameters;
    std::string description;
};

// Presets in a fixed order.
const std::vector<PresetInfo>& preset_catalog();

Interaction preset_model(const ModelSpec& spec);
Interaction preset_model(const std::string& text);

// H_I = sum of the terms with window inside I, embedded into I.
Operator build_hamiltonian(const Interaction& interaction, const Interval& interval);
Operator build_hamiltonian(const Interaction& interaction, const Sites& contiguous_sites);

// Gibbs state of H_I at inverse temperature beta with cached spectral data.
class GibbsEnsemble {
public:
    GibbsEnsemble(Interaction interaction, Interval interval, double beta = 1.0);

    const Interaction& interaction() const { return interaction_; }
    const Interval& interval() const { return interval_; }
    double beta() const { return beta_; }
    const Operator& hamiltonian() const { return hamiltonian_; }
    const SpectralDecomposition& spectral() const { return spectral_; }
    const Operator& state() const { return state_; }
    // ln Tr exp(-beta H_I)
    double log_partition_function() const { return log_z_; }

    Operator reduced_state(const Sites& region) const;

    // Gibbs state of the truncated Hamiltonian H_J for a sub-interval J, at the
    // same beta.
    GibbsEnsemble restricted(const Interval& sub) const;

private:
    Interaction interaction_;
    Interval interval_;
    double beta_;
    Operator hamiltonian_;
    SpectralDecomposition spectral_;
    Operator state_;
    double log_z_ = 0.0;
};

GibbsEnsemble gibbs_state(const Interaction& interaction, const Interval& interval, double beta = 1.0);
Operator reduced_state(const GibbsEnsemble& ensemble, const Sites& region);

// ln Tr exp(-beta H_I) straight from the spectrum; zero for an empty interval.
double log_partition_function(const Interaction& interaction, const Sites& contiguous_sites, double beta = 1.0);

}  // namespace gibbs
