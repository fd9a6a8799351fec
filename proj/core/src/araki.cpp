#include "gibbs/araki.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace gibbs {

namespace {

void require_adjacent(const Interval& x, const Interval& y) {
    if (x.hi + 1 != y.lo) throw InvalidArgument("expansional blocks must be adjacent with X left of Y");
    if (x.local_dim != y.local_dim) throw SupportMismatch("blocks have different local dimensions");
}

// Exponentials e^{s H} for the Hamiltonians of the pieces of one split.
struct SplitSpectra {
    SpectralDecomposition xy, x, y;
};

SplitSpectra split_spectra(const Interaction& interaction, const Interval& x, const Interval& y) {
    const Interval xy(x.lo, y.hi, x.local_dim);
    return {spectral_decomposition(build_hamiltonian(interaction, xy)),
            spectral_decomposition(build_hamiltonian(interaction, x)),
            spectral_decomposition(build_hamiltonian(interaction, y))};
}

Operator cexp(const SpectralDecomposition& sd, cplx s) { return apply_function(sd, ScalarFunction::complex_exp(s)); }

Operator expansional_value(const SplitSpectra& sp, cplx s) {
    return compose(compose(cexp(sp.xy, -s), cexp(sp.x, s)), cexp(sp.y, s));
}

Operator expansional_inverse(const SplitSpectra& sp, cplx s) {
    return compose(cexp(sp.x, -s), compose(cexp(sp.y, -s), cexp(sp.xy, s)));
}

}  // namespace

Operator complex_time_evolution(const Operator& h, const Operator& q, cplx s) {
    if (std::abs(s) > 1.0) {
        std::clog << "warning: complex_time_evolution called with |s| = " << std::abs(s)
                  << " > 1; locality bounds are only established for |s| <= 1\n";
    }
    if (s == cplx(0.0, 0.0)) return q;
    const SpectralDecomposition sd = spectral_decomposition(h);
    const cplx is = cplx(0.0, 1.0) * s;
    const Operator forward = apply_function(sd, ScalarFunction::complex_exp(is));
    const Operator backward = apply_function(sd, ScalarFunction::complex_exp(-is));
    const Operator qe = embed(q, h.support());
    return compose(compose(forward, qe), backward);
}

Expansional expansional(const Interaction& interaction, const Interval& x_block, const Interval& y_block, cplx s) {
    require_adjacent(x_block, y_block);
    Expansional e{x_block, y_block, s, Operator(), Operator()};
    const Sites xy = sites_range(x_block.lo, y_block.hi);
    if (s == cplx(0.0, 0.0)) {
        e.value = Operator::identity(xy, x_block.local_dim);
        e.inverse = e.value;
        return e;
    }
    const SplitSpectra sp = split_spectra(interaction, x_block, y_block);
    e.value = expansional_value(sp, s);
    e.inverse = expansional_inverse(sp, s);
    return e;
}

Operator theta(const Interaction& interaction, const Interval& x_block, const Interval& y_block) {
    return expansional(interaction, x_block, y_block, -0.5).value;
}

Operator xi(const Interaction& interaction, const Interval& x_block, const Interval& y_block) {
    return theta(interaction, x_block, y_block).adjoint();
}

const std::vector<cplx>& default_s_grid() {
    static const std::vector<cplx> grid{
        {1.0, 0.0}, {0.0, 1.0}, {-0.5, 0.0}, {0.5 / std::sqrt(2.0), 0.5 / std::sqrt(2.0)}};
    return grid;
}

ExpansionalBoundReport expansional_bound_report(const Interaction& interaction, int max_n,
                                                const std::vector<cplx>& s_grid) {
    if (max_n < 1) throw InvalidArgument("max_n must be at least 1");
    const int d = interaction.local_dim();
    hilbert_dim(d, static_cast<std::size_t>(2 * (max_n + 1)));

    ExpansionalBoundReport report;
    report.note =
        "empirical_bound is the largest observed ||E_n(s)|| or ||E_n(s)^{-1}||; it stands in for the "
        "existence-only constant and is not a certified bound";

    std::vector<std::vector<ExpansionalRow>> per_s(s_grid.size());
    // One spectral decomposition per n, shared by every s; E_n is kept only
    // until E_{n+1} is available.
    std::vector<Operator> previous(s_grid.size());
    for (int n = 1; n <= max_n + 1; ++n) {
        const Interval x(1 - n, 0, d), y(1, n, d);
        const SplitSpectra sp = split_spectra(interaction, x, y);
        for (std::size_t k = 0; k < s_grid.size(); ++k) {
            const cplx s = s_grid[k];
            Operator value = expansional_value(sp, s);
            if (n > 1) {
                const Operator diff = embed(previous[k], value.support()) - value;
                per_s[k].back().difference = operator_norm(diff);
            }
            if (n <= max_n) {
                ExpansionalRow row;
                row.n = n;
                row.s = s;
                row.norm = operator_norm(value);
                row.inverse_norm = operator_norm(expansional_inverse(sp, s));
                report.empirical_bound = std::max({report.empirical_bound, row.norm, row.inverse_norm});
                per_s[k].push_back(row);
            }
            previous[k] = std::move(value);
        }
    }
    for (auto& rows : per_s) {
        for (auto& r : rows) report.rows.push_back(r);
    }
    return report;
}

TailDecomposition tail_decomposition(const Interaction& interaction, const Interval& x_block,
                                     const Interval& y_block, cplx s) {
    require_adjacent(x_block, y_block);
    const int d = x_block.local_dim;
    const Sites xy = sites_range(x_block.lo, y_block.hi);
    const int steps = std::max(x_block.size(), y_block.size());

    TailDecomposition out;
    std::vector<Operator> partial_exps;
    Operator previous;
    bool have_previous = false;
    for (int n = 1; n <= steps; ++n) {
        const Interval xn(std::max(x_block.lo, x_block.hi - n + 1), x_block.hi, d);
        const Interval yn(y_block.lo, std::min(y_block.hi, y_block.lo + n - 1), d);
        Operator e = embed(expansional(interaction, xn, yn, s).value, xy);
        Operator term = have_previous ? e - previous : e;
        out.term_norms.push_back(operator_norm(term));
        out.terms.push_back(std::move(term));
        previous = std::move(e);
        have_previous = true;
    }
    const Operator& full = previous;  // X_N = X, Y_N = Y
    Operator running = Operator::zero(xy, d);
    for (const Operator& t : out.terms) {
        running += t;
        out.partial_sum_errors.push_back(operator_norm(running - full));
    }
    return out;
}

double local_distance_upper(const Operator& q, const Interval& region) {
    const Sites kept = sites_intersection(q.support(), region.sites());
    if (kept.empty()) throw InvalidArgument("region does not intersect the operator support");
    const Operator local = embed(conditional_expectation(q, kept), q.support());
    return operator_norm(q - local);
}

}  // namespace gibbs
