#include "gibbs/recovery.hpp"

#include "gibbs/araki.hpp"
#include "gibbs/divergences.hpp"
#include "gibbs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gibbs {

Partition::Partition(Interval iv, int a, int b, int c) : interval(iv), a_size(a), b_size(b), c_size(c) {
    if (a < 0 || b < 0 || c < 0) throw InvalidArgument("partition block sizes must be nonnegative");
    if (a + b + c != iv.size()) throw InvalidArgument("partition blocks must cover the interval exactly");
}

namespace {

Interval interval_of(const Sites& s, int d) { return Interval(s.front(), s.back(), d); }

// Local Gibbs state of the sub-Hamiltonian on `s` (scalar 1 when empty).
Operator local_gibbs(const Interaction& interaction, const Sites& s, double beta) {
    if (s.empty()) return Operator::scalar(1.0, interaction.local_dim());
    return GibbsEnsemble(interaction, interval_of(s, interaction.local_dim()), beta).state();
}

struct DaggerPair {
    Operator dagger;          // E_{X,Y}^dagger
    Operator dagger_inverse;  // (E_{X,Y}^dagger)^{-1}
};

// E_{X,Y} with beta absorbed; identity when either block is empty.
DaggerPair expansional_dagger(const Interaction& scaled, const Sites& x, const Sites& y) {
    const int d = scaled.local_dim();
    if (x.empty() || y.empty()) {
        Operator id = Operator::identity(sites_union(x, y), d);
        return {id, id};
    }
    const Expansional e = expansional(scaled, interval_of(x, d), interval_of(y, d), 1.0);
    return {e.value.adjoint(), e.inverse.adjoint()};
}

Operator positive_inverse(const Operator& op) {
    if (op.support().empty()) return Operator::scalar(1.0 / op.matrix()(0, 0), op.local_dim());
    return matrix_function(op, ScalarFunction::inv());
}

void require_outer_blocks(const Partition& p) {
    if (p.a_size < 1 || p.c_size < 1) throw InvalidArgument("blocks A and C must be nonempty");
}

void require_matching(const GibbsEnsemble& e, const Partition& p) {
    if (e.interval().lo != p.interval.lo || e.interval().hi != p.interval.hi) {
        throw SupportMismatch("partition interval differs from the ensemble interval");
    }
}

// Tr_T[(1_K (x) o) delta] for o supported on T = support \ K.
Matrix partial_contract(const Operator& delta, const Sites& kept, const Operator& o) {
    const int d = delta.local_dim();
    const auto ok = digit_offsets(delta.support(), kept, d);
    const auto ot = digit_offsets(delta.support(), o.support(), d);
    const Eigen::Index dk = static_cast<Eigen::Index>(ok.size());
    const Eigen::Index dt = static_cast<Eigen::Index>(ot.size());
    const Matrix& m = delta.matrix();
    const Matrix& om = o.matrix();
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index t = 0; t < dt; ++t) {
        for (Eigen::Index t2 = 0; t2 < dt; ++t2) {
            const cplx w = om(t, t2);
            if (w == cplx(0.0, 0.0)) continue;
            for (Eigen::Index k2 = 0; k2 < dk; ++k2) {
                const Eigen::Index col = ok[k2] + ot[t];
                for (Eigen::Index k = 0; k < dk; ++k) out(k, k2) += w * m(ok[k] + ot[t2], col);
            }
        }
    }
    return out;
}

// Hermitian sign of m (zero eigenvalues mapped to +1) and Tr(sign(m) m).
std::pair<Matrix, double> hermitian_sign(const Matrix& m) {
    const linalg::Eigensystem es = linalg::hermitian_eigen(m);
    Eigen::VectorXd sgn(es.dim());
    double value = 0.0;
    for (Eigen::Index i = 0; i < es.dim(); ++i) {
        sgn(i) = es.values(i) < 0.0 ? -1.0 : 1.0;
        value += std::abs(es.values(i));
    }
    return {linalg::reconstruct(es, sgn), value};
}

}  // namespace

Operator bs_recovery_product(const GibbsEnsemble& ensemble, const Partition& partition) {
    require_matching(ensemble, partition);
    const Operator rab = ensemble.reduced_state(partition.ab());
    const Operator rb_inv = positive_inverse(ensemble.reduced_state(partition.b()));
    const Operator rbc = ensemble.reduced_state(partition.bc());
    return embed(compose(compose(rab, rb_inv), rbc), partition.abc());
}

double recovery_distance(const GibbsEnsemble& ensemble, const Partition& partition) {
    Operator diff = bs_recovery_product(ensemble, partition);
    diff.matrix() = ensemble.state().matrix() - diff.matrix();
    return trace_norm(diff);
}

Step1Result step1_factorization(const GibbsEnsemble& ensemble, const Partition& p) {
    require_matching(ensemble, p);
    require_outer_blocks(p);
    const double beta = ensemble.beta();
    const Interaction& inter = ensemble.interaction();
    const Interaction scaled = inter.scaled(beta);
    const Sites a = p.a(), b = p.b(), c = p.c(), ab = p.ab(), bc = p.bc(), ac = p.ac();

    Step1Result r;
    const Operator ra_inv = positive_inverse(ensemble.reduced_state(a));
    const Operator rc_inv = positive_inverse(ensemble.reduced_state(c));
    r.lhs = compose(ra_inv, compose(rc_inv, ensemble.reduced_state(ac)));

    const Operator g_bc = local_gibbs(inter, bc, beta);
    const Operator g_ab = local_gibbs(inter, ab, beta);
    const Operator g_b = local_gibbs(inter, b, beta);

    const DaggerPair e_a_bc = expansional_dagger(scaled, a, bc);
    const DaggerPair e_ab_c = expansional_dagger(scaled, ab, c);
    const DaggerPair e_a_b = expansional_dagger(scaled, a, b);

    const Operator f1 = reduce_to(compose(g_bc, e_a_bc.dagger), a);
    const Operator f2 = reduce_to(compose(g_ab, e_ab_c.dagger), c);
    const Operator f3 = reduce_to(compose(g_b, compose(e_a_b.dagger, e_ab_c.dagger)), ac);

    const cplx t1 = trace_product(ensemble.state(), e_a_bc.dagger_inverse);
    const cplx t2 = trace_product(g_ab, e_a_b.dagger_inverse);
    r.lambda = t2 / t1;

    r.rhs = compose(inverse(f1), compose(inverse(f2), f3));
    r.rhs *= r.lambda;
    r.residual = operator_norm(r.lhs - r.rhs) / operator_norm(r.lhs);
    return r;
}

cplx lambda_trace_expression(const GibbsEnsemble& ensemble, const Partition& p) {
    require_matching(ensemble, p);
    require_outer_blocks(p);
    const Interaction scaled = ensemble.interaction().scaled(ensemble.beta());
    const DaggerPair e_a_bc = expansional_dagger(scaled, p.a(), p.bc());
    const DaggerPair e_a_b = expansional_dagger(scaled, p.a(), p.b());
    const Operator g_ab = local_gibbs(ensemble.interaction(), p.ab(), ensemble.beta());
    return trace_product(g_ab, e_a_b.dagger_inverse) / trace_product(ensemble.state(), e_a_bc.dagger_inverse);
}

double lambda_partition_ratio(const GibbsEnsemble& ensemble, const Partition& p) {
    require_matching(ensemble, p);
    const Interaction& inter = ensemble.interaction();
    const double beta = ensemble.beta();
    const double log_ratio = ensemble.log_partition_function() + log_partition_function(inter, p.b(), beta) -
                             log_partition_function(inter, p.ab(), beta) -
                             log_partition_function(inter, p.bc(), beta);
    return std::exp(log_ratio);
}

double lambda_deviation(const GibbsEnsemble& ensemble, const Partition& p) {
    const double ratio = lambda_partition_ratio(ensemble, p);
    if (ensemble.state().dim() <= (Eigen::Index{1} << 10)) {
        const cplx via_trace = lambda_trace_expression(ensemble, p);
        if (std::abs(via_trace - ratio) > 1e-8 * std::max(1.0, std::abs(ratio))) {
            throw DiagnosticsError("lambda from the trace expression (" + std::to_string(via_trace.real()) + ") and the " +
                                   "partition-function ratio (" + std::to_string(ratio) + ") disagree");
        }
    }
    return std::abs(ratio - 1.0);
}

// ---------------------------------------------------------------------------
// Operator Schmidt decomposition

Operator SchmidtDecomposition::reconstruct() const {
    if (left_factors.empty()) throw InvalidArgument("empty Schmidt decomposition");
    Operator out = Operator::zero(sites_union(left_factors[0].support(), right_factors[0].support()),
                                  left_factors[0].local_dim());
    for (std::size_t j = 0; j < singular_values.size(); ++j) {
        out += singular_values[j] * tensor(left_factors[j], right_factors[j]);
    }
    return out;
}

SchmidtDecomposition operator_schmidt(const Operator& q, Site cut) {
    Sites left, right;
    for (Site s : q.support()) (s < cut ? left : right).push_back(s);
    if (left.empty() || right.empty()) throw InvalidArgument("cut must split the support into two nonempty parts");
    const int d = q.local_dim();
    const auto ol = digit_offsets(q.support(), left, d);
    const auto orr = digit_offsets(q.support(), right, d);
    const Eigen::Index dl = static_cast<Eigen::Index>(ol.size());
    const Eigen::Index dr = static_cast<Eigen::Index>(orr.size());

    // realigned[(l, l'), (r, r')] = q[(l, r), (l', r')]
    Matrix realigned(dl * dl, dr * dr);
    for (Eigen::Index r2 = 0; r2 < dr; ++r2) {
        for (Eigen::Index r = 0; r < dr; ++r) {
            for (Eigen::Index l2 = 0; l2 < dl; ++l2) {
                for (Eigen::Index l = 0; l < dl; ++l) {
                    realigned(l + dl * l2, r + dr * r2) = q.matrix()(ol[l] + orr[r], ol[l2] + orr[r2]);
                }
            }
        }
    }
    const linalg::SVD svd = linalg::svd(realigned);
    SchmidtDecomposition out;
    const double top = svd.s.size() ? svd.s(0) : 0.0;
    for (Eigen::Index j = 0; j < svd.s.size(); ++j) {
        if (j > 0 && !(svd.s(j) > 1e-14 * top)) break;
        Matrix lm(dl, dl), rm(dr, dr);
        for (Eigen::Index l2 = 0; l2 < dl; ++l2) {
            for (Eigen::Index l = 0; l < dl; ++l) lm(l, l2) = svd.u(l + dl * l2, j);
        }
        for (Eigen::Index r2 = 0; r2 < dr; ++r2) {
            for (Eigen::Index r = 0; r < dr; ++r) rm(r, r2) = std::conj(svd.v(r + dr * r2, j));
        }
        out.singular_values.push_back(svd.s(j));
        out.coefficients.push_back(svd.s(j) * svd.s(j));
        out.left_factors.emplace_back(left, std::move(lm), d);
        out.right_factors.emplace_back(right, std::move(rm), d);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Covariance correlation

CorrResult covariance_correlation(const Operator& state, const Sites& a, const Sites& c, const CorrOptions& options) {
    if (a.empty() || c.empty()) throw InvalidArgument("regions A and C must be nonempty");
    if (!sites_intersection(a, c).empty()) throw InvalidArgument("regions A and C must be disjoint");
    if (options.restarts < 1 || options.max_iters < 1) throw InvalidArgument("restarts and max_iters must be positive");
    const int d = state.local_dim();
    const Operator ra = reduce_to(state, a);
    const Operator rc = reduce_to(state, c);
    const Operator delta = reduce_to(state, sites_union(a, c)) - tensor(ra, rc);

    CorrResult best;
    best.value = -1.0;
    best.upper_bound = trace_norm(delta);
    const Eigen::Index dc = rc.dim();

    // Seed for restart 0: leading Schmidt factor of delta on C (only defined
    // when every site of A lies left of every site of C).
    Matrix schmidt_seed;
    if (a.back() < c.front() && hs_norm(delta) > 0.0) {
        const SchmidtDecomposition sd = operator_schmidt(delta, c.front());
        Matrix h = sd.right_factors[0].matrix();
        // Strip the global phase so that the Hermitian part is not degenerate.
        Eigen::Index pi = 0, pj = 0;
        h.cwiseAbs().maxCoeff(&pi, &pj);
        const cplx pivot = h(pi, pj);
        if (std::abs(pivot) > 0.0) h *= std::conj(pivot) / std::abs(pivot);
        schmidt_seed = 0.5 * (h + h.adjoint());
    }

    for (int restart = 0; restart < options.restarts; ++restart) {
        Matrix oc;
        if (restart == 0 && schmidt_seed.size() > 0 && schmidt_seed.norm() > 0.0) {
            oc = schmidt_seed;
        } else {
            auto gen = make_stream(options.seed, {0xC0AAULL, static_cast<std::uint64_t>(restart)});
            oc = random_hermitian(gen, dc);
        }
        oc /= linalg::operator_norm(oc);

        Matrix oa;
        double value = -std::numeric_limits<double>::infinity();
        bool converged = false;
        for (int it = 0; it < options.max_iters; ++it) {
            auto [sa, va] = hermitian_sign(partial_contract(delta, a, Operator(c, oc, d)));
            oa = std::move(sa);
            auto [sc, vc] = hermitian_sign(partial_contract(delta, c, Operator(a, oa, d)));
            oc = std::move(sc);
            (void)va;
            const double improvement = vc - value;
            value = vc;
            if (improvement < options.tol) {
                converged = true;
                break;
            }
        }
        if (value > best.value) {
            best.value = value;
            best.witness_a = Operator(a, oa, d);
            best.witness_c = Operator(c, oc, d);
            best.converged = converged;
        }
        best.restarts_used = restart + 1;
    }
    best.value = std::max(best.value, 0.0);
    return best;
}

CorrResult covariance_correlation(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c,
                                  const CorrOptions& options) {
    return covariance_correlation(ensemble.state(), a, c, options);
}

double local_indistinguishability_gap(const Interaction& interaction, const Partition& p, const Operator& q,
                                      double beta) {
    const Sites a = p.a(), c = p.c();
    Sites truncated;
    if (sites_subset(q.support(), a)) {
        truncated = p.ab();
    } else if (sites_subset(q.support(), c)) {
        truncated = p.bc();
    } else {
        throw SupportNotContained("observable must be supported in A or in C");
    }
    const int d = interaction.local_dim();
    const GibbsEnsemble full(interaction, p.interval, beta);
    const GibbsEnsemble part(interaction, interval_of(truncated, d), beta);
    return std::abs(trace_product(full.state(), q) - trace_product(part.state(), q));
}

double bs_dpi_gap(const GibbsEnsemble& ensemble, const Partition& p) {
    require_matching(ensemble, p);
    require_outer_blocks(p);
    const int d = ensemble.interaction().local_dim();
    const Sites c = p.c();
    const double dc = static_cast<double>(hilbert_dim(d, c.size()));
    Operator mixed_c = Operator::identity(c, d);
    mixed_c *= 1.0 / dc;
    const Operator sigma = tensor(ensemble.reduced_state(p.ab()), mixed_c);
    const Operator rb = p.b_size > 0 ? ensemble.reduced_state(p.b()) : Operator::scalar(1.0, d);
    const Operator sigma_t = tensor(rb, mixed_c);
    return bs_entropy(ensemble.state(), sigma) - bs_entropy(ensemble.reduced_state(p.bc()), sigma_t);
}

}  // namespace gibbs
