#pragma once

#include "gibbs/hamiltonian.hpp"
#include "gibbs/operator.hpp"

#include <cstdint>
#include <vector>

namespace gibbs {

// Interval split into consecutive blocks A | B | C. B may be empty.
struct Partition {
    Interval interval;
    int a_size = 1;
    int b_size = 0;
    int c_size = 1;

    Partition() = default;
    Partition(Interval interval, int a, int b, int c);

    Sites a() const { return sites_range(interval.lo, interval.lo + a_size - 1); }
    Sites b() const { return sites_range(interval.lo + a_size, interval.lo + a_size + b_size - 1); }
    Sites c() const { return sites_range(interval.hi - c_size + 1, interval.hi); }
    Sites ab() const { return sites_range(interval.lo, interval.lo + a_size + b_size - 1); }
    Sites bc() const { return sites_range(interval.lo + a_size, interval.hi); }
    Sites ac() const { return sites_union(a(), c()); }
    Sites abc() const { return interval.sites(); }
};

// rho_AB rho_B^{-1} rho_BC on ABC (rho_B = 1 when B is empty).
Operator bs_recovery_product(const GibbsEnsemble& ensemble, const Partition& partition);

// || rho_ABC - rho_AB rho_B^{-1} rho_BC ||_1
double recovery_distance(const GibbsEnsemble& ensemble, const Partition& partition);

struct Step1Result {
    Operator lhs;  // rho_A^{-1} rho_C^{-1} rho_AC
    Operator rhs;
    cplx lambda;
    double residual = 0.0;  // ||lhs - rhs|| / ||lhs||
};

// Factorization of rho_A^{-1} rho_C^{-1} rho_AC through expansionals and
// local Gibbs states of the sub-Hamiltonians. Requires a nonempty A and C.
Step1Result step1_factorization(const GibbsEnsemble& ensemble, const Partition& partition);

// lambda_ABC from the trace expression used by step1_factorization.
cplx lambda_trace_expression(const GibbsEnsemble& ensemble, const Partition& partition);
// lambda_ABC = Z_ABC Z_B / (Z_AB Z_BC).
double lambda_partition_ratio(const GibbsEnsemble& ensemble, const Partition& partition);

// |lambda_ABC - 1| from the partition-function ratio. For ensembles of
// dimension at most 2^10 the trace expression is evaluated too, and a
// disagreement above 1e-8 raises DiagnosticsError.
double lambda_deviation(const GibbsEnsemble& ensemble, const Partition& partition);

struct SchmidtDecomposition {
    std::vector<double> singular_values;  // descending
    std::vector<double> coefficients;     // squares of the singular values
    std::vector<Operator> left_factors;   // Hilbert-Schmidt orthonormal
    std::vector<Operator> right_factors;

    // sum_j singular_values[j] left_factors[j] (x) right_factors[j]
    Operator reconstruct() const;
};

// Splits the support of q into sites < cut and sites >= cut; both parts must
// be nonempty. Zero singular values are dropped below 1e-14 * largest.
SchmidtDecomposition operator_schmidt(const Operator& q, Site cut);

struct CorrOptions {
    int restarts = 8;
    int max_iters = 200;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

struct CorrResult {
    double value = 0.0;
    Operator witness_a;
    Operator witness_c;
    int restarts_used = 0;
    bool converged = false;
    double upper_bound = 0.0;  // || rho_AC - rho_A (x) rho_C ||_1
};

// Lower bound on sup |Tr[(O_A (x) O_C)(rho_AC - rho_A (x) rho_C)]| over
// Hermitian observables of operator norm one, by alternating maximization.
CorrResult covariance_correlation(const Operator& state, const Sites& a, const Sites& c,
                                  const CorrOptions& options = {});
CorrResult covariance_correlation(const GibbsEnsemble& ensemble, const Sites& a, const Sites& c,
                                  const CorrOptions& options = {});

// |Tr(rho^ABC Q) - Tr(rho^AB Q)| for Q supported in A, where rho^AB is the
// Gibbs state of the truncated Hamiltonian (rho^BC and the mirrored formula
// when Q sits in C).
double local_indistinguishability_gap(const Interaction& interaction, const Partition& partition,
                                      const Operator& q, double beta = 1.0);

// D(rho_ABC || rho_AB (x) 1/d_C) - D(rho_BC || rho_B (x) 1/d_C) for the BS
// entropy D, the two sides of the data-processing inequality under the
// channel that replaces A by the maximally mixed state.
double bs_dpi_gap(const GibbsEnsemble& ensemble, const Partition& partition);

}  // namespace gibbs
