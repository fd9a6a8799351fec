#include "gibbs/divergences.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gibbs {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kEntropyFloor = 1e-15;

void require_same_support(const Operator& rho, const Operator& sigma) {
    if (rho.support() != sigma.support() || rho.local_dim() != sigma.local_dim()) {
        throw SupportMismatch("divergence arguments live on different supports");
    }
}

void require_full_rank(const Eigen::VectorXd& w, const char* which) {
    const double hi = w(w.size() - 1);
    if (!(w(0) > 1e-13 * hi)) {
        throw SingularOperator(std::string(which) + " is not full rank (min eigenvalue " + std::to_string(w(0)) + ")");
    }
}

double sum_xlogx(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > kEntropyFloor) s += w(i) * std::log(w(i));
    }
    return s;
}

// Shared pieces for the sandwiched quantities: N = sigma^{-1/2} rho sigma^{-1/2}
// in its eigenbasis, with the diagonal of sigma in that basis.
struct GeometricMean {
    Eigen::VectorXd nu;
    Eigen::VectorXd weight;
};

GeometricMean geometric_mean(const Operator& rho, const Operator& sigma) {
    const SpectralDecomposition ss = spectral_decomposition(sigma);
    require_full_rank(ss.eigenvalues(), "sigma");
    const Operator s_inv_half = apply_function(ss, ScalarFunction::power(-0.5));
    const Matrix n = linalg::multiply(linalg::multiply(s_inv_half.matrix(), rho.matrix()), s_inv_half.matrix());
    const linalg::Eigensystem es = linalg::hermitian_eigen(n);
    const Matrix u = es.vectors();
    GeometricMean gm;
    gm.nu = es.values;
    // diag(U^dagger sigma U)
    const Matrix su = linalg::multiply(sigma.matrix(), u);
    gm.weight.resize(u.cols());
    for (Eigen::Index j = 0; j < u.cols(); ++j) gm.weight(j) = std::real(u.col(j).dot(su.col(j)));
    return gm;
}

double renyi_from_mean(const GeometricMean& gm, double q) {
    if (!(q > 1.0)) throw InvalidOrder("geometric Renyi order must exceed 1, got " + std::to_string(q));
    // log sum_i w_i nu_i^q, evaluated with a log-sum-exp shift
    double shift = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < gm.nu.size(); ++i) {
        if (gm.nu(i) > 0 && gm.weight(i) > 0) shift = std::max(shift, std::log(gm.weight(i)) + q * std::log(gm.nu(i)));
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < gm.nu.size(); ++i) {
        if (gm.nu(i) > 0 && gm.weight(i) > 0) total += std::exp(std::log(gm.weight(i)) + q * std::log(gm.nu(i)) - shift);
    }
    return (shift + std::log(total)) / (q - 1.0);
}

Operator product_of_marginals(const Operator& state, const Sites& a, const Sites& c, Operator* rho_a = nullptr,
                              Operator* rho_c = nullptr) {
    if (!sites_intersection(a, c).empty()) throw InvalidArgument("regions A and C must be disjoint");
    if (a.empty() || c.empty()) throw InvalidArgument("regions A and C must be nonempty");
    Operator ra = reduce_to(state, a);
    Operator rc = reduce_to(state, c);
    Operator prod = tensor(ra, rc);
    if (rho_a) *rho_a = std::move(ra);
    if (rho_c) *rho_c = std::move(rc);
    return prod;
}

}  // namespace

void require_state(const Operator& rho, const char* context) {
    const double defect = linalg::hermitian_defect(rho.matrix());
    if (defect > kStateTol) throw NotAState(std::string(context) + ": not Hermitian (defect " + std::to_string(defect) + ")");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kStateTol) throw NotAState(std::string(context) + ": trace is " + std::to_string(tr));
}

double von_neumann_entropy(const Operator& rho) {
    require_state(rho, "von_neumann_entropy");
    const Eigen::VectorXd w = linalg::hermitian_eigenvalues(rho.matrix());
    if (w(0) < -kStateTol) throw NotAState("von_neumann_entropy: negative eigenvalue " + std::to_string(w(0)));
    return -sum_xlogx(w);
}

double umegaki(const Operator& rho, const Operator& sigma) {
    require_same_support(rho, sigma);
    require_state(rho, "umegaki(rho)");
    require_state(sigma, "umegaki(sigma)");
    const Eigen::VectorXd wr = linalg::hermitian_eigenvalues(rho.matrix());
    require_full_rank(wr, "rho");
    const Operator log_sigma = matrix_function(sigma, ScalarFunction::log());
    return sum_xlogx(wr) - trace_product(rho, log_sigma).real();
}

double bs_entropy(const Operator& rho, const Operator& sigma) {
    require_same_support(rho, sigma);
    require_state(rho, "bs_entropy(rho)");
    require_state(sigma, "bs_entropy(sigma)");
    const SpectralDecomposition sr = spectral_decomposition(rho);
    require_full_rank(sr.eigenvalues(), "rho");
    const Operator rho_half = apply_function(sr, ScalarFunction::sqrt());
    const Operator sigma_inv = matrix_function(sigma, ScalarFunction::inv());
    const Matrix m = linalg::multiply(linalg::multiply(rho_half.matrix(), sigma_inv.matrix()), rho_half.matrix());
    const linalg::Eigensystem es = linalg::hermitian_eigen(m);
    require_full_rank(es.values, "rho^{1/2} sigma^{-1} rho^{1/2}");
    Eigen::VectorXd logs = es.values.array().log();
    const Matrix log_m = linalg::reconstruct(es, logs);
    return trace_product(rho, Operator(rho.support(), log_m, rho.local_dim())).real();
}

double geometric_renyi(const Operator& rho, const Operator& sigma, double q) {
    if (!(q > 1.0)) throw InvalidOrder("geometric Renyi order must exceed 1, got " + std::to_string(q));
    return geometric_renyi(rho, sigma, std::vector<double>{q}).front();
}

std::vector<double> geometric_renyi(const Operator& rho, const Operator& sigma, const std::vector<double>& qs) {
    for (double q : qs) {
        if (!(q > 1.0)) throw InvalidOrder("geometric Renyi order must exceed 1, got " + std::to_string(q));
    }
    require_same_support(rho, sigma);
    require_state(rho, "geometric_renyi(rho)");
    require_state(sigma, "geometric_renyi(sigma)");
    const Eigen::VectorXd wr = linalg::hermitian_eigenvalues(rho.matrix());
    require_full_rank(wr, "rho");
    const GeometricMean gm = geometric_mean(rho, sigma);
    std::vector<double> out;
    out.reserve(qs.size());
    for (double q : qs) out.push_back(renyi_from_mean(gm, q));
    return out;
}

double upper_bound_norm(const Operator& rho, const Operator& sigma) {
    require_same_support(rho, sigma);
    const Operator sigma_inv = matrix_function(sigma, ScalarFunction::inv());
    Matrix m = linalg::multiply(sigma_inv.matrix(), rho.matrix());
    m -= Matrix::Identity(m.rows(), m.cols());
    return linalg::operator_norm(m);
}

bool DivergenceReport::chain_holds(double slack) const {
    if (umegaki > bs + slack) return false;
    for (const auto& [q, v] : geometric_renyi) {
        if (bs > v + slack || v > upper_bound_norm + slack) return false;
    }
    return true;
}

DivergenceReport divergence_report(const Operator& rho, const Operator& sigma, const std::vector<double>& qs) {
    DivergenceReport r;
    r.umegaki = umegaki(rho, sigma);
    r.bs = bs_entropy(rho, sigma);
    const std::vector<double> vals = geometric_renyi(rho, sigma, qs);
    for (std::size_t i = 0; i < qs.size(); ++i) r.geometric_renyi[qs[i]] = vals[i];
    r.upper_bound_norm = upper_bound_norm(rho, sigma);
    return r;
}

// ---------------------------------------------------------------------------
// Mutual informations

double mutual_information(const Operator& state, const Sites& a, const Sites& c) {
    if (!sites_intersection(a, c).empty()) throw InvalidArgument("regions A and C must be disjoint");
    const Sites ac = sites_union(a, c);
    return von_neumann_entropy(reduce_to(state, a)) + von_neumann_entropy(reduce_to(state, c)) -
           von_neumann_entropy(reduce_to(state, ac));
}

double bs_mutual_information(const Operator& state, const Sites& a, const Sites& c) {
    const Operator prod = product_of_marginals(state, a, c);
    return bs_entropy(reduce_to(state, sites_union(a, c)), prod);
}

double geometric_renyi_mi(const Operator& state, const Sites& a, const Sites& c, double q) {
    const Operator prod = product_of_marginals(state, a, c);
    return geometric_renyi(reduce_to(state, sites_union(a, c)), prod, q);
}

double mi_upper_bound_norm(const Operator& state, const Sites& a, const Sites& c) {
    const Operator prod = product_of_marginals(state, a, c);
    return upper_bound_norm(reduce_to(state, sites_union(a, c)), prod);
}

double trace_distance_product(const Operator& state, const Sites& a, const Sites& c) {
    const Operator prod = product_of_marginals(state, a, c);
    return trace_norm(reduce_to(state, sites_union(a, c)) - prod);
}

double mutual_information(const GibbsEnsemble& e, const Sites& a, const Sites& c) {
    return mutual_information(e.state(), a, c);
}
double bs_mutual_information(const GibbsEnsemble& e, const Sites& a, const Sites& c) {
    return bs_mutual_information(e.state(), a, c);
}
double geometric_renyi_mi(const GibbsEnsemble& e, const Sites& a, const Sites& c, double q) {
    return geometric_renyi_mi(e.state(), a, c, q);
}
double mi_upper_bound_norm(const GibbsEnsemble& e, const Sites& a, const Sites& c) {
    return mi_upper_bound_norm(e.state(), a, c);
}
double trace_distance_product(const GibbsEnsemble& e, const Sites& a, const Sites& c) {
    return trace_distance_product(e.state(), a, c);
}

MutualInformationReport mutual_information_report(const Operator& state, const Sites& a, const Sites& c,
                                                  const std::vector<double>& qs) {
    Operator ra, rc;
    const Operator prod = product_of_marginals(state, a, c, &ra, &rc);
    const Operator rac = reduce_to(state, sites_union(a, c));
    MutualInformationReport r;
    r.trace_distance = trace_norm(rac - prod);
    r.mi = von_neumann_entropy(ra) + von_neumann_entropy(rc) - von_neumann_entropy(rac);
    r.bs_mi = bs_entropy(rac, prod);
    if (!qs.empty()) {
        const std::vector<double> vals = geometric_renyi(rac, prod, qs);
        for (std::size_t i = 0; i < qs.size(); ++i) r.geometric_renyi_mi[qs[i]] = vals[i];
    }
    r.norm_bound = upper_bound_norm(rac, prod);
    return r;
}

double conditional_mutual_information(const Operator& state, const Sites& a, const Sites& b, const Sites& c) {
    if (!sites_intersection(a, b).empty() || !sites_intersection(a, c).empty() || !sites_intersection(b, c).empty()) {
        throw InvalidArgument("regions A, B, C must be disjoint");
    }
    const Sites ab = sites_union(a, b);
    const Sites bc = sites_union(b, c);
    const Sites abc = sites_union(ab, c);
    const double sb = b.empty() ? 0.0 : von_neumann_entropy(reduce_to(state, b));
    return von_neumann_entropy(reduce_to(state, ab)) + von_neumann_entropy(reduce_to(state, bc)) - sb -
           von_neumann_entropy(reduce_to(state, abc));
}

double conditional_mutual_information(const GibbsEnsemble& e, const Sites& a, const Sites& b, const Sites& c) {
    return conditional_mutual_information(e.state(), a, b, c);
}

}  // namespace gibbs
