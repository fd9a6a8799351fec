#pragma once

#include "gibbs/errors.hpp"
#include "gibbs/linalg.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace gibbs {

using Site = int;
using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Sites = std::vector<Site>;

// Largest Hilbert-space dimension the dense backend accepts.
inline constexpr Eigen::Index kDenseCap = Eigen::Index{1} << 14;

// d^k, throwing DimensionOverflow above kDenseCap.
Eigen::Index hilbert_dim(int local_dim, std::size_t num_sites);

struct Interval {
    Site lo = 0;
    Site hi = 0;
    int local_dim = 2;

    Interval() = default;
    Interval(Site lo_, Site hi_, int d = 2);

    int size() const { return hi - lo + 1; }
    Sites sites() const;
    Eigen::Index dim() const { return hilbert_dim(local_dim, static_cast<std::size_t>(size())); }
    bool contains(Site s) const { return s >= lo && s <= hi; }
};

// Sorted-set helpers on site lists.
Sites sites_union(const Sites& a, const Sites& b);
Sites sites_intersection(const Sites& a, const Sites& b);
Sites sites_difference(const Sites& a, const Sites& b);
bool sites_subset(const Sites& sub, const Sites& super);
Sites sites_range(Site lo, Site hi);  // [lo, hi], empty when hi < lo

// Element of the local algebra: a dense matrix acting on the tensor product
// of the sites in `support`, lowest site as the most significant factor.
// An empty support denotes a scalar (1x1 matrix).
class Operator {
public:
    Operator();  // scalar 1
    Operator(Sites support, Matrix matrix, int local_dim = 2);

    static Operator identity(Sites support, int local_dim = 2);
    static Operator zero(Sites support, int local_dim = 2);
    static Operator scalar(cplx value, int local_dim = 2);
    static Operator on_site(Site site, Matrix matrix);

    const Sites& support() const { return support_; }
    const Matrix& matrix() const { return matrix_; }
    Matrix& matrix() { return matrix_; }
    int local_dim() const { return local_dim_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    Operator adjoint() const;
    cplx trace() const { return matrix_.trace(); }

    // max |M - M^dagger| entry <= rel_tol * ||M||_F
    bool is_hermitian(double rel_tol = 1e-12) const;
    void require_hermitian(const char* context) const;

    Operator& operator*=(cplx c);
    Operator& operator+=(const Operator& other);  // supports must match
    Operator& operator-=(const Operator& other);

private:
    Sites support_;
    Matrix matrix_;
    int local_dim_ = 2;
};

Operator operator*(cplx c, Operator op);
Operator operator*(Operator op, cplx c);
// Sum and difference embed both operands into the union of supports.
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);

// For `space` and a subset of it, the contribution of every configuration of
// `subset` (indexed in its own ascending order) to the index in `space`.
std::vector<Eigen::Index> digit_offsets(const Sites& space, const Sites& subset, int local_dim);

Operator embed(const Operator& op, const Interval& target);
Operator embed(const Operator& op, const Sites& target);

// Product after aligning both operands on the union of supports.
Operator compose(const Operator& a, const Operator& b);
Operator compose(std::initializer_list<const Operator*> factors);

// Tensor product of operators with disjoint supports.
Operator tensor(const Operator& a, const Operator& b);

// Unnormalized partial trace over `traced`.
Operator partial_trace(const Operator& op, const Sites& traced);
// Unnormalized partial trace onto `kept` (traces the complement).
Operator reduce_to(const Operator& op, const Sites& kept);
// Normalized partial trace onto `kept`.
Operator conditional_expectation(const Operator& op, const Sites& kept);

// Tr(a b) without forming the product.
cplx trace_product(const Operator& a, const Operator& b);

struct ScalarFunction {
    enum class Kind { Exp, Log, Inv, Sqrt, Power, ComplexExp };
    Kind kind = Kind::Exp;
    double q = 1.0;
    cplx s{1.0, 0.0};

    static ScalarFunction exp() { return {Kind::Exp, 1.0, {1.0, 0.0}}; }
    static ScalarFunction log() { return {Kind::Log, 1.0, {1.0, 0.0}}; }
    static ScalarFunction inv() { return {Kind::Inv, 1.0, {1.0, 0.0}}; }
    static ScalarFunction sqrt() { return {Kind::Sqrt, 1.0, {1.0, 0.0}}; }
    static ScalarFunction power(double q) { return {Kind::Power, q, {1.0, 0.0}}; }
    static ScalarFunction complex_exp(cplx s) { return {Kind::ComplexExp, 1.0, s}; }

    bool needs_positive() const;
    bool complex_valued() const { return kind == Kind::ComplexExp && s.imag() != 0.0; }
};

struct SpectralDecomposition {
    Sites support;
    int local_dim = 2;
    linalg::Eigensystem system;

    const Eigen::VectorXd& eigenvalues() const { return system.values; }
    Matrix eigenvectors() const { return system.vectors(); }
    double min_eigenvalue() const { return system.values.size() ? system.values(0) : 0.0; }
    double max_eigenvalue() const { return system.values.size() ? system.values(system.values.size() - 1) : 0.0; }
};

SpectralDecomposition spectral_decomposition(const Operator& op);
Operator apply_function(const SpectralDecomposition& spectral, const ScalarFunction& f);
Operator matrix_function(const Operator& op, const ScalarFunction& f);

// General (not necessarily Hermitian) inverse by LU.
Operator inverse(const Operator& op);

double operator_norm(const Operator& op);
double trace_norm(const Operator& op);
double hs_norm(const Operator& op);

// Pauli matrices and helpers used by presets and tests.
namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
}  // namespace pauli

}  // namespace gibbs
