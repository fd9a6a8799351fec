#pragma once

// Dense linear algebra backend. Heavy kernels (GEMM, Hermitian eigensolver,
// SVD) go to OpenBLAS, loaded at runtime and self-tested on first use, with
// Eigen-native routines as the fallback. Matrices whose imaginary part is
// exactly zero take the real code path.

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace gibbs::linalg {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

enum class Backend { OpenBLAS, Eigen };

// Selected once per process. GIBBS_LAB_BLAS=eigen forces the Eigen backend.
Backend active_backend();
std::string backend_description();

bool is_real(const CMat& m);

// max_{ij} |M_ij - conj(M_ji)|
double hermitian_defect(const CMat& m);

// op(a) * op(b) with op in {'N', 'T', 'C'} (conjugate transpose is 'C').
RMat gemm(const RMat& a, const RMat& b, char op_a = 'N', char op_b = 'N');
CMat gemm(const CMat& a, const CMat& b, char op_a = 'N', char op_b = 'N');

// Eigendecomposition of a Hermitian matrix. Exactly one of real_vectors /
// complex_vectors is populated, depending on `real`.
struct Eigensystem {
    RVec values;  // ascending
    RMat real_vectors;
    CMat complex_vectors;
    bool real = false;

    Eigen::Index dim() const { return values.size(); }
    CMat vectors() const;
};

// The input is symmetrized as (M + M^dagger)/2 before the solver is called.
Eigensystem hermitian_eigen(const CMat& m);
RVec hermitian_eigenvalues(const CMat& m);

// U diag(f) U^dagger
CMat reconstruct(const Eigensystem& e, const RVec& f);
CMat reconstruct(const Eigensystem& e, const CVec& f);

RVec singular_values(const CMat& m);  // descending

struct SVD {
    CMat u;
    RVec s;  // descending
    CMat v;  // m = u diag(s) v^dagger
};
SVD svd(const CMat& m);

// Product with the real fast path when either factor is real.
CMat multiply(const CMat& a, const CMat& b);

// General inverse by LU; throws SingularOperator when the reciprocal
// condition estimate falls below 1e-13.
CMat inverse(const CMat& m);

double operator_norm(const CMat& m);
double trace_norm(const CMat& m);
double hs_norm(const CMat& m);

// Largest singular value by Lanczos on M^dagger M with full
// reorthogonalization. Used for large non-Hermitian inputs.
double lanczos_operator_norm(const CMat& m, int max_iters = 300, double tol = 1e-14);

}  // namespace gibbs::linalg
