#include "gibbs/linalg.hpp"

#include "gibbs/errors.hpp"

#include <dlfcn.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#ifndef GIBBS_OPENBLAS_PATH
#define GIBBS_OPENBLAS_PATH "libopenblas.so.0"
#endif

namespace gibbs::linalg {

namespace {

// Fortran BLAS/LAPACK entry points (LP64, gfortran hidden string lengths).
using fstrlen = std::size_t;
using dgemm_fn = void (*)(const char*, const char*, const int*, const int*, const int*, const double*, const double*,
                          const int*, const double*, const int*, const double*, double*, const int*, fstrlen, fstrlen);
using zgemm_fn = void (*)(const char*, const char*, const int*, const int*, const int*, const cplx*, const cplx*,
                          const int*, const cplx*, const int*, const cplx*, cplx*, const int*, fstrlen, fstrlen);
using dsyevd_fn = void (*)(const char*, const char*, const int*, double*, const int*, double*, double*, const int*,
                           int*, const int*, int*, fstrlen, fstrlen);
using zheevd_fn = void (*)(const char*, const char*, const int*, cplx*, const int*, double*, cplx*, const int*,
                           double*, const int*, int*, const int*, int*, fstrlen, fstrlen);
using dgesdd_fn = void (*)(const char*, const int*, const int*, double*, const int*, double*, double*, const int*,
                           double*, const int*, double*, const int*, int*, int*, fstrlen);
using zgesdd_fn = void (*)(const char*, const int*, const int*, cplx*, const int*, double*, cplx*, const int*, cplx*,
                           const int*, cplx*, const int*, double*, int*, int*, fstrlen);

struct Lapack {
    dgemm_fn dgemm = nullptr;
    zgemm_fn zgemm = nullptr;
    dsyevd_fn dsyevd = nullptr;
    zheevd_fn zheevd = nullptr;
    dgesdd_fn dgesdd = nullptr;
    zgesdd_fn zgesdd = nullptr;
    Backend backend = Backend::Eigen;
    std::string description = "Eigen (native)";
};

const Lapack& lapack();

int as_int(Eigen::Index n) {
    if (n > static_cast<Eigen::Index>(std::numeric_limits<int>::max())) throw DimensionOverflow("matrix too large");
    return static_cast<int>(n);
}

void check_info(int info, const char* routine) {
    if (info != 0) throw DiagnosticsError(std::string(routine) + " failed with info = " + std::to_string(info));
}

// ---- raw OpenBLAS wrappers -------------------------------------------------

template <typename Mat>
Eigen::Index op_rows(const Mat& m, char op) { return op == 'N' ? m.rows() : m.cols(); }
template <typename Mat>
Eigen::Index op_cols(const Mat& m, char op) { return op == 'N' ? m.cols() : m.rows(); }

RMat blas_gemm(const Lapack& lp, const RMat& a, const RMat& b, char oa, char ob) {
    if (oa == 'C') oa = 'T';
    if (ob == 'C') ob = 'T';
    const int m = as_int(op_rows(a, oa)), n = as_int(op_cols(b, ob)), k = as_int(op_cols(a, oa));
    RMat c(m, n);
    if (m == 0 || n == 0) return c;
    if (k == 0) return RMat::Zero(m, n);
    const double one = 1.0, zero = 0.0;
    const int lda = std::max(1, as_int(a.rows())), ldb = std::max(1, as_int(b.rows())), ldc = std::max(1, m);
    lp.dgemm(&oa, &ob, &m, &n, &k, &one, a.data(), &lda, b.data(), &ldb, &zero, c.data(), &ldc, 1, 1);
    return c;
}

CMat blas_gemm(const Lapack& lp, const CMat& a, const CMat& b, char oa, char ob) {
    const int m = as_int(op_rows(a, oa)), n = as_int(op_cols(b, ob)), k = as_int(op_cols(a, oa));
    CMat c(m, n);
    if (m == 0 || n == 0) return c;
    if (k == 0) return CMat::Zero(m, n);
    const cplx one = 1.0, zero = 0.0;
    const int lda = std::max(1, as_int(a.rows())), ldb = std::max(1, as_int(b.rows())), ldc = std::max(1, m);
    lp.zgemm(&oa, &ob, &m, &n, &k, &one, a.data(), &lda, b.data(), &ldb, &zero, c.data(), &ldc, 1, 1);
    return c;
}

RVec blas_dsyevd(const Lapack& lp, RMat& a, bool vectors) {
    const int n = as_int(a.rows());
    RVec w(n);
    if (n == 0) return w;
    const char jobz = vectors ? 'V' : 'N', uplo = 'U';
    int info = 0, lwork = -1, liwork = -1, iwork_query = 0;
    double work_query = 0.0;
    lp.dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &iwork_query, &liwork, &info, 1, 1);
    check_info(info, "dsyevd");
    lwork = static_cast<int>(work_query) + 1;
    liwork = std::max(1, iwork_query);
    std::vector<double> work(lwork);
    std::vector<int> iwork(liwork);
    lp.dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
    check_info(info, "dsyevd");
    return w;
}

RVec blas_zheevd(const Lapack& lp, CMat& a, bool vectors) {
    const int n = as_int(a.rows());
    RVec w(n);
    if (n == 0) return w;
    const char jobz = vectors ? 'V' : 'N', uplo = 'U';
    int info = 0, lwork = -1, lrwork = -1, liwork = -1, iwork_query = 0;
    cplx work_query = 0.0;
    double rwork_query = 0.0;
    lp.zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &rwork_query, &lrwork, &iwork_query,
              &liwork, &info, 1, 1);
    check_info(info, "zheevd");
    lwork = static_cast<int>(work_query.real()) + 1;
    lrwork = static_cast<int>(rwork_query) + 1;
    liwork = std::max(1, iwork_query);
    std::vector<cplx> work(lwork);
    std::vector<double> rwork(lrwork);
    std::vector<int> iwork(liwork);
    lp.zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork, iwork.data(),
              &liwork, &info, 1, 1);
    check_info(info, "zheevd");
    return w;
}

// jobz 'N' (values only) or 'S' (thin factors).
RVec blas_dgesdd(const Lapack& lp, RMat a, char jobz, RMat* u, RMat* vt) {
    const int m = as_int(a.rows()), n = as_int(a.cols()), k = std::min(m, n);
    RVec s(k);
    if (k == 0) return s;
    int ldu = 1, ldvt = 1;
    double* pu = nullptr;
    double* pvt = nullptr;
    double dummy = 0.0;
    if (jobz == 'S') {
        u->resize(m, k);
        vt->resize(k, n);
        ldu = m;
        ldvt = k;
        pu = u->data();
        pvt = vt->data();
    } else {
        pu = pvt = &dummy;
    }
    std::vector<int> iwork(8 * static_cast<std::size_t>(k));
    int info = 0, lwork = -1;
    double work_query = 0.0;
    lp.dgesdd(&jobz, &m, &n, a.data(), &m, s.data(), pu, &ldu, pvt, &ldvt, &work_query, &lwork, iwork.data(), &info, 1);
    check_info(info, "dgesdd");
    lwork = static_cast<int>(work_query) + 1;
    std::vector<double> work(lwork);
    lp.dgesdd(&jobz, &m, &n, a.data(), &m, s.data(), pu, &ldu, pvt, &ldvt, work.data(), &lwork, iwork.data(), &info, 1);
    check_info(info, "dgesdd");
    return s;
}

RVec blas_zgesdd(const Lapack& lp, CMat a, char jobz, CMat* u, CMat* vt) {
    const int m = as_int(a.rows()), n = as_int(a.cols()), k = std::min(m, n), mx = std::max(m, n);
    RVec s(k);
    if (k == 0) return s;
    int ldu = 1, ldvt = 1;
    cplx* pu = nullptr;
    cplx* pvt = nullptr;
    cplx dummy = 0.0;
    if (jobz == 'S') {
        u->resize(m, k);
        vt->resize(k, n);
        ldu = m;
        ldvt = k;
        pu = u->data();
        pvt = vt->data();
    } else {
        pu = pvt = &dummy;
    }
    const std::size_t kk = static_cast<std::size_t>(k);
    const std::size_t lrwork = jobz == 'N' ? 7 * kk : std::max(5 * kk * kk + 5 * kk, 2 * static_cast<std::size_t>(mx) * kk + 2 * kk * kk + kk);
    std::vector<double> rwork(lrwork);
    std::vector<int> iwork(8 * kk);
    int info = 0, lwork = -1;
    cplx work_query = 0.0;
    lp.zgesdd(&jobz, &m, &n, a.data(), &m, s.data(), pu, &ldu, pvt, &ldvt, &work_query, &lwork, rwork.data(),
              iwork.data(), &info, 1);
    check_info(info, "zgesdd");
    lwork = static_cast<int>(work_query.real()) + 1;
    std::vector<cplx> work(lwork);
    lp.zgesdd(&jobz, &m, &n, a.data(), &m, s.data(), pu, &ldu, pvt, &ldvt, work.data(), &lwork, rwork.data(),
              iwork.data(), &info, 1);
    check_info(info, "zgesdd");
    return s;
}

// ---- backend selection -----------------------------------------------------

// OpenBLAS 0.3.20 picks its Cooperlake kernels on CPUs reporting AVX512-BF16,
// and those have been observed to return wrong GEMM and eigensolver results.
// Pin the SkylakeX kernels there unless the user already chose a core type.
void pin_openblas_core() {
#if defined(__x86_64__) || defined(__i386__)
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512bf16")) {
        setenv("OPENBLAS_CORETYPE", "SkylakeX", 0);
    }
#endif
}

template <typename Fn>
Fn lookup(void* handle, const char* name) {
    return reinterpret_cast<Fn>(dlsym(handle, name));
}

bool self_test(const Lapack& lp, std::string& why) {
    std::mt19937_64 gen(20240601ULL);
    std::normal_distribution<double> normal;
    auto rnd = [&](Eigen::Index r, Eigen::Index c) {
        RMat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(gen);
        return m;
    };
    const Eigen::Index n = 300;
    const RMat a = rnd(n, n), b = rnd(n, n);
    const RMat ref = a.lazyProduct(b);
    const RMat got = blas_gemm(lp, a, b, 'N', 'N');
    if (!((got - ref).norm() <= 1e-12 * ref.norm())) {
        why = "dgemm mismatch";
        return false;
    }
    const RMat got_t = blas_gemm(lp, a, b, 'T', 'N');
    if (!((got_t - a.transpose().lazyProduct(b)).norm() <= 1e-12 * ref.norm())) {
        why = "dgemm (transposed) mismatch";
        return false;
    }
    const CMat za = CMat(a.cast<cplx>()) + cplx(0, 1) * b.cast<cplx>();
    const CMat zref = za.lazyProduct(za.adjoint());
    const CMat zgot = blas_gemm(lp, za, za, 'N', 'C');
    if (!((zgot - zref).norm() <= 1e-12 * zref.norm())) {
        why = "zgemm mismatch";
        return false;
    }
    const Eigen::Index m = 200;
    RMat sym = rnd(m, m);
    sym = (sym + sym.transpose()).eval();
    RMat v = sym;
    const RVec w = blas_dsyevd(lp, v, true);
    const double orth = (v.transpose().lazyProduct(v) - RMat::Identity(m, m)).norm();
    const double rec = (v.lazyProduct(w.asDiagonal() * v.transpose()) - sym).norm();
    if (!(orth <= 1e-11 && rec <= 1e-11 * sym.norm())) {
        why = "dsyevd eigenvectors inaccurate";
        return false;
    }
    CMat herm = CMat(sym.cast<cplx>()) + cplx(0, 1) * CMat((rnd(m, m) - rnd(m, m).transpose()).cast<cplx>());
    herm = (0.5 * (herm + herm.adjoint())).eval();
    CMat zv = herm;
    const RVec zw = blas_zheevd(lp, zv, true);
    const double zorth = (zv.adjoint().lazyProduct(zv) - CMat::Identity(m, m)).norm();
    const double zrec = (zv.lazyProduct(zw.cast<cplx>().asDiagonal() * zv.adjoint()) - herm).norm();
    if (!(zorth <= 1e-11 && zrec <= 1e-11 * herm.norm())) {
        why = "zheevd eigenvectors inaccurate";
        return false;
    }
    const RMat g = rnd(m, m + 7);
    RMat dummy_u, dummy_vt;
    const RVec s = blas_dgesdd(lp, g, 'N', &dummy_u, &dummy_vt);
    const RVec s_ref = Eigen::BDCSVD<RMat>(g).singularValues();
    if (!((s - s_ref).norm() <= 1e-11 * s_ref(0))) {
        why = "dgesdd singular values inaccurate";
        return false;
    }
    return true;
}

Lapack select_backend() {
    Lapack lp;
    const char* forced = std::getenv("GIBBS_LAB_BLAS");
    if (forced != nullptr && std::string(forced) == "eigen") {
        lp.description = "Eigen (native; forced by GIBBS_LAB_BLAS=eigen)";
        return lp;
    }
    pin_openblas_core();
    void* handle = nullptr;
    for (const char* name : {GIBBS_OPENBLAS_PATH, "libopenblas.so.0", "libopenblas.so"}) {
        handle = dlopen(name, RTLD_NOW | RTLD_LOCAL);
        if (handle) break;
    }
    if (!handle) {
        lp.description = "Eigen (native; OpenBLAS not found)";
        return lp;
    }
    Lapack cand;
    cand.dgemm = lookup<dgemm_fn>(handle, "dgemm_");
    cand.zgemm = lookup<zgemm_fn>(handle, "zgemm_");
    cand.dsyevd = lookup<dsyevd_fn>(handle, "dsyevd_");
    cand.zheevd = lookup<zheevd_fn>(handle, "zheevd_");
    cand.dgesdd = lookup<dgesdd_fn>(handle, "dgesdd_");
    cand.zgesdd = lookup<zgesdd_fn>(handle, "zgesdd_");
    if (!cand.dgemm || !cand.zgemm || !cand.dsyevd || !cand.zheevd || !cand.dgesdd || !cand.zgesdd) {
        lp.description = "Eigen (native; OpenBLAS lacks LAPACK symbols)";
        return lp;
    }
    using corename_fn = char* (*)();
    std::string core = "unknown core";
    if (auto fn = lookup<corename_fn>(handle, "openblas_get_corename")) core = fn();
    std::string why;
    if (!self_test(cand, why)) {
        std::cerr << "warning: OpenBLAS (" << core << ") failed the numerical self-test (" << why
                  << "); using Eigen-native linear algebra. Setting OPENBLAS_CORETYPE may help.\n";
        lp.description = "Eigen (native; OpenBLAS " + core + " failed self-test: " + why + ")";
        return lp;
    }
    cand.backend = Backend::OpenBLAS;
    cand.description = "OpenBLAS (" + core + ")";
    return cand;
}

const Lapack& lapack() {
    static const Lapack lp = select_backend();
    return lp;
}

bool use_blas(Eigen::Index work_dim) { return work_dim >= 48 && lapack().backend == Backend::OpenBLAS; }

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool nearly_hermitian(const CMat& m) {
    if (m.rows() != m.cols()) return false;
    const double scale = max_abs(m);
    return hermitian_defect(m) <= 1e-13 * std::max(scale, 1e-300);
}

void check_square(const CMat& m, const char* what) {
    if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + ": matrix is not square");
}

template <typename Mat>
Mat apply_op(const Mat& m, char op) {
    if (op == 'N') return m;
    if (op == 'T') return m.transpose();
    return m.adjoint();
}

RVec sym_eigen_real(RMat a, bool vectors, RMat* out) {
    if (a.rows() == 0) return RVec();
    if (use_blas(a.rows())) {
        RVec w = blas_dsyevd(lapack(), a, vectors);
        if (vectors) *out = std::move(a);
        return w;
    }
    Eigen::SelfAdjointEigenSolver<RMat> es(a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw DiagnosticsError("self-adjoint eigensolver did not converge");
    if (vectors) *out = es.eigenvectors();
    return es.eigenvalues();
}

RVec herm_eigen_complex(CMat a, bool vectors, CMat* out) {
    if (a.rows() == 0) return RVec();
    if (use_blas(a.rows())) {
        RVec w = blas_zheevd(lapack(), a, vectors);
        if (vectors) *out = std::move(a);
        return w;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw DiagnosticsError("self-adjoint eigensolver did not converge");
    if (vectors) *out = es.eigenvectors();
    return es.eigenvalues();
}

}  // namespace

Backend active_backend() { return lapack().backend; }
std::string backend_description() { return lapack().description; }

bool is_real(const CMat& m) {
    const cplx* p = m.data();
    const Eigen::Index n = m.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (p[i].imag() != 0.0) return false;
    }
    return true;
}

double hermitian_defect(const CMat& m) {
    check_square(m, "hermitian_defect");
    double worst = 0.0;
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
    return worst;
}

RMat gemm(const RMat& a, const RMat& b, char op_a, char op_b) {
    if (op_cols(a, op_a) != op_rows(b, op_b)) throw InvalidArgument("gemm: inner dimensions differ");
    const Eigen::Index work = std::max({a.rows(), a.cols(), b.cols()});
    if (use_blas(work)) return blas_gemm(lapack(), a, b, op_a, op_b);
    return apply_op(a, op_a) * apply_op(b, op_b);
}

CMat gemm(const CMat& a, const CMat& b, char op_a, char op_b) {
    if (op_cols(a, op_a) != op_rows(b, op_b)) throw InvalidArgument("gemm: inner dimensions differ");
    const Eigen::Index work = std::max({a.rows(), a.cols(), b.cols()});
    if (use_blas(work)) return blas_gemm(lapack(), a, b, op_a, op_b);
    return apply_op(a, op_a) * apply_op(b, op_b);
}

CMat Eigensystem::vectors() const {
    if (real) return real_vectors.cast<cplx>();
    return complex_vectors;
}

Eigensystem hermitian_eigen(const CMat& m) {
    check_square(m, "hermitian_eigen");
    Eigensystem e;
    if (is_real(m)) {
        RMat a = 0.5 * (m.real() + m.real().transpose());
        e.real = true;
        e.values = sym_eigen_real(std::move(a), true, &e.real_vectors);
    } else {
        CMat a = 0.5 * (m + m.adjoint());
        e.values = herm_eigen_complex(std::move(a), true, &e.complex_vectors);
    }
    return e;
}

RVec hermitian_eigenvalues(const CMat& m) {
    check_square(m, "hermitian_eigenvalues");
    if (is_real(m)) return sym_eigen_real(0.5 * (m.real() + m.real().transpose()), false, nullptr);
    return herm_eigen_complex(0.5 * (m + m.adjoint()), false, nullptr);
}

CMat reconstruct(const Eigensystem& e, const RVec& f) {
    if (e.real) {
        const RMat scaled = e.real_vectors * f.asDiagonal();
        return gemm(scaled, e.real_vectors, 'N', 'T').cast<cplx>();
    }
    const CMat scaled = e.complex_vectors * f.cast<cplx>().asDiagonal();
    return gemm(scaled, e.complex_vectors, 'N', 'C');
}

CMat reconstruct(const Eigensystem& e, const CVec& f) {
    if (e.real) {
        const RVec fr = f.real();
        const RVec fi = f.imag();
        CMat out(e.dim(), e.dim());
        out.real() = gemm(RMat(e.real_vectors * fr.asDiagonal()), e.real_vectors, 'N', 'T');
        if (fi.size() > 0 && fi.cwiseAbs().maxCoeff() != 0.0) {
            out.imag() = gemm(RMat(e.real_vectors * fi.asDiagonal()), e.real_vectors, 'N', 'T');
        } else {
            out.imag().setZero();
        }
        return out;
    }
    const CMat scaled = e.complex_vectors * f.asDiagonal();
    return gemm(scaled, e.complex_vectors, 'N', 'C');
}

RVec singular_values(const CMat& m) {
    const Eigen::Index k = std::min(m.rows(), m.cols());
    if (k == 0) return RVec();
    if (is_real(m)) {
        if (use_blas(k)) {
            RMat u, vt;
            return blas_dgesdd(lapack(), m.real(), 'N', &u, &vt);
        }
        return Eigen::BDCSVD<RMat>(m.real()).singularValues();
    }
    if (use_blas(k)) {
        CMat u, vt;
        return blas_zgesdd(lapack(), m, 'N', &u, &vt);
    }
    return Eigen::BDCSVD<CMat>(m).singularValues();
}

SVD svd(const CMat& m) {
    SVD out;
    const Eigen::Index k = std::min(m.rows(), m.cols());
    if (k == 0) {
        out.u.resize(m.rows(), 0);
        out.v.resize(m.cols(), 0);
        return out;
    }
    if (is_real(m)) {
        if (use_blas(k)) {
            RMat u, vt;
            out.s = blas_dgesdd(lapack(), m.real(), 'S', &u, &vt);
            out.u = u.cast<cplx>();
            out.v = vt.transpose().cast<cplx>();
        } else {
            Eigen::BDCSVD<RMat> sv(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
            out.s = sv.singularValues();
            out.u = sv.matrixU().cast<cplx>();
            out.v = sv.matrixV().cast<cplx>();
        }
        return out;
    }
    if (use_blas(k)) {
        CMat u, vt;
        out.s = blas_zgesdd(lapack(), m, 'S', &u, &vt);
        out.u = std::move(u);
        out.v = vt.adjoint();
    } else {
        Eigen::BDCSVD<CMat> sv(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.s = sv.singularValues();
        out.u = sv.matrixU();
        out.v = sv.matrixV();
    }
    return out;
}

CMat multiply(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner dimensions differ");
    const bool ra = is_real(a);
    const bool rb = is_real(b);
    if (ra && rb) return gemm(RMat(a.real()), RMat(b.real())).cast<cplx>();
    if (ra) {
        const RMat ar = a.real();
        CMat out(a.rows(), b.cols());
        out.real() = gemm(ar, RMat(b.real()));
        out.imag() = gemm(ar, RMat(b.imag()));
        return out;
    }
    if (rb) {
        const RMat br = b.real();
        CMat out(a.rows(), b.cols());
        out.real() = gemm(RMat(a.real()), br);
        out.imag() = gemm(RMat(a.imag()), br);
        return out;
    }
    return gemm(a, b);
}

namespace {

// The rcond estimate is not reliable once a pivot is exactly zero.
template <typename LU>
bool well_conditioned(const LU& lu) {
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (!(pivots.minCoeff() > 0.0)) return false;
    return lu.rcond() > 1e-13;
}

}  // namespace

CMat inverse(const CMat& m) {
    check_square(m, "inverse");
    if (m.rows() == 0) return m;
    if (is_real(m)) {
        Eigen::PartialPivLU<RMat> lu(m.real());
        if (!well_conditioned(lu)) throw SingularOperator("LU reciprocal condition number below 1e-13");
        return RMat(lu.inverse()).cast<cplx>();
    }
    Eigen::PartialPivLU<CMat> lu(m);
    if (!well_conditioned(lu)) throw SingularOperator("LU reciprocal condition number below 1e-13");
    return lu.inverse();
}

double lanczos_operator_norm(const CMat& m, int max_iters, double tol) {
    const Eigen::Index n = m.cols();
    if (n == 0 || m.rows() == 0) return 0.0;
    const int k_max = static_cast<int>(std::min<Eigen::Index>(max_iters, n));
    std::mt19937_64 gen(0x5eedULL);
    std::normal_distribution<double> normal;
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(gen), normal(gen));
    v.normalize();

    CMat basis(n, k_max);
    std::vector<double> alpha, beta;
    double previous = -1.0;
    double estimate = 0.0;
    for (int k = 0; k < k_max; ++k) {
        basis.col(k) = v;
        const CVec mv = m * v;
        CVec w = m.adjoint() * mv;
        alpha.push_back(std::real(v.dot(w)));
        for (int pass = 0; pass < 2; ++pass) {
            const CVec proj = basis.leftCols(k + 1).adjoint() * w;
            w -= basis.leftCols(k + 1) * proj;
        }
        const double bk = w.norm();
        const int size = k + 1;
        RMat t = RMat::Zero(size, size);
        for (int i = 0; i < size; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        estimate = Eigen::SelfAdjointEigenSolver<RMat>(t, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
        if (previous >= 0.0 && std::abs(estimate - previous) <= tol * std::max(estimate, 1e-300)) break;
        previous = estimate;
        if (bk <= 1e-14 * std::max(std::abs(estimate), 1e-300)) break;
        beta.push_back(bk);
        v = w / bk;
    }
    return std::sqrt(std::max(estimate, 0.0));
}

double operator_norm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    if (nearly_hermitian(m)) {
        const RVec w = hermitian_eigenvalues(m);
        return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
    }
    if (std::min(m.rows(), m.cols()) <= 1024) return singular_values(m)(0);
    return lanczos_operator_norm(m);
}

double trace_norm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    if (nearly_hermitian(m)) return hermitian_eigenvalues(m).cwiseAbs().sum();
    return singular_values(m).sum();
}

double hs_norm(const CMat& m) { return m.norm(); }

}  // namespace gibbs::linalg
