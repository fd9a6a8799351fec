#include "doctest.h"
#include "oracles.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/linalg.hpp"

using namespace gibbs::linalg;

TEST_CASE("backend is reported") {
    const std::string d = backend_description();
    CHECK(!d.empty());
    if (active_backend() == Backend::OpenBLAS) CHECK(d.find("OpenBLAS") != std::string::npos);
}

TEST_CASE("gemm matches a naive triple loop in every op combination") {
    for (long n : {3L, 70L, 130L}) {
        const oracle::Mat a = oracle::random_matrix(n, n, n + 5);
        const oracle::Mat b = oracle::random_matrix(n + 1, n + 5, n);
        for (char oa : {'N', 'T', 'C'}) {
            const oracle::Mat opa = oa == 'N' ? oracle::Mat(a) : oa == 'T' ? oracle::Mat(a.transpose()) : oracle::Mat(a.adjoint());
            const oracle::Mat bb = oracle::random_matrix(n + 2, opa.cols(), n + 3);
            oracle::Mat ref = oracle::Mat::Zero(opa.rows(), bb.cols());
            for (long i = 0; i < ref.rows(); ++i)
                for (long j = 0; j < ref.cols(); ++j)
                    for (long k = 0; k < opa.cols(); ++k) ref(i, j) += opa(i, k) * bb(k, j);
            CHECK((gemm(a, bb, oa, 'N') - ref).norm() <= 1e-12 * ref.norm());
            const RMat ar = a.real(), br = bb.real();
            const RMat rref = (oa == 'N' ? RMat(ar) : RMat(ar.transpose())) * br;
            CHECK((gemm(ar, br, oa, 'N') - rref).norm() <= 1e-12 * rref.norm());
        }
        (void)b;
    }
}

TEST_CASE("hermitian_eigen reconstructs and is orthonormal") {
    for (long n : {1L, 4L, 60L, 150L}) {
        const CMat h = oracle::random_hermitian(n, n);
        const Eigensystem e = hermitian_eigen(h);
        const CMat u = e.vectors();
        CHECK((u.adjoint() * u - CMat::Identity(n, n)).norm() <= 1e-10 * n);
        CHECK((reconstruct(e, e.values) - h).norm() <= 1e-10 * h.norm());
        CHECK((e.values - oracle::eigvalsh(h)).norm() <= 1e-10 * h.norm());
        for (long i = 1; i < n; ++i) CHECK(e.values(i) >= e.values(i - 1));
        const CMat hr = h.real().cast<cplx>();
        const Eigensystem er = hermitian_eigen(hr);
        CHECK(er.real);
        CHECK((reconstruct(er, er.values) - hr).norm() <= 1e-10 * hr.norm());
    }
}

TEST_CASE("reconstruct with complex weights on a real eigensystem") {
    const CMat h = oracle::random_hermitian(9, 50).real().cast<cplx>();
    const Eigensystem e = hermitian_eigen(h);
    const CVec f = (cplx(0, 0.3) * e.values.cast<cplx>()).array().exp();
    CHECK((reconstruct(e, f) - oracle::expm(cplx(0, 0.3) * h)).norm() <= 1e-10 * std::sqrt(50.0));
}

TEST_CASE("singular values and svd agree with JacobiSVD") {
    for (auto [r, c] : std::vector<std::pair<long, long>>{{5, 3}, {64, 64}, {90, 120}}) {
        const CMat m = oracle::random_matrix(r * c, r, c);
        const RVec ref = Eigen::JacobiSVD<CMat>(m).singularValues();
        CHECK((singular_values(m) - ref).norm() <= 1e-11 * ref(0));
        const SVD s = svd(m);
        CHECK((s.u * s.s.cast<cplx>().asDiagonal() * s.v.adjoint() - m).norm() <= 1e-11 * m.norm());
        const CMat mr = m.real().cast<cplx>();
        const SVD sr = svd(mr);
        CHECK((sr.u * sr.s.cast<cplx>().asDiagonal() * sr.v.adjoint() - mr).norm() <= 1e-11 * mr.norm());
    }
}

TEST_CASE("norms") {
    for (int i = 0; i < 20; ++i) {
        const CMat m = oracle::random_matrix(100 + i, 6, 6);
        const double op = operator_norm(m), tr = trace_norm(m);
        CHECK(op == doctest::Approx(oracle::op_norm(m)).epsilon(1e-12));
        CHECK(tr == doctest::Approx(oracle::trace_norm(m)).epsilon(1e-12));
        CHECK(op <= tr + 1e-12);
        CHECK(tr <= 6 * op + 1e-12);
    }
    const CMat big = oracle::random_matrix(7, 1100, 1100);
    CHECK(lanczos_operator_norm(big) == doctest::Approx(singular_values(big)(0)).epsilon(1e-9));
}

TEST_CASE("inverse rejects singular input") {
    CMat m = CMat::Zero(3, 3);
    m(0, 0) = 1;
    CHECK_THROWS_AS(inverse(m), gibbs::SingularOperator);
    const CMat h = oracle::random_density(3, 8);
    CHECK((inverse(h) * h - CMat::Identity(8, 8)).norm() <= 1e-10);
}

TEST_CASE("multiply covers mixed real and complex factors") {
    const CMat a = oracle::random_matrix(1, 70, 60), b = oracle::random_matrix(2, 60, 50);
    const CMat ar = a.real().cast<cplx>(), br = b.real().cast<cplx>();
    CHECK((multiply(a, b) - a * b).norm() <= 1e-12 * (a * b).norm());
    CHECK((multiply(ar, b) - ar * b).norm() <= 1e-12 * (ar * b).norm());
    CHECK((multiply(a, br) - a * br).norm() <= 1e-12 * (a * br).norm());
    CHECK((multiply(ar, br) - ar * br).norm() <= 1e-12 * (ar * br).norm());
}
