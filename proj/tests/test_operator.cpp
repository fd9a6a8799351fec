#include "doctest.h"
#include "oracles.hpp"

#include "gibbs/hamiltonian.hpp"
#include "gibbs/operator.hpp"
#include "gibbs/rng.hpp"

using namespace gibbs;
using oracle::kron;

namespace {

double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

}  // namespace

TEST_CASE("hilbert_dim enforces the dense cap") {
    CHECK(hilbert_dim(2, 14) == 16384);
    CHECK_THROWS_AS(hilbert_dim(2, 15), DimensionOverflow);
    CHECK_THROWS_AS(hilbert_dim(3, 9), DimensionOverflow);
}

TEST_CASE("operator construction validates support and dimension") {
    CHECK_THROWS_AS(Operator({2, 1}, Matrix::Identity(4, 4)), InvalidArgument);
    CHECK_THROWS_AS(Operator({1, 2}, Matrix::Identity(2, 2)), InvalidArgument);
    const Operator s;
    CHECK(s.dim() == 1);
    CHECK(s.trace() == cplx(1.0));
}

TEST_CASE("embed pads with identities in ascending site order") {
    const Operator z1 = Operator::on_site(1, pauli::Z());
    CHECK(dist(embed(z1, Interval(1, 2)).matrix(), kron(oracle::Z(), oracle::I2())) == 0.0);

    const Operator q({1, 2}, oracle::random_matrix(3, 4, 4));
    CHECK(dist(embed(q, Interval(1, 2)).matrix(), q.matrix()) == 0.0);

    // |010> -> |000> for X on the middle site, by explicit index arithmetic.
    const Matrix m = embed(Operator::on_site(2, pauli::X()), Interval(1, 3)).matrix();
    Eigen::VectorXcd e010 = Eigen::VectorXcd::Zero(8);
    e010(0b010) = 1.0;
    const Eigen::VectorXcd out = m * e010;
    CHECK(std::abs(out(0b000) - 1.0) == 0.0);
    CHECK(out.norm() == doctest::Approx(1.0));
    CHECK(dist(m, kron({oracle::I2(), oracle::X(), oracle::I2()})) == 0.0);

    // Non-contiguous supports and negative sites.
    const Operator y({-1, 1}, kron(oracle::Y(), oracle::Z()));
    CHECK(dist(embed(y, Interval(-1, 1)).matrix(), kron({oracle::Y(), oracle::I2(), oracle::Z()})) == 0.0);

    CHECK_THROWS_AS(embed(z1, Interval(2, 3)), SupportNotContained);
}

TEST_CASE("compose aligns supports") {
    const Operator x1 = Operator::on_site(1, pauli::X());
    const Operator z1 = Operator::on_site(1, pauli::Z());
    const Operator x2 = Operator::on_site(2, pauli::X());
    CHECK(dist(compose(z1, x2).matrix(), kron(oracle::Z(), oracle::X())) == 0.0);
    // X Z = -i Y by hand.
    CHECK(dist(compose(x1, z1).matrix(), cplx(0, -1) * oracle::Y()) <= 1e-15);

    auto gen = make_stream(4, {});
    const Operator q({1, 2}, random_density(gen, 4));
    const Operator qinv = inverse(q);
    CHECK(dist(compose(q, qinv).matrix(), Matrix::Identity(4, 4)) <= 1e-12);

    // Overlapping supports against Kronecker oracles.
    const Matrix a = oracle::random_matrix(11, 4, 4), b = oracle::random_matrix(12, 4, 4);
    const Operator oa({1, 2}, a), ob({2, 3}, b);
    const Matrix ref = kron(a, oracle::I2()) * kron(oracle::I2(), b);
    CHECK(dist(compose(oa, ob).matrix(), ref) <= 1e-13);
    const Operator oc({3}, oracle::random_matrix(13, 2, 2));
    const Matrix ref3 = ref * kron({oracle::I2(), oracle::I2(), oc.matrix()});
    CHECK(dist(compose({&oa, &ob, &oc}).matrix(), ref3) <= 1e-13);

    // Large enough that the product goes through the BLAS path.
    const Operator big1({1, 2, 3, 4, 5, 6, 7}, oracle::random_matrix(21, 128, 128));
    const Operator big2({3, 4, 5, 6, 7, 8}, oracle::random_matrix(22, 64, 64));
    const Matrix rbig = kron(big1.matrix(), oracle::I2()) * kron(Matrix::Identity(4, 4), big2.matrix());
    CHECK(dist(compose(big1, big2).matrix(), rbig) <= 1e-12 * rbig.norm());
}

TEST_CASE("partial trace against the brute-force oracle") {
    const Matrix m = oracle::random_matrix(5, 16, 16);
    const Operator op({1, 2, 3, 4}, m);
    for (const Sites& traced : std::vector<Sites>{{1}, {2}, {4}, {1, 3}, {2, 3}, {1, 2, 3, 4}}) {
        std::vector<int> pos;
        for (Site s : traced) pos.push_back(s - 1);
        CHECK(dist(partial_trace(op, traced).matrix(), oracle::partial_trace(m, 4, pos)) <= 1e-13);
    }
    CHECK(partial_trace(Operator::identity({1, 2, 3}), {1, 2, 3}).trace() == cplx(8.0));
    CHECK_THROWS_AS(partial_trace(op, {5}), SiteNotInSupport);

    // Product factorization and the Bell-state marginal.
    auto gen = make_stream(6, {});
    const Operator ra({1}, random_density(gen, 2)), rb({2}, random_density(gen, 2));
    CHECK(dist(partial_trace(tensor(ra, rb), {2}).matrix(), ra.matrix()) <= 1e-15);
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const Operator bell({1, 2}, phi * phi.adjoint());
    CHECK(dist(partial_trace(bell, {2}).matrix(), 0.5 * Matrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("partial trace undoes embedding up to the dimension factor") {
    const Operator q({2, 3}, oracle::random_matrix(8, 4, 4));
    const Operator e = embed(q, Interval(1, 5));
    CHECK(dist(partial_trace(e, {1, 4, 5}).matrix(), 8.0 * q.matrix()) <= 1e-12);
}

TEST_CASE("conditional expectation") {
    CHECK(dist(conditional_expectation(Operator::identity({1, 2, 3}), {2}).matrix(), Matrix::Identity(2, 2)) == 0.0);
    const Operator zz({1, 2}, kron(oracle::Z(), oracle::Z()));
    CHECK(conditional_expectation(zz, {1}).matrix().norm() == 0.0);
    for (int i = 0; i < 100; ++i) {
        const Matrix m = oracle::random_matrix(300 + i, 8, 8);
        const Operator q({1, 2, 3}, m);
        const Sites kept = i % 2 ? Sites{1} : Sites{1, 3};
        const Operator e = conditional_expectation(q, kept);
        std::vector<int> pos = i % 2 ? std::vector<int>{1, 2} : std::vector<int>{1};
        CHECK(dist(e.matrix(), oracle::partial_trace(m, 3, pos) / std::pow(2.0, pos.size())) <= 1e-13);
        CHECK(operator_norm(e) <= operator_norm(q) + 1e-12);
        CHECK(dist(conditional_expectation(embed(e, q.support()), kept).matrix(), e.matrix()) <= 1e-13);
    }
}

TEST_CASE("Russo-Dye: tr(rho Q) over part of a Gibbs state is contractive") {
    const GibbsEnsemble g(preset_model("tfim:g=0.8"), Interval(1, 4), 1.0);
    for (int i = 0; i < 20; ++i) {
        const Operator q({1, 2, 3, 4}, oracle::random_matrix(40 + i, 16, 16));
        const Operator p = partial_trace(compose(g.state(), q), {3, 4});
        CHECK(operator_norm(p) <= operator_norm(q) + 1e-12);
    }
}

TEST_CASE("trace_product matches the trace of the composed operators") {
    const Operator a({1, 2}, oracle::random_matrix(1, 4, 4)), b({2, 3, 4}, oracle::random_matrix(2, 8, 8));
    CHECK(std::abs(trace_product(a, b) - compose(a, b).trace()) <= 1e-12);
    const Operator c({5}, oracle::random_matrix(3, 2, 2));
    CHECK(std::abs(trace_product(a, c) - compose(a, c).trace()) <= 1e-12);
}

TEST_CASE("matrix functions") {
    CHECK(dist(matrix_function(Operator::zero({1, 2}), ScalarFunction::exp()).matrix(), Matrix::Identity(4, 4)) <= 1e-15);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 4;
    Matrix sq = Matrix::Zero(2, 2);
    sq(0, 0) = 1;
    sq(1, 1) = 2;
    CHECK(dist(matrix_function(Operator({1}, d), ScalarFunction::sqrt()).matrix(), sq) <= 1e-15);

    const Operator rho({1, 2}, oracle::random_density(9, 4));
    const Operator back = matrix_function(matrix_function(rho, ScalarFunction::log()), ScalarFunction::exp());
    CHECK(dist(back.matrix(), rho.matrix()) <= 1e-10);

    for (int i = 0; i < 10; ++i) {
        const Matrix h = oracle::random_hermitian(70 + i, 16);
        const Operator op({1, 2, 3, 4}, h);
        CHECK(dist(matrix_function(op, ScalarFunction::exp()).matrix(), oracle::expm(h)) <= 1e-9 * oracle::expm(h).norm());
        const cplx s(0.3, -0.7);
        CHECK(dist(matrix_function(op, ScalarFunction::complex_exp(s)).matrix(), oracle::expm(s * h)) <=
              1e-9 * oracle::expm(s * h).norm());
    }
    const Operator pos({1}, oracle::random_density(3, 2));
    CHECK(dist(matrix_function(pos, ScalarFunction::power(3.0)).matrix(), pos.matrix() * pos.matrix() * pos.matrix()) <= 1e-14);
    CHECK(dist(matrix_function(pos, ScalarFunction::inv()).matrix() * pos.matrix(), Matrix::Identity(2, 2)) <= 1e-12);

    CHECK_THROWS_AS(matrix_function(Operator({1}, oracle::random_matrix(1, 2, 2)), ScalarFunction::exp()), NotHermitian);
    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(matrix_function(Operator({1}, singular), ScalarFunction::log()), SingularOperator);
    CHECK_THROWS_AS(matrix_function(Operator({1}, singular), ScalarFunction::inv()), SingularOperator);
}

TEST_CASE("spectral decomposition invariants") {
    const Operator h({1, 2, 3}, oracle::random_hermitian(5, 8));
    const SpectralDecomposition s = spectral_decomposition(h);
    const Matrix u = s.eigenvectors();
    CHECK(dist(u.adjoint() * u, Matrix::Identity(8, 8)) <= 1e-10);
    CHECK(dist(u * s.eigenvalues().cast<cplx>().asDiagonal() * u.adjoint(), h.matrix()) <= 1e-10 * h.matrix().norm());
}

TEST_CASE("norms of identities, the Bell example, and inequalities") {
    for (int k = 1; k <= 4; ++k) {
        const Operator id = Operator::identity(sites_range(1, k));
        CHECK(operator_norm(id) == doctest::Approx(1.0));
        CHECK(trace_norm(id) == doctest::Approx(std::pow(2.0, k)));
        CHECK(hs_norm(id) == doctest::Approx(std::pow(2.0, k / 2.0)));
    }
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const Operator m({1, 2}, phi * phi.adjoint() - 0.25 * Matrix::Identity(4, 4));
    CHECK(trace_norm(m) == doctest::Approx(1.5).epsilon(1e-14));

    for (int i = 0; i < 20; ++i) {
        const Matrix a = oracle::random_matrix(500 + i, 8, 8), b = oracle::random_matrix(600 + i, 8, 8);
        const Operator oa({1, 2, 3}, a), ob({1, 2, 3}, b);
        const double sv0 = oracle::op_norm(a);
        CHECK(operator_norm(oa) == doctest::Approx(sv0).epsilon(1e-12));
        CHECK(operator_norm(oa) <= trace_norm(oa) + 1e-12);
        CHECK(trace_norm(oa) <= 8 * operator_norm(oa) + 1e-12);
        CHECK(operator_norm(oa + ob) <= operator_norm(oa) + operator_norm(ob) + 1e-12);
        CHECK(trace_norm(oa + ob) <= trace_norm(oa) + trace_norm(ob) + 1e-12);
        CHECK(hs_norm(oa + ob) <= hs_norm(oa) + hs_norm(ob) + 1e-12);
        CHECK(operator_norm(compose(oa, ob)) <= operator_norm(oa) * operator_norm(ob) + 1e-12);
    }
}

TEST_CASE("site-set helpers") {
    CHECK(sites_union({1, 3}, {2, 3}) == Sites{1, 2, 3});
    CHECK(sites_intersection({1, 3}, {2, 3}) == Sites{3});
    CHECK(sites_difference({1, 2, 3}, {2}) == Sites{1, 3});
    CHECK(sites_subset({1, 3}, {1, 2, 3}));
    CHECK(sites_range(2, 1).empty());
}
