#include "doctest.h"
#include "oracles.hpp"

#include "gibbs/araki.hpp"
#include "gibbs/hamiltonian.hpp"

using namespace gibbs;
using oracle::kron;

TEST_CASE("complex time evolution") {
    const Operator h({1}, pauli::Z()), q({1}, pauli::X());
    CHECK((complex_time_evolution(h, q, 0.0).matrix() - q.matrix()).norm() <= 1e-15);
    // s = i: e^{-Z} X e^{Z}; the (0,1) entry is e^{-1} * 1 * e^{-1}.
    const Matrix g = complex_time_evolution(h, q, cplx(0, 1)).matrix();
    CHECK(std::abs(g(0, 1) - std::exp(-2.0)) <= 1e-15);
    CHECK(std::abs(g(1, 0) - std::exp(2.0)) <= 1e-13);

    const GibbsEnsemble e(preset_model("tfim:g=1"), Interval(1, 4), 1.0);
    const Operator z1 = Operator::on_site(1, pauli::Z());
    for (double s : {0.3, -0.9, 1.0}) {
        const Operator ev = complex_time_evolution(e.hamiltonian(), z1, s);
        CHECK(operator_norm(ev) == doctest::Approx(1.0).epsilon(1e-10));
        const Matrix u = oracle::expm(cplx(0, s) * e.hamiltonian().matrix());
        const Matrix ref = u * embed(z1, e.interval()).matrix() * u.adjoint();
        CHECK((ev.matrix() - ref).norm() <= 1e-10);
    }
}

TEST_CASE("expansional against dense exponentials") {
    const Interaction ising = preset_model("ising_zz");
    const Expansional e = expansional(ising, Interval(1, 1), Interval(2, 2));
    const Matrix ref = oracle::expm(-kron(oracle::Z(), oracle::Z()));
    CHECK((e.value.matrix() - ref).norm() <= 1e-12);

    const Interaction tfim = preset_model("tfim:g=0.8");
    const Interval x(-1, 0), y(1, 2);
    for (cplx s : default_s_grid()) {
        const Expansional ex = expansional(tfim, x, y, s);
        const Matrix hxy = build_hamiltonian(tfim, Interval(-1, 2)).matrix();
        const Matrix hx = embed(build_hamiltonian(tfim, x), Interval(-1, 2)).matrix();
        const Matrix hy = embed(build_hamiltonian(tfim, y), Interval(-1, 2)).matrix();
        const Matrix dense = oracle::expm(-s * hxy) * oracle::expm(s * (hx + hy));
        CHECK((ex.value.matrix() - dense).norm() <= 1e-10 * dense.norm());
        CHECK((ex.value.matrix() * ex.inverse.matrix() - Matrix::Identity(16, 16)).norm() <= 1e-9);
    }
    CHECK((expansional(tfim, x, y, 0.0).value.matrix() - Matrix::Identity(16, 16)).norm() == 0.0);

    // Single-site interaction: the split is exact.
    const Interaction field(std::string("field"), 2, std::vector<InteractionTemplate>{{1, pauli::X()}});
    CHECK((expansional(field, x, y).value.matrix() - Matrix::Identity(16, 16)).norm() <= 1e-12);
}

TEST_CASE("theta and xi") {
    const Interaction tfim = preset_model("tfim:g=1");
    const Interval x(1, 2), y(3, 3);
    const Matrix hxy = build_hamiltonian(tfim, Interval(1, 3)).matrix();
    const Matrix hx = embed(build_hamiltonian(tfim, x), Interval(1, 3)).matrix();
    const Matrix hy = embed(build_hamiltonian(tfim, y), Interval(1, 3)).matrix();
    const Matrix ref = oracle::expm(0.5 * hxy) * oracle::expm(-0.5 * (hx + hy));
    CHECK((theta(tfim, x, y).matrix() - ref).norm() <= 1e-10);
    CHECK((xi(tfim, x, y).matrix() - ref.adjoint()).norm() <= 1e-10);
}

TEST_CASE("expansional bound report") {
    const ExpansionalBoundReport zero = expansional_bound_report(preset_model("zero"), 3, default_s_grid());
    for (const auto& r : zero.rows) {
        CHECK(r.norm == doctest::Approx(1.0));
        CHECK(r.inverse_norm == doctest::Approx(1.0));
        CHECK(r.difference <= 1e-14);
    }

    const ExpansionalBoundReport rep = expansional_bound_report(preset_model("tfim:g=1"), 4, {cplx(1.0)});
    REQUIRE(rep.rows.size() == 4);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].n == static_cast<int>(i) + 1);
        CHECK(rep.rows[i].norm <= rep.empirical_bound);
        if (i > 0) CHECK(rep.rows[i].difference < rep.rows[i - 1].difference);
    }
    CHECK(!rep.note.empty());
    CHECK_THROWS_AS(expansional_bound_report(preset_model("tfim"), 8, {cplx(1.0)}), DimensionOverflow);
}

TEST_CASE("tail decomposition telescopes") {
    const Interaction tfim = preset_model("tfim:g=1");
    const TailDecomposition one = tail_decomposition(tfim, Interval(0, 0), Interval(1, 1));
    CHECK(one.terms.size() == 1);
    const TailDecomposition t = tail_decomposition(tfim, Interval(-3, 0), Interval(1, 4));
    REQUIRE(t.terms.size() == 4);
    Operator sum = t.terms.front();
    for (std::size_t i = 1; i < t.terms.size(); ++i) sum += t.terms[i];
    const Expansional full = expansional(tfim, Interval(-3, 0), Interval(1, 4));
    CHECK((sum.matrix() - full.value.matrix()).norm() <= 1e-9 * full.value.matrix().norm());
    CHECK(t.partial_sum_errors.back() <= 1e-9);
    for (std::size_t n = 2; n < t.term_norms.size(); ++n) CHECK(t.term_norms[n] < t.term_norms[n - 1]);
}

TEST_CASE("distance to a local subalgebra") {
    const Operator zz({1, 2}, kron(oracle::Z(), oracle::Z()));
    CHECK(local_distance_upper(zz, Interval(1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    const Operator local({1}, oracle::random_hermitian(3, 2));
    CHECK(local_distance_upper(embed(local, Interval(1, 3)), Interval(1, 1)) <= 1e-14);

    // ||Q - E_I(Q)|| <= 2 ||Q - P|| for every P supported in I.
    for (int i = 0; i < 20; ++i) {
        const Operator q({1, 2, 3}, oracle::random_matrix(10 + i, 8, 8));
        const double d = local_distance_upper(q, Interval(1, 2));
        for (int j = 0; j < 10; ++j) {
            const Operator p({1, 2}, oracle::random_matrix(100 * i + j, 4, 4));
            CHECK(d <= 2.0 * operator_norm(q - p) + 1e-10);
        }
    }
}

TEST_CASE("locality of inverses of positive operators") {
    for (int i = 0; i < 10; ++i) {
        const Matrix m = oracle::random_density(30 + i, 8) + 0.2 * Matrix::Identity(8, 8);
        const Operator q({1, 2, 3}, m);
        const Operator qi = inverse(q);
        const double n = operator_norm(qi);
        CHECK(local_distance_upper(qi, Interval(1, 2)) <= 4.0 * n * n * local_distance_upper(q, Interval(1, 2)) + 1e-9);
    }
}

TEST_CASE("complex-time evolution stays bounded as the chain grows") {
    const Interaction tfim = preset_model("tfim:g=1");
    const Operator z = Operator::on_site(0, pauli::Z());
    std::vector<double> norms;
    for (int m = 2; m <= 5; ++m) {
        const Operator h = build_hamiltonian(tfim, Interval(-m, m));
        norms.push_back(operator_norm(complex_time_evolution(h, z, cplx(0, 0.5))));
    }
    for (std::size_t i = 1; i < norms.size(); ++i) CHECK(std::abs(norms[i] - norms[i - 1]) <= 0.05 * norms[0]);
}
