#include "doctest.h"
#include "oracles.hpp"

#include "gibbs/divergences.hpp"
#include "gibbs/recovery.hpp"
#include "gibbs/rng.hpp"

using namespace gibbs;

namespace {

Operator diag_state(std::initializer_list<double> p) {
    Eigen::VectorXd v(p.size());
    int i = 0;
    for (double x : p) v(i++) = x;
    Sites sup = sites_range(1, static_cast<Site>(std::log2(p.size())));
    return Operator(sup, v.cast<cplx>().asDiagonal().toDenseMatrix());
}

Operator qubit(double rx, double ry, double rz) {
    return Operator({1}, 0.5 * (pauli::I() + rx * pauli::X() + ry * pauli::Y() + rz * pauli::Z()));
}

// Reference values straight from Eigen's matrix logarithm.
double umegaki_ref(const Matrix& r, const Matrix& s) { return (r * (r.log() - s.log())).trace().real(); }

double bs_ref(const Matrix& r, const Matrix& s) {
    // Tr[rho log(sigma^{-1} rho)] evaluated through the similar matrix rho^{1/2} sigma^{-1} rho^{1/2}.
    const Matrix rh = r.sqrt();
    return (r * (rh * s.inverse() * rh).log()).trace().real();
}

}  // namespace

TEST_CASE("von Neumann entropy") {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Random(4).normalized();
    CHECK(std::abs(von_neumann_entropy(Operator({1, 2}, psi * psi.adjoint()))) <= 1e-12);
    CHECK(von_neumann_entropy(Operator::identity({1, 2, 3}) * cplx(0.125)) == doctest::Approx(std::log(8.0)));
    CHECK(von_neumann_entropy(diag_state({0.25, 0.75})) ==
          doctest::Approx(0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(von_neumann_entropy(diag_state({0.5, 0.6})), NotAState);
    CHECK_THROWS_AS(von_neumann_entropy(diag_state({1.2, -0.2})), NotAState);
}

TEST_CASE("Umegaki relative entropy") {
    const Operator r = diag_state({0.5, 0.5}), s = diag_state({0.25, 0.75});
    CHECK(umegaki(r, s) == doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)).epsilon(1e-14));
    CHECK(std::abs(umegaki(s, s)) <= 1e-14);
    for (int i = 0; i < 20; ++i) {
        const Matrix a = oracle::random_density(10 + i, 4), b = oracle::random_density(50 + i, 4);
        const Operator ra({1, 2}, a), rb({1, 2}, b);
        const double d = umegaki(ra, rb);
        CHECK(d == doctest::Approx(umegaki_ref(a, b)).epsilon(1e-9));
        const double t = trace_norm(ra - rb);
        CHECK(d >= 0.5 * t * t - 1e-12);
    }
    CHECK_THROWS_AS(umegaki(r, Operator({2}, s.matrix())), SupportMismatch);
    CHECK_THROWS_AS(umegaki(r, diag_state({1.0, 0.0})), SingularOperator);
}

TEST_CASE("BS entropy") {
    const Operator s = diag_state({0.3, 0.7});
    CHECK(std::abs(bs_entropy(s, s)) <= 1e-14);
    const Operator p = diag_state({0.6, 0.4});
    CHECK(std::abs(bs_entropy(p, s) - umegaki(p, s)) <= 1e-10);

    const Operator rho = qubit(0.5, 0, 0), sigma = qubit(0, 0, 0.5);
    const double gap = bs_entropy(rho, sigma) - umegaki(rho, sigma);
    CHECK(gap > 1e-6);
    CHECK(bs_entropy(rho, sigma) == doctest::Approx(bs_ref(rho.matrix(), sigma.matrix())).epsilon(1e-10));
    CHECK(umegaki(rho, sigma) == doctest::Approx(umegaki_ref(rho.matrix(), sigma.matrix())).epsilon(1e-10));

    for (int i = 0; i < 20; ++i) {
        const Matrix a = oracle::random_density(70 + i, 8), b = oracle::random_density(90 + i, 8);
        const Operator ra({1, 2, 3}, a), rb({1, 2, 3}, b);
        CHECK(bs_entropy(ra, rb) == doctest::Approx(bs_ref(a, b)).epsilon(1e-9));
        CHECK(bs_entropy(ra, rb) >= umegaki(ra, rb) - 1e-12);
    }
}

TEST_CASE("geometric Renyi") {
    const Operator p = diag_state({0.6, 0.4}), q = diag_state({0.3, 0.7});
    CHECK(geometric_renyi(p, q, 2.0) == doctest::Approx(std::log(0.36 / 0.3 + 0.16 / 0.7)).epsilon(1e-14));
    CHECK(std::abs(geometric_renyi(q, q, 1.7)) <= 1e-14);
    CHECK_THROWS_AS(geometric_renyi(p, q, 1.0), InvalidOrder);
    CHECK_THROWS_AS(geometric_renyi(p, q, std::vector<double>{2.0, 0.5}), InvalidOrder);

    const Operator rho = qubit(0.3, -0.2, 0.4), sigma = qubit(-0.1, 0.5, 0.2);
    const double bs = bs_entropy(rho, sigma);
    const std::vector<double> qs{1.001, 1.01, 1.1, 1.5, 2.0};
    const auto vals = geometric_renyi(rho, sigma, qs);
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1] - 1e-12);
    CHECK(std::abs(vals[0] - bs) <= 1e-3);
    CHECK(vals[0] >= bs - 1e-12);
}

TEST_CASE("operator-norm upper bound") {
    const Operator r = diag_state({0.5, 0.5}), s = diag_state({0.25, 0.75});
    CHECK(upper_bound_norm(r, s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(upper_bound_norm(s, s)) <= 1e-14);
    for (int i = 0; i < 20; ++i) {
        const Operator a({1, 2}, oracle::random_density(200 + i, 4)), b({1, 2}, oracle::random_density(300 + i, 4));
        CHECK(upper_bound_norm(a, b) >= geometric_renyi(a, b, 2.0) - 1e-9);
    }
}

TEST_CASE("divergence report and unitary invariance") {
    for (int i = 0; i < 10; ++i) {
        const Matrix a = oracle::random_density(400 + i, 4), b = oracle::random_density(500 + i, 4);
        const Operator ra({1, 2}, a), rb({1, 2}, b);
        const DivergenceReport rep = divergence_report(ra, rb);
        CHECK(rep.chain_holds());
        double last = rep.bs;
        for (const auto& [q, v] : rep.geometric_renyi) {
            CHECK(v >= last - 1e-12);
            last = v;
        }
        auto gen = make_stream(i, {3});
        const Matrix u = random_unitary(gen, 4);
        const Operator ua({1, 2}, u * a * u.adjoint()), ub({1, 2}, u * b * u.adjoint());
        const DivergenceReport rot = divergence_report(ua, ub);
        CHECK(rot.umegaki == doctest::Approx(rep.umegaki).epsilon(1e-9));
        CHECK(rot.bs == doctest::Approx(rep.bs).epsilon(1e-9));
        CHECK(rot.upper_bound_norm == doctest::Approx(rep.upper_bound_norm).epsilon(1e-9));
        for (const auto& [q, v] : rep.geometric_renyi) CHECK(rot.geometric_renyi.at(q) == doctest::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("mutual information family on Gibbs states") {
    const GibbsEnsemble g(preset_model("tfim:g=1"), Interval(1, 6), 1.0);
    const Sites a{1}, c{6};
    const double i = mutual_information(g, a, c), bi = bs_mutual_information(g, a, c);
    const double gi = geometric_renyi_mi(g, a, c, 2.0), nb = mi_upper_bound_norm(g, a, c);
    CHECK(i <= bi + 1e-9);
    CHECK(bi <= gi + 1e-9);
    CHECK(gi <= nb + 1e-9);
    CHECK(i > 0.0);

    // Entropy route vs the relative-entropy route.
    const Operator rac = g.reduced_state({1, 6});
    const Operator prod = tensor(g.reduced_state(a), g.reduced_state(c));
    CHECK(i == doctest::Approx(umegaki(rac, prod)).epsilon(1e-10));

    const MutualInformationReport rep = mutual_information_report(g.state(), a, c, {1.5, 2.0});
    CHECK(rep.mi == doctest::Approx(i).epsilon(1e-12));
    CHECK(rep.bs_mi == doctest::Approx(bi).epsilon(1e-12));
    CHECK(rep.geometric_renyi_mi.at(2.0) == doctest::Approx(gi).epsilon(1e-12));
    CHECK(rep.norm_bound == doctest::Approx(nb).epsilon(1e-12));
    CHECK(rep.trace_distance == doctest::Approx(trace_distance_product(g, a, c)).epsilon(1e-12));

    // A product Hamiltonian gives zero for every member.
    const Interaction field(std::string("field"), 2, std::vector<InteractionTemplate>{{1, 0.7 * pauli::X()}});
    const GibbsEnsemble p(field, Interval(1, 4), 1.0);
    CHECK(std::abs(mutual_information(p, {1}, {4})) <= 1e-10);
    CHECK(std::abs(bs_mutual_information(p, {1}, {4})) <= 1e-10);
}

TEST_CASE("BS mutual information dominates mutual information on random Gibbs states") {
    for (int i = 0; i < 50; ++i) {
        const GibbsEnsemble g(preset_model("random_nn:seed=" + std::to_string(i)), Interval(1, 3 + i % 3), 0.5 + 0.05 * i);
        const Sites a{1}, c{g.interval().hi};
        CHECK(bs_mutual_information(g, a, c) >= mutual_information(g, a, c) - 1e-9);
    }
}

TEST_CASE("conditional mutual information") {
    const GibbsEnsemble g(preset_model("tfim:g=1"), Interval(1, 6), 1.0);
    const Sites a{1, 2}, b{3, 4}, c{5, 6};
    const double cmi = conditional_mutual_information(g, a, b, c);
    CHECK(cmi >= -1e-9);
    CHECK(cmi <= mutual_information(g, a, sites_union(b, c)) + 1e-9);

    const Interaction field(std::string("field"), 2, std::vector<InteractionTemplate>{{1, 0.5 * pauli::Z()}});
    const GibbsEnsemble p(field, Interval(1, 3), 1.0);
    CHECK(std::abs(conditional_mutual_information(p, {1}, {2}, {3})) <= 1e-12);
    CHECK(std::abs(conditional_mutual_information(p, {1}, {}, {3})) <= 1e-12);
    for (int i = 0; i < 10; ++i) {
        const GibbsEnsemble r(preset_model("random_range_r:r=3;seed=" + std::to_string(i)), Interval(1, 5), 1.0);
        CHECK(conditional_mutual_information(r, {1}, {2, 3}, {4, 5}) >= -1e-9);
    }
}

TEST_CASE("the full inequality chain on random Gibbs states") {
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const char* models[] = {"random_nn", "random_range_r", "tfim", "heisenberg"};
        std::string spec = models[i % 4];
        if (i % 4 == 0) spec += ":seed=" + std::to_string(i);
        if (i % 4 == 1) spec += ":r=2;seed=" + std::to_string(i);
        if (i % 4 == 2) spec += ":g=" + std::to_string(0.3 + 0.05 * (i % 20));
        if (i % 4 == 3) spec += ":h=" + std::to_string(0.1 * (i % 7));
        const int n = 2 + i % 5;
        const GibbsEnsemble g(preset_model(spec), Interval(1, n), 0.4 + 0.1 * (i % 9));
        const Sites a{1}, c{n};
        const CorrResult corr = covariance_correlation(g, a, c, {4, 100, 1e-10, static_cast<std::uint64_t>(i)});
        const MutualInformationReport r = mutual_information_report(g.state(), a, c, {2.0});
        const double chain[] = {0.5 * corr.value * corr.value, 0.5 * r.trace_distance * r.trace_distance, r.mi, r.bs_mi,
                                r.geometric_renyi_mi.at(2.0), r.norm_bound};
        for (int k = 0; k + 1 < 6; ++k) CHECK(chain[k] <= chain[k + 1] + 1e-9);
        ++checked;
    }
    CHECK(checked == 100);
}
