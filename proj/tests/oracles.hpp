#pragma once

// Reference computations for the unit tests. Everything here is written
// directly against Eigen with explicit index loops, independent of the
// library's own kernels.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat I2() { return Mat::Identity(2, 2); }
inline Mat X() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat Y() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Mat Z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline Mat kron(std::initializer_list<Mat> factors) {
    Mat out = Mat::Identity(1, 1);
    for (const auto& f : factors) out = kron(out, f);
    return out;
}

// Trace over the factors at `traced` positions (0 = most significant) of a
// matrix on `sites` qubits, by explicit loops over basis labels.
inline Mat partial_trace(const Mat& m, int sites, const std::vector<int>& traced) {
    std::vector<bool> is_traced(sites, false);
    for (int t : traced) is_traced[t] = true;
    const int kept = sites - static_cast<int>(traced.size());
    const long dim = 1L << sites;
    Mat out = Mat::Zero(1L << kept, 1L << kept);
    auto bit = [&](long idx, int pos) { return (idx >> (sites - 1 - pos)) & 1L; };
    auto kept_index = [&](long idx) {
        long k = 0;
        for (int p = 0; p < sites; ++p) {
            if (!is_traced[p]) k = (k << 1) | bit(idx, p);
        }
        return k;
    };
    for (long r = 0; r < dim; ++r) {
        for (long c = 0; c < dim; ++c) {
            bool diag = true;
            for (int p = 0; p < sites && diag; ++p) {
                if (is_traced[p] && bit(r, p) != bit(c, p)) diag = false;
            }
            if (diag) out(kept_index(r), kept_index(c)) += m(r, c);
        }
    }
    return out;
}

// Scaling-and-squaring Pade exponential (Eigen's MatrixFunctions module).
inline Mat expm(const Mat& m) { return m.exp(); }

inline Mat random_matrix(std::uint64_t seed, long rows, long cols) {
    std::srand(static_cast<unsigned>(seed * 2654435761u + 1));
    return Mat::Random(rows, cols);
}

inline Mat random_hermitian(std::uint64_t seed, long dim) {
    const Mat g = random_matrix(seed, dim, dim);
    return 0.5 * (g + g.adjoint());
}

inline Mat random_density(std::uint64_t seed, long dim) {
    const Mat g = random_matrix(seed, dim, dim);
    Mat r = g * g.adjoint() + 1e-3 * Mat::Identity(dim, dim);
    return r / r.trace();
}

inline Eigen::VectorXd eigvalsh(const Mat& m) { return Eigen::SelfAdjointEigenSolver<Mat>(m).eigenvalues(); }

inline double trace_norm(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues().sum(); }
inline double op_norm(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues()(0); }

// max |Tr[(O_1 (x) O_2) D]| over unit-norm Hermitian qubit observables on a
// Bloch grid of resolution `step` in both angles. The extreme points of the
// unit ball are +-1 and n.sigma, so the grid includes both.
inline double bloch_grid_max(const Mat& d, double step) {
    const Mat paulis[4] = {I2(), X(), Y(), Z()};
    double t[4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i][j] = (kron(paulis[i], paulis[j]) * d).trace().real();
    std::vector<std::array<double, 4>> dirs{{1, 0, 0, 0}, {-1, 0, 0, 0}};
    const double pi = 3.14159265358979323846;
    const int nt = static_cast<int>(std::lround(pi / step));
    for (int a = 0; a <= nt; ++a) {
        const double th = a * step;
        for (int b = 0; b < 2 * nt; ++b) {
            const double ph = b * step;
            dirs.push_back({0, std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
        }
    }
    double best = 0.0;
    for (const auto& u : dirs) {
        double row[4] = {0, 0, 0, 0};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) row[j] += u[i] * t[i][j];
        for (const auto& v : dirs) {
            const double val = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
            best = std::max(best, std::abs(val));
        }
    }
    return best;
}

}  // namespace oracle
