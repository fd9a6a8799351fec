#include "gibbs/rng.hpp"

#include <vector>

namespace gibbs {

std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(seed));
    words.push_back(static_cast<std::uint32_t>(seed >> 32));
    words.push_back(static_cast<std::uint32_t>(ids.size()));
    for (std::uint64_t id : ids) {
        words.push_back(static_cast<std::uint32_t>(id));
        words.push_back(static_cast<std::uint32_t>(id >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

Eigen::MatrixXcd gaussian_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = normal(gen);
            const double im = normal(gen);
            m(i, j) = {re, im};
        }
    }
    return m;
}

Eigen::MatrixXcd random_hermitian(std::mt19937_64& gen, Eigen::Index dim) {
    Eigen::MatrixXcd g = gaussian_matrix(gen, dim, dim);
    return 0.5 * (g + g.adjoint());
}

Eigen::MatrixXcd random_density(std::mt19937_64& gen, Eigen::Index dim) {
    Eigen::MatrixXcd w = gaussian_matrix(gen, dim, dim);
    Eigen::MatrixXcd rho = w * w.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& gen, Eigen::Index dim) {
    Eigen::MatrixXcd g = gaussian_matrix(gen, dim, dim);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < dim; ++i) {
        const std::complex<double> d = r(i, i);
        const double a = std::abs(d);
        if (a > 0) q.col(i) *= d / a;
    }
    return q;
}

}  // namespace gibbs
