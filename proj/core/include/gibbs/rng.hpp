#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace gibbs {

// Independent generator for the stream identified by (seed, ids...). Streams
// with different ids are decorrelated through std::seed_seq mixing.
std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids = {});

// Complex matrix with i.i.d. standard normal real and imaginary parts.
Eigen::MatrixXcd gaussian_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols);

// (G + G^dagger)/2 for a Gaussian G.
Eigen::MatrixXcd random_hermitian(std::mt19937_64& gen, Eigen::Index dim);

// Random full-rank density matrix W W^dagger / Tr(W W^dagger).
Eigen::MatrixXcd random_density(std::mt19937_64& gen, Eigen::Index dim);

// Haar-ish random unitary from the QR factorization of a Gaussian matrix.
Eigen::MatrixXcd random_unitary(std::mt19937_64& gen, Eigen::Index dim);

}  // namespace gibbs
