#pragma once

#include <random>

#include "qai/subspace.hpp"

namespace qai {

using Rng = std::mt19937_64;

// Haar-like pure state inside s: Gaussian coefficients over the basis,
// normalized. s must be nonzero.
Vector random_pure_in(const Subspace& s, Rng& rng);

// Equal mixture of `mixture_size` random pure states of s; unit trace.
Matrix random_density_in(const Subspace& s, std::size_t mixture_size, Rng& rng);

Matrix random_density(std::size_t dim, std::size_t mixture_size, Rng& rng);

// Orthonormal span of `subspace_dim` Gaussian vectors.
Subspace random_subspace(std::size_t dim, std::size_t subspace_dim, Rng& rng);

// QR frame of a Gaussian matrix.
Matrix random_unitary(std::size_t dim, Rng& rng);

}  // namespace qai
