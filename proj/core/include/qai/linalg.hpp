#pragma once

#include <vector>

#include "qai/types.hpp"

namespace qai {

/*
 * Dense complex linear algebra over the 2^|V|-dimensional global space:
 * tensor structure, operator embedding, partial trace, Hermitian
 * eigendecomposition and orthonormalization. All functions are pure.
 */

// Kronecker product with a's factor leftmost (most significant).
Matrix tensor(const Matrix& a, const Matrix& b);

// |index> as a column vector of the given dimension.
Vector basis_ket(std::size_t dim, std::size_t index);

bool is_hermitian(const Matrix& m, double tol);

/*
 * Lift a 2^k x 2^k operator acting on `targets` (in the given order, first
 * target = most significant local bit) to the full space of `layout`,
 * acting as the identity on every other variable.
 */
Matrix embed(const Matrix& op, const std::vector<std::string>& targets,
             const QubitLayout& layout);

// Trace out the named variables; the result lives on the remaining
// variables in layout order. Tr(result) = Tr(m).
Matrix partial_trace(const Matrix& m, const std::vector<std::string>& traced_out,
                     const QubitLayout& layout);

struct HermEig {
    RealVector values;  // descending
    Matrix vectors;     // orthonormal columns, vectors.col(i) <-> values(i)
};

// Spectral decomposition of a Hermitian matrix (checked within tol.herm_tol).
HermEig eig_hermitian(const Matrix& m, const Tolerances& tol = default_tolerances());

/*
 * Orthonormal basis of span(columns of vs). Rank is decided by discarding
 * singular directions below tol relative to the largest one or, when
 * scale_floor is set, relative to max(largest, scale_floor); may return
 * fewer columns than given, possibly none. The floor keeps images of
 * contractions from renormalizing roundoff residue into real directions.
 */
Matrix orthonormalize(const Matrix& vs, double tol, double scale_floor = 0.0);

}  // namespace qai
