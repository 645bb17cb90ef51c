#pragma once

#include <vector>

#include "qai/linalg.hpp"

namespace qai {

/*
 * A subspace of a 2^k-dimensional space, stored as an orthonormal basis
 * (possibly with zero columns). Joins and operator images are cheap in
 * this representation; the projector is derived on demand.
 *
 * Together with alpha_states / gamma_contains this realizes the
 * abstraction lattice used by the analyzer: order is inclusion, join is
 * the span of the union, meet is the intersection.
 */
class Subspace {
public:
    Subspace() = default;

    // orthonormalizes the given spanning columns
    static Subspace from_span(std::size_t ambient_dim, const Matrix& spanning,
                              const Tolerances& tol = default_tolerances());
    // trusts the columns to be orthonormal already
    static Subspace from_orthonormal(std::size_t ambient_dim, Matrix basis);

    static Subspace zero(std::size_t ambient_dim);
    static Subspace full(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

private:
    std::size_t ambient_ = 1;
    Matrix basis_ = Matrix(1, 0);
};

// B * B^dagger; idempotent Hermitian.
Matrix projector(const Subspace& s);

// Span of the eigenvectors of rho with eigenvalue above rank_tol * lambda_max.
// rho must be positive semidefinite within tolerance.
Subspace support(const Matrix& rho, const Tolerances& tol = default_tolerances());

// max-abs residual of a's basis against b's projector; 0 when a <= b
double inclusion_residual(const Subspace& a, const Subspace& b);

bool leq(const Subspace& a, const Subspace& b,
         const Tolerances& tol = default_tolerances());
bool same_space(const Subspace& a, const Subspace& b,
                const Tolerances& tol = default_tolerances());

Subspace join(const Subspace& a, const Subspace& b,
              const Tolerances& tol = default_tolerances());
Subspace meet(const Subspace& a, const Subspace& b,
              const Tolerances& tol = default_tolerances());
Subspace orthocomplement(const Subspace& a,
                         const Tolerances& tol = default_tolerances());

// Orthonormalized span of op applied to the basis of s.
Subspace image(const Matrix& op, const Subspace& s,
               const Tolerances& tol = default_tolerances());

/*
 * Galois pair against sets of partial density operators: alpha_states is
 * the join of the supports, gamma_contains tests support inclusion.
 * Each state must be PSD with trace <= 1 + trace_tol.
 */
Subspace alpha_states(const std::vector<Matrix>& states, std::size_t ambient_dim,
                      const Tolerances& tol = default_tolerances());
bool gamma_contains(const Subspace& p, const Matrix& rho,
                    const Tolerances& tol = default_tolerances());

}  // namespace qai
