#include "qai/subspace.hpp"

#include <Eigen/QR>

namespace qai {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("subspaces live in different ambient dimensions");
}

void check_state(const Matrix& rho, const Tolerances& tol) {
    double scale = std::max(1.0, max_abs(rho));
    if (!is_hermitian(rho, tol.herm_tol * scale))
        throw NotPSD("state is not Hermitian");
    double tr = rho.trace().real();
    if (tr > 1.0 + tol.trace_tol)
        throw TraceTooLarge("state trace exceeds 1");
}

}  // namespace

Subspace Subspace::from_span(std::size_t ambient_dim, const Matrix& spanning,
                             const Tolerances& tol) {
    if (spanning.cols() > 0 &&
        spanning.rows() != static_cast<Eigen::Index>(ambient_dim))
        throw DimensionMismatch("spanning vectors do not match ambient dimension");
    Subspace s;
    s.ambient_ = ambient_dim;
    if (spanning.cols() == 0)
        s.basis_ = Matrix(static_cast<Eigen::Index>(ambient_dim), 0);
    else
        s.basis_ = orthonormalize(spanning, tol.rank_tol);
    return s;
}

Subspace Subspace::from_orthonormal(std::size_t ambient_dim, Matrix basis) {
    if (basis.cols() > 0 && basis.rows() != static_cast<Eigen::Index>(ambient_dim))
        throw DimensionMismatch("basis does not match ambient dimension");
    Subspace s;
    s.ambient_ = ambient_dim;
    if (basis.cols() == 0)
        s.basis_ = Matrix(static_cast<Eigen::Index>(ambient_dim), 0);
    else
        s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::zero(std::size_t ambient_dim) {
    return from_orthonormal(ambient_dim, Matrix(static_cast<Eigen::Index>(ambient_dim), 0));
}

Subspace Subspace::full(std::size_t ambient_dim) {
    return from_orthonormal(
        ambient_dim, Matrix::Identity(static_cast<Eigen::Index>(ambient_dim),
                                      static_cast<Eigen::Index>(ambient_dim)));
}

Matrix projector(const Subspace& s) {
    const auto d = static_cast<Eigen::Index>(s.ambient_dim());
    if (s.is_zero()) return Matrix::Zero(d, d);
    return s.basis() * s.basis().adjoint();
}

Subspace support(const Matrix& rho, const Tolerances& tol) {
    if (rho.rows() != rho.cols())
        throw NotPSD("state is not square");
    HermEig eig = eig_hermitian(rho, tol);
    double lmax = eig.values.size() > 0 ? eig.values(0) : 0.0;
    double lmin = eig.values.size() > 0 ? eig.values(eig.values.size() - 1) : 0.0;
    if (lmin < -tol.herm_tol * std::max(1.0, lmax))
        throw NotPSD("state has a negative eigenvalue");

    // operators at or below the arithmetic noise floor of the unit scale
    // count as zero outright, so roundoff residue never acquires a support
    if (lmax <= tol.rank_tol * 1e-3)
        return Subspace::zero(static_cast<std::size_t>(rho.rows()));

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) > tol.rank_tol * lmax) ++rank;
    return Subspace::from_orthonormal(static_cast<std::size_t>(rho.rows()),
                                      eig.vectors.leftCols(rank));
}

double inclusion_residual(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b);
    if (a.is_zero()) return 0.0;
    Matrix residual = a.basis() - b.basis() * (b.basis().adjoint() * a.basis());
    return max_abs(residual);
}

bool leq(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    return inclusion_residual(a, b) <= tol.incl_tol;
}

bool same_space(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    return leq(a, b, tol) && leq(b, a, tol);
}

Subspace join(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    require_same_ambient(a, b);
    Matrix stacked(static_cast<Eigen::Index>(a.ambient_dim()),
                   a.basis().cols() + b.basis().cols());
    stacked << a.basis(), b.basis();
    return Subspace::from_span(a.ambient_dim(), stacked, tol);
}

Subspace orthocomplement(const Subspace& a, const Tolerances&) {
    const auto d = static_cast<Eigen::Index>(a.ambient_dim());
    if (a.is_zero()) return Subspace::full(a.ambient_dim());
    if (a.is_full()) return Subspace::zero(a.ambient_dim());
    // full QR of the basis: the trailing columns of Q span the complement
    Eigen::HouseholderQR<Matrix> qr(a.basis());
    Matrix q = qr.householderQ();
    return Subspace::from_orthonormal(a.ambient_dim(),
                                      q.rightCols(d - a.basis().cols()));
}

Subspace meet(const Subspace& a, const Subspace& b, const Tolerances& tol) {
    require_same_ambient(a, b);
    // De Morgan in the subspace lattice
    return orthocomplement(join(orthocomplement(a, tol), orthocomplement(b, tol), tol),
                           tol);
}

Subspace image(const Matrix& op, const Subspace& s, const Tolerances& tol) {
    if (op.cols() != static_cast<Eigen::Index>(s.ambient_dim()))
        throw DimensionMismatch("operator does not match subspace ambient dimension");
    if (s.is_zero()) return Subspace::zero(static_cast<std::size_t>(op.rows()));
    // threshold against the unit scale as well: the basis is orthonormal
    // and the pipeline's operators are contractions, so a column that came
    // out at roundoff size is the zero vector, not a new direction
    return Subspace::from_orthonormal(
        static_cast<std::size_t>(op.rows()),
        orthonormalize(op * s.basis(), tol.rank_tol, 1.0));
}

Subspace alpha_states(const std::vector<Matrix>& states, std::size_t ambient_dim,
                      const Tolerances& tol) {
    Subspace acc = Subspace::zero(ambient_dim);
    for (const auto& rho : states) {
        check_state(rho, tol);
        acc = join(acc, support(rho, tol), tol);
    }
    return acc;
}

bool gamma_contains(const Subspace& p, const Matrix& rho, const Tolerances& tol) {
    check_state(rho, tol);
    return leq(support(rho, tol), p, tol);
}

}  // namespace qai
