#include "qai/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>

namespace qai {

Tolerances& default_tolerances() {
    static Tolerances tol;
    return tol;
}

QubitLayout::QubitLayout(std::vector<std::string> order) : order_(std::move(order)) {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        auto [it, fresh] = index_.emplace(order_[i], i);
        if (!fresh)
            throw DimensionMismatch("duplicate variable in layout: " + order_[i]);
    }
}

std::size_t QubitLayout::position(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw UnknownVariable("unknown variable: " + name);
    return it->second;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector basis_ket(std::size_t dim, std::size_t index) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

namespace {

// Bit of global index `idx` for layout position `pos` (position 0 = MSB).
inline std::size_t bit_at(std::size_t idx, std::size_t pos, std::size_t n) {
    return (idx >> (n - 1 - pos)) & 1u;
}

// Positions of the named variables, checked for existence and distinctness.
std::vector<std::size_t> target_positions(const std::vector<std::string>& targets,
                                          const QubitLayout& layout) {
    std::vector<std::size_t> pos;
    pos.reserve(targets.size());
    for (const auto& t : targets) {
        std::size_t p = layout.position(t);
        if (std::find(pos.begin(), pos.end(), p) != pos.end())
            throw DimensionMismatch("repeated target variable: " + t);
        pos.push_back(p);
    }
    return pos;
}

}  // namespace

Matrix embed(const Matrix& op, const std::vector<std::string>& targets,
             const QubitLayout& layout) {
    const std::size_t n = layout.size();
    const std::size_t k = targets.size();
    const std::size_t dloc = std::size_t{1} << k;
    if (op.rows() != static_cast<Eigen::Index>(dloc) ||
        op.cols() != static_cast<Eigen::Index>(dloc))
        throw DimensionMismatch("operator dimension does not match target count");

    auto pos = target_positions(targets, layout);
    const std::size_t d = layout.dim();

    // local index of a global index: target m contributes bit 2^(k-1-m)
    auto local_of = [&](std::size_t g) {
        std::size_t loc = 0;
        for (std::size_t m = 0; m < k; ++m)
            loc |= bit_at(g, pos[m], n) << (k - 1 - m);
        return loc;
    };
    // global index with target bits cleared, used to compare the rest
    std::size_t rest_mask = d - 1;
    for (std::size_t m = 0; m < k; ++m)
        rest_mask &= ~(std::size_t{1} << (n - 1 - pos[m]));

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            if ((r & rest_mask) == (c & rest_mask))
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    op(static_cast<Eigen::Index>(local_of(r)),
                       static_cast<Eigen::Index>(local_of(c)));
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<std::string>& traced_out,
                     const QubitLayout& layout) {
    const std::size_t n = layout.size();
    const std::size_t d = layout.dim();
    if (m.rows() != static_cast<Eigen::Index>(d) || m.cols() != static_cast<Eigen::Index>(d))
        throw DimensionMismatch("matrix does not match layout dimension");

    auto pos = target_positions(traced_out, layout);
    const std::size_t k = pos.size();
    if (k == 0) return m;

    std::vector<bool> traced(n, false);
    for (std::size_t p : pos) traced[p] = true;

    // remaining variables keep layout order
    std::vector<std::size_t> kept;
    for (std::size_t p = 0; p < n; ++p)
        if (!traced[p]) kept.push_back(p);

    const std::size_t nk = kept.size();
    const std::size_t dk = std::size_t{1} << nk;
    const std::size_t dt = std::size_t{1} << k;

    // global index from kept-part index and traced-part index
    auto global_of = [&](std::size_t kept_idx, std::size_t tr_idx) {
        std::size_t g = 0;
        for (std::size_t m = 0; m < nk; ++m)
            g |= bit_at(kept_idx, m, nk) << (n - 1 - kept[m]);
        for (std::size_t m = 0; m < k; ++m)
            g |= bit_at(tr_idx, m, k) << (n - 1 - pos[m]);
        return g;
    };

    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t c = 0; c < dk; ++c) {
            Cplx sum = 0.0;
            for (std::size_t t = 0; t < dt; ++t)
                sum += m(static_cast<Eigen::Index>(global_of(r, t)),
                         static_cast<Eigen::Index>(global_of(c, t)));
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = sum;
        }
    return out;
}

HermEig eig_hermitian(const Matrix& m, const Tolerances& tol) {
    if (m.rows() != m.cols())
        throw NotHermitian("matrix is not square");
    double scale = std::max(1.0, max_abs(m));
    if (max_abs(m - m.adjoint()) > tol.herm_tol * scale)
        throw NotHermitian("matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix> solver((m + Matrix(m.adjoint())) / 2.0);
    if (solver.info() != Eigen::Success)
        throw Error("eigendecomposition failed to converge");

    // Eigen returns ascending order; flip to descending.
    const Eigen::Index d = m.rows();
    HermEig out;
    out.values = RealVector(d);
    out.vectors = Matrix(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        out.values(i) = solver.eigenvalues()(d - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    }
    return out;
}

Matrix orthonormalize(const Matrix& vs, double tol, double scale_floor) {
    if (vs.cols() == 0 || vs.rows() == 0)
        return Matrix(vs.rows(), 0);

    // rank-revealing pivoted QR: |R_ii| decreases along the diagonal and
    // the leading columns of Q span the numerically significant part
    Eigen::ColPivHouseholderQR<Matrix> qr(vs);
    const Eigen::Index k = std::min(vs.rows(), vs.cols());
    const double lead = std::abs(qr.matrixR()(0, 0));
    if (lead <= 0.0) return Matrix(vs.rows(), 0);

    const double cutoff = tol * std::max(lead, scale_floor);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        if (std::abs(qr.matrixR()(i, i)) > cutoff) ++rank;
    return qr.householderQ() * Matrix::Identity(vs.rows(), rank);
}

}  // namespace qai
