#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qai/errors.hpp"

namespace qai {

using Cplx   = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense complex matrix, the carrier for
                                   // operators, states and projector blocks
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/*
 * Numerical policy. A single relative rank cutoff is used everywhere a
 * "numerically zero" decision is made (support, orthonormalization,
 * Kraus extraction); inclusion tests use incl_tol on residual norms.
 * The CLI can override rank_tol and incl_tol.
 */
struct Tolerances {
    double rank_tol  = 1e-9;   // relative: values below rank_tol * largest are zero
    double incl_tol  = 1e-8;   // absolute residual bound for subspace inclusion
    double herm_tol  = 1e-9;   // max |M - M^dagger| for Hermitian-tagged inputs
    double trace_tol = 1e-9;   // slack on "trace <= 1" checks
};

// Process-wide defaults; set once at startup (CLI), read everywhere else.
Tolerances& default_tolerances();

/*
 * Fixes the tensor-factor order of the global space: position 0 is the
 * leftmost (most significant) factor. Basis index i encodes the bits
 * b_0 b_1 ... b_{n-1} with i = sum_p b_p * 2^(n-1-p).
 */
class QubitLayout {
public:
    QubitLayout() = default;
    explicit QubitLayout(std::vector<std::string> order);

    std::size_t size() const { return order_.size(); }
    std::size_t dim() const { return std::size_t{1} << order_.size(); }
    const std::vector<std::string>& order() const { return order_; }

    bool contains(const std::string& name) const { return index_.count(name) > 0; }
    std::size_t position(const std::string& name) const;

    bool operator==(const QubitLayout& o) const { return order_ == o.order_; }

private:
    std::vector<std::string> order_;
    std::map<std::string, std::size_t> index_;
};

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace qai
