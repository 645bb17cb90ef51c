#include "qai/sampling.hpp"

#include <Eigen/QR>

namespace qai {

namespace {

Vector gaussian_vector(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double re = gauss(rng);
        double im = gauss(rng);
        v(i) = Cplx{re, im};
    }
    return v;
}

}  // namespace

Vector random_pure_in(const Subspace& s, Rng& rng) {
    if (s.is_zero()) throw EmptySet("cannot sample from the zero subspace");
    Vector coeff = gaussian_vector(s.dim(), rng);
    Vector v = s.basis() * coeff;
    return v / v.norm();
}

Matrix random_density_in(const Subspace& s, std::size_t mixture_size, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(s.ambient_dim());
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < mixture_size; ++i) {
        Vector v = random_pure_in(s, rng);
        rho += v * v.adjoint();
    }
    return rho / static_cast<double>(mixture_size);
}

Matrix random_density(std::size_t dim, std::size_t mixture_size, Rng& rng) {
    return random_density_in(Subspace::full(dim), mixture_size, rng);
}

Subspace random_subspace(std::size_t dim, std::size_t subspace_dim, Rng& rng) {
    if (subspace_dim == 0) return Subspace::zero(dim);
    Matrix vs(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(subspace_dim));
    for (std::size_t j = 0; j < subspace_dim; ++j)
        vs.col(static_cast<Eigen::Index>(j)) = gaussian_vector(dim, rng);
    return Subspace::from_span(dim, vs);
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
    Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index c = 0; c < g.cols(); ++c) g.col(c) = gaussian_vector(dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ());
}

}  // namespace qai
