#include <doctest.h>

#include "qai/sampling.hpp"
#include "qai/subspace.hpp"
#include "support/oracles.hpp"

using namespace qai;

namespace {

Subspace span_of(std::size_t ambient, std::initializer_list<std::size_t> kets) {
    Matrix m(static_cast<Eigen::Index>(ambient),
             static_cast<Eigen::Index>(kets.size()));
    Eigen::Index c = 0;
    for (std::size_t k : kets) m.col(c++) = basis_ket(ambient, k);
    return Subspace::from_orthonormal(ambient, m);
}

Vector bell_plus() {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v;
}

}  // namespace

TEST_CASE("projector of the full space and the zero space") {
    CHECK(max_abs(projector(Subspace::full(4)) - Matrix::Identity(4, 4)) == 0.0);
    CHECK(max_abs(projector(Subspace::zero(4))) == 0.0);
}

TEST_CASE("projector of span{|00>,|11>} is diag(1,0,0,1)") {
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = expect(3, 3) = 1;
    CHECK(max_abs(projector(span_of(4, {0, 3})) - expect) < 1e-15);
}

TEST_CASE("support of simple states") {
    Vector k0 = basis_ket(2, 0);
    CHECK(same_space(support(k0 * k0.adjoint()), span_of(2, {0})));
    CHECK(same_space(support(0.5 * Matrix::Identity(2, 2)), Subspace::full(2)));
}

TEST_CASE("support of a Bell/|00> mixture is span{|00>,|11>}") {
    Vector phi = bell_plus();
    Vector k00 = basis_ket(4, 0);
    Matrix rho = 0.5 * phi * phi.adjoint() + 0.5 * k00 * k00.adjoint();
    Subspace s = support(rho);
    CHECK(same_space(s, span_of(4, {0, 3})));
    // second route: the column span of rho itself
    CHECK(same_space(s, oracle::support_by_column_span(rho, 1e-9)));
}

TEST_CASE("support rejects indefinite matrices") {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    CHECK_THROWS_AS(support(m), NotPSD);
}

TEST_CASE("inclusion ordering") {
    CHECK(leq(Subspace::zero(4), span_of(4, {2})));
    CHECK(leq(span_of(4, {0}), span_of(4, {0, 3})));

    Matrix plus(2, 1);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    Subspace sp = Subspace::from_orthonormal(2, plus);
    CHECK_FALSE(leq(sp, span_of(2, {0})));
    CHECK(inclusion_residual(sp, span_of(2, {0})) ==
          doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("inclusion requires matching ambient dimensions") {
    CHECK_THROWS_AS(leq(Subspace::full(2), Subspace::full(4)), DimensionMismatch);
}

TEST_CASE("join of |0> and |1> fills the space") {
    CHECK(same_space(join(span_of(2, {0}), span_of(2, {1})), Subspace::full(2)));
}

TEST_CASE("meet matches the brute-force intersection") {
    Subspace a = span_of(4, {0, 3});
    Subspace b = span_of(4, {0, 1});
    Subspace m = meet(a, b);
    CHECK(same_space(m, span_of(4, {0})));
    CHECK(same_space(m, oracle::intersection(a, b)));

    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        Subspace x = random_subspace(8, 1 + static_cast<std::size_t>(trial % 6), rng);
        Subspace y =
            random_subspace(8, 1 + static_cast<std::size_t>((trial * 5) % 7), rng);
        CHECK(same_space(meet(x, y), oracle::intersection(x, y)));
    }
}

TEST_CASE("orthocomplement of the full space is zero") {
    CHECK(orthocomplement(Subspace::full(4)).is_zero());
    CHECK(orthocomplement(Subspace::zero(4)).is_full());
}

TEST_CASE("image basics") {
    Subspace phi = Subspace::from_orthonormal(4, bell_plus());
    CHECK(same_space(image(Matrix::Identity(4, 4), phi), phi));
    CHECK(same_space(image(projector(span_of(4, {0})), phi), span_of(4, {0})));

    Rng rng(5);
    Matrix u = random_unitary(4, rng);
    CHECK(same_space(image(u, Subspace::full(4)), Subspace::full(4)));
}

TEST_CASE("alpha over states and gamma membership") {
    Vector k0 = basis_ket(2, 0), k1 = basis_ket(2, 1);
    Subspace joined = alpha_states({k0 * k0.adjoint(), k1 * k1.adjoint()}, 2);
    CHECK(joined.is_full());

    CHECK(alpha_states({}, 4).is_zero());

    Vector phi = bell_plus();
    CHECK(gamma_contains(span_of(4, {0, 3}), phi * phi.adjoint()));
    CHECK_FALSE(gamma_contains(span_of(4, {0}), phi * phi.adjoint()));
}

TEST_CASE("alpha rejects oversized traces") {
    CHECK_THROWS_AS(alpha_states({2.0 * Matrix::Identity(2, 2)}, 2), TraceTooLarge);
}

/*
 * Galois-pair properties.
 */

TEST_CASE("alpha of the pure basis states of P recovers P") {
    Rng rng(97);
    for (int trial = 0; trial < 40; ++trial) {
        Subspace p = random_subspace(8, static_cast<std::size_t>(trial % 9), rng);
        std::vector<Matrix> basis_states;
        for (Eigen::Index c = 0; c < p.basis().cols(); ++c) {
            Vector v = p.basis().col(c);
            basis_states.push_back(v * v.adjoint());
        }
        CHECK(same_space(alpha_states(basis_states, 8), p));
    }
}

TEST_CASE("adjunction: membership of every state equals inclusion of the join") {
    Rng rng(131);
    for (int trial = 0; trial < 60; ++trial) {
        Subspace p = random_subspace(8, 1 + static_cast<std::size_t>(trial % 7), rng);
        std::vector<Matrix> states;
        const std::size_t count = 1 + static_cast<std::size_t>(trial % 4);
        const bool inside = trial % 2 == 0;
        for (std::size_t i = 0; i < count; ++i)
            states.push_back(inside ? random_density_in(p, 2, rng)
                                    : random_density(8, 2, rng));
        bool all_contained = true;
        for (const Matrix& rho : states)
            all_contained = all_contained && gamma_contains(p, rho);
        CHECK(all_contained == leq(alpha_states(states, 8), p));
    }
}

TEST_CASE("abstraction is join-linear over positive combinations") {
    Rng rng(177);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_real_distribution<double> coeff(0.1, 1.0);
        Matrix sum = Matrix::Zero(8, 8);
        Subspace joined = Subspace::zero(8);
        const std::size_t count = 1 + trial % 3;
        for (std::size_t i = 0; i < count; ++i) {
            Matrix rho = random_density(8, 1 + trial % 2, rng);
            double x = coeff(rng) / static_cast<double>(count);
            sum += x * rho;
            joined = join(joined, support(rho));
        }
        CHECK(same_space(support(sum), joined));
    }
}

TEST_CASE("concretizations are convex and down-closed") {
    Rng rng(211);
    for (int trial = 0; trial < 40; ++trial) {
        Subspace p = random_subspace(8, 2 + static_cast<std::size_t>(trial % 5), rng);
        Matrix rho1 = random_density_in(p, 2, rng);
        Matrix rho2 = random_density_in(p, 3, rng);
        CHECK(gamma_contains(p, (rho1 + rho2) / 2.0));

        // shrink along a direction inside the support
        Matrix sigma = random_density_in(p, 3, rng);
        Subspace s = support(sigma);
        Vector psi = random_pure_in(s, rng);
        double eps = 1e-3 * (psi.adjoint() * sigma * psi).real()(0, 0);
        Matrix shrunk = sigma - eps * Matrix(psi * psi.adjoint());
        CHECK(gamma_contains(p, shrunk));
    }
}

TEST_CASE("lattice laws") {
    Rng rng(301);
    for (int trial = 0; trial < 30; ++trial) {
        Subspace a = random_subspace(8, static_cast<std::size_t>(trial % 8), rng);
        Subspace b = random_subspace(8, static_cast<std::size_t>((trial * 3) % 8), rng);
        CHECK(same_space(join(a, a), a));
        CHECK(same_space(meet(a, a), a));
        CHECK(same_space(join(a, b), join(b, a)));
        CHECK(same_space(meet(a, b), meet(b, a)));
        CHECK(same_space(join(a, meet(a, b)), a));
        CHECK(same_space(meet(a, join(a, b)), a));
        CHECK(leq(a, join(a, b)));
        CHECK(leq(meet(a, b), a));
    }
}

TEST_CASE("strictly increasing chains stop within the ambient dimension") {
    Rng rng(337);
    const std::size_t dim = 8;
    Subspace acc = Subspace::zero(dim);
    std::size_t strict_steps = 0;
    for (int i = 0; i < 200; ++i) {
        Subspace next = join(acc, random_subspace(dim, 1, rng));
        if (!leq(next, acc)) {
            ++strict_steps;
            acc = next;
        }
    }
    CHECK(strict_steps <= dim);
    CHECK(acc.is_full());
}
