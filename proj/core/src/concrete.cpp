#include "qai/concrete.hpp"

#include <algorithm>
#include <cmath>

namespace qai {

void State::check(const Tolerances& tol) const {
    if (rho.rows() != rho.cols() ||
        rho.rows() != static_cast<Eigen::Index>(layout.dim()))
        throw DimensionMismatch("state matrix does not match its layout");
    double scale = std::max(1.0, max_abs(rho));
    if (!is_hermitian(rho, tol.herm_tol * scale))
        throw NotPSD("state is not Hermitian");
    HermEig eig = eig_hermitian(rho, tol);
    if (eig.values.size() > 0 &&
        eig.values(eig.values.size() - 1) < -tol.herm_tol * std::max(1.0, eig.values(0)))
        throw NotPSD("state has a negative eigenvalue");
    double tr = trace();
    if (tr < -tol.trace_tol || tr > 1.0 + tol.trace_tol)
        throw TraceTooLarge("state trace is outside [0, 1]");
}

namespace {

Matrix eval_stmt(const Program& p, const Stmt& s, const Matrix& rho,
                 const LoopPolicy& policy);

Matrix eval_seq(const Program& p, const Block& body, Matrix rho,
                const LoopPolicy& policy) {
    for (const Stmt& s : body) rho = eval_stmt(p, s, rho, policy);
    return rho;
}

Matrix guard_projector(const Program& p, const std::vector<std::string>& targets,
                       const std::string& space, bool complemented) {
    Subspace local = p.space_subspace(space, targets.size());
    Matrix proj = projector(local);
    if (complemented)
        proj = Matrix::Identity(proj.rows(), proj.cols()) - proj;
    return embed(proj, targets, p.layout);
}

Matrix eval_stmt(const Program& p, const Stmt& s, const Matrix& rho,
                 const LoopPolicy& policy) {
    return std::visit(
        [&](const auto& node) -> Matrix {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SkipStmt>) {
                return rho;
            } else if constexpr (std::is_same_v<T, InitStmt>) {
                const std::size_t t = node.targets.size();
                const std::size_t dloc = std::size_t{1} << t;
                Matrix out = Matrix::Zero(rho.rows(), rho.cols());
                for (std::size_t i = 0; i < dloc; ++i) {
                    Matrix unit = Matrix::Zero(static_cast<Eigen::Index>(dloc),
                                               static_cast<Eigen::Index>(dloc));
                    unit(0, static_cast<Eigen::Index>(i)) = 1.0;  // |0><i| on targets
                    Matrix k = embed(unit, node.targets, p.layout);
                    out += k * rho * k.adjoint();
                }
                return out;
            } else if constexpr (std::is_same_v<T, UnitaryStmt>) {
                Matrix u = embed(p.unitary_matrix(node.gate, node.targets.size()),
                                 node.targets, p.layout);
                return u * rho * u.adjoint();
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                Matrix proj = guard_projector(p, node.targets, node.space, false);
                return proj * rho * proj;
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                Matrix proj = guard_projector(p, node.targets, node.space, false);
                Matrix comp = guard_projector(p, node.targets, node.space, true);
                Matrix taken = eval_seq(p, node.then_body, proj * rho * proj, policy);
                Matrix other = eval_seq(p, node.else_body, comp * rho * comp, policy);
                return taken + other;
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                Matrix proj = guard_projector(p, node.targets, node.space, false);
                Matrix comp = guard_projector(p, node.targets, node.space, true);
                Matrix carried = rho;           // mass still inside the loop
                Matrix out = Matrix::Zero(rho.rows(), rho.cols());
                double emitted = 0.0;
                for (std::size_t i = 0; i < policy.max_iters; ++i) {
                    double pending = carried.trace().real();
                    if (pending < policy.trace_eps) return out;
                    Matrix term = comp * carried * comp;
                    out += term;
                    emitted += term.trace().real();
                    carried = eval_seq(p, node.body, proj * carried * proj, policy);
                }
                if (carried.trace().real() < policy.trace_eps) return out;
                throw LoopBudgetExceeded(out, emitted, carried.trace().real());
            }
        },
        s.node);
}

}  // namespace

Matrix eval_block(const Program& p, const Block& body, const Matrix& rho,
                  const LoopPolicy& policy) {
    return eval_seq(p, body, rho, policy);
}

State eval(const Program& p, const State& in, const LoopPolicy& policy,
           const Tolerances& tol) {
    if (!(in.layout == p.layout))
        throw DimensionMismatch("state layout does not match the program");
    in.check(tol);
    State out;
    out.layout = p.layout;
    out.rho = eval_seq(p, p.body, in.rho, policy);
    return out;
}

std::vector<Matrix> kraus_of(const Program& p, const LoopPolicy& policy,
                             const Tolerances& tol) {
    const std::size_t d = p.layout.dim();
    const auto di = static_cast<Eigen::Index>(d);

    /*
     * Channel action on the matrix unit |a><b|, obtained by linearity
     * from evaluations on pure states only:
     *   |a><b| = (u+ u+^+ - u- u-^+)/2 + i (w+ w+^+ - w- w-^+)/2
     * with u± = (|a> ± |b>)/sqrt(2), w± = (|a> ± i|b>)/sqrt(2).
     */
    auto apply_pure = [&](const Vector& v) {
        return eval_block(p, p.body, v * v.adjoint(), policy);
    };
    auto apply_unit = [&](std::size_t a, std::size_t b) -> Matrix {
        Vector ka = basis_ket(d, a), kb = basis_ket(d, b);
        if (a == b) return apply_pure(ka);
        const double r = 1.0 / std::sqrt(2.0);
        const Cplx i{0.0, 1.0};
        Matrix up = apply_pure(r * (ka + kb));
        Matrix um = apply_pure(r * (ka - kb));
        Matrix wp = apply_pure(r * (ka + i * kb));
        Matrix wm = apply_pure(r * (ka - i * kb));
        return (up - um) / 2.0 + i * (wp - wm) / 2.0;
    };

    // Choi matrix with the channel factor leftmost: row index a*d + i
    Matrix choi = Matrix::Zero(di * di, di * di);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Matrix block = apply_unit(i, j);
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    choi(static_cast<Eigen::Index>(a * d + i),
                         static_cast<Eigen::Index>(b * d + j)) =
                        block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }

    choi = (choi + Matrix(choi.adjoint())) / 2.0;
    HermEig eig = eig_hermitian(choi, tol);
    double lmax = eig.values.size() > 0 ? std::max(eig.values(0), 0.0) : 0.0;

    std::vector<Matrix> kraus;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        if (eig.values(k) <= tol.rank_tol * lmax) continue;
        double w = std::sqrt(eig.values(k));
        Matrix e(di, di);
        for (Eigen::Index r = 0; r < di; ++r)
            for (Eigen::Index c = 0; c < di; ++c)
                e(r, c) = w * eig.vectors(r * di + c, k);
        kraus.push_back(std::move(e));
    }
    return kraus;
}

State mix_representative(const std::vector<State>& states, const Tolerances& tol) {
    if (states.empty()) throw EmptySet("cannot mix an empty set of states");
    State out;
    out.layout = states.front().layout;
    const auto d = static_cast<Eigen::Index>(out.layout.dim());
    out.rho = Matrix::Zero(d, d);
    for (const State& s : states) {
        if (!(s.layout == out.layout))
            throw DimensionMismatch("mixed states must share a layout");
        double tr = s.trace();
        if (tr <= tol.rank_tol)
            throw ZeroState("cannot normalize a state with vanishing trace");
        out.rho += s.rho / tr;
    }
    out.rho /= static_cast<double>(states.size());
    return out;
}

Program prepare_program(const State& rho, const Tolerances& tol) {
    rho.check(tol);
    if (std::abs(rho.trace() - 1.0) > tol.trace_tol)
        throw TraceNotOne("preparation needs a unit-trace state");

    const std::size_t d = rho.layout.dim();
    const auto di = static_cast<Eigen::Index>(d);

    HermEig eig = eig_hermitian(rho.rho, tol);

    // |psi> = sum_i sqrt(lambda_i) |psi_i>
    Vector psi = Vector::Zero(di);
    for (Eigen::Index i = 0; i < di; ++i)
        psi += std::sqrt(std::max(eig.values(i), 0.0)) * eig.vectors.col(i);

    // complete |0...0> -> |psi> to a unitary: full QR of the single column
    // psi gives an orthonormal frame whose remaining columns span psi's
    // complement; pin the first column to psi itself
    psi.normalize();
    Eigen::HouseholderQR<Matrix> qr{Matrix(psi)};
    Matrix u = qr.householderQ();
    u.col(0) = psi;

    Program prog;
    prog.layout = rho.layout;
    std::vector<std::string> all = prog.layout.order();

    prog.unitaries.emplace_back("Uprep", UnitaryDecl{u, {}});
    for (std::size_t i = 0; i + 1 < d; ++i) {
        SpaceDecl decl;
        decl.num_bits = prog.layout.size();
        decl.vectors.push_back(eig.vectors.col(static_cast<Eigen::Index>(i)));
        prog.spaces.emplace_back("P" + std::to_string(i), decl);
    }

    Block body;
    body.push_back(Stmt{InitStmt{all}, {}, {}});
    body.push_back(Stmt{UnitaryStmt{all, "Uprep"}, {}, {}});

    // innermost-else skip, then wrap outward over P_{d-2} ... P_0
    Block chain;
    chain.push_back(Stmt{SkipStmt{}, {}, {}});
    for (std::size_t i = d - 1; i-- > 0;) {
        Block then_body;
        then_body.push_back(Stmt{SkipStmt{}, {}, {}});
        Block wrapped;
        wrapped.push_back(Stmt{
            IfStmt{all, "P" + std::to_string(i), std::move(then_body), std::move(chain)},
            {},
            {}});
        chain = std::move(wrapped);
    }
    for (Stmt& s : chain) body.push_back(std::move(s));
    prog.body = std::move(body);
    return prog;
}

}  // namespace qai
