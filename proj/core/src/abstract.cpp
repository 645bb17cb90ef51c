#include "qai/abstract.hpp"

#include <algorithm>
#include <set>

#include "qai/sampling.hpp"

namespace qai {

void validate_signature(const Signature& sig, const QubitLayout& layout) {
    if (sig.subsets.empty())
        throw ShapeMismatch("signature must contain at least one subsystem");
    for (const auto& s : sig.subsets) {
        if (s.empty())
            throw ShapeMismatch("signature subsystems must be nonempty");
        if (s.size() >= layout.size())
            throw ShapeMismatch("signature subsystems must be proper subsets");
        std::set<std::string> seen;
        for (const auto& q : s) {
            layout.position(q);  // throws UnknownVariable
            if (!seen.insert(q).second)
                throw ShapeMismatch("signature subsystem repeats " + q);
        }
    }
}

namespace {

std::vector<std::string> complement_names(const std::vector<std::string>& names,
                                          const QubitLayout& layout) {
    std::set<std::string> excluded(names.begin(), names.end());
    std::vector<std::string> out;
    for (const auto& q : layout.order())
        if (!excluded.count(q)) out.push_back(q);
    return out;
}

void require_same_shape(const AbstractElement& a, const AbstractElement& b) {
    if (!(a.kind == b.kind) || a.parts.size() != b.parts.size())
        throw ShapeMismatch("abstract elements have different domain shapes");
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        if (a.parts[i].ambient_dim() != b.parts[i].ambient_dim())
            throw ShapeMismatch("abstract element components differ in dimension");
}

std::vector<std::size_t> part_dims(const DomainKind& kind, const QubitLayout& layout) {
    if (!kind.is_local()) return {layout.dim()};
    validate_signature(kind.signature, layout);
    std::vector<std::size_t> dims;
    for (const auto& s : kind.signature.subsets)
        dims.push_back(std::size_t{1} << s.size());
    return dims;
}

}  // namespace

AbstractElement bottom(const DomainKind& kind, const QubitLayout& layout) {
    AbstractElement e{kind, {}};
    for (std::size_t d : part_dims(kind, layout)) e.parts.push_back(Subspace::zero(d));
    return e;
}

AbstractElement top(const DomainKind& kind, const QubitLayout& layout) {
    AbstractElement e{kind, {}};
    for (std::size_t d : part_dims(kind, layout)) e.parts.push_back(Subspace::full(d));
    return e;
}

double dom_residual(const AbstractElement& a, const AbstractElement& b) {
    require_same_shape(a, b);
    double r = 0.0;
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        r = std::max(r, inclusion_residual(a.parts[i], b.parts[i]));
    return r;
}

bool dom_leq(const AbstractElement& a, const AbstractElement& b, const Tolerances& tol) {
    return dom_residual(a, b) <= tol.incl_tol;
}

bool same_element(const AbstractElement& a, const AbstractElement& b,
                  const Tolerances& tol) {
    return dom_leq(a, b, tol) && dom_leq(b, a, tol);
}

AbstractElement dom_join(const AbstractElement& a, const AbstractElement& b,
                         const Tolerances& tol) {
    require_same_shape(a, b);
    AbstractElement out{a.kind, {}};
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        out.parts.push_back(join(a.parts[i], b.parts[i], tol));
    return out;
}

AbstractElement dom_meet(const AbstractElement& a, const AbstractElement& b,
                         const Tolerances& tol) {
    require_same_shape(a, b);
    AbstractElement out{a.kind, {}};
    for (std::size_t i = 0; i < a.parts.size(); ++i)
        out.parts.push_back(meet(a.parts[i], b.parts[i], tol));
    return out;
}

AbstractElement alpha(const DomainKind& kind, const QubitLayout& layout,
                      const std::vector<State>& states, const Tolerances& tol) {
    for (const State& s : states) {
        if (!(s.layout == layout))
            throw ShapeMismatch("state layout does not match the abstraction layout");
        s.check(tol);
    }
    if (!kind.is_local()) {
        std::vector<Matrix> mats;
        mats.reserve(states.size());
        for (const State& s : states) mats.push_back(s.rho);
        return AbstractElement{kind, {alpha_states(mats, layout.dim(), tol)}};
    }

    validate_signature(kind.signature, layout);
    AbstractElement out = bottom(kind, layout);
    for (std::size_t i = 0; i < kind.signature.subsets.size(); ++i) {
        auto traced = complement_names(kind.signature.subsets[i], layout);
        for (const State& s : states) {
            Matrix reduced = partial_trace(s.rho, traced, layout);
            out.parts[i] = join(out.parts[i], support(reduced, tol), tol);
        }
    }
    return out;
}

AbstractElement alpha_subspace(const DomainKind& kind, const QubitLayout& layout,
                               const Subspace& global, const Tolerances& tol) {
    if (global.ambient_dim() != layout.dim())
        throw ShapeMismatch("subspace does not match the layout dimension");
    if (!kind.is_local()) return AbstractElement{kind, {global}};

    validate_signature(kind.signature, layout);
    AbstractElement out{kind, {}};
    Matrix proj = projector(global);
    for (const auto& subset : kind.signature.subsets) {
        auto traced = complement_names(subset, layout);
        Matrix reduced = partial_trace(proj, traced, layout);
        out.parts.push_back(support(reduced, tol));
    }
    return out;
}

Subspace gamma_as_subspace(const AbstractElement& e, const QubitLayout& layout,
                           const Tolerances& tol) {
    if (!e.kind.is_local()) return e.parts.front();

    Subspace acc = Subspace::full(layout.dim());
    for (std::size_t i = 0; i < e.parts.size(); ++i) {
        Matrix lifted = embed(projector(e.parts[i]), e.kind.signature.subsets[i], layout);
        Subspace cylinder = image(lifted, Subspace::full(layout.dim()), tol);
        acc = meet(acc, cylinder, tol);
    }
    return acc;
}

namespace {

/*
 * Global-domain transfers: the image constructions
 *   init    |-> |0..0>_targets (x) supp Tr_targets(Q)
 *   unitary |-> U Q
 *   assert  |-> span{ P |psi> }
 */
Subspace global_init(const Program& p, const std::vector<std::string>& targets,
                     const Subspace& q, const Tolerances& tol) {
    const QubitLayout& layout = p.layout;
    const std::size_t n = layout.size();
    Matrix reduced = partial_trace(projector(q), targets, layout);
    Subspace kept_support = support(reduced, tol);

    // isometry placing a kept-space vector into the global space with
    // every target bit forced to zero
    auto kept = complement_names(targets, layout);
    std::vector<std::size_t> kept_pos;
    for (const auto& qname : kept) kept_pos.push_back(layout.position(qname));
    const std::size_t dk = std::size_t{1} << kept.size();
    Matrix lift = Matrix::Zero(static_cast<Eigen::Index>(layout.dim()),
                               static_cast<Eigen::Index>(dk));
    for (std::size_t l = 0; l < dk; ++l) {
        std::size_t g = 0;
        for (std::size_t m = 0; m < kept_pos.size(); ++m) {
            std::size_t bit = (l >> (kept_pos.size() - 1 - m)) & 1u;
            g |= bit << (n - 1 - kept_pos[m]);
        }
        lift(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(l)) = 1.0;
    }
    return Subspace::from_orthonormal(layout.dim(), lift * kept_support.basis());
}

Subspace global_guard(const Program& p, const std::vector<std::string>& targets,
                      const std::string& space, bool complemented, const Subspace& q,
                      const Tolerances& tol) {
    Subspace local = p.space_subspace(space, targets.size());
    Matrix proj = projector(local);
    if (complemented) proj = Matrix::Identity(proj.rows(), proj.cols()) - proj;
    return image(embed(proj, targets, p.layout), q, tol);
}

Subspace global_transfer_basic(const Program& p, const Stmt& stmt, const Subspace& q,
                               const Tolerances& tol) {
    return std::visit(
        [&](const auto& node) -> Subspace {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SkipStmt>) {
                return q;
            } else if constexpr (std::is_same_v<T, InitStmt>) {
                return global_init(p, node.targets, q, tol);
            } else if constexpr (std::is_same_v<T, UnitaryStmt>) {
                Matrix u = embed(p.unitary_matrix(node.gate, node.targets.size()),
                                 node.targets, p.layout);
                return image(u, q, tol);
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                return global_guard(p, node.targets, node.space, false, q, tol);
            } else {
                throw ShapeMismatch("transfer_basic expects a basic statement");
            }
        },
        stmt.node);
}

// best abstraction of a global transfer in the local domain
template <typename GlobalOp>
AbstractElement local_best(const DomainKind& kind, const Program& p,
                           const AbstractElement& e, const Tolerances& tol,
                           GlobalOp&& op) {
    Subspace concrete = gamma_as_subspace(e, p.layout, tol);
    Subspace moved = op(concrete);
    return alpha_subspace(kind, p.layout, moved, tol);
}

}  // namespace

AbstractElement transfer_basic(const DomainKind& kind, const Program& p,
                               const Stmt& stmt, const AbstractElement& e,
                               const Tolerances& tol) {
    if (!is_basic(stmt))
        throw ShapeMismatch("transfer_basic expects a basic statement");
    if (!kind.is_local())
        return AbstractElement{kind,
                               {global_transfer_basic(p, stmt, e.parts.front(), tol)}};
    return local_best(kind, p, e, tol, [&](const Subspace& q) {
        return global_transfer_basic(p, stmt, q, tol);
    });
}

AbstractElement transfer_guard(const DomainKind& kind, const Program& p,
                               const std::vector<std::string>& targets,
                               const std::string& space, bool complemented,
                               const AbstractElement& e, const Tolerances& tol) {
    if (!kind.is_local())
        return AbstractElement{
            kind, {global_guard(p, targets, space, complemented, e.parts.front(), tol)}};
    return local_best(kind, p, e, tol, [&](const Subspace& q) {
        return global_guard(p, targets, space, complemented, q, tol);
    });
}

std::size_t lattice_height(const DomainKind& kind, const QubitLayout& layout) {
    std::size_t h = 0;
    for (std::size_t d : part_dims(kind, layout)) h += d;
    return h;
}

namespace {

AbstractElement analyze_stmt(const DomainKind& kind, const Program& p, const Stmt& s,
                             const AbstractElement& e, AnalyzeStats* stats,
                             const Tolerances& tol);

AbstractElement analyze_seq(const DomainKind& kind, const Program& p, const Block& body,
                            AbstractElement e, AnalyzeStats* stats,
                            const Tolerances& tol) {
    for (const Stmt& s : body) e = analyze_stmt(kind, p, s, e, stats, tol);
    return e;
}

AbstractElement analyze_stmt(const DomainKind& kind, const Program& p, const Stmt& s,
                             const AbstractElement& e, AnalyzeStats* stats,
                             const Tolerances& tol) {
    if (is_basic(s)) return transfer_basic(kind, p, s, e, tol);

    if (const auto* node = std::get_if<IfStmt>(&s.node)) {
        AbstractElement taken = analyze_seq(
            kind, p, node->then_body,
            transfer_guard(kind, p, node->targets, node->space, false, e, tol), stats,
            tol);
        AbstractElement other = analyze_seq(
            kind, p, node->else_body,
            transfer_guard(kind, p, node->targets, node->space, true, e, tol), stats,
            tol);
        return dom_join(taken, other, tol);
    }

    const auto& loop = std::get<WhileStmt>(s.node);
    AbstractElement inv = while_fixpoint(kind, p, loop, e, stats, tol);
    return transfer_guard(kind, p, loop.targets, loop.space, true, inv, tol);
}

}  // namespace

AbstractElement while_fixpoint(const DomainKind& kind, const Program& p,
                               const WhileStmt& loop, const AbstractElement& e,
                               AnalyzeStats* stats, const Tolerances& tol) {
    const std::size_t budget = lattice_height(kind, p.layout) + 1;
    AbstractElement d = e;
    std::size_t iters = 0;
    for (;;) {
        ++iters;
        if (iters > budget)
            throw Error("while analysis exceeded the lattice-height iteration budget");
        AbstractElement moved = analyze_seq(
            kind, p, loop.body,
            transfer_guard(kind, p, loop.targets, loop.space, false, d, tol), stats, tol);
        AbstractElement next = dom_join(d, moved, tol);
        if (dom_leq(next, d, tol)) break;
        d = std::move(next);
    }
    if (stats) {
        stats->while_loops += 1;
        stats->max_while_iterations = std::max(stats->max_while_iterations, iters);
    }
    return d;
}

AbstractElement analyze_block(const DomainKind& kind, const Program& p,
                              const Block& body, const AbstractElement& e,
                              AnalyzeStats* stats, const Tolerances& tol) {
    return analyze_seq(kind, p, body, e, stats, tol);
}

AbstractElement analyze(const DomainKind& kind, const Program& p,
                        const AbstractElement& e, AnalyzeStats* stats,
                        const Tolerances& tol) {
    require_same_shape(e, bottom(kind, p.layout));
    return analyze_seq(kind, p, p.body, e, stats, tol);
}

/*
 * Completeness probing. Structured candidates are tried first: basis
 * states of the concretization G, pairwise superpositions (g_i ± g_j and
 * g_i ± i g_j), and the normalized projector of G (a full-support
 * representative of the whole concretization). Random pure states and
 * random mixtures follow. Gaps concentrate on low-rank inputs, which is
 * why the structured family comes first.
 */
CompletenessReport check_completeness(const DomainKind& kind, const Program& p,
                                      const AbstractElement& e, std::size_t trials,
                                      std::uint64_t seed, const LoopPolicy& policy,
                                      const Tolerances& tol) {
    if (trials < 1) throw ShapeMismatch("check_completeness needs at least one trial");
    const QubitLayout& layout = p.layout;
    Subspace g = gamma_as_subspace(e, layout, tol);

    CompletenessReport report;
    report.analyzed = analyze(kind, p, e, nullptr, tol);
    report.sampled_join = bottom(kind, layout);

    std::vector<Matrix> candidates;
    if (!g.is_zero()) {
        const Matrix& basis = g.basis();
        for (Eigen::Index i = 0; i < basis.cols(); ++i) {
            Vector v = basis.col(i);
            candidates.push_back(v * v.adjoint());
        }
        if (g.dim() <= 16) {
            const double r = 1.0 / std::sqrt(2.0);
            const Cplx im{0.0, 1.0};
            for (Eigen::Index i = 0; i < basis.cols(); ++i)
                for (Eigen::Index j = i + 1; j < basis.cols(); ++j)
                    for (Cplx phase : {Cplx{1, 0}, Cplx{-1, 0}, im, -im}) {
                        Vector v = r * (basis.col(i) + phase * basis.col(j));
                        candidates.push_back(v * v.adjoint());
                    }
        }
        candidates.push_back(projector(g) / static_cast<double>(g.dim()));

        Rng rng(seed);
        for (std::size_t t = 0; t < trials; ++t) {
            if (t % 2 == 0) {
                Vector v = random_pure_in(g, rng);
                candidates.push_back(v * v.adjoint());
            } else {
                candidates.push_back(random_density_in(g, g.dim(), rng));
            }
        }
    }

    for (const Matrix& rho : candidates) {
        State st{rho, layout};
        State out = eval(p, st, policy, tol);
        AbstractElement in_abs = alpha(kind, layout, {st}, tol);
        AbstractElement reached = alpha(kind, layout, {out}, tol);
        AbstractElement predicted = analyze(kind, p, in_abs, nullptr, tol);
        report.samples += 1;
        report.sampled_join = dom_join(report.sampled_join, reached, tol);

        if (!dom_leq(reached, predicted, tol)) report.soundness_violations += 1;
        double gap = dom_residual(predicted, reached);
        if (gap > report.max_deviation) {
            report.max_deviation = gap;
            if (gap > tol.incl_tol) report.witness = st;
        }
    }

    // one more completeness instance: the whole sampled family against e
    double joined_gap = dom_residual(report.analyzed, report.sampled_join);
    report.max_deviation = std::max(report.max_deviation, joined_gap);

    report.complete = report.max_deviation <= tol.incl_tol;
    return report;
}

}  // namespace qai
