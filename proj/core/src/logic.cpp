#include "qai/logic.hpp"

#include <algorithm>

#include "qai/sampling.hpp"

namespace qai {

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Exp: return "Exp";
        case Rule::Seq: return "Seq";
        case Rule::Meas: return "Meas";
        case Rule::Imp: return "Imp";
        case Rule::While: return "While";
        case Rule::ExpIn: return "ExpIn";
        case Rule::SeqIn: return "SeqIn";
        case Rule::MeasIn: return "MeasIn";
        case Rule::ImpIn: return "ImpIn";
        case Rule::WhileIn: return "WhileIn";
    }
    throw Error("unreachable rule tag");
}

Rule rule_from_name(const std::string& name) {
    static const std::vector<std::pair<std::string, Rule>> table = {
        {"Exp", Rule::Exp},     {"Seq", Rule::Seq},       {"Meas", Rule::Meas},
        {"Imp", Rule::Imp},     {"While", Rule::While},   {"ExpIn", Rule::ExpIn},
        {"SeqIn", Rule::SeqIn}, {"MeasIn", Rule::MeasIn}, {"ImpIn", Rule::ImpIn},
        {"WhileIn", Rule::WhileIn}};
    for (const auto& [n, r] : table)
        if (n == name) return r;
    throw Error("unknown rule name: " + name);
}

bool is_incorrectness_rule(Rule r) {
    return r == Rule::ExpIn || r == Rule::SeqIn || r == Rule::MeasIn ||
           r == Rule::ImpIn || r == Rule::WhileIn;
}

AbstractElement spc(const DomainKind& kind, const Program& p, const AbstractElement& a,
                    const Tolerances& tol) {
    return analyze(kind, p, a, nullptr, tol);
}

/*
 * Program fragments walked by the proof emitter and the replayer: a
 * sequence of items, each being either a real statement or a synthesized
 * measurement guard (the "assert P" / "assert P-perp" halves of
 * conditionals and loops).
 */
namespace {

struct GuardRef {
    const std::vector<std::string>* targets;
    const std::string* space;
    bool complemented;
    SourceSpan span;
};

struct FragItem {
    const Stmt* stmt = nullptr;
    std::optional<GuardRef> guard;
};

using Fragment = std::vector<FragItem>;

Fragment whole_program(const Program& p) {
    Fragment f;
    for (const Stmt& s : p.body) f.push_back({&s, std::nullopt});
    return f;
}

Fragment guarded_block(const std::vector<std::string>& targets, const std::string& space,
                       bool complemented, SourceSpan span, const Block* body) {
    Fragment f;
    f.push_back({nullptr, GuardRef{&targets, &space, complemented, span}});
    if (body)
        for (const Stmt& s : *body) f.push_back({&s, std::nullopt});
    return f;
}

SourceSpan fragment_span(const Fragment& f) {
    if (f.empty()) return {};
    SourceSpan first = f.front().stmt ? f.front().stmt->span : f.front().guard->span;
    SourceSpan last = f.back().stmt ? f.back().stmt->span : f.back().guard->span;
    return {first.begin, last.end};
}

AbstractElement transfer_item(const DomainKind& kind, const Program& p,
                              const FragItem& item, const AbstractElement& a,
                              const Tolerances& tol) {
    if (item.guard)
        return transfer_guard(kind, p, *item.guard->targets, *item.guard->space,
                              item.guard->complemented, a, tol);
    return transfer_basic(kind, p, *item.stmt, a, tol);
}

AbstractElement analyze_item(const DomainKind& kind, const Program& p,
                             const FragItem& item, const AbstractElement& a,
                             const Tolerances& tol) {
    if (item.guard || is_basic(*item.stmt)) return transfer_item(kind, p, item, a, tol);
    Block single;
    single.push_back(*item.stmt);
    return analyze_block(kind, p, single, a, nullptr, tol);
}

AbstractElement analyze_fragment(const DomainKind& kind, const Program& p,
                                 const Fragment& f, AbstractElement a,
                                 const Tolerances& tol) {
    for (const FragItem& item : f) a = analyze_item(kind, p, item, a, tol);
    return a;
}

OrderCheck make_order(const AbstractElement& lhs, const AbstractElement& rhs) {
    return OrderCheck{lhs, rhs, dom_residual(lhs, rhs)};
}

Derivation imp_wrap(Rule imp_rule, Derivation inner, const AbstractElement& pre,
                    const AbstractElement& post) {
    Derivation d;
    d.rule = imp_rule;
    d.pre = pre;
    d.post = post;
    d.span = inner.span;
    if (imp_rule == Rule::Imp) {
        d.side.push_back(make_order(pre, inner.pre));
        d.side.push_back(make_order(inner.post, post));
    } else {
        d.side.push_back(make_order(inner.pre, pre));
        d.side.push_back(make_order(post, inner.post));
    }
    d.premises.push_back(std::move(inner));
    return d;
}

/*
 * Canonical correctness derivation: concludes {a} fragment {asem(a)}
 * with (Imp) used only to restore loop invariants.
 */
Derivation derive_hoare(const DomainKind& kind, const Program& p, const Fragment& f,
                        const AbstractElement& a, const Tolerances& tol) {
    if (f.size() > 1) {
        Fragment head{f.front()};
        Fragment tail(f.begin() + 1, f.end());
        Derivation first = derive_hoare(kind, p, head, a, tol);
        Derivation rest = derive_hoare(kind, p, tail, first.post, tol);
        Derivation d;
        d.rule = Rule::Seq;
        d.pre = a;
        d.post = rest.post;
        d.span = fragment_span(f);
        d.premises.push_back(std::move(first));
        d.premises.push_back(std::move(rest));
        return d;
    }

    const FragItem& item = f.front();
    if (item.guard || is_basic(*item.stmt)) {
        Derivation d;
        d.rule = Rule::Exp;
        d.pre = a;
        d.post = transfer_item(kind, p, item, a, tol);
        d.span = item.guard ? item.guard->span : item.stmt->span;
        return d;
    }

    if (const auto* node = std::get_if<IfStmt>(&item.stmt->node)) {
        Derivation taken = derive_hoare(
            kind, p,
            guarded_block(node->targets, node->space, false, item.stmt->span,
                          &node->then_body),
            a, tol);
        Derivation other = derive_hoare(
            kind, p,
            guarded_block(node->targets, node->space, true, item.stmt->span,
                          &node->else_body),
            a, tol);
        Derivation d;
        d.rule = Rule::Meas;
        d.pre = a;
        d.post = dom_join(taken.post, other.post, tol);
        d.span = item.stmt->span;
        d.premises.push_back(std::move(taken));
        d.premises.push_back(std::move(other));
        return d;
    }

    const auto& loop = std::get<WhileStmt>(item.stmt->node);
    AbstractElement invariant = while_fixpoint(kind, p, loop, a, nullptr, tol);

    // premise {inv} assert P; S {inv}: the canonical body derivation ends
    // below the invariant, so one (Imp) restores it
    Derivation body = derive_hoare(
        kind, p,
        guarded_block(loop.targets, loop.space, false, item.stmt->span, &loop.body),
        invariant, tol);
    Derivation stay = imp_wrap(Rule::Imp, std::move(body), invariant, invariant);

    Derivation exit = derive_hoare(
        kind, p,
        guarded_block(loop.targets, loop.space, true, item.stmt->span, nullptr),
        invariant, tol);
    AbstractElement out = exit.post;

    Derivation w;
    w.rule = Rule::While;
    w.pre = invariant;
    w.post = out;
    w.span = item.stmt->span;
    w.premises.push_back(std::move(stay));
    w.premises.push_back(std::move(exit));

    // widen the incoming element to the invariant
    return imp_wrap(Rule::Imp, std::move(w), a, out);
}

/*
 * Canonical incorrectness derivation: concludes [a] fragment [asem(a)].
 * Loops unroll the reachability chain a_i and exit terms b_i until the
 * accumulated join of the a_i stabilizes.
 */
Derivation derive_incorrect(const DomainKind& kind, const Program& p, const Fragment& f,
                            const AbstractElement& a, const Tolerances& tol) {
    if (f.size() > 1) {
        Fragment head{f.front()};
        Fragment tail(f.begin() + 1, f.end());
        Derivation first = derive_incorrect(kind, p, head, a, tol);
        Derivation rest = derive_incorrect(kind, p, tail, first.post, tol);
        Derivation d;
        d.rule = Rule::SeqIn;
        d.pre = a;
        d.post = rest.post;
        d.span = fragment_span(f);
        d.premises.push_back(std::move(first));
        d.premises.push_back(std::move(rest));
        return d;
    }

    const FragItem& item = f.front();
    if (item.guard || is_basic(*item.stmt)) {
        Derivation d;
        d.rule = Rule::ExpIn;
        d.pre = a;
        d.post = transfer_item(kind, p, item, a, tol);
        d.span = item.guard ? item.guard->span : item.stmt->span;
        return d;
    }

    if (const auto* node = std::get_if<IfStmt>(&item.stmt->node)) {
        Derivation taken = derive_incorrect(
            kind, p,
            guarded_block(node->targets, node->space, false, item.stmt->span,
                          &node->then_body),
            a, tol);
        Derivation other = derive_incorrect(
            kind, p,
            guarded_block(node->targets, node->space, true, item.stmt->span,
                          &node->else_body),
            a, tol);
        Derivation d;
        d.rule = Rule::MeasIn;
        d.pre = a;
        d.post = dom_join(taken.post, other.post, tol);
        d.span = item.stmt->span;
        d.premises.push_back(std::move(taken));
        d.premises.push_back(std::move(other));
        return d;
    }

    const auto& loop = std::get<WhileStmt>(item.stmt->node);
    const std::size_t budget = lattice_height(kind, p.layout) + 1;

    Derivation w;
    w.rule = Rule::WhileIn;
    w.pre = a;
    w.span = item.stmt->span;

    AbstractElement chain = a;            // a_i
    AbstractElement chain_join = a;       // join of the a_i so far
    AbstractElement exit_join = bottom(kind, p.layout);
    for (std::size_t i = 0; i < budget + 1; ++i) {
        Derivation step = derive_incorrect(
            kind, p,
            guarded_block(loop.targets, loop.space, false, item.stmt->span, &loop.body),
            chain, tol);
        Derivation exit = derive_incorrect(
            kind, p,
            guarded_block(loop.targets, loop.space, true, item.stmt->span, nullptr),
            chain, tol);
        AbstractElement next = step.post;
        exit_join = dom_join(exit_join, exit.post, tol);
        w.premises.push_back(std::move(step));
        w.premises.push_back(std::move(exit));

        AbstractElement grown = dom_join(chain_join, next, tol);
        if (dom_leq(grown, chain_join, tol)) break;  // chain stabilized
        chain_join = std::move(grown);
        chain = std::move(next);
        if (i + 1 >= budget + 1)
            throw Error("incorrectness loop chain exceeded its iteration budget");
    }
    w.post = exit_join;
    return w;
}

}  // namespace

HoareCheck check_hoare(const HoareTriple& t, const LoopPolicy& policy,
                       const Tolerances& tol) {
    const Program& p = t.program;
    if (!(t.pre.kind == t.post.kind))
        throw ShapeMismatch("pre and post live in different domains");

    HoareCheck result;
    result.strongest_post = spc(t.pre.kind, p, t.pre, tol);
    result.valid = dom_leq(result.strongest_post, t.post, tol);

    if (result.valid) {
        Derivation core = derive_hoare(t.pre.kind, p, whole_program(p), t.pre, tol);
        result.derivation = imp_wrap(Rule::Imp, std::move(core), t.pre, t.post);
        return result;
    }

    // hunt for a state in gamma(pre) that lands outside gamma(post)
    Subspace g_pre = gamma_as_subspace(t.pre, p.layout, tol);
    Subspace g_post = gamma_as_subspace(t.post, p.layout, tol);
    if (g_pre.is_zero()) {
        result.witness_status = WitnessStatus::Unknown;
        return result;
    }

    auto try_witness = [&](const Matrix& rho) -> bool {
        State st{rho, p.layout};
        State out = eval(p, st, policy, tol);
        double tr = out.trace();
        Subspace reached = tr <= tol.rank_tol
                               ? Subspace::zero(p.layout.dim())
                               : support(out.rho, tol);
        double residual = inclusion_residual(reached, g_post);
        if (residual > tol.incl_tol) {
            result.witness_status = WitnessStatus::Found;
            result.witness = st;
            result.witness_residual = residual;
            return true;
        }
        return false;
    };

    // the mixture over a basis of gamma(pre) abstracts to pre itself, so
    // in the global domain it must witness any true gap
    if (try_witness(projector(g_pre) / static_cast<double>(g_pre.dim())))
        return result;

    // the local-domain verdict over-approximates, so a failed inclusion
    // need not have a concrete violation; search structured and random
    // pure states before reporting Unknown
    if (t.pre.kind.is_local()) {
        const Matrix& basis = g_pre.basis();
        const double r = 1.0 / std::sqrt(2.0);
        const Cplx im{0.0, 1.0};
        for (Eigen::Index i = 0; i < basis.cols(); ++i) {
            Vector v = basis.col(i);
            if (try_witness(v * v.adjoint())) return result;
        }
        if (g_pre.dim() <= 16) {
            for (Eigen::Index i = 0; i < basis.cols(); ++i)
                for (Eigen::Index j = i + 1; j < basis.cols(); ++j)
                    for (Cplx phase : {Cplx{1, 0}, Cplx{-1, 0}, im, -im}) {
                        Vector v = r * (basis.col(i) + phase * basis.col(j));
                        if (try_witness(v * v.adjoint())) return result;
                    }
        }
        Rng rng(0x5eed);
        for (int i = 0; i < 64; ++i) {
            Vector v = random_pure_in(g_pre, rng);
            if (try_witness(v * v.adjoint())) return result;
        }
    }
    result.witness_status = WitnessStatus::Unknown;
    return result;
}

IncorrectnessCheck check_incorrectness(const IncorrectnessTriple& t,
                                       const Tolerances& tol) {
    if (t.pre.kind.is_local() || t.post.kind.is_local())
        throw UnsupportedDomain(
            "incorrectness checking is defined for the global domain only");
    const Program& p = t.program;

    IncorrectnessCheck result;
    result.strongest_post = spc(t.pre.kind, p, t.pre, tol);
    result.valid = dom_leq(t.post, result.strongest_post, tol);

    if (result.valid) {
        Derivation core = derive_incorrect(t.pre.kind, p, whole_program(p), t.pre, tol);
        result.derivation = imp_wrap(Rule::ImpIn, std::move(core), t.pre, t.post);
        return result;
    }

    result.gap_residual = dom_residual(t.post, result.strongest_post);
    result.gap = meet(t.post.parts.front(),
                      orthocomplement(result.strongest_post.parts.front(), tol), tol);
    return result;
}

/*
 * Replay. Walks the derivation against the program structure, recomputing
 * every transfer leaf and re-verifying every ordering side condition.
 */
namespace {

struct ReplayFail {
    std::string path;
    std::string detail;
};

[[noreturn]] void fail_at(const std::string& path, const std::string& detail) {
    throw ReplayFail{path, detail};
}

struct ReplayContext {
    const Program* p;
    const Tolerances* tol;
    bool incorrectness;
};

void need_same(const ReplayContext& ctx, const AbstractElement& a,
               const AbstractElement& b, const std::string& path,
               const std::string& what) {
    if (!same_element(a, b, *ctx.tol)) fail_at(path, what);
}

void replay_node(const ReplayContext& ctx, const Derivation& d, const Fragment& f,
                 const std::string& path);

void replay_consequence(const ReplayContext& ctx, const Derivation& d, const Fragment& f,
                        const std::string& path) {
    if (d.premises.size() != 1 || d.side.size() != 2)
        fail_at(path, "consequence node needs one premise and two side conditions");
    const Derivation& inner = d.premises.front();
    if (d.rule == Rule::Imp) {
        need_same(ctx, d.side[0].lhs, d.pre, path, "first side condition must start at the conclusion pre");
        need_same(ctx, d.side[0].rhs, inner.pre, path, "first side condition must end at the premise pre");
        need_same(ctx, d.side[1].lhs, inner.post, path, "second side condition must start at the premise post");
        need_same(ctx, d.side[1].rhs, d.post, path, "second side condition must end at the conclusion post");
    } else {
        need_same(ctx, d.side[0].lhs, inner.pre, path, "first side condition must start at the premise pre");
        need_same(ctx, d.side[0].rhs, d.pre, path, "first side condition must end at the conclusion pre");
        need_same(ctx, d.side[1].lhs, d.post, path, "second side condition must start at the conclusion post");
        need_same(ctx, d.side[1].rhs, inner.post, path, "second side condition must end at the premise post");
    }
    for (std::size_t i = 0; i < d.side.size(); ++i)
        if (!dom_leq(d.side[i].lhs, d.side[i].rhs, *ctx.tol))
            fail_at(path, "side condition " + std::to_string(i) + " does not hold");
    replay_node(ctx, inner, f, path + ".premises[0]");
}

void replay_node(const ReplayContext& ctx, const Derivation& d, const Fragment& f,
                 const std::string& path) {
    if (is_incorrectness_rule(d.rule) != ctx.incorrectness)
        fail_at(path, "rule belongs to the other proof system");

    if (d.rule == Rule::Imp || d.rule == Rule::ImpIn) {
        replay_consequence(ctx, d, f, path);
        return;
    }

    if (f.empty()) fail_at(path, "derivation covers an empty program fragment");

    const DomainKind& kind = d.pre.kind;
    const Tolerances& tol = *ctx.tol;

    if (f.size() > 1) {
        Rule want = ctx.incorrectness ? Rule::SeqIn : Rule::Seq;
        if (d.rule != want) fail_at(path, "sequence fragment needs a sequencing rule");
        if (d.premises.size() != 2) fail_at(path, "sequencing rule needs two premises");
        const Derivation& first = d.premises[0];
        const Derivation& rest = d.premises[1];
        need_same(ctx, first.pre, d.pre, path, "first premise must start at the conclusion pre");
        need_same(ctx, rest.pre, first.post, path, "premises must chain through the middle assertion");
        need_same(ctx, rest.post, d.post, path, "second premise must end at the conclusion post");
        Fragment head{f.front()};
        Fragment tail(f.begin() + 1, f.end());
        replay_node(ctx, first, head, path + ".premises[0]");
        replay_node(ctx, rest, tail, path + ".premises[1]");
        return;
    }

    const FragItem& item = f.front();

    if (item.guard || is_basic(*item.stmt)) {
        Rule want = ctx.incorrectness ? Rule::ExpIn : Rule::Exp;
        if (d.rule != want) fail_at(path, "basic command needs a transfer axiom");
        if (!d.premises.empty()) fail_at(path, "transfer axiom must be a leaf");
        AbstractElement expect = transfer_item(kind, *ctx.p, item, d.pre, tol);
        if (!same_element(expect, d.post, tol))
            fail_at(path, "conclusion post is not the transfer of the pre");
        return;
    }

    if (const auto* node = std::get_if<IfStmt>(&item.stmt->node)) {
        Rule want = ctx.incorrectness ? Rule::MeasIn : Rule::Meas;
        if (d.rule != want) fail_at(path, "conditional needs a measurement rule");
        if (d.premises.size() != 2) fail_at(path, "measurement rule needs two premises");
        const Derivation& taken = d.premises[0];
        const Derivation& other = d.premises[1];
        need_same(ctx, taken.pre, d.pre, path, "branch premises must start at the conclusion pre");
        need_same(ctx, other.pre, d.pre, path, "branch premises must start at the conclusion pre");
        need_same(ctx, dom_join(taken.post, other.post, tol), d.post, path,
                  "conclusion post must join the branch posts");
        replay_node(ctx, taken,
                    guarded_block(node->targets, node->space, false, item.stmt->span,
                                  &node->then_body),
                    path + ".premises[0]");
        replay_node(ctx, other,
                    guarded_block(node->targets, node->space, true, item.stmt->span,
                                  &node->else_body),
                    path + ".premises[1]");
        return;
    }

    const auto& loop = std::get<WhileStmt>(item.stmt->node);

    if (!ctx.incorrectness) {
        if (d.rule != Rule::While) fail_at(path, "loop needs the loop rule");
        if (d.premises.size() != 2) fail_at(path, "loop rule needs two premises");
        const Derivation& stay = d.premises[0];
        const Derivation& exit = d.premises[1];
        need_same(ctx, stay.pre, d.pre, path, "loop-body premise must start at the invariant");
        need_same(ctx, stay.post, d.pre, path, "loop-body premise must restore the invariant");
        need_same(ctx, exit.pre, d.pre, path, "exit premise must start at the invariant");
        need_same(ctx, exit.post, d.post, path, "exit premise must end at the conclusion post");

        // the invariant must really absorb one guarded pass of the body
        Fragment guarded = guarded_block(loop.targets, loop.space, false,
                                         item.stmt->span, &loop.body);
        AbstractElement moved = analyze_fragment(kind, *ctx.p, guarded, d.pre, tol);
        if (!dom_leq(moved, d.pre, tol))
            fail_at(path, "claimed invariant is not preserved by the loop body");

        replay_node(ctx, stay, guarded, path + ".premises[0]");
        replay_node(ctx, exit,
                    guarded_block(loop.targets, loop.space, true, item.stmt->span,
                                  nullptr),
                    path + ".premises[1]");
        return;
    }

    if (d.rule != Rule::WhileIn) fail_at(path, "loop needs the loop rule");
    if (d.premises.size() < 2 || d.premises.size() % 2 != 0)
        fail_at(path, "loop rule premises come in step/exit pairs");

    Fragment step_frag =
        guarded_block(loop.targets, loop.space, false, item.stmt->span, &loop.body);
    Fragment exit_frag =
        guarded_block(loop.targets, loop.space, true, item.stmt->span, nullptr);

    AbstractElement chain = d.pre;
    AbstractElement chain_join = d.pre;
    AbstractElement exit_join = bottom(kind, ctx.p->layout);
    AbstractElement last_next = d.pre;
    for (std::size_t i = 0; i * 2 < d.premises.size(); ++i) {
        const Derivation& step = d.premises[2 * i];
        const Derivation& exit = d.premises[2 * i + 1];
        std::string here = path + ".premises[" + std::to_string(2 * i) + "]";
        need_same(ctx, step.pre, chain, here, "chain premise must start at the current iterate");
        need_same(ctx, exit.pre, chain, here, "exit premise must start at the current iterate");
        replay_node(ctx, step, step_frag, here);
        replay_node(ctx, exit, exit_frag, path + ".premises[" + std::to_string(2 * i + 1) + "]");
        exit_join = dom_join(exit_join, exit.post, tol);
        last_next = step.post;
        chain = step.post;
        chain_join = dom_join(chain_join, step.post, tol);
    }
    // the chain must have stabilized, so the finite join below equals the
    // full iteration join
    AbstractElement without_last = d.pre;
    for (std::size_t i = 0; i * 2 + 2 < d.premises.size(); ++i)
        without_last = dom_join(without_last, d.premises[2 * i].post, tol);
    if (!dom_leq(last_next, without_last, tol))
        fail_at(path, "loop chain was truncated before stabilizing");
    need_same(ctx, exit_join, d.post, path, "conclusion post must join the exit terms");
}

}  // namespace

ReplayResult replay(const Derivation& d, const Program& p, const Tolerances& tol) {
    ReplayContext ctx{&p, &tol, is_incorrectness_rule(d.rule)};
    try {
        replay_node(ctx, d, whole_program(p), "root");
        return {};
    } catch (const ReplayFail& f) {
        return {false, f.path, f.detail};
    } catch (const Error& e) {
        return {false, "root", e.what()};
    }
}

Program sequence_programs(const Program& p1, const Program& p2) {
    if (!(p1.layout == p2.layout))
        throw ShapeMismatch("sequenced programs must share a layout");
    Program out = p1;
    for (const auto& [name, decl] : p2.unitaries) {
        if (const UnitaryDecl* prev = out.find_unitary(name)) {
            if (prev->matrix.rows() != decl.matrix.rows() ||
                prev->matrix.cols() != decl.matrix.cols() ||
                prev->matrix != decl.matrix)
                throw ShapeMismatch("conflicting declarations of unitary " + name);
            continue;
        }
        out.unitaries.emplace_back(name, decl);
    }
    for (const auto& [name, decl] : p2.spaces) {
        if (const SpaceDecl* prev = out.find_space(name)) {
            bool same = prev->num_bits == decl.num_bits &&
                        prev->vectors.size() == decl.vectors.size();
            for (std::size_t i = 0; same && i < decl.vectors.size(); ++i)
                same = prev->vectors[i] == decl.vectors[i];
            if (!same) throw ShapeMismatch("conflicting declarations of space " + name);
            continue;
        }
        out.spaces.emplace_back(name, decl);
    }
    out.body.insert(out.body.end(), p2.body.begin(), p2.body.end());
    return out;
}

CompositionReport composition_identity_test(const DomainKind& kind, const Program& p1,
                                            const Program& p2, const AbstractElement& a,
                                            const Tolerances& tol) {
    CompositionReport report;
    report.fused = analyze(kind, sequence_programs(p1, p2), a, nullptr, tol);
    report.staged = analyze(kind, p2, analyze(kind, p1, a, nullptr, tol), nullptr, tol);
    report.fused_in_staged = dom_residual(report.fused, report.staged);
    report.staged_in_fused = dom_residual(report.staged, report.fused);
    report.equal = report.fused_in_staged <= tol.incl_tol &&
                   report.staged_in_fused <= tol.incl_tol;
    return report;
}

}  // namespace qai
