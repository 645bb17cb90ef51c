#pragma once

#include <optional>

#include "qai/concrete.hpp"

namespace qai {

/*
 * Abstract domains for the forward analyzer. Two kinds are provided:
 *
 *  - the global subspace domain: one subspace of the full 2^|V| space;
 *    its basic transfers are complete, so the analysis result equals the
 *    abstraction of the reachable states exactly;
 *
 *  - the local-subspace domain over a signature (s_1, ..., s_m): a tuple
 *    of subspaces, one per subsystem, ordered componentwise. Its
 *    transfers are the best abstractions and are sound but in general
 *    incomplete.
 */

struct Signature {
    std::vector<std::vector<std::string>> subsets;

    bool operator==(const Signature&) const = default;
};

// each subset must be nonempty, a proper subset of the layout, with
// distinct known variables
void validate_signature(const Signature& sig, const QubitLayout& layout);

struct DomainKind {
    enum class Tag { Subspace, Local };
    Tag tag = Tag::Subspace;
    Signature signature;  // meaningful for Local only

    static DomainKind global() { return {Tag::Subspace, {}}; }
    static DomainKind local(Signature sig) { return {Tag::Local, std::move(sig)}; }

    bool is_local() const { return tag == Tag::Local; }
    bool operator==(const DomainKind&) const = default;
};

struct AbstractElement {
    DomainKind kind;
    std::vector<Subspace> parts;  // a single part for the global domain
};

AbstractElement bottom(const DomainKind& kind, const QubitLayout& layout);
AbstractElement top(const DomainKind& kind, const QubitLayout& layout);

// max over components of the inclusion residual of a inside b
double dom_residual(const AbstractElement& a, const AbstractElement& b);

bool dom_leq(const AbstractElement& a, const AbstractElement& b,
             const Tolerances& tol = default_tolerances());
bool same_element(const AbstractElement& a, const AbstractElement& b,
                  const Tolerances& tol = default_tolerances());
AbstractElement dom_join(const AbstractElement& a, const AbstractElement& b,
                         const Tolerances& tol = default_tolerances());
AbstractElement dom_meet(const AbstractElement& a, const AbstractElement& b,
                         const Tolerances& tol = default_tolerances());

// abstraction of a finite set of states
AbstractElement alpha(const DomainKind& kind, const QubitLayout& layout,
                      const std::vector<State>& states,
                      const Tolerances& tol = default_tolerances());

// abstraction of the set of states supported inside a global subspace
AbstractElement alpha_subspace(const DomainKind& kind, const QubitLayout& layout,
                               const Subspace& global,
                               const Tolerances& tol = default_tolerances());

/*
 * The largest global subspace G whose states are exactly the
 * concretization of e: e itself for the global domain, the intersection
 * of the lifted components for the local one. Membership tests reduce to
 * support inclusion in G.
 */
Subspace gamma_as_subspace(const AbstractElement& e, const QubitLayout& layout,
                           const Tolerances& tol = default_tolerances());

// abstract transfer of one basic statement (skip / init / unitary / assert)
AbstractElement transfer_basic(const DomainKind& kind, const Program& p,
                               const Stmt& stmt, const AbstractElement& e,
                               const Tolerances& tol = default_tolerances());

// transfer of the measurement guard "assert P" (or its complement) used
// by conditionals and loops
AbstractElement transfer_guard(const DomainKind& kind, const Program& p,
                               const std::vector<std::string>& targets,
                               const std::string& space, bool complemented,
                               const AbstractElement& e,
                               const Tolerances& tol = default_tolerances());

struct AnalyzeStats {
    std::size_t max_while_iterations = 0;
    std::size_t while_loops = 0;
};

// number of strict steps any increasing chain can take: 2^|V| globally,
// sum of the component dimensions locally
std::size_t lattice_height(const DomainKind& kind, const QubitLayout& layout);

AbstractElement analyze_block(const DomainKind& kind, const Program& p,
                              const Block& body, const AbstractElement& e,
                              AnalyzeStats* stats = nullptr,
                              const Tolerances& tol = default_tolerances());

// forward analysis of the whole program
AbstractElement analyze(const DomainKind& kind, const Program& p,
                        const AbstractElement& e, AnalyzeStats* stats = nullptr,
                        const Tolerances& tol = default_tolerances());

/*
 * Loop invariant used by the analyzer and the proof emitter: the limit of
 * the increasing iteration d0 = e, d_{n+1} = d_n v transfer(assert P; S)(d_n).
 * For join-preserving transfers (the global domain) this equals the join
 * of all iterates; for the local domain it may over-approximate it.
 */
AbstractElement while_fixpoint(const DomainKind& kind, const Program& p,
                               const WhileStmt& loop, const AbstractElement& e,
                               AnalyzeStats* stats = nullptr,
                               const Tolerances& tol = default_tolerances());

/*
 * Empirical completeness check of the analyzer against the concrete
 * semantics: draws states rho from the concretization of e (structured
 * candidates first, then seeded random ones) and compares
 * alpha({eval(p, rho)}) with analyze(p, alpha({rho})). A strict gap
 * certifies incompleteness and is reported with the witness state.
 */
struct CompletenessReport {
    bool complete = true;
    double max_deviation = 0.0;         // worst gap found
    std::size_t samples = 0;
    std::size_t soundness_violations = 0;  // samples where alpha(eval) escaped the analysis
    std::optional<State> witness;
    AbstractElement analyzed;           // analyze(kind, p, e)
    AbstractElement sampled_join;       // join over samples of alpha({eval})
};

CompletenessReport check_completeness(const DomainKind& kind, const Program& p,
                                      const AbstractElement& e, std::size_t trials,
                                      std::uint64_t seed = 0,
                                      const LoopPolicy& policy = {},
                                      const Tolerances& tol = default_tolerances());

}  // namespace qai
