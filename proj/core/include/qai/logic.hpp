#pragma once

#include "qai/abstract.hpp"

namespace qai {

/*
 * Triple checking over an abstract domain, with replayable proof trees.
 *
 * A correctness triple {a} S {b} is valid when the strongest
 * postcondition of a (the analyzer result) is below b; an incorrectness
 * triple [a] S [b] is valid when b is below the strongest postcondition.
 * Valid verdicts ship a derivation in the corresponding proof system;
 * invalid correctness verdicts ship a concrete violating state whenever
 * one can be constructed.
 */

struct HoareTriple {
    AbstractElement pre;
    Program program;
    AbstractElement post;
};

struct IncorrectnessTriple {
    AbstractElement pre;
    Program program;
    AbstractElement post;
};

enum class Rule { Exp, Seq, Meas, Imp, While, ExpIn, SeqIn, MeasIn, ImpIn, WhileIn };

std::string rule_name(Rule r);
Rule rule_from_name(const std::string& name);
bool is_incorrectness_rule(Rule r);

// a recorded ordering fact lhs <= rhs together with its residual
struct OrderCheck {
    AbstractElement lhs, rhs;
    double residual = 0.0;
};

struct Derivation {
    Rule rule = Rule::Exp;
    AbstractElement pre, post;
    SourceSpan span;
    std::vector<Derivation> premises;
    std::vector<OrderCheck> side;
};

// strongest postcondition: the forward analysis of the program
AbstractElement spc(const DomainKind& kind, const Program& p, const AbstractElement& a,
                    const Tolerances& tol = default_tolerances());

enum class WitnessStatus { NotNeeded, Found, Unknown };

struct HoareCheck {
    bool valid = false;
    std::optional<Derivation> derivation;   // when valid
    WitnessStatus witness_status = WitnessStatus::NotNeeded;
    std::optional<State> witness;           // when invalid and found
    double witness_residual = 0.0;          // escape of eval(witness) from post
    AbstractElement strongest_post;
};

HoareCheck check_hoare(const HoareTriple& t, const LoopPolicy& policy = {},
                       const Tolerances& tol = default_tolerances());

struct IncorrectnessCheck {
    bool valid = false;
    std::optional<Derivation> derivation;   // when valid
    std::optional<Subspace> gap;            // post /\ spc(pre)^perp when invalid
    double gap_residual = 0.0;              // escape of post from spc(pre)
    AbstractElement strongest_post;
};

// global domain only; the local domain admits no sound-and-complete
// incorrectness reading
IncorrectnessCheck check_incorrectness(const IncorrectnessTriple& t,
                                       const Tolerances& tol = default_tolerances());

struct ReplayResult {
    bool ok = true;
    std::string path;    // first failing node, e.g. root.premises[1]
    std::string detail;
    explicit operator bool() const { return ok; }
};

// Re-checks every node of a derivation against the program: transfer
// leaves are recomputed, ordering side conditions are re-verified, and
// rule shapes must match the proof system exactly.
ReplayResult replay(const Derivation& d, const Program& p,
                    const Tolerances& tol = default_tolerances());

// p1 followed by p2 as one program; layouts must agree and shared
// declaration names must agree in value
Program sequence_programs(const Program& p1, const Program& p2);

struct CompositionReport {
    bool equal = false;
    double fused_in_staged = 0.0;   // residual of analyze(p1;p2) inside the staged result
    double staged_in_fused = 0.0;
    AbstractElement fused, staged;
};

// compares analyze(p1;p2, a) with analyze(p2, analyze(p1, a))
CompositionReport composition_identity_test(const DomainKind& kind, const Program& p1,
                                            const Program& p2, const AbstractElement& a,
                                            const Tolerances& tol = default_tolerances());

}  // namespace qai
