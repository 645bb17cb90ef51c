#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qai/subspace.hpp"

namespace qai {

/*
 * AST for the quantum while-language. Statements act on ordered tuples of
 * distinct qubit variables; unitaries and spaces are referenced by name
 * and resolved against the program's declarations or the builtin set.
 */

struct SourceLoc {
    int line = 0;
    int col = 0;
};

// character offsets into the source text; [0,0) for synthesized programs
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct SkipStmt {
    bool operator==(const SkipStmt&) const = default;
};
struct InitStmt {
    std::vector<std::string> targets;
    bool operator==(const InitStmt&) const = default;
};
struct UnitaryStmt {
    std::vector<std::string> targets;
    std::string gate;
    bool operator==(const UnitaryStmt&) const = default;
};
struct AssertStmt {
    std::vector<std::string> targets;
    std::string space;
    bool operator==(const AssertStmt&) const = default;
};
struct IfStmt {
    std::vector<std::string> targets;
    std::string space;
    Block then_body;
    Block else_body;
    bool operator==(const IfStmt&) const;
};
struct WhileStmt {
    std::vector<std::string> targets;
    std::string space;
    Block body;
    bool operator==(const WhileStmt&) const;
};

struct Stmt {
    std::variant<SkipStmt, InitStmt, UnitaryStmt, AssertStmt, IfStmt, WhileStmt> node;
    SourceLoc loc;
    SourceSpan span;

    // structural equality; source positions are ignored
    bool operator==(const Stmt& o) const { return node == o.node; }
};

bool is_basic(const Stmt& s);  // skip / init / unitary / assert

struct UnitaryDecl {
    Matrix matrix;
    SourceLoc loc;
};

// a span(...) declaration kept as written, so pretty() can round-trip it
struct SpaceDecl {
    std::size_t num_bits = 0;
    std::vector<Vector> vectors;  // dense, length 2^num_bits each
    SourceLoc loc;
};

struct Diagnostic {
    std::string kind;
    std::string message;
    SourceLoc loc;
};

struct Program {
    QubitLayout layout;
    std::vector<std::pair<std::string, UnitaryDecl>> unitaries;
    std::vector<std::pair<std::string, SpaceDecl>> spaces;
    Block body;

    const UnitaryDecl* find_unitary(const std::string& name) const;
    const SpaceDecl* find_space(const std::string& name) const;

    // resolve a reference (declared or builtin) for a statement with
    // num_targets target variables
    Matrix unitary_matrix(const std::string& name, std::size_t num_targets) const;
    Subspace space_subspace(const std::string& name, std::size_t num_targets) const;
};

bool operator==(const Program& a, const Program& b);

/*
 * Builtin gates: I H X Y Z S T (one qubit), CNOT CZ SWAP (two qubits,
 * first target is the control / most significant factor).
 * Builtin spaces: zero = span{|0...0>}, one = span{|1...1>}, full.
 */
bool is_builtin_gate(const std::string& name);
Matrix builtin_gate(const std::string& name);
std::size_t builtin_gate_arity(const std::string& name);
bool is_builtin_space(const std::string& name);
Subspace builtin_space(const std::string& name, std::size_t num_bits);

// Grammar-only parse; use validate() for the semantic checks.
Program parse_unvalidated(const std::string& text);

// Parse and validate; throws SyntaxError or ValidationError.
Program parse(const std::string& text);

// Empty result iff the program satisfies every static invariant.
std::vector<Diagnostic> validate(const Program& p);

// Canonical text form; parse(pretty(p)) is structurally equal to p.
std::string pretty(const Program& p);

// %.17g, the shortest form that round-trips a double exactly
std::string format_double(double x);

}  // namespace qai
