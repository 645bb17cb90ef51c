#include "qai/lang.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

namespace qai {

bool IfStmt::operator==(const IfStmt& o) const {
    return targets == o.targets && space == o.space &&
           then_body == o.then_body && else_body == o.else_body;
}

bool WhileStmt::operator==(const WhileStmt& o) const {
    return targets == o.targets && space == o.space && body == o.body;
}

bool is_basic(const Stmt& s) {
    return !std::holds_alternative<IfStmt>(s.node) &&
           !std::holds_alternative<WhileStmt>(s.node);
}

/*
 * Builtins
 */

bool is_builtin_gate(const std::string& name) {
    static const std::set<std::string> gates = {"I", "H", "X", "Y", "Z",
                                                "S", "T", "CNOT", "CZ", "SWAP"};
    return gates.count(name) > 0;
}

std::size_t builtin_gate_arity(const std::string& name) {
    return (name == "CNOT" || name == "CZ" || name == "SWAP") ? 2 : 1;
}

Matrix builtin_gate(const std::string& name) {
    const Cplx i{0.0, 1.0};
    const double r = 1.0 / std::sqrt(2.0);
    Matrix m;
    if (name == "I") {
        m = Matrix::Identity(2, 2);
    } else if (name == "H") {
        m.resize(2, 2);
        m << r, r, r, -r;
    } else if (name == "X") {
        m.resize(2, 2);
        m << 0, 1, 1, 0;
    } else if (name == "Y") {
        m.resize(2, 2);
        m << 0, -i, i, 0;
    } else if (name == "Z") {
        m.resize(2, 2);
        m << 1, 0, 0, -1;
    } else if (name == "S") {
        m.resize(2, 2);
        m << 1, 0, 0, i;
    } else if (name == "T") {
        m.resize(2, 2);
        m << 1, 0, 0, std::exp(i * (std::numbers::pi / 4.0));
    } else if (name == "CNOT") {
        m = Matrix::Zero(4, 4);
        m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    } else if (name == "CZ") {
        m = Matrix::Identity(4, 4);
        m(3, 3) = -1;
    } else if (name == "SWAP") {
        m = Matrix::Zero(4, 4);
        m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
    } else {
        throw UnknownVariable("unknown builtin gate: " + name);
    }
    return m;
}

bool is_builtin_space(const std::string& name) {
    return name == "zero" || name == "one" || name == "full";
}

Subspace builtin_space(const std::string& name, std::size_t num_bits) {
    const std::size_t d = std::size_t{1} << num_bits;
    if (name == "full") return Subspace::full(d);
    if (name == "zero") return Subspace::from_orthonormal(d, basis_ket(d, 0));
    if (name == "one") return Subspace::from_orthonormal(d, basis_ket(d, d - 1));
    throw UnknownVariable("unknown builtin space: " + name);
}

/*
 * Program lookups and resolution
 */

const UnitaryDecl* Program::find_unitary(const std::string& name) const {
    for (const auto& [n, d] : unitaries)
        if (n == name) return &d;
    return nullptr;
}

const SpaceDecl* Program::find_space(const std::string& name) const {
    for (const auto& [n, d] : spaces)
        if (n == name) return &d;
    return nullptr;
}

Matrix Program::unitary_matrix(const std::string& name, std::size_t num_targets) const {
    if (const UnitaryDecl* d = find_unitary(name)) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << num_targets);
        if (d->matrix.rows() != dim || d->matrix.cols() != dim)
            throw DimensionMismatch("unitary " + name + " does not fit " +
                                    std::to_string(num_targets) + " target(s)");
        return d->matrix;
    }
    if (is_builtin_gate(name)) {
        if (builtin_gate_arity(name) != num_targets)
            throw DimensionMismatch("builtin gate " + name + " expects " +
                                    std::to_string(builtin_gate_arity(name)) +
                                    " target(s)");
        return builtin_gate(name);
    }
    throw UnknownVariable("unknown unitary: " + name);
}

Subspace Program::space_subspace(const std::string& name, std::size_t num_targets) const {
    if (const SpaceDecl* d = find_space(name)) {
        if (d->num_bits != num_targets)
            throw DimensionMismatch("space " + name + " does not fit " +
                                    std::to_string(num_targets) + " target(s)");
        const std::size_t dim = std::size_t{1} << d->num_bits;
        Matrix spanning(static_cast<Eigen::Index>(dim),
                        static_cast<Eigen::Index>(d->vectors.size()));
        for (std::size_t j = 0; j < d->vectors.size(); ++j)
            spanning.col(static_cast<Eigen::Index>(j)) = d->vectors[j];
        return Subspace::from_span(dim, spanning);
    }
    if (is_builtin_space(name)) return builtin_space(name, num_targets);
    throw UnknownVariable("unknown space: " + name);
}

bool operator==(const Program& a, const Program& b) {
    if (!(a.layout == b.layout) || a.body != b.body) return false;
    if (a.unitaries.size() != b.unitaries.size() || a.spaces.size() != b.spaces.size())
        return false;
    for (std::size_t i = 0; i < a.unitaries.size(); ++i) {
        if (a.unitaries[i].first != b.unitaries[i].first) return false;
        const Matrix& ma = a.unitaries[i].second.matrix;
        const Matrix& mb = b.unitaries[i].second.matrix;
        if (ma.rows() != mb.rows() || ma.cols() != mb.cols() || ma != mb) return false;
    }
    for (std::size_t i = 0; i < a.spaces.size(); ++i) {
        if (a.spaces[i].first != b.spaces[i].first) return false;
        const SpaceDecl& sa = a.spaces[i].second;
        const SpaceDecl& sb = b.spaces[i].second;
        if (sa.num_bits != sb.num_bits || sa.vectors.size() != sb.vectors.size())
            return false;
        for (std::size_t j = 0; j < sa.vectors.size(); ++j)
            if (sa.vectors[j] != sb.vectors[j]) return false;
    }
    return true;
}

/*
 * Validation
 */

namespace {

void check_targets(const std::vector<std::string>& targets, const QubitLayout& layout,
                   SourceLoc loc, std::vector<Diagnostic>& out) {
    std::set<std::string> seen;
    for (const auto& t : targets) {
        if (!layout.contains(t))
            out.push_back({"UnknownVariable", "undeclared qubit: " + t, loc});
        if (!seen.insert(t).second)
            out.push_back({"DuplicateTarget", "repeated target: " + t, loc});
    }
}

void check_unitary_ref(const Program& p, const std::string& name, std::size_t nt,
                       SourceLoc loc, std::vector<Diagnostic>& out) {
    if (const UnitaryDecl* d = p.find_unitary(name)) {
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << nt);
        if (d->matrix.rows() != dim || d->matrix.cols() != dim)
            out.push_back({"DimensionMismatch",
                           "unitary " + name + " is " + std::to_string(d->matrix.rows()) +
                               "x" + std::to_string(d->matrix.cols()) + " but acts on " +
                               std::to_string(nt) + " qubit(s)",
                           loc});
        return;
    }
    if (is_builtin_gate(name)) {
        if (builtin_gate_arity(name) != nt)
            out.push_back({"DimensionMismatch",
                           "builtin gate " + name + " expects " +
                               std::to_string(builtin_gate_arity(name)) + " target(s)",
                           loc});
        return;
    }
    out.push_back({"UnknownUnitary", "undeclared unitary: " + name, loc});
}

void check_space_ref(const Program& p, const std::string& name, std::size_t nt,
                     SourceLoc loc, std::vector<Diagnostic>& out) {
    if (const SpaceDecl* d = p.find_space(name)) {
        if (d->num_bits != nt)
            out.push_back({"DimensionMismatch",
                           "space " + name + " is over " + std::to_string(d->num_bits) +
                               " qubit(s) but is asserted on " + std::to_string(nt),
                           loc});
        return;
    }
    if (is_builtin_space(name)) return;
    out.push_back({"UnknownSpace", "undeclared space: " + name, loc});
}

void check_block(const Program& p, const Block& body, std::vector<Diagnostic>& out) {
    for (const Stmt& s : body) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, SkipStmt>) {
                    (void)node;
                } else if constexpr (std::is_same_v<T, InitStmt>) {
                    check_targets(node.targets, p.layout, s.loc, out);
                } else if constexpr (std::is_same_v<T, UnitaryStmt>) {
                    check_targets(node.targets, p.layout, s.loc, out);
                    check_unitary_ref(p, node.gate, node.targets.size(), s.loc, out);
                } else if constexpr (std::is_same_v<T, AssertStmt>) {
                    check_targets(node.targets, p.layout, s.loc, out);
                    check_space_ref(p, node.space, node.targets.size(), s.loc, out);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    check_targets(node.targets, p.layout, s.loc, out);
                    check_space_ref(p, node.space, node.targets.size(), s.loc, out);
                    check_block(p, node.then_body, out);
                    check_block(p, node.else_body, out);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    check_targets(node.targets, p.layout, s.loc, out);
                    check_space_ref(p, node.space, node.targets.size(), s.loc, out);
                    check_block(p, node.body, out);
                }
            },
            s.node);
    }
}

}  // namespace

std::vector<Diagnostic> validate(const Program& p) {
    std::vector<Diagnostic> out;

    for (const auto& [name, decl] : p.unitaries) {
        if (is_builtin_gate(name)) {
            out.push_back({"BuiltinShadowed", "cannot redeclare builtin gate " + name,
                           decl.loc});
            continue;
        }
        const Matrix& m = decl.matrix;
        if (m.rows() != m.cols() || m.rows() < 2 ||
            (m.rows() & (m.rows() - 1)) != 0) {
            out.push_back({"DimensionMismatch",
                           "unitary " + name + " must be square with power-of-two size",
                           decl.loc});
            continue;
        }
        Matrix gram = m.adjoint() * m;
        if (max_abs(gram - Matrix::Identity(m.rows(), m.cols())) > 1e-9)
            out.push_back({"NotUnitary", "matrix " + name + " is not unitary", decl.loc});
    }

    for (const auto& [name, decl] : p.spaces) {
        if (is_builtin_space(name)) {
            out.push_back({"BuiltinShadowed", "cannot redeclare builtin space " + name,
                           decl.loc});
            continue;
        }
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << decl.num_bits);
        for (const auto& v : decl.vectors)
            if (v.size() != dim)
                out.push_back({"DimensionMismatch",
                               "span vectors of " + name + " have inconsistent lengths",
                               decl.loc});
    }

    check_block(p, p.body, out);
    return out;
}

Program parse(const std::string& text) {
    Program p = parse_unvalidated(text);
    auto diags = validate(p);
    if (!diags.empty()) {
        const Diagnostic& d = diags.front();
        throw ValidationError(d.kind, d.loc.line, d.loc.col, d.message);
    }
    return p;
}

/*
 * Pretty-printer. Numbers use %.17g so a round trip through text
 * reproduces every double exactly.
 */

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string format_cplx(Cplx z) {
    if (z.imag() == 0.0) return format_double(z.real());
    std::string s = format_double(z.real());
    s += z.imag() < 0.0 ? "-" : "+";
    s += format_double(std::abs(z.imag()));
    s += "i";
    return s;
}

std::string format_bits(std::size_t index, std::size_t num_bits) {
    std::string bits(num_bits, '0');
    for (std::size_t p = 0; p < num_bits; ++p)
        if ((index >> (num_bits - 1 - p)) & 1u) bits[p] = '1';
    return bits;
}

std::string format_vec(const Vector& v, std::size_t num_bits) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) == Cplx{0.0, 0.0}) continue;
        if (!out.empty()) out += " + ";
        out += format_cplx(v(i)) + "*|" +
               format_bits(static_cast<std::size_t>(i), num_bits) + ">";
    }
    if (out.empty()) out = "0*|" + format_bits(0, num_bits) + ">";
    return out;
}

std::string format_qlist(const std::vector<std::string>& qs) {
    std::string out;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        if (i) out += ", ";
        out += qs[i];
    }
    return out;
}

void print_block(std::ostringstream& os, const Block& body, int indent);

void print_stmt(std::ostringstream& os, const Stmt& s, int indent) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SkipStmt>) {
                os << pad << "skip;\n";
            } else if constexpr (std::is_same_v<T, InitStmt>) {
                os << pad << format_qlist(node.targets) << " := |0>;\n";
            } else if constexpr (std::is_same_v<T, UnitaryStmt>) {
                os << pad << format_qlist(node.targets) << " *= " << node.gate << ";\n";
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                os << pad << "assert " << node.space << " on "
                   << format_qlist(node.targets) << ";\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                os << pad << "if " << node.space << " on " << format_qlist(node.targets)
                   << " {\n";
                print_block(os, node.then_body, indent + 1);
                os << pad << "} else {\n";
                print_block(os, node.else_body, indent + 1);
                os << pad << "}\n";
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                os << pad << "while " << node.space << " on "
                   << format_qlist(node.targets) << " {\n";
                print_block(os, node.body, indent + 1);
                os << pad << "}\n";
            }
        },
        s.node);
}

void print_block(std::ostringstream& os, const Block& body, int indent) {
    for (const Stmt& s : body) print_stmt(os, s, indent);
}

}  // namespace

std::string pretty(const Program& p) {
    std::ostringstream os;
    os << "qubits";
    for (const auto& q : p.layout.order()) os << " " << q;
    os << ";\n";

    for (const auto& [name, decl] : p.unitaries) {
        os << "unitary " << name << " = [";
        for (Eigen::Index r = 0; r < decl.matrix.rows(); ++r) {
            if (r) os << ", ";
            os << "[";
            for (Eigen::Index c = 0; c < decl.matrix.cols(); ++c) {
                if (c) os << ", ";
                os << format_cplx(decl.matrix(r, c));
            }
            os << "]";
        }
        os << "];\n";
    }
    for (const auto& [name, decl] : p.spaces) {
        os << "space " << name << " = span(";
        for (std::size_t j = 0; j < decl.vectors.size(); ++j) {
            if (j) os << ", ";
            os << format_vec(decl.vectors[j], decl.num_bits);
        }
        os << ");\n";
    }
    print_block(os, p.body, 0);
    return os.str();
}

}  // namespace qai
