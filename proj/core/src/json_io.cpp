#include "qai/json_io.hpp"

namespace qai {

namespace {

Json cplx_to_json(Cplx z) { return Json::array({z.real(), z.imag()}); }

Cplx cplx_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2)
        throw Error("expected a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cplx_to_json(v(i)));
    return out;
}

Vector vector_from_json(const Json& j, Eigen::Index expected) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected)
        throw Error("vector has the wrong length");
    Vector v(expected);
    for (Eigen::Index i = 0; i < expected; ++i)
        v(i) = cplx_from_json(j[static_cast<std::size_t>(i)]);
    return v;
}

}  // namespace

Json to_json(const Subspace& s) {
    Json basis = Json::array();
    for (Eigen::Index c = 0; c < s.basis().cols(); ++c)
        basis.push_back(vector_to_json(s.basis().col(c)));
    return Json{{"ambient_dim", s.ambient_dim()}, {"basis", basis}};
}

Subspace subspace_from_json(const Json& j) {
    const auto ambient = j.at("ambient_dim").get<std::size_t>();
    const Json& basis = j.at("basis");
    if (!basis.is_array()) throw Error("subspace basis must be an array of vectors");
    Matrix b(static_cast<Eigen::Index>(ambient), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        b.col(static_cast<Eigen::Index>(c)) =
            vector_from_json(basis[c], static_cast<Eigen::Index>(ambient));
    // orthonormalize on input so hand-written bases are accepted
    return Subspace::from_span(ambient, b);
}

Json to_json(const State& s) {
    Json rho = Json::array();
    for (Eigen::Index r = 0; r < s.rho.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < s.rho.cols(); ++c)
            row.push_back(cplx_to_json(s.rho(r, c)));
        rho.push_back(row);
    }
    return Json{{"layout", s.layout.order()}, {"rho", rho}};
}

State state_from_json(const Json& j) {
    State s;
    s.layout = QubitLayout(j.at("layout").get<std::vector<std::string>>());
    const auto d = static_cast<Eigen::Index>(s.layout.dim());
    const Json& rho = j.at("rho");
    if (!rho.is_array() || static_cast<Eigen::Index>(rho.size()) != d)
        throw Error("state matrix does not match its layout");
    s.rho.resize(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const Json& row = rho[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
            throw Error("state matrix is not square");
        for (Eigen::Index c = 0; c < d; ++c)
            s.rho(r, c) = cplx_from_json(row[static_cast<std::size_t>(c)]);
    }
    return s;
}

Json to_json(const AbstractElement& e) {
    Json out;
    out["kind"] = e.kind.is_local() ? "local" : "subspace";
    if (e.kind.is_local()) out["signature"] = e.kind.signature.subsets;
    Json parts = Json::array();
    for (const Subspace& p : e.parts) parts.push_back(to_json(p));
    out["parts"] = parts;
    return out;
}

AbstractElement element_from_json(const Json& j) {
    AbstractElement e;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "subspace") {
        e.kind = DomainKind::global();
    } else if (kind == "local") {
        Signature sig;
        sig.subsets = j.at("signature").get<std::vector<std::vector<std::string>>>();
        e.kind = DomainKind::local(std::move(sig));
    } else {
        throw Error("unknown abstract-element kind: " + kind);
    }
    for (const Json& p : j.at("parts")) e.parts.push_back(subspace_from_json(p));
    if (!e.kind.is_local() && e.parts.size() != 1)
        throw Error("a subspace element has exactly one part");
    if (e.kind.is_local() && e.parts.size() != e.kind.signature.subsets.size())
        throw Error("local element needs one part per subsystem");
    return e;
}

Json to_json(const Derivation& d) {
    Json side = Json::array();
    for (const OrderCheck& oc : d.side)
        side.push_back(Json{{"lhs", to_json(oc.lhs)},
                            {"rhs", to_json(oc.rhs)},
                            {"residual", oc.residual}});
    Json premises = Json::array();
    for (const Derivation& p : d.premises) premises.push_back(to_json(p));
    return Json{{"rule", rule_name(d.rule)},
                {"conclusion",
                 Json{{"pre", to_json(d.pre)},
                      {"post", to_json(d.post)},
                      {"program_span", Json::array({d.span.begin, d.span.end})}}},
                {"premises", premises},
                {"side", side}};
}

Derivation derivation_from_json(const Json& j) {
    Derivation d;
    d.rule = rule_from_name(j.at("rule").get<std::string>());
    const Json& concl = j.at("conclusion");
    d.pre = element_from_json(concl.at("pre"));
    d.post = element_from_json(concl.at("post"));
    const Json& span = concl.at("program_span");
    d.span = {span.at(0).get<std::size_t>(), span.at(1).get<std::size_t>()};
    for (const Json& p : j.at("premises")) d.premises.push_back(derivation_from_json(p));
    for (const Json& s : j.at("side"))
        d.side.push_back(OrderCheck{element_from_json(s.at("lhs")),
                                    element_from_json(s.at("rhs")),
                                    s.at("residual").get<double>()});
    return d;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            bool first = true;
            for (const Json& item : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                dump_rec(item, out, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent >= 0 ? ": " : ":";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            break;
        }
        default:
            out += j.dump();
            break;
    }
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    return out;
}

}  // namespace qai
