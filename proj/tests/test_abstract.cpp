#include <doctest.h>

#include "qai/abstract.hpp"
#include "qai/demo.hpp"
#include "qai/sampling.hpp"
#include "support/oracles.hpp"
#include "support/testgen.hpp"

using namespace qai;

namespace {

Subspace span_of(std::size_t ambient, std::initializer_list<std::size_t> kets) {
    Matrix m(static_cast<Eigen::Index>(ambient),
             static_cast<Eigen::Index>(kets.size()));
    Eigen::Index c = 0;
    for (std::size_t k : kets) m.col(c++) = basis_ket(ambient, k);
    return Subspace::from_orthonormal(ambient, m);
}

AbstractElement global_of(const Subspace& s) {
    return AbstractElement{DomainKind::global(), {s}};
}

AbstractElement random_global(Rng& rng, std::size_t dim) {
    return global_of(random_subspace(dim, 1 + rng() % dim, rng));
}

}  // namespace

TEST_CASE("domain order and lattice units") {
    QubitLayout layout({"q0", "q1"});
    DomainKind g = DomainKind::global();
    AbstractElement x = global_of(span_of(4, {1, 2}));
    CHECK(dom_leq(bottom(g, layout), x));
    CHECK(dom_leq(x, top(g, layout)));
    CHECK(same_element(dom_meet(top(g, layout), x), x));
    CHECK(same_element(dom_join(bottom(g, layout), x), x));
}

TEST_CASE("local joins act componentwise") {
    QubitLayout layout({"q1", "q2", "q3"});
    DomainKind local = DomainKind::local(Signature{{{"q1", "q2"}, {"q2", "q3"}}});
    AbstractElement a{local, {span_of(4, {0}), span_of(4, {0})}};
    AbstractElement b{local, {span_of(4, {3}), span_of(4, {3})}};
    AbstractElement joined = dom_join(a, b);
    CHECK(same_space(joined.parts[0], span_of(4, {0, 3})));
    CHECK(same_space(joined.parts[1], span_of(4, {0, 3})));
}

TEST_CASE("elements of different shapes do not mix") {
    QubitLayout layout({"q0", "q1"});
    AbstractElement g = top(DomainKind::global(), layout);
    AbstractElement l = top(DomainKind::local(Signature{{{"q0"}}}), layout);
    CHECK_THROWS_AS(dom_leq(g, l), ShapeMismatch);
}

TEST_CASE("signatures must be proper and known") {
    QubitLayout layout({"q0", "q1"});
    CHECK_THROWS_AS(validate_signature(Signature{{{"q0", "q1"}}}, layout),
                    ShapeMismatch);
    CHECK_THROWS_AS(validate_signature(Signature{{{}}}, layout), ShapeMismatch);
    CHECK_THROWS_AS(validate_signature(Signature{{{"zz"}}}, layout), UnknownVariable);
    CHECK_THROWS_AS(validate_signature(Signature{{{"q0", "q0"}}}, layout),
                    ShapeMismatch);
}

TEST_CASE("alpha on the built-in three-qubit example") {
    LocalGapDemo demo = make_local_gap_demo();
    AbstractElement a = alpha(demo.local, demo.program.layout, {demo.phi_plus});
    REQUIRE(a.parts.size() == 2);
    CHECK(same_space(a.parts[0], demo.pair_equal));
    CHECK(same_space(a.parts[1], demo.pair_equal));

    // the same state in the global domain is the rank-1 span
    AbstractElement g =
        alpha(DomainKind::global(), demo.program.layout, {demo.phi_plus});
    CHECK(g.parts[0].dim() == 1);
    CHECK(same_space(g.parts[0], span_of(8, {0, 7})) == false);
    CHECK(leq(g.parts[0], span_of(8, {0, 7})));
}

TEST_CASE("alpha of no states is bottom") {
    QubitLayout layout({"q0", "q1"});
    CHECK(alpha(DomainKind::global(), layout, {}).parts[0].is_zero());
}

TEST_CASE("alpha rejects indefinite states") {
    QubitLayout layout({"q"});
    Matrix neg(2, 2);
    neg << 0.5, 0, 0, -0.5;
    CHECK_THROWS_AS(alpha(DomainKind::global(), layout, {State{neg, layout}}),
                    NotPSD);
}

TEST_CASE("gamma of a local pair is the intersection of the cylinders") {
    LocalGapDemo demo = make_local_gap_demo();
    AbstractElement pair{demo.local, {demo.pair_equal, demo.pair_equal}};
    Subspace g = gamma_as_subspace(pair, demo.program.layout);
    CHECK(same_space(g, span_of(8, {0, 7})));

    // brute-force route: intersect the two embedded spaces directly
    Matrix lift1 = embed(projector(demo.pair_equal), {"q1", "q2"}, demo.program.layout);
    Matrix lift2 = embed(projector(demo.pair_equal), {"q2", "q3"}, demo.program.layout);
    Subspace c1 = image(lift1, Subspace::full(8));
    Subspace c2 = image(lift2, Subspace::full(8));
    CHECK(same_space(g, oracle::intersection(c1, c2)));

    CHECK(gamma_as_subspace(top(demo.local, demo.program.layout), demo.program.layout)
              .is_full());
    AbstractElement g_elem = global_of(span_of(4, {1}));
    QubitLayout two({"a", "b"});
    CHECK(same_space(gamma_as_subspace(g_elem, two), span_of(4, {1})));
}

TEST_CASE("init transfers to |0><0| tensor the kept support") {
    // two qubits, init the first: P = span{|10>, |11>} -> |0><0| x full
    Program p = parse("qubits a b; a := |0>;");
    AbstractElement in = global_of(span_of(4, {2, 3}));
    AbstractElement out = transfer_basic(DomainKind::global(), p, p.body[0], in);
    CHECK(same_space(out.parts[0], span_of(4, {0, 1})));

    // bottom stays bottom
    AbstractElement nothing =
        transfer_basic(DomainKind::global(), p, p.body[0], global_of(Subspace::zero(4)));
    CHECK(nothing.parts[0].is_zero());

    // init over every qubit lands exactly on |0...0>
    Program all = parse("qubits a b; a,b := |0>;");
    AbstractElement everything =
        transfer_basic(DomainKind::global(), all, all.body[0], global_of(Subspace::full(4)));
    CHECK(same_space(everything.parts[0], span_of(4, {0})));
}

TEST_CASE("assert transfer is the guarded image") {
    Program p = parse("qubits a b; space Z = span(|00>); assert Z on a, b;");
    Vector phi = (basis_ket(4, 0) + basis_ket(4, 3)) / std::sqrt(2.0);
    AbstractElement in = global_of(Subspace::from_orthonormal(4, phi));
    AbstractElement out = transfer_basic(DomainKind::global(), p, p.body[0], in);
    CHECK(same_space(out.parts[0], span_of(4, {0})));
}

TEST_CASE("skip transfer is the identity on elements") {
    Program p = parse("qubits a b; skip;");
    Rng rng(3);
    AbstractElement in = random_global(rng, 4);
    CHECK(same_element(transfer_basic(DomainKind::global(), p, p.body[0], in), in));
}

TEST_CASE("analysis fixtures") {
    DomainKind g = DomainKind::global();

    Program twice = parse("qubits q; q *= X; q *= X;");
    AbstractElement zero_in = global_of(span_of(2, {0}));
    CHECK(same_element(analyze(g, twice, zero_in), zero_in));

    Program cond = parse("qubits q; if zero on q { skip; } else { q *= X; }");
    AbstractElement everything = global_of(Subspace::full(2));
    AbstractElement cond_out = analyze(g, cond, everything);
    CHECK(same_space(cond_out.parts[0], span_of(2, {0})));

    Program drain = parse("qubits q; while one on q { q *= X; }");
    AnalyzeStats stats;
    AbstractElement drain_out = analyze(g, drain, everything, &stats);
    CHECK(same_space(drain_out.parts[0], span_of(2, {0})));
    CHECK(stats.max_while_iterations <= 3);  // fixpoint after one growth step
}

TEST_CASE("loop analysis stays within the lattice-height budget") {
    Rng rng(57);
    for (int trial = 0; trial < 25; ++trial) {
        Program p = testgen::random_program(rng);
        AnalyzeStats stats;
        analyze(DomainKind::global(), p, top(DomainKind::global(), p.layout), &stats);
        CHECK(stats.max_while_iterations <= p.layout.dim() + 1);
    }
}

TEST_CASE("analysis is sound for both domains") {
    Rng rng(61);
    for (int trial = 0; trial < 30; ++trial) {
        Program p = testgen::random_program(rng);
        State rho = testgen::random_state(rng, p);
        State out = eval(p, rho);

        std::vector<DomainKind> kinds{DomainKind::global()};
        if (p.layout.size() >= 2) {
            Signature sig;
            const auto& names = p.layout.order();
            for (std::size_t i = 0; i < names.size(); ++i) {
                std::vector<std::string> subset;
                for (std::size_t j = 0; j < names.size(); ++j)
                    if (j != i) subset.push_back(names[j]);
                sig.subsets.push_back(subset);
            }
            kinds.push_back(DomainKind::local(sig));
        }
        for (const DomainKind& kind : kinds) {
            AbstractElement reached = alpha(kind, p.layout, {out});
            AbstractElement predicted =
                analyze(kind, p, alpha(kind, p.layout, {rho}));
            CHECK(dom_leq(reached, predicted));
        }
    }
}

TEST_CASE("global analysis matches the Kraus-image abstraction on loop-free programs") {
    Rng rng(67);
    for (int trial = 0; trial < 12; ++trial) {
        Program p = testgen::random_loop_free_program(rng, 2, 4);
        auto kraus = kraus_of(p);
        AbstractElement in = random_global(rng, 4);
        Subspace from_kraus = Subspace::zero(4);
        for (const Matrix& e : kraus)
            from_kraus = join(from_kraus, image(e, in.parts[0]));
        AbstractElement analyzed = analyze(DomainKind::global(), p, in);
        CHECK(same_space(analyzed.parts[0], from_kraus));
    }
}

TEST_CASE("conditional analysis joins its guarded branches") {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        Program p = parse(
            "qubits a b; space G = span(|01> + |10>, |00>);"
            "if G on a, b { a *= H; } else { a,b *= CNOT; }");
        AbstractElement in = random_global(rng, 4);

        Program then_path = parse(
            "qubits a b; space G = span(|01> + |10>, |00>); assert G on a, b; a *= H;");
        Program else_path = parse("qubits a b; skip;");
        else_path.body.clear();
        // assert the complement, then run the else branch
        Subspace comp = orthocomplement(then_path.space_subspace("G", 2));
        SpaceDecl decl;
        decl.num_bits = 2;
        for (Eigen::Index c = 0; c < comp.basis().cols(); ++c)
            decl.vectors.push_back(comp.basis().col(c));
        else_path.spaces.emplace_back("Gc", decl);
        else_path.body.push_back(Stmt{AssertStmt{{"a", "b"}, "Gc"}, {}, {}});
        else_path.body.push_back(Stmt{UnitaryStmt{{"a", "b"}, "CNOT"}, {}, {}});

        DomainKind g = DomainKind::global();
        AbstractElement joined = dom_join(analyze(g, then_path, in),
                                          analyze(g, else_path, in));
        CHECK(same_element(analyze(g, p, in), joined));
    }
}

TEST_CASE("global transfers distribute over joins") {
    Rng rng(73);
    Program p = parse("qubits a b; skip;");
    DomainKind g = DomainKind::global();
    for (int trial = 0; trial < 15; ++trial) {
        Stmt s = testgen::random_basic_stmt(rng, p);
        AbstractElement x = random_global(rng, 4);
        AbstractElement y = random_global(rng, 4);
        AbstractElement lhs = transfer_basic(g, p, s, dom_join(x, y));
        AbstractElement rhs =
            dom_join(transfer_basic(g, p, s, x), transfer_basic(g, p, s, y));
        CHECK(same_element(lhs, rhs));
    }
}

TEST_CASE("whole-program global analysis distributes over joins") {
    Rng rng(79);
    DomainKind g = DomainKind::global();
    for (int trial = 0; trial < 10; ++trial) {
        Program p = testgen::random_program(rng);
        const std::size_t d = p.layout.dim();
        AbstractElement x = random_global(rng, d);
        AbstractElement y = random_global(rng, d);
        AbstractElement lhs = analyze(g, p, dom_join(x, y));
        AbstractElement rhs = dom_join(analyze(g, p, x), analyze(g, p, y));
        CHECK(same_element(lhs, rhs));
    }
}

TEST_CASE("analysis is monotone") {
    Rng rng(83);
    for (int trial = 0; trial < 15; ++trial) {
        Program p = testgen::random_program(rng);
        const std::size_t d = p.layout.dim();
        DomainKind g = DomainKind::global();
        AbstractElement small = random_global(rng, d);
        AbstractElement big = dom_join(small, random_global(rng, d));
        CHECK(dom_leq(analyze(g, p, small), analyze(g, p, big)));

        if (p.layout.size() >= 2) {
            Signature sig{{{p.layout.order().front()}}};
            DomainKind local = DomainKind::local(sig);
            AbstractElement ls = alpha_subspace(local, p.layout, small.parts[0]);
            AbstractElement lb = alpha_subspace(local, p.layout, big.parts[0]);
            CHECK(dom_leq(analyze(local, p, ls), analyze(local, p, lb)));
        }
    }
}

TEST_CASE("completeness probe: global domain comes back complete") {
    Rng rng(89);
    for (int trial = 0; trial < 6; ++trial) {
        Program p = testgen::random_program(rng);
        AbstractElement pre = random_global(rng, p.layout.dim());
        CompletenessReport rep =
            check_completeness(DomainKind::global(), p, pre, 4, trial);
        CHECK(rep.complete);
        CHECK(rep.soundness_violations == 0);
        CHECK(rep.max_deviation <= 1e-7);
    }
}

TEST_CASE("completeness probe: the local basis-change example is caught") {
    LocalGapDemo demo = make_local_gap_demo();
    AbstractElement pre = alpha(demo.local, demo.program.layout, {demo.phi_plus});
    CompletenessReport rep = check_completeness(demo.local, demo.program, pre, 4, 1);
    CHECK_FALSE(rep.complete);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.max_deviation > 0.4);

    // the analyzed components keep |11>, the reachable abstraction does not
    Subspace ket11 = span_of(4, {3});
    CHECK(leq(ket11, rep.analyzed.parts[0]));
    CHECK(leq(ket11, rep.analyzed.parts[1]));
}

TEST_CASE("completeness probe: skip is complete in every domain") {
    LocalGapDemo demo = make_local_gap_demo();
    Program skip = parse("qubits q1 q2 q3; skip;");
    AbstractElement local_pre = alpha(demo.local, skip.layout, {demo.phi_plus});
    CHECK(check_completeness(demo.local, skip, local_pre, 4, 2).complete);
    AbstractElement global_pre =
        alpha(DomainKind::global(), skip.layout, {demo.phi_plus});
    CHECK(check_completeness(DomainKind::global(), skip, global_pre, 4, 2).complete);
}

TEST_CASE("bottom propagates through every transfer") {
    Rng rng(97);
    Program p = parse("qubits a b; skip;");
    DomainKind g = DomainKind::global();
    AbstractElement nothing = bottom(g, p.layout);
    for (int trial = 0; trial < 20; ++trial) {
        Stmt s = testgen::random_basic_stmt(rng, p);
        CHECK(transfer_basic(g, p, s, nothing).parts[0].is_zero());
    }
}
