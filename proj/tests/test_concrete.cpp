#include <doctest.h>

#include "qai/concrete.hpp"
#include "qai/sampling.hpp"
#include "support/oracles.hpp"
#include "support/testgen.hpp"

using namespace qai;

namespace {

State pure_state(const Program& p, std::size_t index) {
    Vector v = basis_ket(p.layout.dim(), index);
    return State{v * v.adjoint(), p.layout};
}

bool is_psd_within(const Matrix& m, double tol) {
    HermEig eig = eig_hermitian((m + Matrix(m.adjoint())) / 2.0);
    return eig.values.size() == 0 || eig.values(eig.values.size() - 1) >= -tol;
}

// programs without measurement: unitaries, inits and skips only
bool trace_preserving_shape(const Block& b) {
    for (const Stmt& s : b)
        if (!std::holds_alternative<SkipStmt>(s.node) &&
            !std::holds_alternative<InitStmt>(s.node) &&
            !std::holds_alternative<UnitaryStmt>(s.node))
            return false;
    return true;
}

// declares `name` as the orthocomplement of `space` (both over num_bits)
void declare_complement(Program& p, const std::string& name, const std::string& space,
                        std::size_t num_bits) {
    Subspace comp = orthocomplement(p.space_subspace(space, num_bits));
    SpaceDecl decl;
    decl.num_bits = num_bits;
    for (Eigen::Index c = 0; c < comp.basis().cols(); ++c)
        decl.vectors.push_back(comp.basis().col(c));
    if (comp.is_zero()) decl.vectors.push_back(Vector::Zero(comp.ambient_dim()));
    p.spaces.emplace_back(name, decl);
}

}  // namespace

TEST_CASE("skip leaves the state unchanged") {
    Program p = parse("qubits q0 q1; skip;");
    Rng rng(1);
    State in{random_density(4, 2, rng), p.layout};
    CHECK(max_abs(eval(p, in).rho - in.rho) == 0.0);
}

TEST_CASE("init resets |1><1| to |0><0|") {
    Program p = parse("qubits q; q := |0>;");
    State out = eval(p, pure_state(p, 1));
    CHECK(max_abs(out.rho - pure_state(p, 0).rho) < 1e-15);
}

TEST_CASE("init on a subsystem keeps the rest") {
    Program p = parse("qubits a b; a := |0>;");
    // |11> -> |01>
    State out = eval(p, pure_state(p, 3));
    CHECK(max_abs(out.rho - pure_state(p, 1).rho) < 1e-15);
}

TEST_CASE("guarded X loop drains |1> into |0> within two summands") {
    Program p = parse("qubits q; while one on q { q *= X; }");
    LoopPolicy tight{1e-10, 2};
    State out = eval(p, pure_state(p, 1), tight);
    CHECK(max_abs(out.rho - pure_state(p, 0).rho) < 1e-12);

    LoopPolicy too_tight{1e-10, 1};
    CHECK_THROWS_AS(eval(p, pure_state(p, 1), too_tight), LoopBudgetExceeded);
}

TEST_CASE("a loop that never measures out exhausts its budget") {
    Program p = parse("qubits q; while full on q { skip; }");
    try {
        eval(p, pure_state(p, 0), LoopPolicy{1e-10, 50});
        FAIL("expected the loop budget to trip");
    } catch (const LoopBudgetExceeded& e) {
        CHECK(e.accumulated_trace == doctest::Approx(0.0));
        CHECK(e.pending_trace == doctest::Approx(1.0));
        CHECK(max_abs(e.partial) == 0.0);
    }
}

TEST_CASE("while agrees with its explicit unrolling") {
    // while D on a { a *= H; } unrolled as (assert D; a *= H)^i; assert Dc
    const char* header =
        "qubits a; space D = span(|0>); ";
    Program loop = parse(std::string(header) + "while D on a { a *= H; }");
    Program base = parse(std::string(header) + "skip;");
    declare_complement(base, "Dc", "D", 1);

    Rng rng(7);
    Matrix rho = random_density(2, 2, rng);

    Matrix partial = Matrix::Zero(2, 2);
    Matrix prev_partial = partial;
    for (int i = 0; i < 60; ++i) {
        Program unrolled = base;
        unrolled.body.clear();
        for (int k = 0; k < i; ++k) {
            unrolled.body.push_back(Stmt{AssertStmt{{"a"}, "D"}, {}, {}});
            unrolled.body.push_back(Stmt{UnitaryStmt{{"a"}, "H"}, {}, {}});
        }
        unrolled.body.push_back(Stmt{AssertStmt{{"a"}, "Dc"}, {}, {}});
        Matrix summand = eval_block(unrolled, unrolled.body, rho);
        CHECK(is_psd_within(summand, 1e-12));
        partial += summand;
        CHECK(is_psd_within(partial - prev_partial, 1e-12));
        prev_partial = partial;
    }
    Matrix direct = eval_block(loop, loop.body, rho);
    CHECK(max_abs(direct - partial) < 1e-9);
}

TEST_CASE("evaluation is linear") {
    Rng rng(23);
    testgen::GenOptions loop_free;
    loop_free.allow_loops = false;
    for (int trial = 0; trial < 20; ++trial) {
        Program p = testgen::random_program(rng, loop_free);
        const std::size_t d = p.layout.dim();
        Matrix r1 = random_density(d, 2, rng);
        Matrix r2 = random_density(d, 1, rng);
        State mixed{0.3 * r1 + 0.5 * r2, p.layout};
        Matrix expect = 0.3 * eval(p, State{r1, p.layout}).rho +
                        0.5 * eval(p, State{r2, p.layout}).rho;
        CHECK(max_abs(eval(p, mixed).rho - expect) < 1e-8);
    }

    testgen::GenOptions with_loops;
    for (int trial = 0; trial < 10; ++trial) {
        Program p = testgen::random_program(rng, with_loops);
        const std::size_t d = p.layout.dim();
        Matrix r1 = random_density(d, 2, rng);
        Matrix r2 = random_density(d, 1, rng);
        State mixed{0.3 * r1 + 0.5 * r2, p.layout};
        Matrix expect = 0.3 * eval(p, State{r1, p.layout}).rho +
                        0.5 * eval(p, State{r2, p.layout}).rho;
        CHECK(max_abs(eval(p, mixed).rho - expect) < 1e-6);
    }
}

TEST_CASE("evaluation never increases the trace") {
    Rng rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        Program p = testgen::random_program(rng);
        State in = testgen::random_state(rng, p);
        State out = eval(p, in);
        CHECK(out.trace() <= in.trace() + 1e-9);
        if (trace_preserving_shape(p.body))
            CHECK(out.trace() == doctest::Approx(in.trace()).epsilon(1e-10));
    }
}

TEST_CASE("kraus of skip acts as the identity channel") {
    Program p = parse("qubits q0 q1; skip;");
    auto kraus = kraus_of(p);
    Rng rng(31);
    Matrix rho = random_density(4, 2, rng);
    CHECK(max_abs(oracle::apply_kraus(kraus, rho) - rho) < 1e-10);
}

TEST_CASE("kraus of a projective assertion is the projector") {
    Program p = parse("qubits q; assert zero on q;");
    auto kraus = kraus_of(p);
    REQUIRE(kraus.size() == 1);
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 1;
    // fix the global phase via the largest entry
    Cplx phase = kraus[0](0, 0) / std::abs(kraus[0](0, 0));
    CHECK(max_abs(kraus[0] / phase - expect) < 1e-10);
}

TEST_CASE("kraus of a unitary statement is that unitary up to phase") {
    Program p = parse("qubits q; q *= H;");
    auto kraus = kraus_of(p);
    REQUIRE(kraus.size() == 1);
    Matrix h = builtin_gate("H");
    Cplx phase = kraus[0](0, 0) / h(0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);
    CHECK(max_abs(kraus[0] / phase - h) < 1e-10);
}

TEST_CASE("kraus family reproduces the channel and stays sub-normalized") {
    Rng rng(37);
    for (int trial = 0; trial < 12; ++trial) {
        Program p = testgen::random_program(rng);
        auto kraus = kraus_of(p);
        const auto d = static_cast<Eigen::Index>(p.layout.dim());

        Matrix gram = Matrix::Zero(d, d);
        for (const Matrix& e : kraus) gram += e.adjoint() * e;
        CHECK(is_psd_within(Matrix::Identity(d, d) - gram, 1e-7));

        for (int s = 0; s < 5; ++s) {
            State in = testgen::random_state(rng, p);
            CHECK(max_abs(oracle::apply_kraus(kraus, in.rho) - eval(p, in).rho) < 1e-7);
        }
    }
}

TEST_CASE("mix_representative basics") {
    QubitLayout layout({"q"});
    State s0 = pure_state(Program{layout, {}, {}, {}}, 0);
    State s1 = pure_state(Program{layout, {}, {}, {}}, 1);

    State single = mix_representative({s0});
    CHECK(max_abs(single.rho - s0.rho) < 1e-15);

    State both = mix_representative({s0, s1});
    CHECK(max_abs(both.rho - 0.5 * Matrix::Identity(2, 2)) < 1e-15);

    State scaled{0.5 * s0.rho, layout};
    State renorm = mix_representative({scaled});
    CHECK(max_abs(renorm.rho - s0.rho) < 1e-15);
    CHECK(renorm.trace() == doctest::Approx(1.0));

    CHECK_THROWS_AS(mix_representative({}), EmptySet);
    State zero{Matrix::Zero(2, 2), layout};
    CHECK_THROWS_AS(mix_representative({zero}), ZeroState);
}

TEST_CASE("state preparation fixtures") {
    QubitLayout one_q({"q"});

    State target0 = pure_state(Program{one_q, {}, {}, {}}, 0);
    Program prep0 = prepare_program(target0);
    State from1 = eval(prep0, pure_state(Program{one_q, {}, {}, {}}, 1));
    CHECK(max_abs(from1.rho - target0.rho) < 1e-10);

    State half{0.5 * Matrix::Identity(2, 2), one_q};
    Program prep_half = prepare_program(half);
    State mixed = eval(prep_half, target0);
    CHECK(max_abs(mixed.rho - half.rho) < 1e-10);

    QubitLayout two_q({"a", "b"});
    Vector phi = Vector::Zero(4);
    phi(0) = phi(3) = 1 / std::sqrt(2.0);
    State bell{phi * phi.adjoint(), two_q};
    Program prep_bell = prepare_program(bell);
    Rng rng(43);
    Vector sigma = random_pure_in(Subspace::full(4), rng);
    State out = eval(prep_bell, State{sigma * sigma.adjoint(), two_q});
    CHECK(max_abs(out.rho - bell.rho) < 1e-10);
}

TEST_CASE("state preparation hits any target from any input") {
    Rng rng(47);
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
        QubitLayout layout(names);
        for (int trial = 0; trial < 2; ++trial) {
            State target{random_density(layout.dim(), 1 + trial, rng), layout};
            Program prep = prepare_program(target);
            CHECK(validate(prep).empty());
            for (int s = 0; s < 5; ++s) {
                double scale = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
                State sigma{scale * random_density(layout.dim(), 2, rng), layout};
                State out = eval(prep, sigma);
                CHECK(max_abs(out.rho - sigma.trace() * target.rho) <= 1e-8);
            }
        }
    }
}

TEST_CASE("preparation requires a unit trace") {
    QubitLayout layout({"q"});
    State half{0.25 * Matrix::Identity(2, 2), layout};
    CHECK_THROWS_AS(prepare_program(half), TraceNotOne);
}

TEST_CASE("kraus extraction propagates loop-budget failures") {
    Program p = parse("qubits q; while full on q { skip; }");
    CHECK_THROWS_AS(kraus_of(p, LoopPolicy{1e-10, 20}), LoopBudgetExceeded);
}

TEST_CASE("state validity checks") {
    QubitLayout layout({"q"});
    Matrix neg(2, 2);
    neg << 1, 0, 0, -0.5;
    CHECK_THROWS_AS((State{neg, layout}).check(), NotPSD);
    CHECK_THROWS_AS((State{2.0 * Matrix::Identity(2, 2), layout}).check(),
                    TraceTooLarge);
}
