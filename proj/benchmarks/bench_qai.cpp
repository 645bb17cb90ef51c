#include <benchmark/benchmark.h>

#include "qai/logic.hpp"
#include "qai/sampling.hpp"

using namespace qai;

namespace {

Program ghz_program(std::size_t qubits) {
    std::string text = "qubits";
    for (std::size_t i = 0; i < qubits; ++i) text += " q" + std::to_string(i);
    text += "; q0 *= H;";
    for (std::size_t i = 1; i < qubits; ++i)
        text += " q0,q" + std::to_string(i) + " *= CNOT;";
    return parse(text);
}

Program drain_program() {
    return parse("qubits q0 q1; while zero on q0 { q0 *= H; q0,q1 *= CNOT; }");
}

State zero_state(const Program& p) {
    const auto d = static_cast<Eigen::Index>(p.layout.dim());
    Matrix rho = Matrix::Zero(d, d);
    rho(0, 0) = 1;
    return State{rho, p.layout};
}

void bench_eval_ghz(benchmark::State& state) {
    Program p = ghz_program(static_cast<std::size_t>(state.range(0)));
    State in = zero_state(p);
    for (auto _ : state) benchmark::DoNotOptimize(eval(p, in).rho.sum());
}

void bench_eval_loop(benchmark::State& state) {
    Program p = drain_program();
    State in = zero_state(p);
    for (auto _ : state) benchmark::DoNotOptimize(eval(p, in).rho.sum());
}

void bench_analyze_global(benchmark::State& state) {
    Program p = ghz_program(static_cast<std::size_t>(state.range(0)));
    AbstractElement top_el = top(DomainKind::global(), p.layout);
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze(DomainKind::global(), p, top_el).parts.size());
}

void bench_analyze_local(benchmark::State& state) {
    Program p = ghz_program(3);
    Signature sig{{{"q0", "q1"}, {"q1", "q2"}}};
    DomainKind local = DomainKind::local(sig);
    AbstractElement top_el = top(local, p.layout);
    for (auto _ : state)
        benchmark::DoNotOptimize(analyze(local, p, top_el).parts.size());
}

void bench_subspace_join(benchmark::State& state) {
    Rng rng(1);
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    Subspace a = random_subspace(dim, dim / 2, rng);
    Subspace b = random_subspace(dim, dim / 2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(join(a, b).dim());
}

void bench_subspace_meet(benchmark::State& state) {
    Rng rng(2);
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    Subspace a = random_subspace(dim, dim / 2 + 1, rng);
    Subspace b = random_subspace(dim, dim / 2 + 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(meet(a, b).dim());
}

void bench_kraus_extraction(benchmark::State& state) {
    Program p = ghz_program(2);
    for (auto _ : state) benchmark::DoNotOptimize(kraus_of(p).size());
}

void bench_hoare_check(benchmark::State& state) {
    Program p = drain_program();
    AbstractElement pre = top(DomainKind::global(), p.layout);
    AbstractElement post = analyze(DomainKind::global(), p, pre);
    HoareTriple t{pre, p, post};
    for (auto _ : state) benchmark::DoNotOptimize(check_hoare(t).valid);
}

}  // namespace

BENCHMARK(bench_eval_ghz)->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(bench_eval_loop);
BENCHMARK(bench_analyze_global)->Arg(2)->Arg(4)->Arg(6);
BENCHMARK(bench_analyze_local);
BENCHMARK(bench_subspace_join)->Arg(16)->Arg(64);
BENCHMARK(bench_subspace_meet)->Arg(16)->Arg(64);
BENCHMARK(bench_kraus_extraction);
BENCHMARK(bench_hoare_check);

BENCHMARK_MAIN();
