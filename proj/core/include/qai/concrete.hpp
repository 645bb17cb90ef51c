#pragma once

#include "qai/lang.hpp"

namespace qai {

/*
 * Concrete semantics on partial density operators. A State is a PSD
 * matrix with trace in [0, 1]; the trace carries the probability of
 * reaching the state, so all program maps are trace-nonincreasing and
 * linear.
 */

struct State {
    Matrix rho;
    QubitLayout layout;

    double trace() const { return rho.trace().real(); }
    void check(const Tolerances& tol = default_tolerances()) const;
};

/*
 * Truncation policy for loop semantics: iteration stops once the mass
 * still circulating inside the loop drops below trace_eps, which bounds
 * the trace of everything not yet emitted.
 */
struct LoopPolicy {
    double trace_eps = 1e-10;
    std::size_t max_iters = 10000;
};

// Thrown when a loop fails to converge within the policy budget; carries
// the partial result and a trace accounting of what is still pending.
struct LoopBudgetExceeded : Error {
    Matrix partial;           // sum of the emitted terms so far
    double accumulated_trace; // trace already emitted
    double pending_trace;     // mass still inside the loop
    LoopBudgetExceeded(Matrix partial_, double accumulated, double pending)
        : Error("loop did not converge within budget (emitted trace " +
                std::to_string(accumulated) + ", pending " + std::to_string(pending) + ")"),
          partial(std::move(partial_)),
          accumulated_trace(accumulated),
          pending_trace(pending) {}
};

// Run the program on a state.
State eval(const Program& p, const State& in, const LoopPolicy& policy = {},
           const Tolerances& tol = default_tolerances());

// Internal form used by the analyses: acts on the bare matrix.
Matrix eval_block(const Program& p, const Block& body, const Matrix& rho,
                  const LoopPolicy& policy = {});

/*
 * Kraus operators {E_k} of the program's channel, extracted from the
 * Choi matrix (assembled by evaluating the program on a Hermitian basis
 * of matrix units). sum_k E_k rho E_k^dagger reproduces eval on every
 * state; sum_k E_k^dagger E_k <= I.
 */
std::vector<Matrix> kraus_of(const Program& p, const LoopPolicy& policy = {},
                             const Tolerances& tol = default_tolerances());

/*
 * A single unit-trace state whose support is the join of the supports of
 * the given states: the equal mixture of the normalized members.
 */
State mix_representative(const std::vector<State>& states,
                         const Tolerances& tol = default_tolerances());

/*
 * A program S over rho's layout with eval(S, sigma) = Tr(sigma) * rho for
 * every sigma: initialize, rotate |0...0> onto a purification-style
 * superposition of rho's eigenvectors, then branch on the rank-1
 * eigenspaces so the cross terms cancel.
 */
Program prepare_program(const State& rho, const Tolerances& tol = default_tolerances());

}  // namespace qai
