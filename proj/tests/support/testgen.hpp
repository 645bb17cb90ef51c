#pragma once

#include "qai/concrete.hpp"
#include "qai/sampling.hpp"

/*
 * Seeded random inputs for the property and acceptance suites: programs,
 * states, and spanning declarations. Everything is a pure function of the
 * engine state.
 */
namespace qai::testgen {

struct GenOptions {
    std::size_t min_qubits = 1;
    std::size_t max_qubits = 3;
    std::size_t max_statements = 8;  // per top-level body
    bool allow_loops = true;
    std::size_t max_loop_nesting = 1;
    // resample programs whose loops do not converge on probe states
    bool require_convergence = true;
    // declaration-name prefixes; give two generated programs disjoint
    // prefixes when they are meant to be sequenced
    std::string space_prefix = "A";
    std::string unitary_prefix = "W";
};

Program random_program(Rng& rng, const GenOptions& opt = {});

Program random_loop_free_program(Rng& rng, std::size_t num_qubits,
                                 std::size_t num_statements);

// a random basic statement valid for the given program
Stmt random_basic_stmt(Rng& rng, const Program& p);

// random unit-trace density matrix over the program layout
State random_state(Rng& rng, const Program& p);

}  // namespace qai::testgen
