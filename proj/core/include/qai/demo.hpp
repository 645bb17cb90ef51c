#pragma once

#include "qai/abstract.hpp"

namespace qai {

/*
 * Built-in three-qubit demonstration that the local-subspace domain is
 * incomplete: a basis change sending the two GHZ-like states (|000> +-
 * |111>)/sqrt(2) to |000> and |111> loses nothing globally, but the
 * two-qubit marginals of the analysis over the signature
 * ({q1,q2},{q2,q3}) cannot separate the input from its phase twin, so
 * the analyzed components keep |11> while the reachable states do not.
 */
struct LocalGapDemo {
    Program program;      // qubits q1 q2 q3; q1,q2,q3 *= U;
    State phi_plus;       // (|000> + |111>)/sqrt(2) as a density matrix
    Signature signature;  // ({q1,q2}, {q2,q3})
    DomainKind local;
    Subspace pair_equal;  // span{|00>, |11>} on two qubits
    Subspace pair_zero;   // span{|00>}
};

LocalGapDemo make_local_gap_demo();

}  // namespace qai
