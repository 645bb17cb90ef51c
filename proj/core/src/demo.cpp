#include "qai/demo.hpp"

#include <Eigen/QR>

#include <cmath>

namespace qai {

namespace {

// unitary frame whose first columns are the given orthonormal vectors
Matrix complete_frame(const std::vector<Vector>& heads, std::size_t dim) {
    Matrix seed(static_cast<Eigen::Index>(dim),
                static_cast<Eigen::Index>(heads.size()));
    for (std::size_t i = 0; i < heads.size(); ++i)
        seed.col(static_cast<Eigen::Index>(i)) = heads[i];
    Eigen::HouseholderQR<Matrix> qr(seed);
    Matrix q = qr.householderQ();
    for (std::size_t i = 0; i < heads.size(); ++i)
        q.col(static_cast<Eigen::Index>(i)) = heads[i];
    return q;
}

}  // namespace

LocalGapDemo make_local_gap_demo() {
    const std::size_t d = 8;
    const double r = 1.0 / std::sqrt(2.0);

    Vector phi_plus = r * (basis_ket(d, 0) + basis_ket(d, 7));
    Vector phi_minus = r * (basis_ket(d, 0) - basis_ket(d, 7));

    // U maps phi_plus -> |000>, phi_minus -> |111>, completed arbitrarily
    Matrix from = complete_frame({phi_plus, phi_minus}, d);
    Matrix to = complete_frame({basis_ket(d, 0), basis_ket(d, 7)}, d);
    Matrix u = to * from.adjoint();

    LocalGapDemo demo;
    demo.program.layout = QubitLayout({"q1", "q2", "q3"});
    demo.program.unitaries.emplace_back("U", UnitaryDecl{u, {}});
    demo.program.body.push_back(
        Stmt{UnitaryStmt{{"q1", "q2", "q3"}, "U"}, {}, {}});

    demo.phi_plus = State{phi_plus * phi_plus.adjoint(), demo.program.layout};
    demo.signature = Signature{{{"q1", "q2"}, {"q2", "q3"}}};
    demo.local = DomainKind::local(demo.signature);

    Matrix eq(4, 2);
    eq.setZero();
    eq(0, 0) = 1.0;
    eq(3, 1) = 1.0;
    demo.pair_equal = Subspace::from_orthonormal(4, eq);
    demo.pair_zero = Subspace::from_orthonormal(4, basis_ket(4, 0));
    return demo;
}

}  // namespace qai
