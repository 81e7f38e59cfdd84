#pragma once

#include <cmath>
#include <stdexcept>

#include "rspsim/states.hpp"

namespace rspsim {

/// Preparation-basis rotation; maps |0> to psi and -|1> to psi_perp.
inline ComplexMatrix u_theta_phi(double theta, double phi) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return ComplexMatrix{{c, -std::polar(1.0, -phi) * s},
                         {std::polar(1.0, phi) * s, c}};
}

/// Real rotation steering the ancilla branch weights to (1+r)/2 and (1-r)/2.
inline ComplexMatrix u_r(double r) {
    if (r < 0.0 || r > 1.0) {
        throw std::domain_error("u_r: r must lie in [0, 1]");
    }
    const double kp = std::sqrt((1.0 + r) / 2.0);
    const double km = std::sqrt((1.0 - r) / 2.0);
    return ComplexMatrix{{kp, -km}, {km, kp}};
}

/// CNOT on (control, target) ordering: |0><0| (x) I + |1><1| (x) X.
inline ComplexMatrix cnot_A_to_a() {
    ComplexMatrix m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

/// Bob's state conditioned on the sender reading result 1, plus the
/// probability of that result.
struct RspOutcome {
    DensityMatrix conditional_state;
    double success_probability;
};

namespace detail {

// Fixed tensor ordering throughout: A (x) B (x) a, A most significant.
inline ComplexMatrix embed_on_A(const ComplexMatrix& op) {
    return kron(kron(op, ComplexMatrix::identity(2)), ComplexMatrix::identity(2));
}

inline ComplexMatrix cnot_A_a_full() {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    return kron(kron(projector(ket0()), i2), i2) + kron(kron(projector(ket1()), i2), pauli_x());
}

}  // namespace detail

/// Runs the five-step procedure with an explicit sender-side rotation in
/// place of U(theta, phi)^dag. Exposed separately so an imperfect waveplate
/// realization of the rotation can be substituted.
inline RspOutcome rsp_run_with_rotation(const DensityMatrix& channel_state,
                                        const ComplexMatrix& a_rotation, double r) {
    if (channel_state.dim() != 4) {
        throw std::invalid_argument("rsp_run: channel state must be two-qubit");
    }
    if (a_rotation.rows() != 2 || a_rotation.cols() != 2) {
        throw std::invalid_argument("rsp_run: sender rotation must be 2x2");
    }

    ComplexMatrix rho = kron(channel_state.matrix(), projector(ket0()));
    const ComplexMatrix chain = detail::embed_on_A(u_r(r))
                              * detail::cnot_A_a_full()
                              * detail::embed_on_A(a_rotation);
    rho = chain * rho * chain.adjoint();

    const ComplexMatrix project_A1 = detail::embed_on_A(projector(ket1()));
    const ComplexMatrix projected = project_A1 * rho * project_A1;
    const double prob = projected.trace().real();
    if (prob < 1e-15) {
        throw std::runtime_error("rsp_run: degenerate postselection, result 1 never occurs");
    }

    ComplexMatrix bob = partial_trace(projected, {2, 2, 2}, {1}) * cplx{1.0 / prob};
    return RspOutcome{DensityMatrix(bob.hermitized()), prob};
}

/// Full protocol for a Bloch target: rotate by U(theta, phi)^dag, copy the
/// sender branch onto the ancilla, rotate by U(r), postselect result 1.
inline RspOutcome rsp_run(const DensityMatrix& channel_state, const BlochVector& target) {
    const BlochVector t = target.canonicalized();
    return rsp_run_with_rotation(channel_state, u_theta_phi(t.theta, t.phi).adjoint(), t.r);
}

/// Pre-agreed families for which the result-0 branch admits a correction.
enum class EnsembleFamily {
    PolarGreatCircle,  // sigma_z flip
    EquatorialCircle,  // i sigma_y flip
};

/// Correction Bob applies when the sender reports result 0, valid only for
/// the two special ensembles.
inline DensityMatrix correct_result0(EnsembleFamily ensemble, const DensityMatrix& state) {
    if (state.dim() != 2) {
        throw std::invalid_argument("correct_result0: single-qubit state required");
    }
    ComplexMatrix op(2, 2);
    switch (ensemble) {
        case EnsembleFamily::PolarGreatCircle:
            op = pauli_z();
            break;
        case EnsembleFamily::EquatorialCircle:
            op = pauli_y() * cplx(0.0, 1.0);
            break;
        default:
            throw std::invalid_argument("correct_result0: unsupported ensemble family");
    }
    return DensityMatrix((op * state.matrix() * op.adjoint()).hermitized());
}

}  // namespace rspsim
