#pragma once

#include <cmath>
#include <stdexcept>

#include "rspsim/hermitian_eig.hpp"
#include "rspsim/states.hpp"

namespace rspsim {

namespace detail {

inline double det2x2_real(const ComplexMatrix& m) {
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
}

inline void require_unit_interval(double x, const char* what) {
    if (x < 0.0 || x > 1.0) {
        throw std::domain_error(std::string(what) + ": argument outside [0, 1]");
    }
}

}  // namespace detail

/// Uhlmann fidelity through the spectral route: Tr sqrt(sqrt(rho) sigma sqrt(rho)).
/// Accurate to ~1e-8 near rank-deficient operands (square roots of eigenvalue
/// rounding noise); kept as the generic path and as a cross-check oracle.
inline double fidelity_eig(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    const ComplexMatrix s = sqrt_psd(rho.matrix());
    const ComplexMatrix inner = (s * sigma.matrix() * s).hermitized();
    double f = 0.0;
    for (double lambda : herm_eig(inner).eigenvalues) {
        f += std::sqrt(std::max(lambda, 0.0));
    }
    return f;
}

/// Uhlmann fidelity. For qubits uses the closed form
///   F^2 = Tr(rho sigma) + 2 sqrt(det rho det sigma),
/// whose determinant product stays quadratically small for near-pure states,
/// so F is exact to machine precision where the spectral route loses half the
/// digits. Larger dimensions go through the spectral route.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    if (rho.dim() == 2) {
        const double overlap = (rho.matrix() * sigma.matrix()).trace().real();
        const double dets = std::max(detail::det2x2_real(rho.matrix()), 0.0)
                          * std::max(detail::det2x2_real(sigma.matrix()), 0.0);
        const double f2 = overlap + 2.0 * std::sqrt(dets);
        return std::sqrt(std::max(f2, 0.0));
    }
    return fidelity_eig(rho, sigma);
}

/// Fidelity of the prepared state against the target through a depolarized
/// pair: (sqrt((1+r)(1+pr)) + sqrt((1-r)(1-pr))) / 2.
inline double fidelity_depolarizing_closed(double r, double p) {
    detail::require_unit_interval(r, "fidelity_depolarizing_closed");
    detail::require_unit_interval(p, "fidelity_depolarizing_closed");
    return 0.5 * (std::sqrt((1.0 + r) * (1.0 + p * r)) + std::sqrt((1.0 - r) * (1.0 - p * r)));
}

/// Intermediate terms of the dephasing fidelity closed form.
struct DephasingFidelityTerms {
    double alpha;
    double beta;
    double gamma;
};

inline DephasingFidelityTerms dephasing_fidelity_terms(double r, double theta, double p) {
    detail::require_unit_interval(r, "dephasing_fidelity_terms");
    detail::require_unit_interval(p, "dephasing_fidelity_terms");
    const double cos2t = std::cos(2.0 * theta);
    DephasingFidelityTerms t;
    t.alpha = ((1.0 + p) * (1.0 + r) * (1.0 + r)
               + (1.0 - p) * (1.0 + r) * (1.0 + r * cos2t)) / 8.0;
    t.beta = ((1.0 + p) * (1.0 - r) * (1.0 - r)
              + (1.0 - p) * (1.0 - r) * (1.0 - r * cos2t)) / 8.0;
    t.gamma = r * (1.0 - p) * std::sqrt(std::max(1.0 - r * r, 0.0)) * std::sin(2.0 * theta) / 8.0;
    return t;
}

/// Fidelity through a dephased pair; phi drops out. The two square roots are
/// the eigenvalue pair of the 2x2 product operator, with alpha + beta its
/// trace-like invariant.
inline double fidelity_dephasing_closed(double r, double theta, double p) {
    const DephasingFidelityTerms t = dephasing_fidelity_terms(r, theta, p);
    const double mean = (t.alpha + t.beta) / 2.0;
    const double split = std::sqrt((t.alpha - t.beta) * (t.alpha - t.beta) / 4.0
                                   + t.gamma * t.gamma);
    const double hi = mean + split;
    double lo = mean - split;
    if (lo < -1e-12) {
        throw std::runtime_error("fidelity_dephasing_closed: negative inner radicand");
    }
    lo = std::max(lo, 0.0);
    return std::sqrt(std::max(hi, 0.0)) + std::sqrt(lo);
}

}  // namespace rspsim
