#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rspsim/complex_matrix.hpp"
#include "rspsim/hermitian_eig.hpp"

namespace rspsim {

inline ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix pauli_y() { return {{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
inline ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

inline ComplexMatrix ket0() { return ComplexMatrix::column({1.0, 0.0}); }
inline ComplexMatrix ket1() { return ComplexMatrix::column({0.0, 1.0}); }

/// |k><k| for a column vector k.
inline ComplexMatrix projector(const ComplexMatrix& ket) { return ket * ket.adjoint(); }

/// Target-state coordinates (r, theta, phi). r may be negative on input
/// (antipodal shorthand used for the mixed-state line sweeps); canonicalized()
/// maps it onto the antipodal direction with r >= 0.
struct BlochVector {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    BlochVector() = default;
    BlochVector(double r_, double theta_, double phi_) : r(r_), theta(theta_), phi(phi_) {
        if (std::abs(r) > 1.0 + 1e-12) {
            throw std::domain_error("BlochVector: |r| must not exceed 1");
        }
    }

    BlochVector canonicalized() const {
        if (r >= 0.0) return *this;
        const double two_pi = 2.0 * std::numbers::pi;
        double phi2 = std::fmod(phi + std::numbers::pi, two_pi);
        if (phi2 < 0.0) phi2 += two_pi;
        return BlochVector(-r, std::numbers::pi - theta, phi2);
    }
};

/// Hermitian, unit-trace, PSD operator; validated on construction.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m) : matrix_(m) {
        m.require_square();
        if (m.hermiticity_defect() > 1e-9) {
            throw std::invalid_argument("DensityMatrix: not Hermitian");
        }
        if (std::abs(m.trace() - cplx{1.0}) > 1e-9) {
            throw std::invalid_argument("DensityMatrix: trace must be 1");
        }
        HermitianEig eig = herm_eig(m);
        if (eig.eigenvalues.front() < -1e-9) {
            throw std::invalid_argument("DensityMatrix: negative eigenvalue");
        }
    }

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return matrix_(i, j); }

    double purity() const { return (matrix_ * matrix_).trace().real(); }

private:
    ComplexMatrix matrix_;
};

/// Frobenius-nearest density matrix to a Hermitian, roughly-unit-trace input:
/// eigenvalues are projected onto the probability simplex, eigenvectors kept.
inline DensityMatrix nearest_density_matrix(const ComplexMatrix& herm) {
    HermitianEig eig = herm_eig(herm.hermitized());
    const std::size_t n = eig.eigenvalues.size();

    // Simplex projection: shift by mu so the clamped values sum to one.
    std::vector<double> sorted(eig.eigenvalues.rbegin(), eig.eigenvalues.rend());
    double acc = 0.0, mu = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += sorted[k];
        const double candidate = (acc - 1.0) / static_cast<double>(k + 1);
        if (k + 1 == n || sorted[k + 1] - candidate <= 0.0) {
            mu = candidate;
            break;
        }
    }

    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < n; ++j) {
        const double lambda = std::max(eig.eigenvalues[j] - mu, 0.0);
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= lambda;
    }
    ComplexMatrix rho = (scaled * eig.eigenvectors.adjoint()).hermitized();
    // Exact unit trace despite rounding in the eigenbasis product.
    const double tr = rho.trace().real();
    return DensityMatrix(rho * (1.0 / tr));
}

/// rho = (I + r sin(theta)cos(phi) X + r sin(theta)sin(phi) Y + r cos(theta) Z) / 2.
inline DensityMatrix bloch_to_rho(const BlochVector& v) {
    const BlochVector c = v.canonicalized();
    const double x = c.r * std::sin(c.theta) * std::cos(c.phi);
    const double y = c.r * std::sin(c.theta) * std::sin(c.phi);
    const double z = c.r * std::cos(c.theta);
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 + z);
    m(1, 1) = 0.5 * (1.0 - z);
    m(0, 1) = 0.5 * cplx(x, -y);
    m(1, 0) = 0.5 * cplx(x, y);
    return DensityMatrix(m);
}

/// The four kets of the preparation bases:
///   psi        = cos(t/2)|0> + e^{+i phi} sin(t/2)|1>
///   psi_perp   = e^{-i phi} sin(t/2)|0> - cos(t/2)|1>
/// and the primed pair obtained by phi -> phi + pi. The e^{-i phi} factors on
/// the perp kets are fixed by orthogonality.
struct PureBasis {
    ComplexMatrix psi;
    ComplexMatrix psi_perp;
    ComplexMatrix psi_prime;
    ComplexMatrix psi_prime_perp;
};

inline PureBasis pure_kets(double theta, double phi) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const cplx ep = std::polar(1.0, phi);
    const cplx em = std::polar(1.0, -phi);
    PureBasis b;
    b.psi = ComplexMatrix::column({c, ep * s});
    b.psi_perp = ComplexMatrix::column({em * s, -c});
    b.psi_prime = ComplexMatrix::column({c, -ep * s});
    b.psi_prime_perp = ComplexMatrix::column({em * s, c});
    return b;
}

/// |Psi^-><Psi^-| with |Psi^-> = (|01> - |10>) / sqrt(2).
inline DensityMatrix bell_psi_minus() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix ket(4, 1);
    ket(1, 0) = inv_sqrt2;
    ket(2, 0) = -inv_sqrt2;
    return DensityMatrix(projector(ket));
}

/// Two-element POVM steering the mixture weights:
/// Pi^1 = diag((1-r)/2, (1+r)/2), Pi^0 = I - Pi^1.
struct PovmPair {
    ComplexMatrix pi0;
    ComplexMatrix pi1;
};

inline PovmPair povm_elements(double r) {
    if (r < 0.0 || r > 1.0) {
        throw std::domain_error("povm_elements: r must lie in [0, 1]");
    }
    PovmPair p;
    p.pi1 = ComplexMatrix{{(1.0 - r) / 2.0, 0.0}, {0.0, (1.0 + r) / 2.0}};
    p.pi0 = ComplexMatrix::identity(2) - p.pi1;
    return p;
}

}  // namespace rspsim
