#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rspsim/complex_matrix.hpp"

namespace rspsim {

/// Spectral decomposition of a Hermitian matrix: ascending real eigenvalues
/// and the matching orthonormal eigenvector columns.
struct HermitianEig {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    ComplexMatrix reconstruct() const {
        const std::size_t n = eigenvalues.size();
        ComplexMatrix scaled = eigenvectors;
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= eigenvalues[j];
        }
        return scaled * eigenvectors.adjoint();
    }
};

namespace detail {

constexpr double kHermTol = 1e-9;

/// One complex Jacobi rotation zeroing entry (p, q) of `a`, accumulated in `v`.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cplx phase = apq / mag;  // a_pq = |a_pq| * phase
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
    const double c = 1.0 / std::hypot(1.0, t);
    const double s = t * c;

    const std::size_t n = a.rows();
    // Columns p, q of A and V transform by the rotation; rows by its adjoint.
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp - s * std::conj(phase) * akq;
        a(k, q) = s * phase * akp + c * akq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k);
        const cplx aqk = a(q, k);
        a(p, k) = c * apk - s * phase * aqk;
        a(q, k) = s * std::conj(phase) * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p);
        const cplx vkq = v(k, q);
        v(k, p) = c * vkp - s * std::conj(phase) * vkq;
        v(k, q) = s * phase * vkp + c * vkq;
    }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) sum += std::norm(a(i, j));
        }
    }
    return std::sqrt(sum);
}

}  // namespace detail

/// Eigendecomposition by cyclic complex Jacobi sweeps. Deterministic output:
/// eigenvalues ascending, each eigenvector's first significant component made
/// real-positive. Input is hermitized as (m + m^dag)/2 before iterating.
inline HermitianEig herm_eig(const ComplexMatrix& m) {
    m.require_square();
    if (m.hermiticity_defect() > detail::kHermTol * std::max(1.0, m.max_abs())) {
        throw std::invalid_argument("herm_eig: input is not Hermitian");
    }
    const std::size_t n = m.rows();
    ComplexMatrix a = m.hermitized();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, a.max_abs());
    for (int sweep = 0; sweep < 60; ++sweep) {
        if (detail::off_diagonal_norm(a) <= 1e-15 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) > 1e-18 * scale) {
                    detail::jacobi_rotate(a, v, p, q);
                }
            }
        }
    }

    HermitianEig out;
    out.eigenvalues.resize(n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return lam[x] < lam[y]; });

    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = lam[src];
        // Phase convention: first component above threshold becomes real-positive.
        cplx anchor = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > 1e-8) { anchor = v(i, src); break; }
        }
        const cplx phase = (anchor == cplx{}) ? cplx{1.0} : std::conj(anchor) / std::abs(anchor);
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, src) * phase;
    }
    return out;
}

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-9, 0) are
/// treated as rounding noise and clamped to zero; anything more negative
/// is rejected.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
    HermitianEig eig = herm_eig(m);
    const std::size_t n = m.rows();
    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < n; ++j) {
        double lambda = eig.eigenvalues[j];
        if (lambda < -1e-9) {
            throw std::domain_error("sqrt_psd: matrix is not positive semidefinite");
        }
        const double root = std::sqrt(std::max(lambda, 0.0));
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= root;
    }
    return scaled * eig.eigenvectors.adjoint();
}

}  // namespace rspsim
