#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rspsim/complex_matrix.hpp"

namespace rspsim {

/// Half-wave plate with fast axis at `angle` from horizontal.
inline ComplexMatrix jones_hwp(double angle) {
    const double c = std::cos(2.0 * angle);
    const double s = std::sin(2.0 * angle);
    return ComplexMatrix{{c, s}, {s, -c}};
}

/// Quarter-wave plate with fast axis at `angle` from horizontal.
inline ComplexMatrix jones_qwp(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const cplx one_minus_i(1.0, -1.0);
    return ComplexMatrix{{cplx(c * c, s * s), one_minus_i * s * c},
                         {one_minus_i * s * c, cplx(s * s, c * c)}};
}

/// Plate angles, rounded to multiples of `quantization` when it is positive
/// (the experimental mounts resolve 2 degrees, pi/90).
struct WaveplateSetting {
    double qwp_angle = 0.0;
    double hwp_angle = 0.0;
    double quantization = 0.0;
};

struct WaveplateSolution {
    WaveplateSetting setting;
    double residual;              // at the stored (possibly rounded) angles
    double unquantized_residual;  // at the continuous optimum
};

namespace detail {

/// Mismatch between HWP(h)*QWP(q) and the target, ignoring a phase on each
/// row of the composite. Branch phases on the sender side are invisible to
/// the protocol (the ancilla tags the branches before they recombine), so
/// two rotations differing by diag phases realize identical measurements.
inline double waveplate_residual(const ComplexMatrix& target, double qwp, double hwp) {
    const ComplexMatrix g = jones_hwp(hwp) * jones_qwp(qwp) * target.adjoint();
    return 1.0 - 0.5 * (std::abs(g(0, 0)) + std::abs(g(1, 1)));
}

}  // namespace detail

/// Finds plate angles realizing `target` (a 2x2 unitary) as HWP(h)*QWP(q):
/// coarse 2-degree grid over [0, pi)^2, then pattern-search refinement, then
/// rounding to the quantization grid with the residual recomputed. Targets
/// outside the reachable family simply come back with a large residual.
inline WaveplateSolution solve_waveplate_angles(const ComplexMatrix& target,
                                                double quantization = 0.0) {
    if (target.rows() != 2 || target.cols() != 2) {
        throw std::invalid_argument("solve_waveplate_angles: target must be 2x2");
    }
    if ((target.adjoint() * target).max_abs_diff(ComplexMatrix::identity(2)) > 1e-9) {
        throw std::invalid_argument("solve_waveplate_angles: target must be unitary");
    }
    if (quantization < 0.0) {
        throw std::domain_error("solve_waveplate_angles: quantization must be nonnegative");
    }

    constexpr double pi = std::numbers::pi;
    const double grid_step = pi / 90.0;
    double best_q = 0.0, best_h = 0.0;
    double best = detail::waveplate_residual(target, 0.0, 0.0);
    for (int i = 0; i < 90; ++i) {
        for (int j = 0; j < 90; ++j) {
            const double q = i * grid_step;
            const double h = j * grid_step;
            const double res = detail::waveplate_residual(target, q, h);
            if (res < best) {
                best = res;
                best_q = q;
                best_h = h;
            }
        }
    }

    double step = grid_step;
    while (step > 1e-10) {
        bool improved = false;
        for (int dq = -1; dq <= 1; ++dq) {
            for (int dh = -1; dh <= 1; ++dh) {
                if (dq == 0 && dh == 0) continue;
                const double q = best_q + dq * step;
                const double h = best_h + dh * step;
                const double res = detail::waveplate_residual(target, q, h);
                if (res < best) {
                    best = res;
                    best_q = q;
                    best_h = h;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }

    WaveplateSolution sol;
    sol.unquantized_residual = best;
    sol.setting.quantization = quantization;
    if (quantization > 0.0) {
        sol.setting.qwp_angle = std::round(best_q / quantization) * quantization;
        sol.setting.hwp_angle = std::round(best_h / quantization) * quantization;
        sol.residual = detail::waveplate_residual(target, sol.setting.qwp_angle,
                                                  sol.setting.hwp_angle);
    } else {
        sol.setting.qwp_angle = best_q;
        sol.setting.hwp_angle = best_h;
        sol.residual = best;
    }
    return sol;
}

/// The composite rotation a setting realizes.
inline ComplexMatrix waveplate_rotation(const WaveplateSetting& s) {
    return jones_hwp(s.hwp_angle) * jones_qwp(s.qwp_angle);
}

}  // namespace rspsim
