#pragma once

#include <stdexcept>
#include <vector>

#include "rspsim/states.hpp"

namespace rspsim {

/// Noise acting on the shared pair, written extensionally as a convex mixture
/// of two-qubit states (the only form the protocol analysis ever needs).
struct MixtureChannel {
    struct Component {
        double weight;
        DensityMatrix state;
    };

    std::vector<Component> components;

    explicit MixtureChannel(std::vector<Component> parts) : components(std::move(parts)) {
        double sum = 0.0;
        for (const Component& c : components) {
            if (c.weight < -1e-12 || c.weight > 1.0 + 1e-12) {
                throw std::domain_error("MixtureChannel: weight outside [0, 1]");
            }
            if (c.state.dim() != 4) {
                throw std::invalid_argument("MixtureChannel: components must be two-qubit states");
            }
            sum += c.weight;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            throw std::domain_error("MixtureChannel: weights must sum to 1");
        }
    }

    DensityMatrix mixed() const {
        ComplexMatrix acc = ComplexMatrix::zero(4, 4);
        for (const Component& c : components) {
            acc = acc + c.state.matrix() * cplx{c.weight};
        }
        return DensityMatrix(acc);
    }
};

namespace detail {
inline void require_probability(double p, const char* what) {
    if (p < 0.0 || p > 1.0) {
        throw std::domain_error(std::string(what) + ": p must lie in [0, 1]");
    }
}
}  // namespace detail

/// p |Psi^-><Psi^-| + (1-p) I/4.
inline DensityMatrix depolarized_bell(double p) {
    detail::require_probability(p, "depolarized_bell");
    ComplexMatrix m = bell_psi_minus().matrix() * cplx{p}
                    + ComplexMatrix::identity(4) * cplx{(1.0 - p) / 4.0};
    return DensityMatrix(m);
}

/// p |Psi^-><Psi^-| + (1-p)/2 (|01><01| + |10><10|); coherence between the
/// |01> and |10> populations shrinks to -p/2 while the populations stay 1/2.
inline DensityMatrix dephased_bell(double p) {
    detail::require_probability(p, "dephased_bell");
    ComplexMatrix m = bell_psi_minus().matrix() * cplx{p};
    m(1, 1) += (1.0 - p) / 2.0;
    m(2, 2) += (1.0 - p) / 2.0;
    return DensityMatrix(m);
}

/// The published tomographic reconstruction of the source state at p = 0.9,
/// exactly as printed (rounded values; conjugate symmetry is off in the last
/// digit of one entry pair).
inline ComplexMatrix spdc_fixture_raw() {
    using namespace std::complex_literals;
    return ComplexMatrix{
        {0.001875, -0.018531 + 0.013719i, 0.002594 + 0.017125i, 0.01 - 0.015437i},
        {-0.018531 + 0.013719i, 0.50125, -0.435688 + 0.002406i, -0.007469 + 0.007281i},
        {0.002594 + 0.017125i, -0.435688 + 0.002406i, 0.494375, -0.007281 + 0.005813i},
        {0.01 + 0.015438i, -0.007469 + 0.007281i, -0.007281 + 0.005813i, 0.0025}};
}

/// Raw fixture hermitized and projected to the nearest PSD unit-trace matrix.
inline DensityMatrix spdc_fixture() {
    return nearest_density_matrix(spdc_fixture_raw());
}

}  // namespace rspsim
