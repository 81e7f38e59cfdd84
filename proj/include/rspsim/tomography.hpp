#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rspsim/hermitian_eig.hpp"
#include "rspsim/states.hpp"

namespace rspsim {

// ---------------------------------------------------------------------------
// Measurement settings
// ---------------------------------------------------------------------------

/// Single-qubit analyzer ket for a label character in {H, V, D, A, R, L}.
inline ComplexMatrix analyzer_ket(char label) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (label) {
        case 'H': return ComplexMatrix::column({1.0, 0.0});
        case 'V': return ComplexMatrix::column({0.0, 1.0});
        case 'D': return ComplexMatrix::column({inv_sqrt2, inv_sqrt2});
        case 'A': return ComplexMatrix::column({inv_sqrt2, -inv_sqrt2});
        case 'R': return ComplexMatrix::column({inv_sqrt2, cplx(0.0, inv_sqrt2)});
        case 'L': return ComplexMatrix::column({inv_sqrt2, cplx(0.0, -inv_sqrt2)});
        default: throw std::invalid_argument("analyzer_ket: unknown label");
    }
}

/// Product analyzer ket for a multi-qubit label such as "HV".
inline ComplexMatrix setting_ket(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("setting_ket: empty label");
    ComplexMatrix k = analyzer_ket(label[0]);
    for (std::size_t i = 1; i < label.size(); ++i) {
        k = kron(k, analyzer_ket(label[i]));
    }
    return k;
}

inline std::vector<std::string> single_qubit_settings() {
    return {"H", "V", "D", "A", "R", "L"};
}

/// Overcomplete 36-projector product set; well conditioned for inversion.
inline std::vector<std::string> two_qubit_settings() {
    std::vector<std::string> out;
    for (char a : {'H', 'V', 'D', 'A', 'R', 'L'}) {
        for (char b : {'H', 'V', 'D', 'A', 'R', 'L'}) {
            out.push_back(std::string{a, b});
        }
    }
    return out;
}

/// Minimal informationally complete 16-projector set.
inline std::vector<std::string> two_qubit_settings_minimal() {
    return {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
            "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
}

// ---------------------------------------------------------------------------
// Count simulation
// ---------------------------------------------------------------------------

/// Seedable generator with a pinned algorithm (mt19937_64 + explicit Poisson
/// sampling), so records list what produced them. Bit-exact reproducibility
/// is promised within this implementation only.
class CountRng {
public:
    explicit CountRng(std::uint64_t seed) : engine_(seed) {}

    static const char* algorithm() { return "mt19937_64"; }

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Poisson draw: CDF inversion below mean 30, rounded normal above.
    double poisson(double mean) {
        if (mean <= 0.0) return 0.0;
        if (mean < 30.0) {
            const double u = uniform();
            double p = std::exp(-mean);
            double cum = p;
            double k = 0.0;
            while (u > cum && k < mean + 20.0 * std::sqrt(mean) + 50.0) {
                k += 1.0;
                p *= mean / k;
                cum += p;
            }
            return k;
        }
        return std::max(0.0, std::round(mean + normal() * std::sqrt(mean)));
    }

private:
    std::mt19937_64 engine_;
};

/// One tomography acquisition: settings, the per-setting count normalization,
/// the observed (or exact, for the noiseless surrogate) coincidence counts,
/// and how they were produced.
struct TomographyRecord {
    std::vector<std::string> settings;
    double total_per_setting = 0.0;
    std::vector<double> counts;
    std::uint64_t seed = 0;
    std::string rng_algorithm;

    std::size_t num_qubits() const {
        return settings.empty() ? 0 : settings.front().size();
    }

    void validate() const {
        if (counts.size() != settings.size()) {
            throw std::invalid_argument("TomographyRecord: counts/settings length mismatch");
        }
        if (total_per_setting <= 0.0) {
            throw std::invalid_argument("TomographyRecord: total_per_setting must be positive");
        }
        for (double c : counts) {
            if (c < 0.0) throw std::invalid_argument("TomographyRecord: negative count");
        }
        for (const std::string& s : settings) {
            if (s.size() != settings.front().size()) {
                throw std::invalid_argument("TomographyRecord: mixed setting arity");
            }
        }
    }
};

/// Draws Poisson counts for each setting, mean N * Tr(P rho).
inline TomographyRecord simulate_counts(const DensityMatrix& rho,
                                        const std::vector<std::string>& settings,
                                        double total_per_setting, std::uint64_t seed) {
    if (total_per_setting <= 0.0) {
        throw std::domain_error("simulate_counts: total_per_setting must be positive");
    }
    CountRng rng(seed);
    TomographyRecord rec;
    rec.settings = settings;
    rec.total_per_setting = total_per_setting;
    rec.seed = seed;
    rec.rng_algorithm = CountRng::algorithm();
    rec.counts.reserve(settings.size());
    for (const std::string& label : settings) {
        const ComplexMatrix k = setting_ket(label);
        const double prob = std::max((k.adjoint() * rho.matrix() * k)(0, 0).real(), 0.0);
        rec.counts.push_back(rng.poisson(total_per_setting * prob));
    }
    rec.validate();
    return rec;
}

/// Noiseless surrogate for the infinite-count limit: counts = N * Tr(P rho)
/// exactly (not integers).
inline TomographyRecord exact_counts(const DensityMatrix& rho,
                                     const std::vector<std::string>& settings,
                                     double total_per_setting) {
    TomographyRecord rec;
    rec.settings = settings;
    rec.total_per_setting = total_per_setting;
    rec.seed = 0;
    rec.rng_algorithm = "exact";
    rec.counts.reserve(settings.size());
    for (const std::string& label : settings) {
        const ComplexMatrix k = setting_ket(label);
        const double prob = std::max((k.adjoint() * rho.matrix() * k)(0, 0).real(), 0.0);
        rec.counts.push_back(total_per_setting * prob);
    }
    rec.validate();
    return rec;
}

// ---------------------------------------------------------------------------
// Record serialization (one setting per line: label, count)
// ---------------------------------------------------------------------------

inline void save_record(const TomographyRecord& rec, std::ostream& os) {
    rec.validate();
    os << "# rspsim tomography record v1\n";
    os << "rng " << rec.rng_algorithm << "\n";
    os << "seed " << rec.seed << "\n";
    os << "total ";
    os << std::setprecision(17) << rec.total_per_setting << "\n";
    for (std::size_t i = 0; i < rec.settings.size(); ++i) {
        os << rec.settings[i] << ' ' << std::setprecision(17) << rec.counts[i] << "\n";
    }
}

inline void save_record(const TomographyRecord& rec, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_record: cannot open " + path);
    save_record(rec, os);
}

inline TomographyRecord load_record(std::istream& is) {
    TomographyRecord rec;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "rng") {
            ls >> rec.rng_algorithm;
        } else if (head == "seed") {
            ls >> rec.seed;
        } else if (head == "total") {
            ls >> rec.total_per_setting;
        } else {
            double count = 0.0;
            if (!(ls >> count)) {
                throw std::runtime_error("load_record: malformed line: " + line);
            }
            rec.settings.push_back(head);
            rec.counts.push_back(count);
        }
    }
    rec.validate();
    return rec;
}

inline TomographyRecord load_record(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_record: cannot open " + path);
    return load_record(is);
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<ComplexMatrix> pauli_basis(std::size_t num_qubits) {
    std::vector<ComplexMatrix> singles = {ComplexMatrix::identity(2), pauli_x(), pauli_y(),
                                          pauli_z()};
    std::vector<ComplexMatrix> out = {ComplexMatrix::identity(1)};
    for (std::size_t q = 0; q < num_qubits; ++q) {
        std::vector<ComplexMatrix> next;
        next.reserve(out.size() * 4);
        for (const ComplexMatrix& b : out) {
            for (const ComplexMatrix& s : singles) next.push_back(kron(b, s));
        }
        out = std::move(next);
    }
    return out;
}

/// Gaussian elimination with partial pivoting; throws when the system is
/// rank deficient (settings not informationally complete).
inline std::vector<double> solve_real_system(std::vector<std::vector<double>> a,
                                             std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-10) {
            throw std::runtime_error("linear_inversion: settings are not informationally complete");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t row = n; row-- > 0;) {
        double s = b[row];
        for (std::size_t k = row + 1; k < n; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return x;
}

}  // namespace detail

/// Least-squares inversion of the Born-rule map over the Pauli basis.
/// Hermitian and unit trace by construction; may be non-PSD under shot noise.
inline ComplexMatrix linear_inversion(const TomographyRecord& rec) {
    rec.validate();
    const std::size_t n = rec.num_qubits();
    const std::size_t d = std::size_t{1} << n;
    const std::vector<ComplexMatrix> basis = detail::pauli_basis(n);
    const std::size_t m = basis.size();

    // design(s, k) = Tr(P_s B_k) / d, target = counts / N
    std::vector<std::vector<double>> design(rec.settings.size(), std::vector<double>(m));
    for (std::size_t s = 0; s < rec.settings.size(); ++s) {
        const ComplexMatrix ket = setting_ket(rec.settings[s]);
        if (ket.rows() != d) {
            throw std::invalid_argument("linear_inversion: setting arity mismatch");
        }
        for (std::size_t k = 0; k < m; ++k) {
            design[s][k] = (ket.adjoint() * basis[k] * ket)(0, 0).real() / static_cast<double>(d);
        }
    }

    // Normal equations for the Pauli coefficients.
    std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
    std::vector<double> rhs(m, 0.0);
    for (std::size_t s = 0; s < rec.settings.size(); ++s) {
        const double p_hat = rec.counts[s] / rec.total_per_setting;
        for (std::size_t i = 0; i < m; ++i) {
            rhs[i] += design[s][i] * p_hat;
            for (std::size_t j = i; j < m; ++j) {
                gram[i][j] += design[s][i] * design[s][j];
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) gram[i][j] = gram[j][i];
    }

    const std::vector<double> coeff = detail::solve_real_system(std::move(gram), std::move(rhs));
    ComplexMatrix rho = ComplexMatrix::zero(d, d);
    for (std::size_t k = 0; k < m; ++k) {
        rho = rho + basis[k] * cplx{coeff[k] / static_cast<double>(d)};
    }
    rho = rho.hermitized();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-12) {
        throw std::runtime_error("linear_inversion: degenerate reconstruction, zero trace");
    }
    return rho * cplx{1.0 / tr};
}

/// Raised when the likelihood climb hits its evaluation cap; carries the best
/// iterate reached so far.
class MleConvergenceError : public std::runtime_error {
public:
    MleConvergenceError(DensityMatrix best, double log_likelihood)
        : std::runtime_error("mle_reconstruct: evaluation cap exceeded before convergence"),
          best_estimate(std::move(best)),
          log_likelihood(log_likelihood) {}

    DensityMatrix best_estimate;
    double log_likelihood;
};

namespace detail {

/// Lower-triangular factor parameters: diagonal reals, then (re, im) pairs
/// for each below-diagonal entry, row-major.
inline std::vector<double> cholesky_params(const DensityMatrix& rho) {
    const std::size_t d = rho.dim();
    HermitianEig eig = herm_eig(rho.matrix());
    ComplexMatrix scaled = eig.eigenvectors;
    double tr = 0.0;
    std::vector<double> floored(d);
    for (std::size_t j = 0; j < d; ++j) {
        floored[j] = std::max(eig.eigenvalues[j], 1e-8);
        tr += floored[j];
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) scaled(i, j) *= floored[j] / tr;
    }
    const ComplexMatrix pd = (scaled * eig.eigenvectors.adjoint()).hermitized();

    // Standard Cholesky of the floored matrix.
    ComplexMatrix t = ComplexMatrix::zero(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            cplx sum = pd(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= t(i, k) * std::conj(t(j, k));
            if (i == j) {
                t(i, i) = std::sqrt(std::max(sum.real(), 1e-16));
            } else {
                t(i, j) = sum / t(j, j);
            }
        }
    }
    std::vector<double> params;
    params.reserve(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j) {
                params.push_back(t(i, i).real());
            } else {
                params.push_back(t(i, j).real());
                params.push_back(t(i, j).imag());
            }
        }
    }
    return params;
}

inline ComplexMatrix rho_from_cholesky_params(const std::vector<double>& params, std::size_t d) {
    ComplexMatrix t = ComplexMatrix::zero(d, d);
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (i == j) {
                t(i, i) = params[k++];
            } else {
                const double re = params[k++];
                const double im = params[k++];
                t(i, j) = cplx(re, im);
            }
        }
    }
    ComplexMatrix rho = t * t.adjoint();
    const double tr = rho.trace().real();
    if (tr <= 0.0) return ComplexMatrix::identity(d) * cplx{1.0 / static_cast<double>(d)};
    return rho * cplx{1.0 / tr};
}

}  // namespace detail

/// Maximum-likelihood reconstruction: PSD by construction through the
/// triangular-factor parameterization, climbed by per-coordinate descent with
/// shrinking steps. Converged when a full sweep improves the Poisson
/// log-likelihood by less than 1e-9.
inline DensityMatrix mle_reconstruct(const TomographyRecord& rec,
                                     std::optional<ComplexMatrix> initial = std::nullopt,
                                     std::size_t eval_cap = 100000) {
    rec.validate();
    const std::size_t d = std::size_t{1} << rec.num_qubits();

    DensityMatrix init = initial.has_value() ? nearest_density_matrix(*initial)
                                             : nearest_density_matrix(linear_inversion(rec));

    std::vector<ComplexMatrix> kets;
    kets.reserve(rec.settings.size());
    for (const std::string& label : rec.settings) kets.push_back(setting_ket(label));

    std::size_t evals = 0;
    auto log_likelihood = [&](const std::vector<double>& params) {
        ++evals;
        const ComplexMatrix rho = detail::rho_from_cholesky_params(params, d);
        double ll = 0.0;
        for (std::size_t s = 0; s < kets.size(); ++s) {
            const double mu = std::max(
                rec.total_per_setting * (kets[s].adjoint() * rho * kets[s])(0, 0).real(), 1e-12);
            ll += rec.counts[s] * std::log(mu) - mu;
        }
        return ll;
    };

    std::vector<double> params = detail::cholesky_params(init);
    double current = log_likelihood(params);

    while (evals < eval_cap) {
        const double sweep_start = current;
        for (std::size_t i = 0; i < params.size() && evals < eval_cap; ++i) {
            double step = std::max(0.01, 0.1 * std::abs(params[i]));
            for (int iter = 0; iter < 30 && evals < eval_cap; ++iter) {
                const double saved = params[i];
                params[i] = saved + step;
                const double up = log_likelihood(params);
                params[i] = saved - step;
                const double down = log_likelihood(params);
                if (up > current && up >= down) {
                    params[i] = saved + step;
                    current = up;
                } else if (down > current) {
                    params[i] = saved - step;
                    current = down;
                } else {
                    params[i] = saved;
                    step *= 0.25;
                    if (step < 1e-9) break;
                }
            }
        }
        if (current - sweep_start < 1e-9) {
            return DensityMatrix(detail::rho_from_cholesky_params(params, d).hermitized());
        }
    }
    throw MleConvergenceError(DensityMatrix(detail::rho_from_cholesky_params(params, d).hermitized()),
                              current);
}

}  // namespace rspsim
