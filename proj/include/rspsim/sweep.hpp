#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "rspsim/channels.hpp"
#include "rspsim/metrics.hpp"
#include "rspsim/protocol.hpp"
#include "rspsim/tomography.hpp"

namespace rspsim {

enum class ChannelKind { Ideal, Depolarizing, Dephasing };

enum class SweepMode { Exact, MonteCarlo };

/// One sweep request: channel, noise parameter, which target family, how
/// densely to sample it, and whether fidelities come from the exact density
/// matrices or from simulated tomography of Bob's state.
struct SweepSpec {
    ChannelKind channel = ChannelKind::Ideal;
    double p = 1.0;
    std::string state_set;                    // "1".."7", or empty for explicit states
    std::vector<BlochVector> explicit_states;
    std::size_t resolution = 50;
    SweepMode mode = SweepMode::Exact;
    double n_counts = 1e4;
    std::uint64_t seed = 1;
};

struct SweepRow {
    double r;
    double theta;
    double phi;
    double p;
    double simulated_fidelity;
    double closed_form_fidelity;
    double success_probability;
    double abs_difference;
};

/// The pre-agreed target families:
///   1: r=1, theta in [0,pi], phi=0          (polar great circle, X-Z plane)
///   2: r=1, theta in [0,pi], phi=pi/2       (polar great circle, Y-Z plane)
///   3: r=1, theta=pi/2, phi in [0,2pi]      (equatorial great circle)
///   4: r=cos^2(pi/8), theta in [0,pi], phi=0
///   5: the zero vector
///   6: r in [-1,1], theta=pi/4, phi=0
///   7: r in [-1,1], theta=pi/2, phi=0
inline std::vector<BlochVector> expand_state_set(const std::string& name,
                                                 std::size_t resolution) {
    if (resolution < 2) {
        throw std::domain_error("expand_state_set: resolution must be at least 2");
    }
    constexpr double pi = std::numbers::pi;
    std::vector<BlochVector> out;
    out.reserve(resolution);
    auto samples = [&](double lo, double hi, auto&& make) {
        for (std::size_t i = 0; i < resolution; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i)
                                 / static_cast<double>(resolution - 1);
            out.push_back(make(x));
        }
    };
    if (name == "1") {
        samples(0.0, pi, [](double t) { return BlochVector(1.0, t, 0.0); });
    } else if (name == "2") {
        samples(0.0, pi, [](double t) { return BlochVector(1.0, t, pi / 2.0); });
    } else if (name == "3") {
        samples(0.0, 2.0 * pi, [](double f) { return BlochVector(1.0, pi / 2.0, f); });
    } else if (name == "4") {
        const double r = std::cos(pi / 8.0) * std::cos(pi / 8.0);
        samples(0.0, pi, [r](double t) { return BlochVector(r, t, 0.0); });
    } else if (name == "5") {
        out.push_back(BlochVector(0.0, 0.0, 0.0));
    } else if (name == "6") {
        samples(-1.0, 1.0, [](double r) { return BlochVector(r, pi / 4.0, 0.0); });
    } else if (name == "7") {
        samples(-1.0, 1.0, [](double r) { return BlochVector(r, pi / 2.0, 0.0); });
    } else {
        throw std::invalid_argument("expand_state_set: unknown state set '" + name + "'");
    }
    return out;
}

inline DensityMatrix channel_state(ChannelKind kind, double p) {
    switch (kind) {
        case ChannelKind::Ideal: return bell_psi_minus();
        case ChannelKind::Depolarizing: return depolarized_bell(p);
        case ChannelKind::Dephasing: return dephased_bell(p);
    }
    throw std::invalid_argument("channel_state: unknown channel");
}

inline double closed_form_fidelity(ChannelKind kind, double p, const BlochVector& canonical) {
    switch (kind) {
        case ChannelKind::Ideal: return 1.0;
        case ChannelKind::Depolarizing: return fidelity_depolarizing_closed(canonical.r, p);
        case ChannelKind::Dephasing:
            return fidelity_dephasing_closed(canonical.r, canonical.theta, p);
    }
    throw std::invalid_argument("closed_form_fidelity: unknown channel");
}

/// Runs the protocol over the requested targets. Rows report the original
/// signed r; all computation happens on the canonical antipodal form.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const std::vector<BlochVector> targets =
        spec.state_set.empty() ? spec.explicit_states
                               : expand_state_set(spec.state_set, spec.resolution);
    if (targets.empty()) {
        throw std::invalid_argument("run_sweep: no target states");
    }
    const DensityMatrix channel = channel_state(spec.channel, spec.p);

    std::vector<SweepRow> rows;
    rows.reserve(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const BlochVector canonical = targets[i].canonicalized();
        const RspOutcome outcome = rsp_run(channel, canonical);
        const DensityMatrix target_rho = bloch_to_rho(canonical);

        double simulated;
        if (spec.mode == SweepMode::Exact) {
            simulated = fidelity(target_rho, outcome.conditional_state);
        } else {
            const TomographyRecord rec =
                simulate_counts(outcome.conditional_state, single_qubit_settings(),
                                spec.n_counts, spec.seed + i);
            simulated = fidelity(target_rho, mle_reconstruct(rec));
        }

        SweepRow row;
        row.r = targets[i].r;
        row.theta = targets[i].theta;
        row.phi = targets[i].phi;
        row.p = spec.channel == ChannelKind::Ideal ? 1.0 : spec.p;
        row.simulated_fidelity = simulated;
        row.closed_form_fidelity = closed_form_fidelity(spec.channel, row.p, canonical);
        row.success_probability = outcome.success_probability;
        row.abs_difference = std::abs(simulated - row.closed_form_fidelity);
        rows.push_back(row);
    }
    return rows;
}

struct SweepSummary {
    double min_fidelity;
    double max_fidelity;
    double mean_fidelity;
};

inline SweepSummary summarize(const std::vector<SweepRow>& rows) {
    SweepSummary s{rows.front().simulated_fidelity, rows.front().simulated_fidelity, 0.0};
    for (const SweepRow& row : rows) {
        s.min_fidelity = std::min(s.min_fidelity, row.simulated_fidelity);
        s.max_fidelity = std::max(s.max_fidelity, row.simulated_fidelity);
        s.mean_fidelity += row.simulated_fidelity;
    }
    s.mean_fidelity /= static_cast<double>(rows.size());
    return s;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "r,theta,phi,p,simulated_fidelity,closed_form_fidelity,"
          "success_probability,abs_difference\n";
    os << std::setprecision(12);
    for (const SweepRow& row : rows) {
        os << row.r << ',' << row.theta << ',' << row.phi << ',' << row.p << ','
           << row.simulated_fidelity << ',' << row.closed_form_fidelity << ','
           << row.success_probability << ',' << row.abs_difference << '\n';
    }
}

// ---------------------------------------------------------------------------
// Channel comparison
// ---------------------------------------------------------------------------

struct ChannelComparisonRow {
    double r;
    double theta;
    double p;
    double f_dephasing;
    double f_depolarizing;
    double difference;  // dephasing minus depolarizing
};

struct ChannelComparison {
    std::vector<ChannelComparisonRow> rows;
    std::size_t violations = 0;  // rows with difference < -1e-12
};

/// Tabulates both closed forms over an (r, theta) grid for each p and counts
/// any points where dephasing falls below depolarizing.
inline ChannelComparison compare_channels(const std::vector<double>& p_list,
                                          std::size_t grid_resolution) {
    if (grid_resolution < 2) {
        throw std::domain_error("compare_channels: resolution must be at least 2");
    }
    constexpr double pi = std::numbers::pi;
    ChannelComparison out;
    for (double p : p_list) {
        detail::require_probability(p, "compare_channels");
        for (std::size_t i = 0; i < grid_resolution; ++i) {
            const double r = static_cast<double>(i) / static_cast<double>(grid_resolution - 1);
            for (std::size_t j = 0; j < grid_resolution; ++j) {
                const double theta =
                    pi * static_cast<double>(j) / static_cast<double>(grid_resolution - 1);
                ChannelComparisonRow row;
                row.r = r;
                row.theta = theta;
                row.p = p;
                row.f_dephasing = fidelity_dephasing_closed(r, theta, p);
                row.f_depolarizing = fidelity_depolarizing_closed(r, p);
                row.difference = row.f_dephasing - row.f_depolarizing;
                if (row.difference < -1e-12) ++out.violations;
                out.rows.push_back(row);
            }
        }
    }
    return out;
}

inline void write_comparison_csv(const ChannelComparison& cmp, std::ostream& os) {
    os << "r,theta,p,f_dephasing,f_depolarizing,difference\n";
    os << std::setprecision(12);
    for (const ChannelComparisonRow& row : cmp.rows) {
        os << row.r << ',' << row.theta << ',' << row.p << ',' << row.f_dephasing << ','
           << row.f_depolarizing << ',' << row.difference << '\n';
    }
}

}  // namespace rspsim
