#include <catch2/catch_amalgamated.hpp>
#include <numbers>

#include "rspsim/channels.hpp"
#include "rspsim/metrics.hpp"
#include "rspsim/protocol.hpp"
#include "test_helpers.hpp"

using namespace rspsim;
namespace tst = rspsim::testing;
constexpr double pi = std::numbers::pi;

TEST_CASE("fidelity of a state with itself is 1", "[metrics]") {
    for (std::size_t n : {2, 4}) {
        const DensityMatrix rho = tst::random_density_matrix(n);
        CHECK(fidelity(rho, rho) == Catch::Approx(1.0).margin(1e-9));
    }
    const DensityMatrix pure = bloch_to_rho(BlochVector(1.0, 1.0, 2.0));
    CHECK(fidelity(pure, pure) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("fidelity of orthogonal pure states is 0", "[metrics]") {
    const DensityMatrix zero = bloch_to_rho(BlochVector(1.0, 0.0, 0.0));
    const DensityMatrix one = bloch_to_rho(BlochVector(1.0, pi, 0.0));
    CHECK(fidelity(zero, one) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("fidelity dimension mismatch raises", "[metrics]") {
    CHECK_THROWS_AS(fidelity(tst::random_density_matrix(2), tst::random_density_matrix(4)),
                    std::invalid_argument);
}

TEST_CASE("pure-state fidelity reduces to sqrt of the overlap", "[metrics]") {
    for (int rep = 0; rep < 20; ++rep) {
        const double theta = tst::uniform(0.0, pi);
        const double phi = tst::uniform(0.0, 2.0 * pi);
        const DensityMatrix pure = bloch_to_rho(BlochVector(1.0, theta, phi));
        const DensityMatrix sigma = tst::random_density_matrix(2);
        const PureBasis b = pure_kets(theta, phi);
        const double overlap = (b.psi.adjoint() * sigma.matrix() * b.psi)(0, 0).real();
        CHECK(fidelity(pure, sigma) == Catch::Approx(std::sqrt(overlap)).margin(1e-10));
    }
}

TEST_CASE("fidelity is symmetric and bounded", "[metrics]") {
    for (int rep = 0; rep < 20; ++rep) {
        const DensityMatrix a = tst::random_density_matrix(2);
        const DensityMatrix b = tst::random_density_matrix(2);
        const double fab = fidelity(a, b);
        CHECK(fab == Catch::Approx(fidelity(b, a)).margin(1e-10));
        CHECK(fab >= 0.0);
        CHECK(fab <= 1.0 + 1e-9);
    }
}

TEST_CASE("qubit closed form agrees with the spectral route", "[metrics]") {
    // The spectral route loses half the digits near rank deficiency, so the
    // comparison tolerance reflects its conditioning, not the closed form's.
    for (int rep = 0; rep < 30; ++rep) {
        const DensityMatrix a = tst::random_density_matrix(2);
        const DensityMatrix b = tst::random_density_matrix(2);
        CHECK(fidelity(a, b) == Catch::Approx(fidelity_eig(a, b)).margin(5e-8));
    }
    const DensityMatrix pure = bloch_to_rho(BlochVector(1.0, 0.7, 0.3));
    const DensityMatrix mixed = tst::random_density_matrix(2);
    CHECK(fidelity(pure, mixed) == Catch::Approx(fidelity_eig(pure, mixed)).margin(5e-8));
}

TEST_CASE("depolarizing closed form special cases", "[metrics]") {
    for (double r : {0.0, 0.3, 0.7, 1.0}) {
        CHECK(fidelity_depolarizing_closed(r, 1.0) == Catch::Approx(1.0).margin(1e-15));
    }
    for (double p : {0.0, 0.4, 0.9}) {
        CHECK(fidelity_depolarizing_closed(1.0, p)
              == Catch::Approx(std::sqrt((1.0 + p) / 2.0)).margin(1e-15));
        CHECK(fidelity_depolarizing_closed(0.0, p) == Catch::Approx(1.0).margin(1e-15));
    }
    CHECK_THROWS_AS(fidelity_depolarizing_closed(1.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(fidelity_depolarizing_closed(0.5, -0.5), std::domain_error);
}

TEST_CASE("dephasing closed form special cases", "[metrics]") {
    for (double theta : {0.0, 0.4, pi / 2.0, 2.5, pi}) {
        for (double p : {0.0, 0.3, 0.7, 1.0}) {
            CHECK(fidelity_dephasing_closed(1.0, theta, p)
                  == Catch::Approx(0.5 * std::sqrt(3.0 + p + (1.0 - p) * std::cos(2.0 * theta)))
                         .margin(1e-12));
            CHECK(fidelity_dephasing_closed(0.0, theta, p) == Catch::Approx(1.0).margin(1e-12));
        }
        CHECK(fidelity_dephasing_closed(1.0, theta, 0.7)
              == Catch::Approx(0.5 * std::sqrt(3.7 + 0.3 * std::cos(2.0 * theta)))
                     .margin(1e-12));
    }
    for (double r : {0.0, 0.5, 1.0}) {
        for (double theta : {0.0, 1.0, pi}) {
            CHECK(fidelity_dephasing_closed(r, theta, 1.0) == Catch::Approx(1.0).margin(1e-12));
        }
    }
}

TEST_CASE("dephasing terms vanish where they must", "[metrics]") {
    for (double p : {0.0, 0.3, 0.8}) {
        for (double r : {0.0, 1.0}) {
            CHECK(dephasing_fidelity_terms(r, 0.9, p).gamma == Catch::Approx(0.0).margin(1e-15));
        }
        for (double theta : {0.0, pi / 2.0, pi}) {
            CHECK(dephasing_fidelity_terms(0.6, theta, p).gamma
                  == Catch::Approx(0.0).margin(1e-15));
        }
        for (int rep = 0; rep < 10; ++rep) {
            const auto t = dephasing_fidelity_terms(tst::uniform(0.0, 1.0),
                                                    tst::uniform(0.0, pi),
                                                    tst::uniform(0.0, 1.0));
            CHECK(t.alpha >= 0.0);
            CHECK(t.beta >= 0.0);
        }
    }
}

TEST_CASE("simulated fidelity equals the closed forms on a grid", "[metrics]") {
    for (double r : {0.0, 0.5, 1.0}) {
        for (double theta : {0.0, pi / 4.0, pi / 2.0, pi}) {
            for (double phi : {0.0, pi / 3.0}) {
                const BlochVector target(r, theta, phi);
                const DensityMatrix target_rho = bloch_to_rho(target);
                for (double p : {0.0, 0.3, 0.7, 1.0}) {
                    const double f_dep = fidelity(
                        target_rho, rsp_run(depolarized_bell(p), target).conditional_state);
                    CHECK(f_dep == Catch::Approx(fidelity_depolarizing_closed(r, p))
                                       .margin(1e-10));
                    const double f_dph = fidelity(
                        target_rho, rsp_run(dephased_bell(p), target).conditional_state);
                    CHECK(f_dph == Catch::Approx(fidelity_dephasing_closed(r, theta, p))
                                       .margin(1e-10));
                }
            }
        }
    }
}

TEST_CASE("simulated fidelity does not depend on phi", "[metrics]") {
    for (double p : {0.2, 0.8}) {
        for (double r : {0.4, 1.0}) {
            const double theta = 0.9;
            double base_dep = -1.0, base_dph = -1.0;
            for (int ip = 0; ip < 8; ++ip) {
                const double phi = 2.0 * pi * ip / 8.0;
                const BlochVector target(r, theta, phi);
                const DensityMatrix target_rho = bloch_to_rho(target);
                const double f_dep =
                    fidelity(target_rho, rsp_run(depolarized_bell(p), target).conditional_state);
                const double f_dph =
                    fidelity(target_rho, rsp_run(dephased_bell(p), target).conditional_state);
                if (ip == 0) {
                    base_dep = f_dep;
                    base_dph = f_dph;
                } else {
                    CHECK(f_dep == Catch::Approx(base_dep).margin(1e-10));
                    CHECK(f_dph == Catch::Approx(base_dph).margin(1e-10));
                }
            }
        }
    }
}

TEST_CASE("dephasing dominates depolarizing and both grow with p", "[metrics]") {
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (int it = 0; it <= 8; ++it) {
            const double theta = pi * it / 8.0;
            double prev_dep = -1.0, prev_dph = -1.0;
            for (int ipp = 0; ipp <= 10; ++ipp) {
                const double p = ipp / 10.0;
                const double f_dep = fidelity_depolarizing_closed(r, p);
                const double f_dph = fidelity_dephasing_closed(r, theta, p);
                CHECK(f_dph >= f_dep - 1e-12);
                CHECK(f_dep >= prev_dep - 1e-12);
                CHECK(f_dph >= prev_dph - 1e-12);
                prev_dep = f_dep;
                prev_dph = f_dph;
            }
        }
    }
}
