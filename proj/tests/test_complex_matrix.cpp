#include <catch2/catch_amalgamated.hpp>

#include "rspsim/complex_matrix.hpp"
#include "rspsim/hermitian_eig.hpp"
#include "test_helpers.hpp"

using namespace rspsim;
namespace tst = rspsim::testing;

TEST_CASE("kron of identities", "[qcore]") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(kron(i2, i2).approx_equal(ComplexMatrix::identity(4), 0.0));
}

TEST_CASE("kron of basis projectors", "[qcore]") {
    const ComplexMatrix d10{{1.0, 0.0}, {0.0, 0.0}};
    const ComplexMatrix d01{{0.0, 0.0}, {0.0, 1.0}};
    ComplexMatrix expected(4, 4);
    expected(1, 1) = 1.0;
    CHECK(kron(d10, d01).approx_equal(expected, 0.0));
}

TEST_CASE("kron matches index-loop oracle on random matrices", "[qcore]") {
    for (int rep = 0; rep < 10; ++rep) {
        const ComplexMatrix a = tst::random_matrix(2, 2);
        const ComplexMatrix b = tst::random_matrix(2, 2);
        const ComplexMatrix k = kron(a, b);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t p = 0; p < 2; ++p)
                    for (std::size_t q = 0; q < 2; ++q)
                        CHECK(std::abs(k(2 * i + p, 2 * j + q) - a(i, j) * b(p, q)) == 0.0);
    }
}

TEST_CASE("kron associativity", "[qcore]") {
    const ComplexMatrix a = tst::random_matrix(2, 2);
    const ComplexMatrix b = tst::random_matrix(3, 2);
    const ComplexMatrix c = tst::random_matrix(2, 3);
    CHECK(kron(kron(a, b), c).approx_equal(kron(a, kron(b, c)), 1e-12));
}

TEST_CASE("partial trace of Bell state gives maximally mixed marginal", "[qcore]") {
    ComplexMatrix bell(4, 4);
    bell(1, 1) = 0.5;
    bell(2, 2) = 0.5;
    bell(1, 2) = -0.5;
    bell(2, 1) = -0.5;
    const ComplexMatrix half = ComplexMatrix::identity(2) * cplx{0.5};
    CHECK(partial_trace(bell, {2, 2}, {1}).approx_equal(half, 1e-15));
    CHECK(partial_trace(bell, {2, 2}, {0}).approx_equal(half, 1e-15));
}

TEST_CASE("partial trace of product state returns the kept factor", "[qcore]") {
    const ComplexMatrix rho_a = tst::random_psd(2);
    ComplexMatrix rho_b = tst::random_psd(2);
    rho_b = rho_b * cplx{1.0 / rho_b.trace().real()};
    CHECK(partial_trace(kron(rho_a, rho_b), {2, 2}, {0}).approx_equal(rho_a, 1e-13));
}

TEST_CASE("partial trace satisfies trace duality on random 3-qubit states", "[qcore]") {
    // Tr[Tr_{Bc}(rho) X] must equal Tr[rho (X (x) I (x) I)].
    for (int rep = 0; rep < 5; ++rep) {
        ComplexMatrix rho = tst::random_psd(8);
        rho = rho * cplx{1.0 / rho.trace().real()};
        const ComplexMatrix x = tst::random_hermitian(2);
        const ComplexMatrix reduced = partial_trace(rho, {2, 2, 2}, {0});
        const cplx lhs = (reduced * x).trace();
        const ComplexMatrix i2 = ComplexMatrix::identity(2);
        const cplx rhs = (rho * kron(kron(x, i2), i2)).trace();
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("partial trace over kron scales by the traced factor's trace", "[qcore]") {
    const ComplexMatrix rho_a = tst::random_psd(2);
    const ComplexMatrix rho_b = tst::random_psd(3);
    const ComplexMatrix expected = rho_a * rho_b.trace();
    CHECK(partial_trace(kron(rho_a, rho_b), {2, 3}, {0}).approx_equal(expected, 1e-12));
}

TEST_CASE("partial trace rejects mismatched dimensions", "[qcore]") {
    const ComplexMatrix rho = tst::random_psd(4);
    CHECK_THROWS_AS(partial_trace(rho, {2, 3}, {0}), std::invalid_argument);
}

TEST_CASE("herm_eig on diagonal matrix", "[qcore]") {
    const ComplexMatrix m{{2.0, 0.0}, {0.0, 1.0}};
    const HermitianEig eig = herm_eig(m);
    CHECK(eig.eigenvalues[0] == Catch::Approx(1.0).margin(1e-14));
    CHECK(eig.eigenvalues[1] == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("herm_eig pauli-x spectrum", "[qcore]") {
    const HermitianEig eig = herm_eig(ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
    CHECK(eig.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(eig.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));
    // Compare eigenprojectors, not raw vectors; phases are conventional.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const ComplexMatrix minus = ComplexMatrix::column({inv_sqrt2, -inv_sqrt2});
    const ComplexMatrix plus = ComplexMatrix::column({inv_sqrt2, inv_sqrt2});
    ComplexMatrix v0(2, 1), v1(2, 1);
    v0(0, 0) = eig.eigenvectors(0, 0);
    v0(1, 0) = eig.eigenvectors(1, 0);
    v1(0, 0) = eig.eigenvectors(0, 1);
    v1(1, 0) = eig.eigenvectors(1, 1);
    CHECK((v0 * v0.adjoint()).approx_equal(minus * minus.adjoint(), 1e-12));
    CHECK((v1 * v1.adjoint()).approx_equal(plus * plus.adjoint(), 1e-12));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices", "[qcore]") {
    for (std::size_t n : {2, 4, 8}) {
        const ComplexMatrix m = tst::random_hermitian(n);
        const HermitianEig eig = herm_eig(m);
        CHECK(eig.reconstruct().max_abs_diff(m) < 1e-10);
        CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors)
                  .approx_equal(ComplexMatrix::identity(n), 1e-10));
        double sum = 0.0;
        for (double lambda : eig.eigenvalues) sum += lambda;
        CHECK(sum == Catch::Approx(m.trace().real()).margin(1e-10));
        // ascending order
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(eig.eigenvalues[i - 1] <= eig.eigenvalues[i]);
        }
    }
}

TEST_CASE("herm_eig rejects non-square and non-Hermitian input", "[qcore]") {
    CHECK_THROWS_AS(herm_eig(tst::random_matrix(2, 3)), std::invalid_argument);
    ComplexMatrix skew{{0.0, 1.0}, {2.0, 0.0}};
    CHECK_THROWS_AS(herm_eig(skew), std::invalid_argument);
}

TEST_CASE("sqrt_psd identity and diagonal cases", "[qcore]") {
    CHECK(sqrt_psd(ComplexMatrix::identity(3)).approx_equal(ComplexMatrix::identity(3), 1e-12));
    const ComplexMatrix m{{4.0, 0.0}, {0.0, 9.0}};
    CHECK(sqrt_psd(m).approx_equal(ComplexMatrix{{2.0, 0.0}, {0.0, 3.0}}, 1e-12));
}

TEST_CASE("sqrt_psd squares back to the input", "[qcore]") {
    for (std::size_t n : {2, 4, 8}) {
        const ComplexMatrix m = tst::random_psd(n);
        const ComplexMatrix s = sqrt_psd(m);
        CHECK((s * s).max_abs_diff(m) < 1e-9);
        CHECK(herm_eig(s).eigenvalues.front() > -1e-10);
    }
}

TEST_CASE("sqrt_psd rejects indefinite input", "[qcore]") {
    const ComplexMatrix m{{1.0, 0.0}, {0.0, -0.5}};
    CHECK_THROWS_AS(sqrt_psd(m), std::domain_error);
}
