#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "peakonlab/algebra.hpp"
#include "peakonlab/lax.hpp"
#include "peakonlab/matrix.hpp"
#include "peakonlab/state.hpp"

using namespace peakonlab;

namespace {

Matrix random_symmetric(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    auto u = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    Matrix A(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) A(i, j) = A(j, i) = u();
    return A;
}

Matrix random_general(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    auto u = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
    Matrix A(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = u();
    return A;
}

} // namespace

TEST_CASE("splitting into antisymmetric and lower parts reassembles bitwise") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Matrix A = random_general(seed, 6);
        const Matrix K = project_skew(A);
        const Matrix W = project_lower(A);
        CHECK(max_abs(A - K - W) == 0.0);
        // Antisymmetry of the first part, triangularity of the second.
        CHECK(max_abs(K + transpose(K)) == 0.0);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) CHECK(W(i, j) == 0.0);
    }
}

TEST_CASE("projections are idempotent on their ranges") {
    const Matrix A = random_general(5, 5);
    const Matrix K = project_skew(A);
    CHECK(max_abs(project_skew(K) - K) == 0.0);
    const Matrix W = project_lower(A);
    CHECK(max_abs(project_lower(W) - W) == 0.0);
}

TEST_CASE("r_matrix is the difference of the two projections") {
    const Matrix A = random_general(7, 6);
    CHECK(max_abs(r_matrix(A) - (project_lower(A) - project_skew(A))) == 0.0);
}

TEST_CASE("modified Yang-Baxter identity holds to near machine precision") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const Matrix A = random_general(seed, 6);
        const Matrix B = random_general(seed + 100, 6);
        CHECK(mybe_residual(A, B) <= 1e-12);
    }
}

TEST_CASE("dual projections are adjoint to the primal ones under the trace pairing") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const Matrix L = random_general(seed, 6);
        const Matrix A = random_general(seed + 50, 6);
        CHECK(std::fabs(ad_pairing(dual_project_skew(L), A) - ad_pairing(L, project_skew(A))) <=
              1e-12);
        CHECK(std::fabs(ad_pairing(dual_project_lower(L), A) - ad_pairing(L, project_lower(A))) <=
              1e-12);
    }
}

TEST_CASE("dual projections fix and kill symmetric matrices respectively") {
    const Matrix S = random_symmetric(31, 5);
    CHECK(max_abs(dual_project_lower(S) - S) == 0.0);
    CHECK(max_abs(dual_project_skew(S)) == 0.0);
}

TEST_CASE("trace pairing agrees with the transposed entrywise inner product") {
    const Matrix A = random_general(41, 5);
    const Matrix B = random_general(42, 5);
    CHECK(std::fabs(ad_pairing(A, B) - hs_inner(A, transpose(B))) <= 1e-14);
}

TEST_CASE("commutator is antisymmetric and vanishes on powers") {
    const Matrix A = random_general(51, 5);
    const Matrix B = random_general(52, 5);
    CHECK(max_abs(commutator(A, B) + commutator(B, A)) == 0.0);
    const Matrix A2 = A * A;
    CHECK(max_abs(commutator(A, A2)) <= 1e-13);
}

TEST_CASE("r-bracket of a matrix with itself vanishes exactly") {
    const Matrix S = random_symmetric(61, 6);
    CHECK(max_abs(r_bracket(S, S)) == 0.0);
}

TEST_CASE("invariant gradients are in involution under the r-bracket pairing") {
    Sector sec;
    sec.tag = SectorTag::S_minus;
    for (std::uint64_t seed : {5u, 6u}) {
        const PeakonState s = generate_state(seed, 5, sec, GeneratorParams{});
        const Matrix L = lax_from_state(s).L;
        const Matrix L2 = L * L;
        // Gradients of tr L^2 and tr L^3.
        CHECK(std::fabs(lie_poisson_bracket(2.0 * L, 3.0 * L2, L)) <= 1e-12);
        // Gradients of tr L and tr L^2.
        CHECK(std::fabs(lie_poisson_bracket(Matrix::identity(5), 2.0 * L, L)) <= 1e-12);
    }
}

TEST_CASE("symmetric exponential satisfies the group law and inverts cleanly") {
    const Matrix S = random_symmetric(71, 5);
    const Matrix G1 = sym_exp(S, 0.4);
    const Matrix G2 = sym_exp(S, 0.9);
    const Matrix G3 = sym_exp(S, 1.3);
    CHECK(max_abs_diff(G1 * G2, G3) <= 1e-12);
    const Matrix Ginv = sym_exp(S, -0.4);
    CHECK(max_abs_diff(G1 * Ginv, Matrix::identity(5)) <= 1e-12);
    CHECK(max_abs_diff(sym_exp(S, 0.0), Matrix::identity(5)) <= 1e-14);
}

TEST_CASE("symmetric exponential output is symmetric positive definite") {
    const Matrix S = random_symmetric(81, 6);
    const Matrix G = sym_exp(S, 2.0);
    CHECK(symmetry_residual(G) <= 1e-12 * max_abs(G));
    // Positive definiteness via positive leading LU determinant and x^T G x.
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> x(6);
        for (double& v : x) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
        double quad = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) quad += x[i] * G(i, j) * x[j];
        CHECK(quad > 0.0);
    }
}

TEST_CASE("symmetric exponential rejects non-symmetric input") {
    Matrix A(3);
    A(0, 1) = 1.0;
    CHECK_THROWS_AS((void)sym_exp(A, 1.0), std::invalid_argument);
}

TEST_CASE("pairing-based Poisson bracket is antisymmetric in the gradients") {
    const Matrix L = random_symmetric(91, 5);
    const Matrix F = random_general(92, 5);
    const Matrix G = random_general(93, 5);
    CHECK(std::fabs(lie_poisson_bracket(F, G, L) + lie_poisson_bracket(G, F, L)) <= 1e-13);
}
