#include <cmath>

#include "doctest.h"

#include "oracles/oracles.hpp"

// The reference computations used by the other suites, pinned against
// hand-derived constants so a broken oracle cannot mask a broken library.

namespace {

const double kGolden = 1.61803398874989484820;

}  // namespace

TEST_SUITE("oracles") {
    TEST_CASE("closed-form singular values") {
        const auto s = oracle::singular_values_2x2(1, 1, 0, 1);
        CHECK(s.hi == doctest::Approx(kGolden).epsilon(1e-15));
        CHECK(s.lo == doctest::Approx(kGolden - 1.0).epsilon(1e-15));
        const auto d = oracle::singular_values_2x2(0.5, 0, 0, 2);
        CHECK(d.hi == 2.0);
        CHECK(d.lo == 0.5);
    }

    TEST_CASE("closed-form spectral radius") {
        // S2 S1 for the 0.6 shear pair: 0.36 [[1,1],[1,2]], radius 0.36 phi^2.
        const oracle::Mat p = oracle::mul({{0.6, 0}, {0.6, 0.6}}, {{0.6, 0.6}, {0, 0.6}});
        const double r = oracle::spectral_radius_2x2(p);
        CHECK(r == doctest::Approx(0.94249223594996214535).epsilon(1e-14));
        CHECK(std::sqrt(r) == doctest::Approx(0.97082039324993690892).epsilon(1e-14));
        CHECK(oracle::spectral_radius_2x2({{0, -1}, {1, 0}}) == doctest::Approx(1.0));
    }

    TEST_CASE("power iteration matches the closed form") {
        const oracle::Mat a{{3, 1}, {-2, 0.5}};
        CHECK(oracle::op_norm_power(a) == doctest::Approx(oracle::singular_values(a).hi).epsilon(1e-12));
    }

    TEST_CASE("symmetric 2x2 eigenvalues") {
        const auto e = oracle::sym_eigs_2x2(2, 1, 2);
        CHECK(e[0] == doctest::Approx(1.0));
        CHECK(e[1] == doctest::Approx(3.0));
    }

    TEST_CASE("brute-force max norm") {
        const std::vector<oracle::Mat> hd{{{0.5, 0}, {0, 0.5}}, {{2, 0}, {0, 2}}};
        CHECK(oracle::brute_max_norm_2x2(hd, 5) == 32.0);
        const std::vector<oracle::Mat> sh{{{1, 1}, {0, 1}}, {{1, 1}, {0, 1}}};
        // ||[[1,n],[0,1]]|| = (n + sqrt(n^2 + 4)) / 2.
        CHECK(oracle::brute_max_norm_2x2(sh, 3) == doctest::Approx((3 + std::sqrt(13.0)) / 2.0));
    }

    TEST_CASE("algebra dimensions") {
        CHECK(oracle::algebra_dimension({{{0.5, 0}, {0, 0.5}}, {{2, 0}, {0, 2}}}, 4) == 1);
        CHECK(oracle::algebra_dimension({{{1, 1}, {0, 1}}, {{1, 0}, {1, 1}}}, 4) == 4);
        CHECK(oracle::algebra_dimension({{{1, 0}, {0, 2}}}, 4) == 2);
    }

    TEST_CASE("halving/doubling schedule") {
        const auto s = oracle::halving_doubling_schedule(5);
        REQUIRE(s.size() == 5);
        const std::uint64_t expected[][2] = {{1, 2}, {3, 4}, {4, 4}, {5, 6}, {6, 6}};
        for (std::size_t k = 0; k < 5; ++k) {
            CHECK(s[k].contract == expected[k][0]);
            CHECK(s[k].expand == expected[k][1]);
        }
    }

    TEST_CASE("smallest shear powers") {
        CHECK(oracle::smallest_contracting_power(0.5) == 1);
        CHECK(oracle::smallest_expanding_power(2.0) == 1);
        CHECK(oracle::smallest_contracting_power(0.9) == 34);
        CHECK(oracle::smallest_expanding_power(1.05) == 93);
        CHECK(oracle::smallest_contracting_power(1.0) == -1);
    }
}
