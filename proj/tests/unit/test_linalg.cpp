#include <cmath>
#include <random>

#include "doctest.h"

#include "chaoslab/errors.hpp"
#include "chaoslab/linalg.hpp"
#include "chaoslab/system.hpp"
#include "oracles/oracles.hpp"

using namespace chaoslab;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t d, double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = u(rng);
    return m;
}

oracle::Mat to_oracle(const Matrix& m) {
    oracle::Mat o(m.dim(), std::vector<double>(m.dim()));
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c) o[r][c] = m(r, c);
    return o;
}

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_SUITE("linalg") {
    TEST_CASE("op_norm examples") {
        CHECK(op_norm(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(op_norm(Matrix{{1, 1}, {0, 1}}) == doctest::Approx(1.618034).epsilon(1e-6));
        CHECK(op_norm(Matrix{{1, 1}, {0, 1}}) == doctest::Approx(kGolden).epsilon(1e-12));
        CHECK(op_norm(Matrix::scalar(2, 0.5)) == doctest::Approx(0.5).epsilon(1e-14));
    }

    TEST_CASE("co_norm examples") {
        CHECK(co_norm(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(co_norm(Matrix{{1, 1}, {0, 1}}) == doctest::Approx(0.618034).epsilon(1e-6));
        CHECK(co_norm(Matrix{{1, 1}, {0, 1}}) == doctest::Approx(kGolden - 1.0).epsilon(1e-12));
        CHECK(co_norm(Matrix::scalar(2, 2.0)) == doctest::Approx(2.0).epsilon(1e-14));
    }

    TEST_CASE("co_norm is zero for singular matrices") {
        CHECK(co_norm(Matrix{{1, 2}, {2, 4}}) <= 1e-12 * op_norm(Matrix{{1, 2}, {2, 4}}));
        CHECK(co_norm(Matrix(3)) == 0.0);
    }

    TEST_CASE("norms reject non-finite entries") {
        Matrix m = Matrix::identity(2);
        m(0, 1) = std::nan("");
        CHECK_THROWS_AS(op_norm(m), InvalidInput);
        CHECK_THROWS_AS(co_norm(m), InvalidInput);
        CHECK_THROWS_AS(spectral_radius(m), InvalidInput);
        const double bad[] = {1.0, INFINITY, 0.0, 1.0};
        CHECK_THROWS_AS(Matrix(2, bad), InvalidInput);
    }

    TEST_CASE("spectral_radius examples") {
        CHECK(spectral_radius(Matrix::identity(3)).radius == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(spectral_radius(Matrix{{1, 1}, {0, 1}}).radius == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(spectral_radius(Matrix{{1, 1}, {1, 2}}).radius == doctest::Approx(2.618034).epsilon(1e-6));
        CHECK(spectral_radius(Matrix{{1, 1}, {1, 2}}).radius == doctest::Approx(kGolden * kGolden).epsilon(1e-12));
        const auto s = spectral_radius(Matrix{{0, -1}, {1, 0}});
        CHECK(s.radius == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.roots_found == 2);
    }

    TEST_CASE("spectral_radius on repeated and nearly repeated eigenvalues") {
        std::mt19937_64 rng(17);
        std::normal_distribution<double> g;
        for (std::size_t d = 2; d <= 8; ++d) {
            CHECK(spectral_radius(Matrix::identity(d)).radius == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(spectral_radius(Matrix::scalar(d, -0.7)).radius == doctest::Approx(0.7).epsilon(1e-9));
            // Upper triangular with constant diagonal: one defective eigenvalue.
            Matrix j = Matrix::scalar(d, 1.5);
            for (std::size_t r = 0; r + 1 < d; ++r) j(r, r + 1) = 1.0;
            CHECK(spectral_radius(j).radius == doctest::Approx(1.5).epsilon(1e-9));
        }
        // Two distinct eigenvalues 1e-3 apart must not be merged.
        const double close[] = {1.0, 1.001, 0.3};
        CHECK(spectral_radius(Matrix::diagonal(close)).radius == doctest::Approx(1.001).epsilon(1e-12));
        // Similarity transforms of diag(2, 2, 1, 1) keep radius 2.
        for (int t = 0; t < 20; ++t) {
            Matrix q(4);
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c) q(r, c) = (r == c ? 3.0 : 0.0) + 0.3 * g(rng);
            const double diag[] = {2, 2, 1, 1};
            const Matrix a = q * Matrix::diagonal(diag) * inverse(q);
            CHECK(spectral_radius(a).radius == doctest::Approx(2.0).epsilon(1e-9));
        }
    }

    TEST_CASE("spectral_radius is deterministic") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 20; ++t) {
            const Matrix a = random_matrix(rng, 5);
            CHECK(spectral_radius(a).radius == spectral_radius(a).radius);
        }
    }

    TEST_CASE("spectral_radius matches closed-form 2x2 radius") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 2000; ++t) {
            const Matrix a = random_matrix(rng, 2);
            const double expected = oracle::spectral_radius_2x2(to_oracle(a));
            CHECK(spectral_radius(a).radius == doctest::Approx(expected).epsilon(1e-9));
        }
    }

    TEST_CASE("spectral_radius on known spectra up to dimension 8") {
        // Upper triangular matrices with prescribed diagonals.
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        for (std::size_t d = 1; d <= 8; ++d) {
            for (int t = 0; t < 25; ++t) {
                Matrix a(d);
                double expected = 0.0;
                for (std::size_t r = 0; r < d; ++r) {
                    a(r, r) = u(rng);
                    expected = std::max(expected, std::abs(a(r, r)));
                    for (std::size_t c = r + 1; c < d; ++c) a(r, c) = 0.3 * u(rng);
                }
                CHECK(spectral_radius(a).radius == doctest::Approx(expected).epsilon(1e-7));
            }
        }
    }

    TEST_CASE("sym_eigs examples") {
        const auto e3 = sym_eigs(Matrix::identity(3));
        REQUIRE(e3.size() == 3);
        for (double v : e3) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
        const auto e = sym_eigs(Matrix{{1, 1}, {1, 2}});
        CHECK(e[0] == doctest::Approx(0.381966).epsilon(1e-6));
        CHECK(e[1] == doctest::Approx(2.618034).epsilon(1e-6));
        const auto d = sym_eigs(Matrix{{4, 0}, {0, 1}});
        CHECK(d[0] == doctest::Approx(1.0));
        CHECK(d[1] == doctest::Approx(4.0));
    }

    TEST_CASE("sym_eigs rejects asymmetric input") {
        CHECK_THROWS_AS(sym_eigs(Matrix{{1, 2}, {0, 1}}), InvalidInput);
    }

    TEST_CASE("sym_eigs matches the analytic 2x2 spectrum") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int t = 0; t < 5000; ++t) {
            const double a = u(rng), b = u(rng), c = u(rng);
            const auto got = sym_eigs(Matrix{{a, b}, {b, c}});
            const auto want = oracle::sym_eigs_2x2(a, b, c);
            const double scale = std::max(std::abs(want[0]), std::abs(want[1]));
            CHECK(std::abs(got[0] - want[0]) <= 1e-10 * scale);
            CHECK(std::abs(got[1] - want[1]) <= 1e-10 * scale);
        }
    }

    TEST_CASE("op_norm agrees with power iteration") {
        std::mt19937_64 rng(23);
        for (std::size_t d = 1; d <= 8; ++d) {
            for (int t = 0; t < 20; ++t) {
                const Matrix a = random_matrix(rng, d);
                CHECK(op_norm(a) == doctest::Approx(oracle::op_norm_power(to_oracle(a), 4000)).epsilon(1e-8));
            }
        }
    }

    TEST_CASE("norm inequalities on random matrices") {
        std::mt19937_64 rng(29);
        std::uniform_int_distribution<int> dim(1, 5);
        for (int t = 0; t < 2000; ++t) {
            const auto d = static_cast<std::size_t>(dim(rng));
            const Matrix a = random_matrix(rng, d);
            const Matrix b = random_matrix(rng, d);
            CHECK(op_norm(a * b) <= op_norm(a) * op_norm(b) * (1 + 1e-9));
            CHECK(co_norm(a * b) >= co_norm(a) * co_norm(b) * (1 - 1e-9));
            CHECK(spectral_radius(a).radius <= op_norm(a) * (1 + 1e-9));
            CHECK(co_norm(a) <= op_norm(a) * (1 + 1e-12));
        }
    }

    TEST_CASE("co_norm is the reciprocal norm of the analytic 2x2 inverse") {
        std::mt19937_64 rng(31);
        for (int t = 0; t < 2000; ++t) {
            const Matrix a = random_matrix(rng, 2);
            const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
            if (std::abs(det) < 1e-3) continue;
            const Matrix inv{{a(1, 1) / det, -a(0, 1) / det}, {-a(1, 0) / det, a(0, 0) / det}};
            CHECK(co_norm(a) == doctest::Approx(1.0 / op_norm(inv)).epsilon(1e-8));
            const auto sv = oracle::singular_values(to_oracle(a));
            CHECK(co_norm(a) == doctest::Approx(sv.lo).epsilon(1e-8));
        }
    }

    TEST_CASE("Gelfand formula converges for separated spectra") {
        std::mt19937_64 rng(37);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double pi = std::acos(-1.0);
        for (int t = 0; t < 200; ++t) {
            const double l1 = 0.5 + u(rng);
            const double l2 = l1 * (-0.7 + 1.4 * u(rng));
            const double th1 = 2 * pi * u(rng);
            const double th2 = th1 + (70.0 + 40.0 * u(rng)) * pi / 180.0;
            const Matrix v{{std::cos(th1), std::cos(th2)}, {std::sin(th1), std::sin(th2)}};
            const Matrix a = v * Matrix{{l1, 0}, {0, l2}} * inverse(v);
            Matrix p = Matrix::identity(2);
            for (int n = 0; n < 64; ++n) p = a * p;
            const double gelfand = std::pow(op_norm(p), 1.0 / 64.0);
            CHECK(std::abs(gelfand - spectral_radius(a).radius) <= 0.01);
        }
    }

    TEST_CASE("characteristic polynomial of a companion-like matrix") {
        const auto c = characteristic_polynomial(Matrix{{1, 1}, {1, 2}});
        REQUIRE(c.size() == 3);
        CHECK(c[0] == doctest::Approx(1.0));
        CHECK(c[1] == doctest::Approx(-3.0));
        CHECK(c[2] == doctest::Approx(1.0));
    }

    TEST_CASE("inverse rejects singular matrices") {
        CHECK_THROWS_AS(inverse(Matrix{{1, 2}, {2, 4}}), InvalidInput);
        const Matrix a{{2, 1}, {1, 1}};
        const Matrix i = a * inverse(a);
        CHECK((i - Matrix::identity(2)).max_abs() < 1e-14);
    }

    TEST_CASE("block assembly round trip") {
        const Matrix a{{1, 2}, {3, 4}}, b{{5, 6}, {7, 8}}, c{{9, 10}, {11, 12}}, d{{13, 14}, {15, 16}};
        const Matrix m = assemble_blocks(a, b, c, d);
        CHECK(m.dim() == 4);
        CHECK(block(m, 0, 0, 2) == a);
        CHECK(block(m, 0, 2, 2) == b);
        CHECK(block(m, 2, 0, 2) == c);
        CHECK(block(m, 2, 2, 2) == d);
    }
}

TEST_SUITE("log-scaled products") {
    TEST_CASE("unit op-norm stays in [0.5, 2]") {
        std::mt19937_64 rng(41);
        LogScaledMatrix p = LogScaledMatrix::identity(3);
        for (int t = 0; t < 500; ++t) {
            p = p.left_multiplied(random_matrix(rng, 3, -3.0, 3.0));
            const double n = op_norm(p.unit());
            CHECK(n >= 0.5);
            CHECK(n <= 2.0);
        }
    }

    TEST_CASE("200 random factors agree with an extended-precision product") {
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 20; ++trial) {
            LogScaledMatrix p = LogScaledMatrix::identity(2);
            long double e[2][2] = {{1, 0}, {0, 1}};
            for (int t = 0; t < 200; ++t) {
                const Matrix f = random_matrix(rng, 2, -1.5, 1.5);
                p = p.left_multiplied(f);
                long double n[2][2];
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        n[r][c] = static_cast<long double>(f(r, 0)) * e[0][c] + static_cast<long double>(f(r, 1)) * e[1][c];
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) e[r][c] = n[r][c];
            }
            long double emax = 0;
            for (auto& row : e)
                for (long double v : row) emax = std::max(emax, std::abs(v));
            if (!std::isfinite(static_cast<double>(emax)) || emax == 0) continue;
            const Matrix direct = p.to_matrix();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    CHECK(std::abs(static_cast<long double>(direct(r, c)) - e[r][c]) <= 1e-6L * emax);
        }
    }

    TEST_CASE("word_product examples") {
        const auto sys = halving_doubling_pair();
        const auto p12 = word_product(sys, Word{{1, 2}, 2});
        CHECK((p12.unit() - Matrix::identity(2)).max_abs() < 1e-15);
        CHECK(p12.log_scale() == doctest::Approx(0.0));
        const auto p11 = word_product(sys, Word{{1, 1}, 2});
        CHECK((p11.unit() - Matrix::identity(2)).max_abs() < 1e-15);
        CHECK(p11.log_scale() == doctest::Approx(std::log(0.25)).epsilon(1e-14));
        const auto shear = shear_pair(0.5, 2.0);
        const Matrix s1 = word_product(shear, Word{{1}, 2}).to_matrix();
        CHECK((s1 - Matrix{{0.5, 0.5}, {0, 0.5}}).max_abs() < 1e-15);
        const auto e = word_product(sys, Word::empty(2));
        CHECK(e.log_scale() == 0.0);
        CHECK(e.unit() == Matrix::identity(2));
    }

    TEST_CASE("word_product applies the first symbol first") {
        const auto sys = shear_pair(1.0, 1.0);
        const Matrix p = word_product(sys, Word{{1, 2}, 2}).to_matrix();
        const Matrix expected = sys[2] * sys[1];
        CHECK((p - expected).max_abs() < 1e-14);
    }

    TEST_CASE("tracked co-norm survives extreme conditioning") {
        // (1,2,2)^30 under the 0.9 / 1.05 shear pair has condition number
        // near 1e34; its co-norm is below 0.27^30 in closed form.
        const auto sys = shear_pair(0.9, 1.05);
        const Word w = Word{{1, 2, 2}, 2}.power(30);
        const auto t = tracked_product(sys, w);
        CHECK(t.log_co_norm() < 30 * std::log(0.27));
        CHECK(t.log_op_norm() == doctest::Approx(word_product(sys, w).log_op_norm()).epsilon(1e-12));
        // Determinant check: log co + log op = log |det| for 2x2.
        const double log_det = 30 * (2 * std::log(0.9) + 4 * std::log(1.05));
        CHECK(t.log_co_norm() + t.log_op_norm() == doctest::Approx(log_det).epsilon(1e-9));
    }
}
