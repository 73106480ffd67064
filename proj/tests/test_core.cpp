#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tslin/core/finite_diff.hpp"
#include "tslin/core/gelu.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/core/tensor3.hpp"

using namespace tslin;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng, double lo = -1.0,
                     double hi = 1.0) {
    Matrix m(r, c);
    for (double& x : m.values()) x = rng.uniform(lo, hi);
    return m;
}

} // namespace

TEST_CASE("matmul identity and hand products", "[matrix]") {
    const Matrix a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(matmul(Matrix::identity(2), a) == a);

    const Matrix row{{1.0, 2.0}};
    const Matrix col{{3.0}, {4.0}};
    const Matrix prod = matmul(row, col);
    REQUIRE(prod.rows() == 1);
    REQUIRE(prod.cols() == 1);
    CHECK(prod(0, 0) == 11.0);
}

TEST_CASE("matmul matches the triple-loop oracle", "[matrix]") {
    Rng rng(101);
    const Matrix a = random_matrix(4, 3, rng);
    const Matrix b = random_matrix(3, 5, rng);
    const Matrix got = matmul(a, b);
    const Matrix want = oracle::matmul_loops(a, b);
    for (std::size_t i = 0; i < got.rows(); ++i)
        for (std::size_t j = 0; j < got.cols(); ++j)
            CHECK(got(i, j) == Catch::Approx(want(i, j)).epsilon(1e-12));
}

TEST_CASE("matmul rejects mismatched shapes, naming both", "[matrix]") {
    const Matrix a(2, 3);
    const Matrix b(4, 2);
    try {
        matmul(a, b);
        FAIL("expected ShapeError");
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("2x3") != std::string::npos);
        CHECK(msg.find("4x2") != std::string::npos);
    }
}

TEST_CASE("matmul associativity on random conforming triples", "[matrix][property]") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 1 + rng.below(6), k = 1 + rng.below(6);
        const std::size_t n = 1 + rng.below(6), p = 1 + rng.below(6);
        const Matrix a = random_matrix(m, k, rng);
        const Matrix b = random_matrix(k, n, rng);
        const Matrix c = random_matrix(n, p, rng);
        const Matrix left = matmul(matmul(a, b), c);
        const Matrix right = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            const double l = left.values()[i], r = right.values()[i];
            CHECK(rel_err(l, r) <= 1e-9);
        }
    }
}

TEST_CASE("matmul_nt and matmul_tn agree with transpose + matmul", "[matrix]") {
    Rng rng(33);
    const Matrix a = random_matrix(5, 4, rng);
    const Matrix b = random_matrix(6, 4, rng);
    const Matrix nt = matmul_nt(a, b);
    const Matrix want_nt = matmul(a, transpose(b));
    for (std::size_t i = 0; i < nt.size(); ++i)
        CHECK(nt.values()[i] == Catch::Approx(want_nt.values()[i]).margin(1e-12));

    const Matrix c = random_matrix(5, 7, rng);
    const Matrix tn = matmul_tn(a, c);
    const Matrix want_tn = matmul(transpose(a), c);
    for (std::size_t i = 0; i < tn.size(); ++i)
        CHECK(tn.values()[i] == Catch::Approx(want_tn.values()[i]).margin(1e-12));
}

TEST_CASE("gelu exact values", "[gelu]") {
    CHECK(gelu_exact(0.0) == 0.0);
    // x = 1: x * Phi(1), checked against the series oracle.
    CHECK(gelu_exact(1.0) == Catch::Approx(oracle::normal_cdf_series(1.0)).epsilon(1e-12));
    CHECK(gelu_exact(1.0) == Catch::Approx(0.841345).margin(1e-6));
    CHECK(std::abs(gelu_exact(-10.0)) < 1e-12);
}

TEST_CASE("gelu_exact equals x * Phi(x) on a dense grid", "[gelu][property]") {
    for (double x = -8.0; x <= 8.0; x += 0.037) {
        const double want = x * oracle::normal_cdf_series(std::min(std::max(x, -3.0), 3.0));
        if (std::abs(x) <= 3.0) {
            CHECK(std::abs(gelu_exact(x) - want) <= 1e-12);
        }
    }
}

TEST_CASE("gelu tanh approximation", "[gelu]") {
    CHECK(gelu_tanh(0.0) == 0.0);
    CHECK(std::abs(gelu_tanh(1.0) - gelu_exact(1.0)) <= 1e-3);
    CHECK(std::abs(gelu_tanh(8.0) - 8.0) <= 1e-6);

    double max_dev = 0.0;
    for (double x = -8.0; x <= 8.0 + 1e-12; x += 1e-3) {
        max_dev = std::max(max_dev, std::abs(gelu_tanh(x) - gelu_exact(x)));
    }
    CHECK(max_dev <= 1e-3);
}

TEST_CASE("gelu gradients", "[gelu]") {
    CHECK(gelu_grad(0.0, GeluForm::Exact) == Catch::Approx(0.5).margin(1e-15));
    CHECK(gelu_grad(25.0, GeluForm::Exact) == Catch::Approx(1.0).margin(1e-12));
    CHECK(gelu_grad(25.0, GeluForm::Tanh) == Catch::Approx(1.0).margin(1e-12));

    for (GeluForm form : {GeluForm::Exact, GeluForm::Tanh}) {
        const auto f = [form](const std::vector<double>& th) { return gelu(th[0], form); };
        const auto fd = finite_diff_grad(f, {0.7}, 1e-6);
        CHECK(rel_err(gelu_grad(0.7, form), fd[0]) <= 1e-5);
    }
}

TEST_CASE("gelu gradient matches finite differences on random points", "[gelu][property]") {
    // In the saturated tail both gelu forms compute 1 + tanh(u) (or
    // 1 + erf(u)) with heavy cancellation, which caps the accuracy of the
    // finite-difference oracle itself; tiny entries get an absolute bound.
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-6.0, 6.0);
        for (GeluForm form : {GeluForm::Exact, GeluForm::Tanh}) {
            const auto f = [form](const std::vector<double>& th) { return gelu(th[0], form); };
            const double fd = finite_diff_grad(f, {x}, 1e-6)[0];
            const double an = gelu_grad(x, form);
            if (std::abs(fd) >= 1e-4) {
                CHECK(rel_err(an, fd) <= 1e-5);
            } else {
                CHECK(std::abs(an - fd) <= 1e-8);
            }
        }
    }
}

TEST_CASE("finite_diff_grad on simple functions", "[finite-diff]") {
    const auto square = [](const std::vector<double>& th) { return th[0] * th[0]; };
    const auto g1 = finite_diff_grad(square, {3.0}, 1e-5);
    CHECK(g1[0] == Catch::Approx(6.0).margin(1e-6));

    const auto constant = [](const std::vector<double>&) { return 4.25; };
    const auto g2 = finite_diff_grad(constant, {1.0, -2.0, 0.5}, 1e-5);
    for (double g : g2) CHECK(g == 0.0);

    const auto bilinear = [](const std::vector<double>& th) { return th[0] * th[1]; };
    const auto g3 = finite_diff_grad(bilinear, {2.0, 5.0}, 1e-5);
    CHECK(g3[0] == Catch::Approx(5.0).margin(1e-8));
    CHECK(g3[1] == Catch::Approx(2.0).margin(1e-8));
}

TEST_CASE("finite_diff_grad propagates evaluation failures", "[finite-diff]") {
    const auto bad = [](const std::vector<double>& th) {
        return th[0] > 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    CHECK_THROWS_AS(finite_diff_grad(bad, {0.0}, 1e-5), NumericError);
    CHECK_THROWS_AS(finite_diff_grad(bad, {0.0}, 0.0), ConfigError);
}

TEST_CASE("Tensor3 channel gather/scatter round trip", "[tensor]") {
    Rng rng(5);
    Tensor3 t(3, 4, 2);
    for (double& x : t.values()) x = rng.uniform(-2.0, 2.0);
    Tensor3 copy(3, 4, 2);
    for (std::size_t c = 0; c < 2; ++c) copy.set_channel(c, t.channel(c));
    CHECK(copy == t);
}

TEST_CASE("Rng determinism and shuffle", "[rng]") {
    Rng a(99), b(99);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.uniform() == b.uniform());
        CHECK(a.normal() == b.normal());
    }
    std::vector<int> v1{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<int> v2 = v1;
    Rng s1(1234), s2(1234);
    s1.shuffle(v1);
    s2.shuffle(v2);
    CHECK(v1 == v2);
}

TEST_CASE("mix_seed separates nearby cells", "[rng]") {
    const auto s1 = mix_seed(mix_seed(1, "glinear"), 336ull);
    const auto s2 = mix_seed(mix_seed(1, "glinear"), 337ull);
    const auto s3 = mix_seed(mix_seed(1, "nlinear"), 336ull);
    CHECK(s1 != s2);
    CHECK(s1 != s3);
    CHECK(s2 != s3);
}
