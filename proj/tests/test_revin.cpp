#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "tslin/core/finite_diff.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/revin.hpp"
#include "tslin/train/metrics.hpp"

using namespace tslin;

namespace {

Tensor3 random_tensor(std::size_t b, std::size_t l, std::size_t c, Rng& rng,
                      double lo = -2.0, double hi = 2.0) {
    Tensor3 t(b, l, c);
    for (double& x : t.values()) x = rng.uniform(lo, hi);
    return t;
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }
std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

} // namespace

TEST_CASE("revin_stats on constant and two-point windows", "[revin]") {
    Tensor3 x(1, 4, 1, 5.0);
    const RevinStats s = revin_stats(x, 1e-5);
    CHECK(s.mu(0, 0) == 5.0);
    CHECK(s.sigma(0, 0) == Catch::Approx(std::sqrt(1e-5)).epsilon(1e-12));

    Tensor3 two(1, 2, 1);
    two.at(0, 0, 0) = 1.0;
    two.at(0, 1, 0) = 3.0;
    const RevinStats s2 = revin_stats(two, 1e-12);
    CHECK(s2.mu(0, 0) == 2.0);
    CHECK(s2.sigma(0, 0) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("revin_stats matches the two-pass oracle", "[revin]") {
    Rng rng(11);
    const Tensor3 x = random_tensor(2, 8, 3, rng);
    const RevinStats s = revin_stats(x, 1e-5);
    for (std::size_t b = 0; b < 2; ++b) {
        for (std::size_t c = 0; c < 3; ++c) {
            double mean = 0.0, var = 0.0;
            oracle::two_pass_stats(x, b, c, mean, var);
            CHECK(s.mu(b, c) == Catch::Approx(mean).margin(1e-13));
            CHECK(s.sigma(b, c) == Catch::Approx(std::sqrt(var + 1e-5)).margin(1e-13));
        }
    }
}

TEST_CASE("revin_stats error paths", "[revin]") {
    CHECK_THROWS_AS(revin_stats(Tensor3(1, 0, 1), 1e-5), DataError);
    CHECK_THROWS_AS(revin_stats(Tensor3(1, 4, 1), 0.0), ConfigError);
}

TEST_CASE("revin_normalize basics", "[revin]") {
    // Constant window with identity affine normalizes to zero.
    Tensor3 x(2, 5, 1, 3.25);
    const RevinStats s = revin_stats(x, 1e-5);
    const Tensor3 n = revin_normalize(x, s, ones(1), zeros(1));
    for (double v : n.values()) CHECK(v == 0.0);

    // gamma=2, beta=3 is an entrywise affine map of the z-scores.
    Rng rng(21);
    const Tensor3 y = random_tensor(2, 6, 2, rng);
    const RevinStats sy = revin_stats(y, 1e-5);
    const Tensor3 z = revin_normalize(y, sy, ones(2), zeros(2));
    const Tensor3 a = revin_normalize(y, sy, {2.0, 2.0}, {3.0, 3.0});
    for (std::size_t i = 0; i < z.size(); ++i) {
        CHECK(a.values()[i] == Catch::Approx(2.0 * z.values()[i] + 3.0).margin(1e-12));
    }
}

TEST_CASE("revin_normalize matches a scalar-loop oracle", "[revin]") {
    Rng rng(31);
    const Tensor3 x = random_tensor(3, 7, 2, rng);
    const std::vector<double> gamma{1.5, -0.75};
    const std::vector<double> beta{0.2, 1.1};
    const RevinStats s = revin_stats(x, 1e-5);
    const Tensor3 got = revin_normalize(x, s, gamma, beta);
    for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t c = 0; c < x.channels(); ++c) {
            double mean = 0.0, var = 0.0;
            oracle::two_pass_stats(x, b, c, mean, var);
            const double sigma = std::sqrt(var + 1e-5);
            for (std::size_t t = 0; t < x.steps(); ++t) {
                const double want = gamma[c] * (x.at(b, t, c) - mean) / sigma + beta[c];
                CHECK(got.at(b, t, c) == Catch::Approx(want).margin(1e-12));
            }
        }
}

TEST_CASE("revin_normalize shape mismatch", "[revin]") {
    Rng rng(33);
    const Tensor3 x = random_tensor(2, 5, 2, rng);
    const RevinStats s = revin_stats(x, 1e-5);
    const Tensor3 other(3, 5, 2, 0.0);
    CHECK_THROWS_AS(revin_normalize(other, s, ones(2), zeros(2)), ShapeError);
    CHECK_THROWS_AS(revin_normalize(x, s, ones(3), zeros(3)), ShapeError);
}

TEST_CASE("normalization with identity affine centers every slice", "[revin][property]") {
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const Tensor3 x = random_tensor(2, 16, 3, rng);
        const RevinStats s = revin_stats(x, 1e-5);
        const Tensor3 n = revin_normalize(x, s, ones(3), zeros(3));
        for (std::size_t b = 0; b < x.batch(); ++b)
            for (std::size_t c = 0; c < x.channels(); ++c) {
                double mean = 0.0;
                for (std::size_t t = 0; t < x.steps(); ++t) mean += n.at(b, t, c);
                mean /= static_cast<double>(x.steps());
                CHECK(std::abs(mean) <= 1e-10);
                double var = 0.0;
                for (std::size_t t = 0; t < x.steps(); ++t) {
                    var += n.at(b, t, c) * n.at(b, t, c);
                }
                var /= static_cast<double>(x.steps());
                CHECK(std::sqrt(var) <= 1.0 + 1e-12);
            }
    }
}

TEST_CASE("revin_denormalize round trip and beta fixed point", "[revin]") {
    Rng rng(51);
    const Tensor3 x = random_tensor(2, 9, 2, rng);
    const std::vector<double> gamma{0.8, 2.5};
    const std::vector<double> beta{-0.3, 0.9};
    const RevinStats s = revin_stats(x, 1e-5);
    const Tensor3 n = revin_normalize(x, s, gamma, beta);
    const Tensor3 back = revin_denormalize(n, s, gamma, beta);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(back.values()[i] == Catch::Approx(x.values()[i]).margin(1e-9));
    }

    // o identically beta denormalizes to mu broadcast over steps.
    Tensor3 o(2, 4, 2);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t t = 0; t < 4; ++t)
            for (std::size_t c = 0; c < 2; ++c) o.at(b, t, c) = beta[c];
    const Tensor3 y = revin_denormalize(o, s, gamma, beta);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t t = 0; t < 4; ++t)
            for (std::size_t c = 0; c < 2; ++c)
                CHECK(y.at(b, t, c) == Catch::Approx(s.mu(b, c)).margin(1e-12));
}

TEST_CASE("revin_denormalize matches a scalar-loop oracle", "[revin]") {
    Rng rng(61);
    const Tensor3 o = random_tensor(2, 5, 3, rng);
    const Tensor3 x = random_tensor(2, 12, 3, rng);
    const std::vector<double> gamma{1.2, -2.0, 0.5};
    const std::vector<double> beta{0.0, 0.4, -1.3};
    const RevinStats s = revin_stats(x, 1e-5);
    const Tensor3 got = revin_denormalize(o, s, gamma, beta);
    for (std::size_t b = 0; b < o.batch(); ++b)
        for (std::size_t c = 0; c < o.channels(); ++c)
            for (std::size_t t = 0; t < o.steps(); ++t) {
                const double want =
                    (o.at(b, t, c) - beta[c]) / gamma[c] * s.sigma(b, c) + s.mu(b, c);
                CHECK(got.at(b, t, c) == Catch::Approx(want).margin(1e-12));
            }
}

TEST_CASE("revin_denormalize rejects degenerate gamma", "[revin]") {
    Tensor3 x(1, 4, 2, 1.0);
    x.at(0, 2, 0) = 2.0;
    const RevinStats s = revin_stats(x, 1e-5);
    CHECK_THROWS_AS(revin_denormalize(x, s, {1.0, 1e-13}, zeros(2)), NumericError);
}

TEST_CASE("round trip including constant channels", "[revin][property]") {
    Rng rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t B = 1 + rng.below(3);
        const std::size_t L = 2 + rng.below(14);
        const std::size_t C = 1 + rng.below(3);
        Tensor3 x = random_tensor(B, L, C, rng, -3.0, 3.0);
        if (trial % 3 == 0) {
            // Freeze one channel to a constant to hit the sigma = sqrt(eps) path.
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < L; ++t) x.at(b, t, 0) = 1.5;
        }
        std::vector<double> gamma(C), beta(C);
        for (std::size_t c = 0; c < C; ++c) {
            gamma[c] = rng.uniform(0.5, 2.0) * (rng.below(2) ? 1.0 : -1.0);
            beta[c] = rng.uniform(-1.0, 1.0);
        }
        const RevinStats s = revin_stats(x, 1e-5);
        const Tensor3 back = revin_denormalize(revin_normalize(x, s, gamma, beta), s,
                                               gamma, beta);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(std::abs(back.values()[i] - x.values()[i]) <= 1e-9);
        }
    }
}

TEST_CASE("sigma strictly increases with eps", "[revin][property]") {
    Rng rng(81);
    const Tensor3 x = random_tensor(2, 10, 2, rng);
    const RevinStats lo = revin_stats(x, 1e-5);
    const RevinStats hi = revin_stats(x, 2e-5);
    for (std::size_t i = 0; i < lo.sigma.size(); ++i) {
        CHECK(hi.sigma.values()[i] > lo.sigma.values()[i]);
    }
}

TEST_CASE("identity round trip has zero gradient wrt input", "[revin][grad]") {
    // gamma=1, beta=0 and an identity model: y == x, so MSE vs x is flat.
    Rng rng(91);
    const Tensor3 x = random_tensor(2, 6, 2, rng);
    RevinCache cache;
    const Tensor3 y = revin_roundtrip_forward(x, 1e-5, ones(2), zeros(2), cache);
    const Tensor3 grad_out = mse_grad(y, x);
    std::vector<double> dgamma, dbeta;
    const Tensor3 grad_in = revin_backward(grad_out, cache, ones(2), zeros(2), dgamma, dbeta);
    for (double g : grad_in.values()) CHECK(std::abs(g) <= 1e-12);
}

TEST_CASE("revin_backward matches finite differences", "[revin][grad]") {
    // Loss: MSE between denormalize(normalize(x)) and a fixed target near x,
    // keeping the finite-difference oracle well conditioned.
    Rng rng(101);
    const std::size_t B = 2, L = 4, C = 2;
    const Tensor3 x0 = random_tensor(B, L, C, rng);
    Tensor3 target = x0;
    for (double& v : target.values()) v += rng.uniform(-0.5, 0.5);
    std::vector<double> gamma{1.3, 0.7}, beta{0.1, -0.4};

    RevinCache cache;
    const Tensor3 y = revin_roundtrip_forward(x0, 1e-5, gamma, beta, cache);
    std::vector<double> dgamma, dbeta;
    const Tensor3 grad_in =
        revin_backward(mse_grad(y, target), cache, gamma, beta, dgamma, dbeta);

    // Pack [x, gamma, beta] into one parameter vector for the oracle.
    std::vector<double> theta = x0.values();
    theta.insert(theta.end(), gamma.begin(), gamma.end());
    theta.insert(theta.end(), beta.begin(), beta.end());
    const auto loss = [&](const std::vector<double>& th) {
        Tensor3 x(B, L, C);
        std::copy(th.begin(), th.begin() + x.size(), x.values().begin());
        std::vector<double> g(th.begin() + x.size(), th.begin() + x.size() + C);
        std::vector<double> be(th.begin() + x.size() + C, th.end());
        RevinCache scratch;
        return mse(revin_roundtrip_forward(x, 1e-5, g, be, scratch), target);
    };
    const std::vector<double> fd = finite_diff_grad(loss, theta, 1e-5);

    std::vector<double> analytic = grad_in.values();
    analytic.insert(analytic.end(), dgamma.begin(), dgamma.end());
    analytic.insert(analytic.end(), dbeta.begin(), dbeta.end());
    REQUIRE(analytic.size() == fd.size());
    for (std::size_t i = 0; i < fd.size(); ++i) {
        if (std::abs(fd[i]) > 1e-8) {
            CHECK(rel_err(analytic[i], fd[i]) <= 1e-4);
        } else {
            CHECK(std::abs(analytic[i] - fd[i]) <= 1e-7);
        }
    }
}

TEST_CASE("denormalize-only beta gradient matches finite differences", "[revin][grad]") {
    Rng rng(111);
    const std::size_t B = 2, T = 3, C = 2;
    const Tensor3 o = random_tensor(B, T, C, rng);
    const Tensor3 x = random_tensor(B, 8, C, rng);
    const Tensor3 target = random_tensor(B, T, C, rng);
    const std::vector<double> gamma{1.5, 0.6};
    const std::vector<double> beta{0.3, -0.2};
    const RevinStats s = revin_stats(x, 1e-5);

    RevinBackwardAcc acc(B, C);
    const Tensor3 y = revin_denormalize(o, s, gamma, beta);
    revin_denormalize_backward(mse_grad(y, target), o, s, gamma, beta, acc);

    std::vector<double> theta = beta;
    const auto loss = [&](const std::vector<double>& th) {
        return mse(revin_denormalize(o, s, gamma, th), target);
    };
    const std::vector<double> fd = finite_diff_grad(loss, theta, 1e-6);
    for (std::size_t c = 0; c < C; ++c) {
        CHECK(rel_err(acc.dbeta[c], fd[c]) <= 1e-4);
    }
}

TEST_CASE("revin_backward rejects mismatched cache", "[revin][grad]") {
    Rng rng(121);
    const Tensor3 x = random_tensor(2, 5, 2, rng);
    RevinCache cache;
    revin_roundtrip_forward(x, 1e-5, ones(2), zeros(2), cache);
    std::vector<double> dg, db;
    const Tensor3 wrong(3, 5, 2, 0.0);
    CHECK_THROWS_AS(revin_backward(wrong, cache, ones(2), zeros(2), dg, db), StateError);
}
