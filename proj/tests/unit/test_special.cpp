#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pdmg/errors.hpp"
#include "pdmg/special.hpp"
#include "precise.hpp"

using namespace pdmg;

TEST_SUITE("special")
{
    TEST_CASE("digamma identities")
    {
        const double gamma = std::numbers::egamma;
        CHECK(std::abs(digamma(1.0) + gamma) <= 1e-12);
        CHECK(std::abs(digamma(2.0) - (digamma(1.0) + 1.0)) <= 1e-12);
        CHECK(std::abs(digamma(0.5) - (-gamma - 2.0 * std::numbers::ln2)) <= 1e-12);
        CHECK(std::abs(digamma(0.5) - precise::digamma(0.5)) <= 1e-12);
        for (double x : {0.1, 0.7, 3.3, 12.5, 150.0})
            CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12);
    }

    TEST_CASE("digamma against 50-digit reference")
    {
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = std::pow(10.0, -6.0 + 12.0 * i / 400.0);
            worst = std::max(worst, std::abs(digamma(x) - precise::digamma(x)));
        }
        CHECK(worst <= 1e-10);
    }

    TEST_CASE("digamma domain")
    {
        CHECK_THROWS_AS(digamma(0.0), std::domain_error);
        CHECK_THROWS_AS(digamma(-1.5), std::domain_error);
        CHECK_THROWS_AS(digamma(std::nan("")), std::domain_error);
        CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    }

    TEST_CASE("log gamma")
    {
        for (double x : {0.5, 1.0, 2.5, 10.0, 1e4}) CHECK(std::abs(log_gamma(x) - precise::lgamma(x)) <= 1e-12 * std::max(1.0, std::abs(precise::lgamma(x))));
    }

    TEST_CASE("dirichlet log density")
    {
        const std::vector<double> one{1.0};
        CHECK(log_dirichlet_density(one, std::vector<double>{3.0}) == 0.0);
        const std::vector<double> half{0.5, 0.5};
        CHECK(std::abs(log_dirichlet_density(half, std::vector<double>{1.0, 1.0})) <= 1e-15); // Γ(2) = 1
        const std::vector<double> third{0.2, 0.3, 0.5};
        CHECK(std::abs(log_dirichlet_density(third, std::vector<double>{1.0, 1.0, 1.0}) - std::log(2.0)) <= 1e-14);

        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> a(0.05, 20.0);
        std::gamma_distribution<double> g(1.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> alpha, theta;
            const int m = 2 + trial % 6;
            double total = 0.0;
            for (int i = 0; i < m; ++i) {
                alpha.push_back(a(rng));
                theta.push_back(g(rng) + 1e-3);
                total += theta.back();
            }
            for (auto& t : theta) t /= total;
            const double want = precise::log_dirichlet_density(theta, alpha);
            CHECK(std::abs(log_dirichlet_density(theta, alpha) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
        }
        CHECK_THROWS_AS(log_dirichlet_density(half, one), ModelError);
    }

    TEST_CASE("dirichlet KL")
    {
        const std::vector<double> w{0.3, 4.0, 2.0};
        CHECK(dirichlet_kl(w, w) == 0.0);

        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> omega, alpha;
            const int m = 2 + trial % 5;
            for (int i = 0; i < m; ++i) {
                omega.push_back(std::pow(10.0, u(rng)));
                alpha.push_back(std::pow(10.0, u(rng)));
            }
            const double kl = dirichlet_kl(omega, alpha);
            CHECK(kl >= -1e-12);
            CHECK(std::abs(kl - precise::dirichlet_kl(omega, alpha)) <= 1e-8);
        }

        std::uniform_real_distribution<double> p(0.8, 30.0);
        for (int trial = 0; trial < 40; ++trial) {
            const std::vector<double> omega{p(rng), p(rng)}, alpha{p(rng), p(rng)};
            const double want = precise::beta_kl_quadrature(omega[0], omega[1], alpha[0], alpha[1]);
            CHECK(std::abs(dirichlet_kl(omega, alpha) - want) <= 1e-8);
        }
    }

    TEST_CASE("log-sum-exp")
    {
        const double inf = std::numeric_limits<double>::infinity();
        CHECK(log_sum_exp(std::vector<double>{}) == -inf);
        CHECK(log_sum_exp(std::vector<double>{-inf, -inf}) == -inf);
        CHECK(std::abs(log_sum_exp(std::vector<double>{std::log(0.25), std::log(0.75)})) <= 1e-15);
        CHECK(std::abs(log_sum_exp(std::vector<double>{-1000.0, -1000.0}) - (-1000.0 + std::log(2.0))) <= 1e-12);
    }
}
