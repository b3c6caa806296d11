#include "pdmg/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pdmg/errors.hpp"

namespace pdmg {

namespace {

// ψ(x) − ln x + 1/(2x) expanded in 1/x² (Bernoulli numbers), valid for x ≥ 6
// with truncation error below 2e-13.
double asymptotic_tail(double x)
{
    const double z = 1.0 / (x * x);
    return -z * (1.0 / 12 - z * (1.0 / 120 - z * (1.0 / 252 - z * (1.0 / 240 - z * (1.0 / 132 - z * (691.0 / 32760 - z / 12))))));
}

void check_shapes(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size() || a.empty())
        throw ModelError("dirichlet shape mismatch (" + std::to_string(a.size()) + " vs "
                         + std::to_string(b.size()) + ")");
}

} // namespace

double digamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("digamma: argument must be positive and finite");

    // Σ 1/(x+k) over the shifts, kept as a rounded sum plus the accumulated
    // rounding residue so that the 1/x ≈ 1e6 term near zero costs one
    // rounding only.
    double sum = 0.0;
    double residue = 0.0;
    while (x < 6.0) {
        const double r = 1.0 / x;
        residue += std::fma(-r, x, 1.0) / x;
        const double t = sum + r;
        residue += std::abs(sum) >= std::abs(r) ? (sum - t) + r : (r - t) + sum;
        sum = t;
        x += 1.0;
    }
    const double tail = std::log(x) - 0.5 / x + asymptotic_tail(x);
    return (tail - residue) - sum;
}

double log_gamma(double x)
{
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

double log_dirichlet_density(std::span<const double> theta, std::span<const double> alpha)
{
    check_shapes(theta, alpha);
    if (alpha.size() == 1) return 0.0;
    double alpha_sum = 0.0;
    double out = 0.0;
    for (std::size_t m = 0; m < alpha.size(); ++m) {
        alpha_sum += alpha[m];
        out -= log_gamma(alpha[m]);
        if (alpha[m] != 1.0) out += (alpha[m] - 1.0) * std::log(theta[m]);
    }
    return out + log_gamma(alpha_sum);
}

double dirichlet_kl(std::span<const double> omega, std::span<const double> alpha)
{
    check_shapes(omega, alpha);
    double omega_sum = 0.0;
    double alpha_sum = 0.0;
    for (std::size_t m = 0; m < omega.size(); ++m) {
        omega_sum += omega[m];
        alpha_sum += alpha[m];
    }
    const double psi_sum = digamma(omega_sum);
    double out = log_gamma(omega_sum) - log_gamma(alpha_sum);
    for (std::size_t m = 0; m < omega.size(); ++m) {
        out += log_gamma(alpha[m]) - log_gamma(omega[m]);
        out += (omega[m] - alpha[m]) * (digamma(omega[m]) - psi_sum);
    }
    return out;
}

double log_sum_exp(std::span<const double> v)
{
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (v.empty()) return neg_inf;
    const double peak = *std::max_element(v.begin(), v.end());
    if (peak == neg_inf) return neg_inf;
    double acc = 0.0;
    for (double x : v) acc += std::exp(x - peak);
    return peak + std::log(acc);
}

} // namespace pdmg
