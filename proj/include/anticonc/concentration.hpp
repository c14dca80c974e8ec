#pragma once

#include "anticonc/common.hpp"
#include "anticonc/distributions.hpp"
#include "anticonc/weights.hpp"

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <variant>

namespace anticonc {

enum class QMethod { exact, monte_carlo, esseen_upper };

[[nodiscard]] std::string to_string(QMethod m);

/// A value of Q(F, tau) together with how it was obtained.
struct ConcentrationEstimate {
    double value = 0.0;
    QMethod method = QMethod::exact;
    double stderr_ = 0.0;  // zero for exact values
    double tau = 0.0;
};

// Q(F, tau) = sup_x P(Y in x + tau B) with B the closed Euclidean ball of
// radius 1/2: in one dimension a closed window of length tau, in R^d a closed
// ball of radius tau / 2.

/// Largest mass of a closed window [x, x + tau] for sorted scalar atoms.
[[nodiscard]] double max_window_mass(std::span<const double> sorted_atoms, std::span<const double> weights,
                                     double tau);

/// Exact sup over centres of the mass in a closed ball of radius tau / 2.
/// Candidate centres are circumcentres of up to d + 1 atoms that fit in the
/// ball; the optimum is attained at one of them.
/// `budget` caps neighbour pairs; point-in-ball tests may reach 64 x budget (CapacityError beyond).
[[nodiscard]] double max_ball_mass(const DiscreteDistribution& F, double tau,
                                   std::size_t budget = kDefaultExactBudget);

/// Exact Q(F_a, tau) for d = 1 by sequential convolution and a window sweep.
/// Throws CapacityError when the convolution exceeds `budget` atoms.
[[nodiscard]] ConcentrationEstimate exact_Q_1d(const DiscreteDistribution& X, const WeightVector& a, double tau,
                                               std::size_t budget = kDefaultExactBudget);

/// Exact Q(F_a, tau) for 2 <= d <= 4.
[[nodiscard]] ConcentrationEstimate exact_Q_multid(const DiscreteDistribution& X, const WeightVector& a,
                                                   double tau, std::size_t budget = kDefaultExactBudget);

/// Dispatches on a.dim().
[[nodiscard]] ConcentrationEstimate exact_Q(const DiscreteDistribution& X, const WeightVector& a, double tau,
                                            std::size_t budget = kDefaultExactBudget);

/// Law of sum X_k a_k, sampled.
struct WeightedSumSampler {
    DiscreteDistribution X;
    WeightVector a;
};

using Sampler = std::variant<WeightedSumSampler, CompoundPoisson>;

[[nodiscard]] PointCloud draw_samples(const Sampler& sampler, std::size_t n_samples, RngSeed seed);

/// Monte Carlo estimate of Q: the largest fraction of samples caught by one
/// window (d = 1, exact sweep) or one ball (d >= 2, centred at sample points
/// and midpoints of close pairs, so a lower bound on the sample optimum).
/// A consistent estimator, not a bound. Requires n_samples >= 1000.
[[nodiscard]] ConcentrationEstimate mc_Q(const Sampler& sampler, double tau, std::size_t n_samples, RngSeed seed);

/// The same window/ball maximisation applied to an existing sample.
[[nodiscard]] double sample_concentration(const PointCloud& samples, double tau);

using CharFn = std::function<std::complex<double>(std::span<const double>)>;

/// c_esseen * tau^d * integral of |F^(t)| over ||t|| <= 1/tau.
///
/// `frequency_scale` is the largest support radius of F; it sets the initial
/// panel count so oscillations are resolved. d = 1 uses adaptive Simpson to
/// relative 1e-8, d >= 2 Gauss-Legendre in hyperspherical coordinates with
/// panel doubling until two levels agree to relative 1e-5.
/// Only a bound shape: it bounds Q when c_esseen dominates the unknown constant.
[[nodiscard]] ConcentrationEstimate esseen_upper_Q(const CharFn& F_hat, double tau, std::size_t d,
                                                   double c_esseen = 1.0, double frequency_scale = 1.0);

/// Characteristic function of S_a.
[[nodiscard]] CharFn weighted_sum_char_fn(const DiscreteDistribution& X, const WeightVector& a);

struct RegularityWitness {
    double lhs = 0.0;  // Q(F, mu)
    double rhs = 0.0;  // (1 + floor(mu / lambda))^d Q(F, lambda)
    bool holds = false;
};

/// Checks Q(F, mu) <= (1 + floor(mu / lambda))^d Q(F, lambda) on exact values
/// (relative slack 1e-12 for round-off).
[[nodiscard]] RegularityWitness regularity_check(const DiscreteDistribution& F, double mu, double lambda);

/// Convenience overload for F = L(S_a).
[[nodiscard]] RegularityWitness regularity_check(const DiscreteDistribution& X, const WeightVector& a, double mu,
                                                 double lambda, std::size_t budget = kDefaultExactBudget);

}  // namespace anticonc
