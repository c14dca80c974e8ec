#pragma once

#include "anticonc/common.hpp"
#include "anticonc/weights.hpp"

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace anticonc {

/// Finitely supported measure on R^d.
///
/// Atoms closer than kAtomTol in max norm are merged on construction (weights
/// add) and stored in lexicographic order. A probability distribution has the
/// `normalized` flag set and total mass 1 within 1e-12; sub-probability measures
/// such as M = (1/2n) sum E_{a_k} keep the flag cleared and their true mass.
class DiscreteDistribution {
  public:
    DiscreteDistribution(PointCloud atoms, std::vector<double> weights, bool normalized = true);

    /// Point mass E_y.
    static DiscreteDistribution point_mass(std::vector<double> y);
    /// Uniform law on the listed scalar values.
    static DiscreteDistribution uniform(const std::vector<double>& values);
    /// Rademacher law, +-1 with probability 1/2.
    static DiscreteDistribution rademacher();
    /// {0: 1 - p, 1: p}.
    static DiscreteDistribution bernoulli(double p);

    [[nodiscard]] std::size_t dim() const { return atoms_.dim; }
    [[nodiscard]] std::size_t size() const { return weights_.size(); }
    [[nodiscard]] std::span<const double> atom(std::size_t i) const { return atoms_.point(i); }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] const PointCloud& atoms() const { return atoms_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] bool normalized() const { return normalized_; }
    [[nodiscard]] double total_mass() const;

    /// Largest max-norm of an atom.
    [[nodiscard]] double support_radius() const;
    /// Invariant under z -> -z (atoms and weights, exact after dedup).
    [[nodiscard]] bool is_symmetric() const;

  private:
    PointCloud atoms_;
    std::vector<double> weights_;
    bool normalized_ = true;
};

/// Sort atoms lexicographically and merge those within `tol` (max norm).
/// Zero weights are dropped.
void merge_atoms(PointCloud& atoms, std::vector<double>& weights, double tol);

/// L(X1 - X2) for X1, X2 i.i.d. ~ F. The result is exactly negation-symmetric.
[[nodiscard]] DiscreteDistribution symmetrize(const DiscreteDistribution& F);

/// p(delta) = G{ z : |z| > delta }, |.| the max norm.
[[nodiscard]] double tail_mass_p(const DiscreteDistribution& G, double delta);

/// M(tau) = sum w min(|z|^2 / tau^2, 1). Throws std::domain_error for tau <= 0.
[[nodiscard]] double truncated_second_moment_M(const DiscreteDistribution& G, double tau);

/// lambda_d(ratio) = sum w (1 + floor(ratio / |z|))^{-d}; the atom at zero contributes 0.
/// Throws std::domain_error for ratio <= 0 or d == 0.
[[nodiscard]] double lambda_d(const DiscreteDistribution& G, double ratio, unsigned d);

/// sum_j w_j exp(i <t, x_j>).
[[nodiscard]] std::complex<double> char_fn(const DiscreteDistribution& F, std::span<const double> t);

/// e(alpha W): the compound Poisson law with Levy measure alpha W.
class CompoundPoisson {
  public:
    CompoundPoisson(double intensity, DiscreteDistribution base);

    [[nodiscard]] double intensity() const { return intensity_; }
    [[nodiscard]] const DiscreteDistribution& base() const { return base_; }
    [[nodiscard]] std::size_t dim() const { return base_.dim(); }

    /// D^lambda = e(alpha lambda W).
    [[nodiscard]] CompoundPoisson power(double lambda) const;

  private:
    double intensity_;
    DiscreteDistribution base_;
};

/// exp(alpha (W^(t) - 1)).
[[nodiscard]] std::complex<double> cp_char_fn(const CompoundPoisson& D, std::span<const double> t);

/// Draws sum_{j <= N} Y_j with N ~ Poisson(alpha) and Y_j i.i.d. ~ W.
[[nodiscard]] PointCloud cp_sample(const CompoundPoisson& D, std::size_t n_samples, RngSeed seed);

/// Inverse-CDF sampler over the atoms of a normalized distribution.
class AtomSampler {
  public:
    explicit AtomSampler(const DiscreteDistribution& F);
    std::size_t operator()(Rng& rng) const;

  private:
    std::vector<double> cumulative_;
};

/// M* = (1/2n) sum_k (E_{a_k} + E_{-a_k}).
[[nodiscard]] DiscreteDistribution spectral_measure_Mstar(const WeightVector& a);

/// M = (1/2n) sum_k E_{a_k}; an unnormalized measure of mass 1/2.
[[nodiscard]] DiscreteDistribution half_weight_measure(const WeightVector& a);

/// H^b = e((n b / 2) M*).
[[nodiscard]] CompoundPoisson h_power(const WeightVector& a, double b);

/// exp(-(1/2) sum_k (1 - cos <t, a_k>)), evaluated directly.
[[nodiscard]] double h_char_fn(const WeightVector& a, std::span<const double> t);

/// Distribution of S_a when it fits into `budget` atoms (d >= 1), merged at kConvTol.
[[nodiscard]] DiscreteDistribution weighted_sum_distribution(const DiscreteDistribution& X,
                                                             const WeightVector& a,
                                                             std::size_t budget = kDefaultExactBudget);

/// Parses "rademacher", "uniform{-1,0,1}", "bernoulli(0.3)". Throws std::invalid_argument.
[[nodiscard]] DiscreteDistribution parse_named_distribution(const std::string& name);

}  // namespace anticonc
