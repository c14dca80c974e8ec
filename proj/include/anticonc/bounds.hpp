#pragma once

#include "anticonc/common.hpp"
#include "anticonc/concentration.hpp"
#include "anticonc/distributions.hpp"
#include "anticonc/lcd.hpp"
#include "anticonc/progressions.hpp"
#include "anticonc/weights.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace anticonc {

/// The unspecified absolute constants of the bound expressions. Every entry
/// defaults to 1 except c_exp35, the exponent constant of the M-form bound,
/// which defaults to 4 so that it matches the p-form bound term by term.
struct ConstantsConfig {
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0, c6 = 1.0;
    double c7 = 1.0, c8 = 1.0, c9 = 1.0, c10 = 1.0, c11 = 1.0, c12 = 1.0;
    double c = 1.0;          // generic constant inside O(.) and << budgets
    double c_esseen = 1.0;   // smoothing-inequality constant
    double c_d = 1.0;        // dimension-dependent factor of <<_d
    double c_guard = 1.0;    // lambda_1 >= c_guard is the operational ">> 1" guard
    double c_exp35 = 4.0;    // exp(-c M alpha^2)

    /// Names in serialization order.
    [[nodiscard]] static const std::vector<std::string>& names();
    [[nodiscard]] double get(const std::string& name) const;
    /// Throws std::invalid_argument on an unknown name, std::domain_error on a nonpositive value.
    void set(const std::string& name, double value);
    void validate() const;
};

/// An evaluated right-hand side; vacuous when not finite or above 1.
struct BoundValue {
    double value = kInf;
    bool vacuous = true;
};

[[nodiscard]] BoundValue make_bound(double value);

/// c2^{r+1} (1 / (m sqrt(alpha beta)) + (r+1)^{5r/2} / (alpha beta)^{(r+1)/2}).
[[nodiscard]] BoundValue bound_arak_T16(double alpha, double beta, std::size_t r, std::uint64_t m, double c2);

/// c3^{r+1} (1 + floor(kappa/delta)) (1 / (m sqrt(n p beta*)) + (r+1)^{5r/2} / (n p beta*)^{(r+1)/2}).
[[nodiscard]] BoundValue bound_T17(double kappa, double delta, std::size_t r, std::uint64_t m, std::size_t n,
                                   double p_val, double beta_star, double c3);

struct GuardedBound {
    BoundValue bound;
    double guard_value = 0.0;  // lambda_1(tau / kappa)
    bool guard_ok = false;     // guard_value >= c_guard
};

/// Same shape as T17 without the p factor; valid under lambda_1(tau/kappa) >> 1.
[[nodiscard]] GuardedBound bound_T18(double kappa, double delta, std::size_t r, std::uint64_t m, std::size_t n,
                                     double beta_star, double lambda1, double c4, double c_guard);

/// c5^{r+1} ((c6 r + 1)^{3r^2/2} / (s sqrt(alpha gamma)) + (r+1)^{5r/2} / (alpha gamma)^{(r+1)/2}).
[[nodiscard]] BoundValue bound_T110(double alpha, double gamma_val, std::size_t r, std::uint64_t s, double c5,
                                    double c6);

/// c7^{r+1} (1 + floor(kappa/delta)) ((c8 r + 1)^{3r^2/2} / (s sqrt(n gamma*)) + (r+1)^{5r/2} / (n gamma*)^{(r+1)/2}).
[[nodiscard]] GuardedBound bound_T111(double kappa, double delta, std::size_t r, std::uint64_t s, std::size_t n,
                                      double gamma_star, double lambda1, double c7, double c8, double c_guard);

/// c_d Q(H^p, kappa).
[[nodiscard]] BoundValue bound_lemma13(double q_h, double c_d);
/// c_d (1 + floor(kappa/delta))^d Q(H^p, delta).
[[nodiscard]] BoundValue bound_cor14(double q_h_delta, double kappa, double delta, std::size_t d, double c_d);
/// c_d Q(H^lambda, kappa) / lambda.
[[nodiscard]] BoundValue bound_lemma15(double q_h_lambda, double lambda, double c_d);

/// c_d ((1 / (gamma D sqrt b))^d / sqrt(det A) + exp(-4 b alpha^2)).
[[nodiscard]] BoundValue bound_T31(double b, double gamma, double D, double alpha, double detA, std::size_t d,
                                   double c_d);

/// lambda_d(tau D), p(tau D) and M(tau D).
struct TauDFunctionals {
    double lambda = 0.0;
    double p = 0.0;
    double M = 0.0;
};

/// lambda_d, p and M at rho >= 0; at rho = 0 all three take their limit G{z != 0}.
[[nodiscard]] TauDFunctionals functionals_at(const DiscreteDistribution& G, double rho, unsigned d);

[[nodiscard]] TauDFunctionals taud_functionals(const DiscreteDistribution& G, double tau, double D, unsigned d);

struct LcdBounds {
    BoundValue T33;  // lambda-form, with the extra 1/lambda factor
    BoundValue T34;  // p-form
    BoundValue T35;  // M-form
    /// T35 <= T34 whenever both are non-vacuous.
    [[nodiscard]] bool dominance_holds() const;
};

[[nodiscard]] LcdBounds bound_T33_T34_T35(const TauDFunctionals& f, double gamma, double D, double alpha, double detA,
                                          std::size_t d, const ConstantsConfig& constants);

/// Q(H^b, kappa) by Monte Carlo on the compound Poisson law H^b.
[[nodiscard]] ConcentrationEstimate q_h_power_mc(const WeightVector& a, double b, double kappa,
                                                 std::size_t n_samples, RngSeed seed);

struct ChainViolation {
    std::vector<double> t;
    std::string inequality;  // "cosine", "lattice" or "lcd"
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ChainReport {
    std::size_t points = 0;
    std::size_t cosine_checks = 0;
    std::size_t lcd_checks = 0;        // grid points with ||t|| <= 2 pi D where the premise holds there
    std::size_t premise_failures = 0;  // grid points with ||t|| <= 2 pi D where t/2pi violates the LCD condition
    std::optional<ChainViolation> violation;  // first failure, if any
    [[nodiscard]] bool holds() const { return !violation.has_value(); }
};

/// 1 - cos x >= 2 x^2 / pi^2 on [-pi, pi], slack 1e-12.
[[nodiscard]] bool cosine_inequality_holds(double x);

/// Checks at every grid point t:
///   1 - cos x >= 2 x^2 / pi^2 at each x = <t, a_k> reduced to [-pi, pi];
///   H^(t) <= exp(-4 dist(t/2pi . a, Z^n)^2);
///   for ||t|| <= 2 pi D, when t/2pi satisfies the LCD condition,
///   H^(t) <= exp(-4 min(gamma ||t/2pi . a||, alpha)^2).
/// All with absolute slack 1e-12. Stops at the first violation.
[[nodiscard]] ChainReport verify_pointwise_chain(const WeightVector& a, const PointCloud& t_grid, double gamma,
                                                 double alpha, double D);

/// `count` points of the ball ||t|| <= radius: an even grid for d = 1, seeded uniform points otherwise.
[[nodiscard]] PointCloud make_t_grid(std::size_t d, double radius, std::size_t count, RngSeed seed);

struct InverseInputs {
    double tau = 1.0, kappa = 1.0, delta = 1.0;
    std::size_t r = 1;
    std::uint64_t s = 0;     // witness cap; 0 derives it from the m budget
    double n_prime = 0.0;    // 0 means n
};

/// Budgets of the inverse theorems next to the heuristic witness. d = 1 only.
struct InverseReport {
    double q = 0.0;
    double p = 0.0;            // p(tau / kappa)
    double lambda1 = 0.0;      // lambda_1(tau / kappa)
    bool guard_ok = false;     // lambda1 >= c_guard
    double n_prime = 0.0;
    double n_prime_min_p = 0.0;       // left side of the admissibility condition on n'
    double n_prime_min_lambda = 0.0;
    double m_budget_p = kInf;         // 2 c9^{r+1} kappa / (q delta sqrt(p n')) + 1
    double m_budget_lambda = kInf;
    double size_budget = 0.0;         // max(c / (q sqrt(n')), 1)
    double rank_budget = 0.0;         // c (|log q| + log(kappa/delta) + 1)
    double uncovered_budget_p = kInf; // c p^{-1} (|log q| + log(kappa/delta) + 1)^3
    double uncovered_budget_lambda = kInf;
    double size_budget_general_p = kInf;  // max(c q^{-1} rho^{-1} (n' p)^{-1/2}, 1), rho = delta/kappa
    double size_budget_general_lambda = kInf;
    double log_rank_budget = 0.0;     // d ((A + B) log b_n + 1), b_n = n
    double log_uncovered_budget_p = kInf;  // d p^{-1} ((A + B) log b_n + 1)^3
    double log_uncovered_budget_lambda = kInf;
    // Heuristic witness from gamma_rs(M*, delta).
    std::uint64_t witness_cap = 0;
    std::size_t witness_rank = 0;
    std::size_t witness_size = 0;
    std::size_t witness_uncovered = 0;  // a_k not delta-close to the witness image
    double witness_mass = 0.0;          // gamma upper bound
};

[[nodiscard]] InverseReport inverse_principle_report(const DiscreteDistribution& X, const WeightVector& a, double q,
                                                     const InverseInputs& in, const ConstantsConfig& constants);

}  // namespace anticonc
