#pragma once

#include "anticonc/common.hpp"
#include "anticonc/weights.hpp"

#include <optional>
#include <span>
#include <vector>

namespace anticonc {

struct LcdParams {
    double gamma = 0.5;      // in (0, 1)
    double alpha = 1.0;      // > 0
    double theta_max = 0.0;  // search ceiling; <= 0 picks 10 (1 + 1 / min nonzero |a_kj|)
    double tol = 1e-6;       // target width of [D_lower, D_upper]
    std::size_t max_boxes = 2'000'000;  // branch-and-bound budget; the bracket stays valid when it runs out

    /// Throws std::domain_error when a field is out of range.
    void validate() const;
};

struct LcdResult {
    double D_lower = 0.0;          // no t with ||t|| <= D_lower violates the condition
    double D_upper = kInf;         // ||witness_t||, or +inf when none was found
    std::optional<std::vector<double>> witness_t;
    bool certified = false;        // branch-and-bound (d <= 3) rather than multistart
    bool ceiling_reached = false;  // no violation below theta_max
    bool budget_exhausted = false; // box budget or the minimum box size stopped the bracket short of tol
    double theta_max = 0.0;        // ceiling actually used
    std::size_t boxes = 0;         // boxes processed (certified) or probes (heuristic)
};

/// (<t, a_1>, ..., <t, a_n>).
[[nodiscard]] std::vector<double> dot_product_vector(std::span<const double> t, const WeightVector& a);

/// Euclidean distance from v to Z^n.
[[nodiscard]] double dist_to_lattice(std::span<const double> v);

/// dist(t.a, Z^n) < min(gamma ||t.a||, alpha), strictly.
[[nodiscard]] bool violation_condition(std::span<const double> t, const WeightVector& a, const LcdParams& params);

/// dist(t.a, Z^n) - min(gamma ||t.a||, alpha); negative exactly on violations.
[[nodiscard]] double violation_margin(std::span<const double> t, const WeightVector& a, double gamma, double alpha);

[[nodiscard]] double default_theta_max(const WeightVector& a);

/// Least radius of a violating t. For d <= 3 a best-first branch-and-bound over
/// boxes, pruned by the Lipschitz bound (1 + gamma) ||a||_op on the margin and by
/// the region where every |<t, a_k>| <= 1/2. For d > 3 a multistart ray scan
/// (certified = false) with D_lower = 1 / (2 max ||a_k||).
[[nodiscard]] LcdResult compute_lcd(const WeightVector& a, const LcdParams& params);

}  // namespace anticonc
