#pragma once

#include "anticonc/common.hpp"
#include "anticonc/distributions.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace anticonc {

/// Symmetric generalized arithmetic progression P = (L, g, r) in R^d:
/// Image(P) = { m_1 g_1 + ... + m_r g_r : |m_j| <= L_j, m_j integer }.
/// Rank 0 has the image {0}.
struct Gap {
    std::size_t dim = 1;
    std::vector<double> L;     // r positive reals
    PointCloud gens{1};        // r generators in R^dim

    Gap() = default;
    Gap(std::vector<double> dims, PointCloud generators);
    /// Rank-0 progression in R^dim.
    static Gap zero(std::size_t dim);

    [[nodiscard]] std::size_t rank() const { return L.size(); }
    /// prod (2 floor(L_j) + 1), saturating at UINT64_MAX.
    [[nodiscard]] std::uint64_t box_count() const;
};

/// One symmetric slab |<u, nu> | <= b of a Cgap body.
struct Slab {
    std::vector<double> u;
    double b = 0.0;
};

/// Convex progression K = { <nu, h> : nu in Z^r and V } in R, V = intersection of slabs.
struct Cgap {
    std::vector<double> h;     // r entries
    std::vector<Slab> body;    // symmetric by construction
    std::uint64_t cap = 1;     // m: admissible lattice-point count

    [[nodiscard]] std::size_t rank() const { return h.size(); }
    /// Box body |nu_j| <= half_widths_j.
    static Cgap box(std::vector<double> h, const std::vector<double>& half_widths, std::uint64_t cap);
    [[nodiscard]] bool contains(std::span<const double> nu, double tol = 1e-12) const;
};

/// Deduplicated image (merge tolerance kConvTol). Throws CapacityError when the box exceeds `budget`.
[[nodiscard]] PointCloud gap_image(const Gap& P, std::uint64_t budget = kDefaultGapBudget);
[[nodiscard]] std::size_t gap_size(const Gap& P, std::uint64_t budget = kDefaultGapBudget);
[[nodiscard]] bool gap_is_proper(const Gap& P, std::uint64_t budget = kDefaultGapBudget);
/// (t L, g, r).
[[nodiscard]] Gap gap_dilate(const Gap& P, double t);

/// Integer points of the Cgap body (rank r, row-major). Requires a bounded body.
[[nodiscard]] std::vector<std::int64_t> cgap_lattice_points(const Cgap& K, std::uint64_t budget = kDefaultGapBudget);

/// Sorted image values. Throws ClassMembershipError when |Z^r and V| > cap.
[[nodiscard]] std::vector<double> cgap_image(const Cgap& K, std::uint64_t budget = kDefaultGapBudget);

struct Coverage {
    std::size_t covered = 0;
    std::vector<std::size_t> uncovered;
};

/// A point is covered when some element of K lies within delta in max norm.
[[nodiscard]] Coverage neighborhood_coverage(const PointCloud& points, const PointCloud& K, double delta);

/// Coordinate-wise coverage against the product set x_j [K_j]_{delta_j}.
[[nodiscard]] Coverage product_coverage(const PointCloud& points, const std::vector<std::vector<double>>& K,
                                        std::span<const double> deltas);

/// W{ R \ [K]_tau } for a scalar measure W and a sorted scalar set K.
[[nodiscard]] double outside_mass(const DiscreteDistribution& W, const std::vector<double>& K, double tau);

struct SearchBudget {
    std::uint64_t candidates = 200'000;  // candidate progressions scored
    std::size_t generator_pool = 12;     // generators kept for rank >= 2
};

struct BetaResult {
    double value = 1.0;   // upper bound on beta_{r,m}(W, tau); exact for r = 0
    bool exact = false;
    Cgap witness;
    std::uint64_t evaluated = 0;
};

struct GammaResult {
    double value = 1.0;   // upper bound on gamma_{r,s}(W, tau); exact for r = 0
    bool exact = false;
    Gap witness;          // scalar Gap whose image is the witness set K
    std::uint64_t evaluated = 0;
};

/// Heuristic search over CGAPs of K_{r,m}: rank-1 interval bodies with
/// generators from atoms, atom differences and continued-fraction convergents
/// of atom ratios, then box bodies of rank <= r over the best generators.
/// Requires a scalar W.
[[nodiscard]] BetaResult beta_rm(const DiscreteDistribution& W, double tau, std::size_t r, std::uint64_t m,
                                 SearchBudget budget = {});

/// Same search with witnesses expressed as GAP images (class P_{r,s}).
[[nodiscard]] GammaResult gamma_rs(const DiscreteDistribution& W, double tau, std::size_t r, std::uint64_t s,
                                   SearchBudget budget = {});

/// Scalar candidate generators used by the searches (sorted, deduplicated).
[[nodiscard]] std::vector<double> candidate_generators(const DiscreteDistribution& W, std::size_t cf_depth = 12,
                                                       std::uint64_t max_denominator = 64);

/// Lattice Lambda = B Z^r, basis columns stored row-major in an r x r matrix.
struct Lattice {
    std::size_t rank = 1;
    std::vector<double> basis;  // row-major r x r, columns are basis vectors
    static Lattice integer(std::size_t r);
};

struct CoverCheck {
    bool image_in_body = false;        // Image(P) in V and Lambda
    bool body_in_dilate = false;       // V and Lambda in Image(P^T)
    bool size_inequality = false;      // size(P^T) <= (2T + 1)^r |V and Lambda|
    double dilation = 1.0;             // T = (c1 r)^{3r/2}
    std::size_t dilate_size = 0;
    double size_bound = 0.0;
    std::size_t lattice_count = 0;
};

/// Checks the inclusions Image(P) in V and Lambda in Image(P^T) and the size
/// inequality for a user-supplied progression; r is the dimension of V.
/// Checks only; it does not search for P.
[[nodiscard]] CoverCheck tv_cover_check(const Gap& P, const std::vector<Slab>& body, const Lattice& lattice,
                                        double c1 = 1.0, std::uint64_t budget = kDefaultGapBudget);

}  // namespace anticonc
