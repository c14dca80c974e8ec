#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anticonc {

// Error taxonomy. The CLI maps these onto exit codes (input = 2, capacity = 3).

/// An enumeration budget was exceeded; the caller should fall back to Monte Carlo.
class CapacityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Quadrature or iterative procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A Cgap body holds more lattice points than its cap m allows.
class ClassMembershipError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Atom merge tolerance for distributions built by the user (max norm).
inline constexpr double kAtomTol = 1e-12;
/// Atom merge tolerance after each convolution step (max norm).
inline constexpr double kConvTol = 1e-9;
/// Slack used for closed windows, balls and neighbourhoods.
inline constexpr double kEdgeSlack = 1e-9;

inline constexpr std::size_t kDefaultExactBudget = 20'000'000;
inline constexpr std::size_t kDefaultGapBudget = 10'000'000;

/// Points in R^d stored row-major.
struct PointCloud {
    std::size_t dim = 1;
    std::vector<double> coords;

    PointCloud() = default;
    explicit PointCloud(std::size_t d) : dim(d) {}
    PointCloud(std::size_t d, std::vector<double> c) : dim(d), coords(std::move(c)) {
        if (dim == 0 || coords.size() % dim != 0) {
            throw std::invalid_argument("PointCloud: coordinate count is not a multiple of dim");
        }
    }

    [[nodiscard]] std::size_t size() const { return coords.size() / dim; }
    [[nodiscard]] bool empty() const { return coords.empty(); }
    [[nodiscard]] std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * dim, dim};
    }
    void push_back(std::span<const double> p) { coords.insert(coords.end(), p.begin(), p.end()); }
};

[[nodiscard]] inline double max_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

[[nodiscard]] inline double max_dist(std::span<const double> x, std::span<const double> y) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

[[nodiscard]] inline double euclid_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

[[nodiscard]] inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

/// Seed for every Monte Carlo routine. Same seed and inputs give bit-identical output.
struct RngSeed {
    std::uint64_t value = 0;
};

/// SplitMix64 finaliser; used to derive independent per-instance streams.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream for instance `index` under `master`: splitmix64(master ^ splitmix64(index)).
[[nodiscard]] constexpr RngSeed derive_seed(RngSeed master, std::uint64_t index) {
    return RngSeed{splitmix64(master.value ^ splitmix64(index))};
}

/// mt19937_64 is fully specified by the standard; the std distributions are not,
/// so uniforms are built from raw bits here.
class Rng {
  public:
    explicit Rng(RngSeed seed) : engine_(splitmix64(seed.value)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

  private:
    std::mt19937_64 engine_;
};

/// Poisson variate: sequential inversion for mean <= 30, PTRS transformed rejection above.
std::uint64_t sample_poisson(Rng& rng, double mean);

}  // namespace anticonc
