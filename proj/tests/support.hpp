#pragma once
// Hand-rolled generators and brute-force oracles shared by the test binaries.
// The oracles avoid the library's algorithms: plain enumeration, no pruning.

#include "anticonc/common.hpp"
#include "anticonc/distributions.hpp"
#include "anticonc/progressions.hpp"
#include "anticonc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

namespace testkit {

using namespace anticonc;

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(RngSeed{seed}) {}

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1))); }
    bool coin() { return rng_.below(2) == 1; }

    // Small scalar law with integer or half-integer atoms.
    DiscreteDistribution scalar_law(int max_atoms = 4) {
        const int k = integer(1, max_atoms);
        std::vector<double> atoms, w;
        std::set<int> used;
        while (static_cast<int>(atoms.size()) < k) {
            const int v = integer(-6, 6);
            if (!used.insert(v).second) continue;
            atoms.push_back(coin() ? v : v / 2.0);
            w.push_back(uniform(0.1, 1.0));
        }
        double s = 0;
        for (double x : w) s += x;
        for (double& x : w) x /= s;
        // Identical atoms after halving get merged by the constructor.
        return DiscreteDistribution(PointCloud(1, atoms), w);
    }

    // Law on a few points of R^d with coordinates on a coarse grid (exact sums stay exact).
    DiscreteDistribution point_law(std::size_t d, int n_atoms) {
        std::vector<double> c, w;
        for (int i = 0; i < n_atoms; ++i) {
            for (std::size_t j = 0; j < d; ++j) c.push_back(integer(-8, 8) / 4.0);
            w.push_back(uniform(0.05, 1.0));
        }
        double s = 0;
        for (double x : w) s += x;
        for (double& x : w) x /= s;
        return DiscreteDistribution(PointCloud(d, c), w);
    }

    WeightVector weights(std::size_t n, std::size_t d, double lo = -2.0, double hi = 2.0) {
        std::vector<double> rows;
        for (std::size_t i = 0; i < n * d; ++i) rows.push_back(uniform(lo, hi));
        return WeightVector(d, rows);
    }

    WeightVector grid_weights(std::size_t n, std::size_t d) {
        std::vector<double> rows;
        for (std::size_t i = 0; i < n * d; ++i) rows.push_back(integer(-4, 4) / 2.0);
        return WeightVector(d, rows);
    }

  private:
    Rng rng_;
};

// All outcomes of sum X_k a_k as (point, probability), unmerged.
inline std::vector<std::pair<std::vector<double>, double>> outcomes(const DiscreteDistribution& X,
                                                                    const WeightVector& a) {
    std::vector<std::pair<std::vector<double>, double>> cur{{std::vector<double>(a.dim(), 0.0), 1.0}};
    for (std::size_t k = 0; k < a.n(); ++k) {
        std::vector<std::pair<std::vector<double>, double>> next;
        for (const auto& [pt, w] : cur) {
            for (std::size_t i = 0; i < X.size(); ++i) {
                auto q = pt;
                for (std::size_t j = 0; j < a.dim(); ++j) q[j] += X.atom(i)[0] * a.row(k)[j];
                next.emplace_back(q, w * X.weight(i));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

// Q in one dimension: every window starting at an outcome, tested against every outcome.
inline double oracle_q_1d(const std::vector<std::pair<std::vector<double>, double>>& pts, double tau) {
    double best = 0;
    for (const auto& [x, _] : pts) {
        double m = 0;
        for (const auto& [y, w] : pts) {
            if (y[0] >= x[0] - 1e-9 && y[0] <= x[0] + tau + 1e-9) m += w;
        }
        best = std::max(best, m);
    }
    return best;
}

inline double oracle_q_1d(const DiscreteDistribution& X, const WeightVector& a, double tau) {
    return oracle_q_1d(outcomes(X, a), tau);
}

// Q in the plane: centres at points, pair midpoints and triple circumcentres.
inline double oracle_q_2d(const std::vector<std::pair<std::vector<double>, double>>& pts, double tau) {
    // Merge identical points first so the triple loop stays small.
    std::map<std::pair<long long, long long>, std::pair<std::vector<double>, double>> merged;
    for (const auto& [p, w] : pts) {
        const auto key = std::make_pair(std::llround(p[0] * 1e8), std::llround(p[1] * 1e8));
        auto& slot = merged[key];
        if (slot.first.empty()) slot.first = p;
        slot.second += w;
    }
    std::vector<std::pair<std::vector<double>, double>> u;
    for (auto& [_, v] : merged) u.push_back(v);
    const double r = tau / 2.0 + 1e-9;
    auto mass_at = [&](double cx, double cy) {
        double m = 0;
        for (const auto& [p, w] : u) {
            if (std::hypot(p[0] - cx, p[1] - cy) <= r) m += w;
        }
        return m;
    };
    double best = 0;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::max(best, mass_at(u[i].first[0], u[i].first[1]));
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& p = u[i].first;
            const auto& q = u[j].first;
            if (std::hypot(p[0] - q[0], p[1] - q[1]) > tau + 1e-9) continue;
            best = std::max(best, mass_at((p[0] + q[0]) / 2, (p[1] + q[1]) / 2));
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto& s = u[k].first;
                const double ax = p[0], ay = p[1], bx = q[0], by = q[1], cx = s[0], cy = s[1];
                const double D = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if (std::abs(D) < 1e-14) continue;
                const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
                const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / D;
                const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / D;
                if (std::hypot(ux - ax, uy - ay) > r) continue;
                best = std::max(best, mass_at(ux, uy));
            }
        }
    }
    return best;
}

// Image of a scalar GAP by direct enumeration, deduplicated at 1e-9.
inline std::vector<double> oracle_gap_image(const std::vector<int>& L, const std::vector<double>& g) {
    std::vector<double> vals{0.0};
    for (std::size_t j = 0; j < L.size(); ++j) {
        std::vector<double> next;
        for (double v : vals) {
            for (int m = -L[j]; m <= L[j]; ++m) next.push_back(v + m * g[j]);
        }
        vals = std::move(next);
    }
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double v : vals) {
        if (out.empty() || v - out.back() > 1e-9) out.push_back(v);
    }
    return out;
}

// Nearest-integer distance by scanning floor and ceil per coordinate.
inline double oracle_dist_to_lattice(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) {
        const double f = std::floor(x);
        const double d = std::min(x - f, f + 1 - x);
        s += d * d;
    }
    return std::sqrt(s);
}

inline double oracle_margin(const std::vector<double>& t, const WeightVector& a, double gamma, double alpha) {
    std::vector<double> v(a.n());
    double norm2 = 0;
    for (std::size_t k = 0; k < a.n(); ++k) {
        double s = 0;
        for (std::size_t j = 0; j < a.dim(); ++j) s += t[j] * a.row(k)[j];
        v[k] = s;
        norm2 += s * s;
    }
    return oracle_dist_to_lattice(v) - std::min(gamma * std::sqrt(norm2), alpha);
}

}  // namespace testkit
