#include "anticonc/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace anticonc {

void LcdParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("lcd: gamma must lie in (0, 1)");
    if (!(alpha > 0.0)) throw std::domain_error("lcd: alpha must be positive");
    if (!(tol > 0.0)) throw std::domain_error("lcd: tol must be positive");
    if (std::isnan(theta_max)) throw std::domain_error("lcd: theta_max is NaN");
    if (max_boxes == 0) throw std::domain_error("lcd: max_boxes must be positive");
}

std::vector<double> dot_product_vector(std::span<const double> t, const WeightVector& a) {
    if (t.size() != a.dim()) throw std::invalid_argument("dot_product_vector: t has wrong dimension");
    std::vector<double> v(a.n());
    for (std::size_t k = 0; k < a.n(); ++k) v[k] = dot(t, a.row(k));
    return v;
}

double dist_to_lattice(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        const double r = x - std::nearbyint(x);
        s += r * r;
    }
    return std::sqrt(s);
}

double violation_margin(std::span<const double> t, const WeightVector& a, double gamma, double alpha) {
    double dist2 = 0.0;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < a.n(); ++k) {
        const double x = dot(t, a.row(k));
        const double r = x - std::nearbyint(x);
        dist2 += r * r;
        norm2 += x * x;
    }
    return std::sqrt(dist2) - std::min(gamma * std::sqrt(norm2), alpha);
}

bool violation_condition(std::span<const double> t, const WeightVector& a, const LcdParams& params) {
    return violation_margin(t, a, params.gamma, params.alpha) < 0.0;
}

double default_theta_max(const WeightVector& a) {
    double smallest = kInf;
    for (double x : a.rows().coords) {
        if (x != 0.0) smallest = std::min(smallest, std::abs(x));
    }
    if (!std::isfinite(smallest)) return 10.0;
    return 10.0 * (1.0 + 1.0 / smallest);
}

namespace {

struct Box {
    std::vector<double> lo, hi;
    double min_norm = 0.0;
    std::uint64_t seq = 0;
};

struct BoxOrder {
    bool operator()(const Box& x, const Box& y) const {
        if (x.min_norm != y.min_norm) return x.min_norm > y.min_norm;
        return x.seq > y.seq;
    }
};

double box_min_norm(const std::vector<double>& lo, const std::vector<double>& hi) {
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double c = std::clamp(0.0, lo[i], hi[i]);
        s += c * c;
    }
    return std::sqrt(s);
}

// Pulls a violating t towards the origin along its ray; returns the closest violating point found.
std::vector<double> refine_on_ray(const std::vector<double>& t, const WeightVector& a, const LcdParams& p) {
    double lo = 0.0, hi = 1.0;
    std::vector<double> probe(t.size());
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < t.size(); ++i) probe[i] = mid * t[i];
        if (violation_margin(probe, a, p.gamma, p.alpha) < 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    for (std::size_t i = 0; i < t.size(); ++i) probe[i] = hi * t[i];
    return probe;
}

LcdResult branch_and_bound(const WeightVector& a, const LcdParams& p, double theta) {
    const std::size_t d = a.dim();
    const double lip = (1.0 + p.gamma) * operator_norm(a);
    std::vector<double> row_norm(a.n());
    for (std::size_t k = 0; k < a.n(); ++k) row_norm[k] = euclid_norm(a.row(k));
    // In 1D refining further is cheap; near-tangent roots need radius about tol / lip.
    const double min_radius = d == 1 ? p.tol / (8.0 * (1.0 + lip)) : p.tol / 8.0;

    LcdResult res;
    res.certified = true;
    res.theta_max = theta;

    double best = kInf;
    double undecided = kInf;
    auto offer = [&](const std::vector<double>& t) {
        const double nt = euclid_norm(t);
        if (nt <= theta && nt < best && violation_margin(t, a, p.gamma, p.alpha) < 0.0) {
            best = nt;
            res.witness_t = t;
        }
    };

    // The margin is even in t, so half of the cube suffices.
    std::priority_queue<Box, std::vector<Box>, BoxOrder> queue;
    std::uint64_t seq = 0;
    {
        Box root;
        root.lo.assign(d, -theta);
        root.hi.assign(d, theta);
        root.lo[0] = 0.0;
        root.min_norm = 0.0;
        root.seq = seq++;
        queue.push(std::move(root));
    }

    double stop_norm = kInf;
    std::vector<double> c(d), nearest(d);
    while (!queue.empty()) {
        Box box = queue.top();
        queue.pop();
        if (box.min_norm > theta) break;
        if (best - box.min_norm <= p.tol || res.boxes >= p.max_boxes) {
            stop_norm = box.min_norm;
            res.budget_exhausted = best - box.min_norm > p.tol;
            break;
        }
        ++res.boxes;

        double rho2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            c[i] = 0.5 * (box.lo[i] + box.hi[i]);
            const double h = 0.5 * (box.hi[i] - box.lo[i]);
            rho2 += h * h;
            nearest[i] = std::clamp(0.0, box.lo[i], box.hi[i]);
        }
        const double rho = std::sqrt(rho2);

        // Every |<t, a_k>| <= 1/2 on the box: dist = ||t.a|| there, so no violation.
        bool core = true;
        for (std::size_t k = 0; k < a.n() && core; ++k) core = std::abs(dot(c, a.row(k))) + rho * row_norm[k] <= 0.5;
        if (core) continue;

        const double m = violation_margin(c, a, p.gamma, p.alpha);
        if (m < 0.0) {
            offer(c);
            offer(refine_on_ray(c, a, p));
        }
        offer(nearest);
        if (m - lip * rho >= 1e-13) continue;

        if (rho < min_radius) {
            undecided = std::min(undecided, box.min_norm);
            continue;
        }
        std::size_t axis = 0;
        for (std::size_t i = 1; i < d; ++i) {
            if (box.hi[i] - box.lo[i] > box.hi[axis] - box.lo[axis]) axis = i;
        }
        const double mid = 0.5 * (box.lo[axis] + box.hi[axis]);
        for (int half = 0; half < 2; ++half) {
            Box child;
            child.lo = box.lo;
            child.hi = box.hi;
            if (half == 0) {
                child.hi[axis] = mid;
            } else {
                child.lo[axis] = mid;
            }
            child.min_norm = box_min_norm(child.lo, child.hi);
            if (child.min_norm > theta || child.min_norm >= best) continue;
            child.seq = seq++;
            queue.push(std::move(child));
        }
    }

    if (res.witness_t) {
        res.D_upper = best;
        res.D_lower = std::min({stop_norm, undecided, best});
        if (best - res.D_lower > p.tol) res.budget_exhausted = true;
    } else {
        res.ceiling_reached = true;
        res.D_upper = kInf;
        res.D_lower = std::min({stop_norm, undecided, theta});
        if (undecided < theta) res.budget_exhausted = true;
    }
    return res;
}

LcdResult multistart(const WeightVector& a, const LcdParams& p, double theta) {
    const std::size_t d = a.dim();
    const double lip = (1.0 + p.gamma) * operator_norm(a);
    double max_row = 0.0;
    for (std::size_t k = 0; k < a.n(); ++k) max_row = std::max(max_row, euclid_norm(a.row(k)));

    LcdResult res;
    res.certified = false;
    res.theta_max = theta;
    const double core = std::min(theta, max_row > 0.0 ? 0.5 / max_row : theta);

    // Directions: coordinate axes, normalised rows, then seeded random directions.
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> u(d, 0.0);
        u[i] = 1.0;
        dirs.push_back(std::move(u));
    }
    for (std::size_t k = 0; k < a.n(); ++k) {
        const double nr = euclid_norm(a.row(k));
        if (nr == 0.0) continue;
        std::vector<double> u(a.row(k).begin(), a.row(k).end());
        for (double& x : u) x /= nr;
        dirs.push_back(std::move(u));
    }
    Rng rng(RngSeed{0x6c6364});
    for (int j = 0; j < 512; ++j) {
        std::vector<double> u(d);
        double s = 0.0;
        for (double& x : u) {
            // Box-Muller from raw uniforms.
            x = std::sqrt(-2.0 * std::log(rng.uniform_open())) * std::cos(2.0 * kPi * rng.uniform());
            s += x * x;
        }
        s = std::sqrt(s);
        for (double& x : u) x /= s;
        dirs.push_back(std::move(u));
    }

    double best = kInf;
    std::vector<double> t(d);
    for (const auto& u : dirs) {
        double s = core;
        double prev = s;
        for (std::size_t step = 0; step < 200'000 && s <= std::min(theta, best); ++step) {
            for (std::size_t i = 0; i < d; ++i) t[i] = s * u[i];
            const double m = violation_margin(t, a, p.gamma, p.alpha);
            ++res.boxes;
            if (m < 0.0) {
                double lo = prev, hi = s;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    for (std::size_t i = 0; i < d; ++i) t[i] = mid * u[i];
                    if (violation_margin(t, a, p.gamma, p.alpha) < 0.0) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                if (hi < best) {
                    best = hi;
                    std::vector<double> w(d);
                    for (std::size_t i = 0; i < d; ++i) w[i] = hi * u[i];
                    res.witness_t = std::move(w);
                }
                break;
            }
            prev = s;
            s += std::max(m / lip, p.tol);
        }
    }
    res.D_lower = core;
    if (res.witness_t) {
        res.D_upper = best;
    } else {
        res.ceiling_reached = true;
    }
    return res;
}

}  // namespace

LcdResult compute_lcd(const WeightVector& a, const LcdParams& params) {
    params.validate();
    if (a.is_zero()) throw std::invalid_argument("compute_lcd: a must be nonzero");
    const double theta = params.theta_max > 0.0 ? params.theta_max : default_theta_max(a);
    if (a.dim() <= 3) return branch_and_bound(a, params, theta);
    return multistart(a, params, theta);
}

}  // namespace anticonc
