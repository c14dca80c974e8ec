#include "anticonc/concentration.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace anticonc {

std::string to_string(QMethod m) {
    switch (m) {
        case QMethod::exact: return "exact";
        case QMethod::monte_carlo: return "monte_carlo";
        case QMethod::esseen_upper: return "esseen_upper";
    }
    return "unknown";
}

double max_window_mass(std::span<const double> xs, std::span<const double> weights, double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("window length tau must be nonnegative");
    const std::size_t n = xs.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + weights[i];
    double best = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (j < i) j = i;
        while (j + 1 < n && xs[j + 1] - xs[i] <= tau + kEdgeSlack) ++j;
        best = std::max(best, prefix[j + 1] - prefix[i]);
    }
    return best;
}

namespace {

struct Neighbourhoods {
    // nb[i] lists j != i with ||x_i - x_j|| <= radius (Euclidean).
    std::vector<std::vector<std::size_t>> nb;
};

Neighbourhoods build_neighbourhoods(const PointCloud& pts, double radius, std::size_t budget) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return pts.point(i)[0] < pts.point(j)[0]; });
    Neighbourhoods out;
    out.nb.resize(n);
    std::size_t work = 0;
    const double r2 = radius * radius;
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = order[a];
        const auto pi = pts.point(i);
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t j = order[b];
            const auto pj = pts.point(j);
            if (pj[0] - pi[0] > radius) break;
            if (++work > budget) throw CapacityError("ball search: neighbour enumeration exceeds budget");
            double s = 0.0;
            for (std::size_t c = 0; c < pts.dim; ++c) s += (pi[c] - pj[c]) * (pi[c] - pj[c]);
            if (s <= r2) {
                out.nb[i].push_back(j);
                out.nb[j].push_back(i);
            }
        }
    }
    for (auto& v : out.nb) std::sort(v.begin(), v.end());
    return out;
}

// Circumcentre of the points (in their affine hull). False when affinely dependent.
bool circumcentre(const PointCloud& pts, std::span<const std::size_t> idx, std::vector<double>& centre,
                  double& radius) {
    const std::size_t d = pts.dim;
    const std::size_t k = idx.size() - 1;
    const auto p0 = pts.point(idx[0]);
    centre.assign(p0.begin(), p0.end());
    if (k == 0) {
        radius = 0.0;
        return true;
    }
    Eigen::MatrixXd U(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < k; ++r) {
        const auto p = pts.point(idx[r + 1]);
        for (std::size_t c = 0; c < d; ++c) U(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = p[c] - p0[c];
    }
    const Eigen::MatrixXd G = U * U.transpose();
    const Eigen::VectorXd rhs = 0.5 * G.diagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    lu.setThreshold(1e-12);
    if (lu.rank() < static_cast<Eigen::Index>(k)) return false;
    const Eigen::VectorXd lam = lu.solve(rhs);
    const Eigen::VectorXd off = U.transpose() * lam;
    for (std::size_t c = 0; c < d; ++c) centre[c] += off(static_cast<Eigen::Index>(c));
    radius = off.norm();
    return true;
}

// Point-in-ball tests allowed per unit of the caller's atom budget.
constexpr std::size_t kTestsPerBudgetUnit = 64;

class BallSearch {
  public:
    BallSearch(const PointCloud& pts, std::span<const double> weights, double tau, std::size_t budget)
        : pts_(pts), w_(weights), rho_(tau / 2.0), budget_(kTestsPerBudgetUnit * budget) {
        nbh_ = build_neighbourhoods(pts_, tau + kEdgeSlack, budget_);
    }

    double run() {
        // A ball whose lowest-index atom is i holds at most i and its neighbours.
        const std::size_t n = pts_.size();
        std::vector<double> cap(n);
        for (std::size_t i = 0; i < n; ++i) {
            cap[i] = w_[i];
            for (std::size_t j : nbh_.nb[i]) cap[i] += w_[j];
            best_ = std::max(best_, w_[i]);
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cap[x] > cap[y]; });
        for (std::size_t i : order) {
            if (cap[i] <= best_) break;
            subset_.assign(1, i);
            extend(i, 0);
        }
        return best_;
    }

  private:
    void evaluate() {
        work_ += 1 + nbh_.nb[subset_[0]].size();
        if (work_ > budget_) throw CapacityError("ball search: point-in-ball tests exceed budget");
        double radius = 0.0;
        if (!circumcentre(pts_, subset_, centre_, radius)) return;
        if (radius > rho_ + kEdgeSlack) return;
        const double lim = (rho_ + kEdgeSlack) * (rho_ + kEdgeSlack);
        const std::size_t i = subset_[0];
        double mass = within(i, lim) ? w_[i] : 0.0;
        for (std::size_t j : nbh_.nb[i]) {
            if (within(j, lim)) mass += w_[j];
        }
        best_ = std::max(best_, mass);
    }

    // Mass of i, j and their common neighbours: every ball through i and j lies there.
    double lens_mass(std::size_t i, std::size_t j) {
        const auto& a = nbh_.nb[i];
        const auto& b = nbh_.nb[j];
        work_ += a.size() + b.size();
        if (work_ > budget_) throw CapacityError("ball search: point-in-ball tests exceed budget");
        double m = w_[i] + w_[j];
        auto x = a.begin();
        auto y = b.begin();
        while (x != a.end() && y != b.end()) {
            if (*x < *y) {
                ++x;
            } else if (*y < *x) {
                ++y;
            } else {
                m += w_[*x];
                ++x;
                ++y;
            }
        }
        return m;
    }

    bool within(std::size_t j, double lim2) const {
        const auto p = pts_.point(j);
        double s = 0.0;
        for (std::size_t c = 0; c < pts_.dim; ++c) s += (p[c] - centre_[c]) * (p[c] - centre_[c]);
        return s <= lim2;
    }

    // Grow subset_ with neighbours of subset_[0] that are larger than the last
    // index and close to every member.
    void extend(std::size_t root, std::size_t pos) {
        if (subset_.size() == 2 && lens_mass(subset_[0], subset_[1]) <= best_) return;
        if (subset_.size() >= 2) evaluate();
        if (subset_.size() == pts_.dim + 1) return;
        const auto& cand = nbh_.nb[root];
        const std::size_t last = subset_.back();
        for (std::size_t q = pos; q < cand.size(); ++q) {
            const std::size_t j = cand[q];
            if (j <= last) continue;
            bool ok = true;
            for (std::size_t m = 1; m < subset_.size() && ok; ++m) {
                ok = std::binary_search(nbh_.nb[subset_[m]].begin(), nbh_.nb[subset_[m]].end(), j);
            }
            if (!ok) continue;
            subset_.push_back(j);
            extend(root, q + 1);
            subset_.pop_back();
        }
    }

    const PointCloud& pts_;
    std::span<const double> w_;
    double rho_;
    std::size_t budget_;
    Neighbourhoods nbh_;
    std::vector<std::size_t> subset_;
    std::vector<double> centre_;
    double best_ = 0.0;
    std::size_t work_ = 0;
};

double q_of_distribution(const DiscreteDistribution& F, double tau, std::size_t budget) {
    if (F.dim() == 1) return max_window_mass(F.atoms().coords, F.weights(), tau);
    return max_ball_mass(F, tau, budget);
}

}  // namespace

double max_ball_mass(const DiscreteDistribution& F, double tau, std::size_t budget) {
    if (!(tau >= 0.0)) throw std::domain_error("ball diameter tau must be nonnegative");
    BallSearch search(F.atoms(), F.weights(), tau, budget);
    return search.run();
}

ConcentrationEstimate exact_Q_1d(const DiscreteDistribution& X, const WeightVector& a, double tau,
                                 std::size_t budget) {
    if (a.dim() != 1) throw std::invalid_argument("exact_Q_1d: weights must be one-dimensional");
    if (!(tau >= 0.0)) throw std::domain_error("exact_Q_1d: tau must be nonnegative");
    const DiscreteDistribution S = weighted_sum_distribution(X, a, budget);
    return {max_window_mass(S.atoms().coords, S.weights(), tau), QMethod::exact, 0.0, tau};
}

ConcentrationEstimate exact_Q_multid(const DiscreteDistribution& X, const WeightVector& a, double tau,
                                     std::size_t budget) {
    if (a.dim() < 2 || a.dim() > 4) throw std::invalid_argument("exact_Q_multid: requires 2 <= d <= 4");
    if (!(tau >= 0.0)) throw std::domain_error("exact_Q_multid: tau must be nonnegative");
    const DiscreteDistribution S = weighted_sum_distribution(X, a, budget);
    return {max_ball_mass(S, tau, budget), QMethod::exact, 0.0, tau};
}

ConcentrationEstimate exact_Q(const DiscreteDistribution& X, const WeightVector& a, double tau, std::size_t budget) {
    return a.dim() == 1 ? exact_Q_1d(X, a, tau, budget) : exact_Q_multid(X, a, tau, budget);
}

PointCloud draw_samples(const Sampler& sampler, std::size_t n_samples, RngSeed seed) {
    if (const auto* cp = std::get_if<CompoundPoisson>(&sampler)) return cp_sample(*cp, n_samples, seed);
    const auto& ws = std::get<WeightedSumSampler>(sampler);
    const std::size_t d = ws.a.dim();
    PointCloud out(d);
    out.coords.assign(n_samples * d, 0.0);
    Rng rng(seed);
    const AtomSampler pick(ws.X);
    for (std::size_t s = 0; s < n_samples; ++s) {
        double* dst = out.coords.data() + s * d;
        for (std::size_t k = 0; k < ws.a.n(); ++k) {
            const double x = ws.X.atom(pick(rng))[0];
            const auto row = ws.a.row(k);
            for (std::size_t c = 0; c < d; ++c) dst[c] += x * row[c];
        }
    }
    return out;
}

double sample_concentration(const PointCloud& samples, double tau) {
    const std::size_t n = samples.size();
    if (n == 0) throw std::invalid_argument("sample_concentration: empty sample");
    if (samples.dim == 1) {
        std::vector<double> xs = samples.coords;
        std::sort(xs.begin(), xs.end());
        std::size_t best = 0;
        std::size_t j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (j < i) j = i;
            while (j + 1 < n && xs[j + 1] - xs[i] <= tau + kEdgeSlack) ++j;
            best = std::max(best, j - i + 1);
        }
        return static_cast<double>(best) / static_cast<double>(n);
    }
    // Collapse exact duplicates, then score centres at distinct points and at
    // midpoints of pairs within tau.
    const std::size_t d = samples.dim;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const auto p = samples.point(i);
        const auto q = samples.point(j);
        return std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end());
    });
    PointCloud distinct(d);
    std::vector<double> counts;
    for (std::size_t idx : order) {
        const auto p = samples.point(idx);
        if (!counts.empty()) {
            const auto q = distinct.point(counts.size() - 1);
            if (std::equal(p.begin(), p.end(), q.begin())) {
                counts.back() += 1.0;
                continue;
            }
        }
        distinct.push_back(p);
        counts.push_back(1.0);
    }
    const double rho = tau / 2.0;
    const double lim2 = (rho + kEdgeSlack) * (rho + kEdgeSlack);
    const auto nbh = build_neighbourhoods(distinct, tau + kEdgeSlack, std::size_t{1} << 40);
    double best = 0.0;
    std::vector<double> centre(d);
    auto score = [&](std::size_t i) {
        double m = 0.0;
        auto add = [&](std::size_t j) {
            const auto p = distinct.point(j);
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += (p[c] - centre[c]) * (p[c] - centre[c]);
            if (s <= lim2) m += counts[j];
        };
        add(i);
        for (std::size_t j : nbh.nb[i]) add(j);
        best = std::max(best, m);
    };
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto p = distinct.point(i);
        std::copy(p.begin(), p.end(), centre.begin());
        score(i);
        for (std::size_t j : nbh.nb[i]) {
            if (j <= i) continue;
            const auto q = distinct.point(j);
            for (std::size_t c = 0; c < d; ++c) centre[c] = 0.5 * (p[c] + q[c]);
            score(i);
        }
    }
    return best / static_cast<double>(n);
}

ConcentrationEstimate mc_Q(const Sampler& sampler, double tau, std::size_t n_samples, RngSeed seed) {
    if (n_samples < 1000) throw std::invalid_argument("mc_Q: at least 1000 samples are required");
    if (!(tau >= 0.0)) throw std::domain_error("mc_Q: tau must be nonnegative");
    const PointCloud samples = draw_samples(sampler, n_samples, seed);
    const double v = sample_concentration(samples, tau);
    const double se = std::sqrt(std::max(0.0, v * (1.0 - v)) / static_cast<double>(n_samples));
    return {v, QMethod::monte_carlo, se, tau};
}

namespace {

constexpr std::size_t kGaussOrder = 8;

struct GaussRule {
    std::array<double, kGaussOrder> x{};
    std::array<double, kGaussOrder> w{};
};

const GaussRule& gauss_legendre() {
    static const GaussRule rule = [] {
        GaussRule g;
        const std::size_t n = kGaussOrder;
        for (std::size_t i = 0; i < n; ++i) {
            double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = z;
                for (std::size_t k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = pk;
                }
                dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            g.x[i] = z;
            g.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return g;
    }();
    return rule;
}

struct SimpsonState {
    const std::function<double(double)>* f;
    int failures = 0;
};

double adaptive_simpson(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0) {
        ++st.failures;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(st, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           adaptive_simpson(st, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi, std::size_t panels,
                    double rel_tol) {
    SimpsonState st{&f};
    const double h = (hi - lo) / static_cast<double>(panels);
    // Coarse pass to scale the absolute tolerance.
    double coarse = 0.0;
    std::vector<std::array<double, 3>> fv(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + h * static_cast<double>(p);
        const double b = (p + 1 == panels) ? hi : a + h;
        fv[p] = {f(a), f(0.5 * (a + b)), f(b)};
        coarse += (b - a) / 6.0 * (fv[p][0] + 4.0 * fv[p][1] + fv[p][2]);
    }
    const double eps = rel_tol * std::max(std::abs(coarse), 1e-300) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + h * static_cast<double>(p);
        const double b = (p + 1 == panels) ? hi : a + h;
        const double whole = (b - a) / 6.0 * (fv[p][0] + 4.0 * fv[p][1] + fv[p][2]);
        total += adaptive_simpson(st, a, b, fv[p][0], fv[p][1], fv[p][2], whole, eps, 48);
    }
    if (st.failures > 0) {
        std::ostringstream msg;
        msg << "adaptive Simpson did not converge on " << st.failures << " subintervals";
        throw NumericError(msg.str());
    }
    return total;
}

// Integral of f over the ball of radius R in R^d (d >= 2), hyperspherical
// coordinates, composite Gauss-Legendre with `panels` panels per coordinate.
double integrate_ball(const std::function<double(std::span<const double>)>& f, std::size_t d, double R,
                      std::size_t panels) {
    const GaussRule& g = gauss_legendre();
    // Coordinates: r in [0, R], phi_1..phi_{d-2} in [0, pi], phi_{d-1} in [0, 2 pi].
    std::vector<double> lo(d, 0.0);
    std::vector<double> hi(d, kPi);
    hi[0] = R;
    hi[d - 1] = 2.0 * kPi;
    const std::size_t per_axis = panels * kGaussOrder;
    std::vector<std::vector<double>> nodes(d), weights(d);
    for (std::size_t c = 0; c < d; ++c) {
        const double h = (hi[c] - lo[c]) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double a = lo[c] + h * static_cast<double>(p);
            for (std::size_t q = 0; q < kGaussOrder; ++q) {
                nodes[c].push_back(a + 0.5 * h * (g.x[q] + 1.0));
                weights[c].push_back(0.5 * h * g.w[q]);
            }
        }
    }
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> t(d);
    double total = 0.0;
    for (;;) {
        const double r = nodes[0][idx[0]];
        double jac = std::pow(r, static_cast<double>(d - 1)) * weights[0][idx[0]];
        double sprod = r;
        for (std::size_t c = 1; c < d; ++c) {
            const double phi = nodes[c][idx[c]];
            jac *= weights[c][idx[c]];
            if (c + 1 < d) jac *= std::pow(std::sin(phi), static_cast<double>(d - 1 - c));
            t[c - 1] = sprod * std::cos(phi);
            sprod *= std::sin(phi);
        }
        t[d - 1] = sprod;
        total += jac * f(t);
        std::size_t c = 0;
        while (c < d && ++idx[c] == per_axis) {
            idx[c] = 0;
            ++c;
        }
        if (c == d) break;
    }
    return total;
}

}  // namespace

ConcentrationEstimate esseen_upper_Q(const CharFn& F_hat, double tau, std::size_t d, double c_esseen,
                                     double frequency_scale) {
    if (!(tau > 0.0)) throw std::domain_error("esseen_upper_Q: tau must be positive");
    if (d == 0) throw std::domain_error("esseen_upper_Q: dimension must be >= 1");
    if (!(c_esseen > 0.0)) throw std::domain_error("esseen_upper_Q: c_esseen must be positive");
    const double R = 1.0 / tau;
    const double oscillations = R * std::max(frequency_scale, 1e-12) / kPi;
    double integral = 0.0;
    if (d == 1) {
        std::vector<double> t(1);
        const std::function<double(double)> f = [&](double s) {
            t[0] = s;
            return std::abs(F_hat(t));
        };
        const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(4.0 * oscillations), 16.0, 1e6));
        // |F^(-t)| = |F^(t)|.
        integral = 2.0 * integrate_1d(f, 0.0, R, panels, 1e-8);
    } else {
        const std::function<double(std::span<const double>)> f = [&](std::span<const double> t) {
            return std::abs(F_hat(t));
        };
        auto panels = static_cast<std::size_t>(std::clamp(std::ceil(oscillations), 2.0, 64.0));
        if (d >= 3) panels = std::min<std::size_t>(panels, 8);
        double prev = integrate_ball(f, d, R, panels);
        bool converged = false;
        const std::size_t max_panels = d == 2 ? 256 : (d == 3 ? 32 : 12);
        while (panels * 2 <= max_panels) {
            panels *= 2;
            const double cur = integrate_ball(f, d, R, panels);
            if (std::abs(cur - prev) <= 1e-5 * std::abs(cur)) {
                prev = cur;
                converged = true;
                break;
            }
            prev = cur;
        }
        if (!converged) throw NumericError("esseen_upper_Q: ball quadrature did not reach relative 1e-5");
        integral = prev;
    }
    const double value = c_esseen * std::pow(tau, static_cast<double>(d)) * integral;
    return {value, QMethod::esseen_upper, 0.0, tau};
}

CharFn weighted_sum_char_fn(const DiscreteDistribution& X, const WeightVector& a) {
    if (X.dim() != 1) throw std::invalid_argument("weighted_sum_char_fn: X must be real-valued");
    return [X, a](std::span<const double> t) {
        std::complex<double> prod{1.0, 0.0};
        std::array<double, 1> s{};
        for (std::size_t k = 0; k < a.n(); ++k) {
            s[0] = dot(t, a.row(k));
            prod *= char_fn(X, s);
        }
        return prod;
    };
}

RegularityWitness regularity_check(const DiscreteDistribution& F, double mu, double lambda) {
    if (!(mu > 0.0) || !(lambda > 0.0)) throw std::domain_error("regularity_check: mu and lambda must be positive");
    const double q_mu = q_of_distribution(F, mu, kDefaultExactBudget);
    const double q_lambda = q_of_distribution(F, lambda, kDefaultExactBudget);
    const double factor = std::pow(1.0 + std::floor(mu / lambda), static_cast<double>(F.dim()));
    RegularityWitness w;
    w.lhs = q_mu;
    w.rhs = factor * q_lambda;
    w.holds = w.lhs <= w.rhs * (1.0 + 1e-12) + 1e-15;
    return w;
}

RegularityWitness regularity_check(const DiscreteDistribution& X, const WeightVector& a, double mu, double lambda,
                                   std::size_t budget) {
    return regularity_check(weighted_sum_distribution(X, a, budget), mu, lambda);
}

}  // namespace anticonc
