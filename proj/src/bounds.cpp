#include "anticonc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anticonc {

namespace {

using Field = double ConstantsConfig::*;

const std::vector<std::pair<std::string, Field>>& constant_fields() {
    static const std::vector<std::pair<std::string, Field>> fields = {
        {"c1", &ConstantsConfig::c1},         {"c2", &ConstantsConfig::c2},
        {"c3", &ConstantsConfig::c3},         {"c4", &ConstantsConfig::c4},
        {"c5", &ConstantsConfig::c5},         {"c6", &ConstantsConfig::c6},
        {"c7", &ConstantsConfig::c7},         {"c8", &ConstantsConfig::c8},
        {"c9", &ConstantsConfig::c9},         {"c10", &ConstantsConfig::c10},
        {"c11", &ConstantsConfig::c11},       {"c12", &ConstantsConfig::c12},
        {"c", &ConstantsConfig::c},           {"c_esseen", &ConstantsConfig::c_esseen},
        {"c_d", &ConstantsConfig::c_d},       {"c_guard", &ConstantsConfig::c_guard},
        {"c_exp35", &ConstantsConfig::c_exp35},
    };
    return fields;
}

Field find_field(const std::string& name) {
    for (const auto& [key, field] : constant_fields()) {
        if (key == name) return field;
    }
    throw std::invalid_argument("unknown constant '" + name + "'");
}

// x^k by repeated multiplication, so the result is monotone in x >= 0.
double ipow(double x, std::size_t k) {
    double y = 1.0;
    for (std::size_t i = 0; i < k; ++i) y *= x;
    return y;
}

// prefactor (first / (cap sqrt(x)) + (r+1)^{5r/2} / x^{(r+1)/2}); +inf unless x > 0.
double arak_shape(double prefactor, double first, double cap, double x, std::size_t r) {
    if (!(x > 0.0)) return kInf;
    const double rr = static_cast<double>(r);
    const double second = std::pow(rr + 1.0, 2.5 * rr) / std::pow(x, 0.5 * (rr + 1.0));
    return prefactor * (first / (cap * std::sqrt(x)) + second);
}

double floor_factor(double kappa, double delta) {
    if (!(kappa > 0.0) || !(delta > 0.0)) throw std::domain_error("kappa and delta must be positive");
    return 1.0 + std::floor(kappa / delta);
}

// (1 / (gamma D sqrt(b)))^d / sqrt(det A).
double lcd_first_term(double b, double gamma, double D, double detA, std::size_t d) {
    if (!(b > 0.0) || !(detA > 0.0) || !(D > 0.0) || !(gamma > 0.0)) return kInf;
    return ipow(1.0 / (gamma * D * std::sqrt(b)), d) / std::sqrt(detA);
}

}  // namespace

const std::vector<std::string>& ConstantsConfig::names() {
    static const std::vector<std::string> list = [] {
        std::vector<std::string> out;
        for (const auto& f : constant_fields()) out.push_back(f.first);
        return out;
    }();
    return list;
}

double ConstantsConfig::get(const std::string& name) const { return this->*find_field(name); }

void ConstantsConfig::set(const std::string& name, double value) {
    const Field f = find_field(name);
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error("constant '" + name + "' must be a positive finite number");
    }
    this->*f = value;
}

void ConstantsConfig::validate() const {
    for (const auto& [key, field] : constant_fields()) {
        const double v = this->*field;
        if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error("constant '" + key + "' must be positive");
    }
}

BoundValue make_bound(double value) {
    BoundValue b;
    b.value = value;
    b.vacuous = !std::isfinite(value) || value > 1.0;
    return b;
}

BoundValue bound_arak_T16(double alpha, double beta, std::size_t r, std::uint64_t m, double c2) {
    if (m == 0) throw std::domain_error("bound_arak_T16: m must be >= 1");
    return make_bound(
        arak_shape(std::pow(c2, static_cast<double>(r + 1)), 1.0, static_cast<double>(m), alpha * beta, r));
}

BoundValue bound_T17(double kappa, double delta, std::size_t r, std::uint64_t m, std::size_t n, double p_val,
                     double beta_star, double c3) {
    if (m == 0) throw std::domain_error("bound_T17: m must be >= 1");
    const double pre = std::pow(c3, static_cast<double>(r + 1)) * floor_factor(kappa, delta);
    return make_bound(arak_shape(pre, 1.0, static_cast<double>(m), static_cast<double>(n) * p_val * beta_star, r));
}

GuardedBound bound_T18(double kappa, double delta, std::size_t r, std::uint64_t m, std::size_t n, double beta_star,
                       double lambda1, double c4, double c_guard) {
    if (m == 0) throw std::domain_error("bound_T18: m must be >= 1");
    const double pre = std::pow(c4, static_cast<double>(r + 1)) * floor_factor(kappa, delta);
    GuardedBound g;
    g.bound = make_bound(arak_shape(pre, 1.0, static_cast<double>(m), static_cast<double>(n) * beta_star, r));
    g.guard_value = lambda1;
    g.guard_ok = lambda1 >= c_guard;
    return g;
}

BoundValue bound_T110(double alpha, double gamma_val, std::size_t r, std::uint64_t s, double c5, double c6) {
    if (s == 0) throw std::domain_error("bound_T110: s must be >= 1");
    const double rr = static_cast<double>(r);
    const double first = std::pow(c6 * rr + 1.0, 1.5 * rr * rr);
    return make_bound(arak_shape(std::pow(c5, rr + 1.0), first, static_cast<double>(s), alpha * gamma_val, r));
}

GuardedBound bound_T111(double kappa, double delta, std::size_t r, std::uint64_t s, std::size_t n, double gamma_star,
                        double lambda1, double c7, double c8, double c_guard) {
    if (s == 0) throw std::domain_error("bound_T111: s must be >= 1");
    const double rr = static_cast<double>(r);
    const double pre = std::pow(c7, rr + 1.0) * floor_factor(kappa, delta);
    const double first = std::pow(c8 * rr + 1.0, 1.5 * rr * rr);
    GuardedBound g;
    g.bound = make_bound(arak_shape(pre, first, static_cast<double>(s), static_cast<double>(n) * gamma_star, r));
    g.guard_value = lambda1;
    g.guard_ok = lambda1 >= c_guard;
    return g;
}

BoundValue bound_lemma13(double q_h, double c_d) { return make_bound(c_d * q_h); }

BoundValue bound_cor14(double q_h_delta, double kappa, double delta, std::size_t d, double c_d) {
    return make_bound(c_d * ipow(floor_factor(kappa, delta), d) * q_h_delta);
}

BoundValue bound_lemma15(double q_h_lambda, double lambda, double c_d) {
    if (!(lambda > 0.0)) return make_bound(kInf);
    return make_bound(c_d * q_h_lambda / lambda);
}

BoundValue bound_T31(double b, double gamma, double D, double alpha, double detA, std::size_t d, double c_d) {
    const double first = lcd_first_term(b, gamma, D, detA, d);
    return make_bound(c_d * (first + std::exp(-4.0 * b * alpha * alpha)));
}

TauDFunctionals functionals_at(const DiscreteDistribution& G, double rho, unsigned d) {
    if (!(rho >= 0.0)) throw std::domain_error("functionals_at: rho must be nonnegative");
    TauDFunctionals f;
    if (rho == 0.0) {
        f.p = tail_mass_p(G, 0.0);
        f.lambda = f.p;
        f.M = f.p;
        return f;
    }
    f.lambda = lambda_d(G, rho, d);
    f.p = tail_mass_p(G, rho);
    f.M = truncated_second_moment_M(G, rho);
    return f;
}

TauDFunctionals taud_functionals(const DiscreteDistribution& G, double tau, double D, unsigned d) {
    return functionals_at(G, tau * D, d);
}

bool LcdBounds::dominance_holds() const {
    if (T34.vacuous || T35.vacuous) return true;
    return T35.value <= T34.value;
}

LcdBounds bound_T33_T34_T35(const TauDFunctionals& f, double gamma, double D, double alpha, double detA,
                            std::size_t d, const ConstantsConfig& constants) {
    const double a2 = alpha * alpha;
    LcdBounds out;
    {
        const double first = lcd_first_term(f.lambda, gamma, D, detA, d);
        const double v = f.lambda > 0.0 ? (first + std::exp(-4.0 * f.lambda * a2)) / f.lambda : kInf;
        out.T33 = make_bound(constants.c_d * v);
    }
    out.T34 = make_bound(constants.c_d * (lcd_first_term(f.p, gamma, D, detA, d) + std::exp(-4.0 * f.p * a2)));
    out.T35 = make_bound(constants.c_d *
                         (lcd_first_term(f.M, gamma, D, detA, d) + std::exp(-constants.c_exp35 * f.M * a2)));
    return out;
}

ConcentrationEstimate q_h_power_mc(const WeightVector& a, double b, double kappa, std::size_t n_samples,
                                   RngSeed seed) {
    return mc_Q(Sampler{h_power(a, b)}, kappa, n_samples, seed);
}

bool cosine_inequality_holds(double x) {
    const double s = std::sin(0.5 * x);
    return 2.0 * s * s >= 2.0 * x * x / (kPi * kPi) - 1e-12;
}

ChainReport verify_pointwise_chain(const WeightVector& a, const PointCloud& t_grid, double gamma, double alpha,
                                   double D) {
    if (t_grid.dim != a.dim()) throw std::invalid_argument("verify_pointwise_chain: grid dimension mismatch");
    constexpr double slack = 1e-12;
    const double two_pi = 2.0 * kPi;
    ChainReport rep;
    std::vector<double> s(a.dim());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto t = t_grid.point(i);
        ++rep.points;
        auto fail = [&](const char* which, double lhs, double rhs) {
            rep.violation = ChainViolation{std::vector<double>(t.begin(), t.end()), which, lhs, rhs};
        };
        for (std::size_t k = 0; k < a.n(); ++k) {
            const double x = std::remainder(dot(t, a.row(k)), two_pi);
            ++rep.cosine_checks;
            if (!cosine_inequality_holds(x)) {
                const double h = std::sin(0.5 * x);
                fail("cosine", 2.0 * h * h, 2.0 * x * x / (kPi * kPi));
                return rep;
            }
        }
        const double h = h_char_fn(a, t);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] = t[j] / two_pi;
        const std::vector<double> v = dot_product_vector(s, a);
        const double dist = dist_to_lattice(v);
        const double rhs = std::exp(-4.0 * dist * dist);
        if (!(h <= rhs + slack)) {
            fail("lattice", h, rhs);
            return rep;
        }
        if (euclid_norm(t) <= two_pi * D) {
            if (violation_margin(s, a, gamma, alpha) < 0.0) {
                ++rep.premise_failures;
                continue;
            }
            ++rep.lcd_checks;
            const double mn = std::min(gamma * euclid_norm(v), alpha);
            const double rhs3 = std::exp(-4.0 * mn * mn);
            if (!(h <= rhs3 + slack)) {
                fail("lcd", h, rhs3);
                return rep;
            }
        }
    }
    return rep;
}

PointCloud make_t_grid(std::size_t d, double radius, std::size_t count, RngSeed seed) {
    if (d == 0) throw std::invalid_argument("make_t_grid: d must be positive");
    if (!(radius >= 0.0)) throw std::domain_error("make_t_grid: radius must be nonnegative");
    PointCloud grid(d);
    if (count == 0) return grid;
    if (d == 1) {
        if (count == 1) {
            grid.coords.push_back(0.0);
            return grid;
        }
        for (std::size_t i = 0; i < count; ++i) {
            grid.coords.push_back(-radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return grid;
    }
    Rng rng(seed);
    grid.coords.assign(d, 0.0);
    std::vector<double> u(d);
    for (std::size_t i = 1; i < count; ++i) {
        double norm = 0.0;
        do {
            norm = 0.0;
            for (double& x : u) {
                x = std::sqrt(-2.0 * std::log(rng.uniform_open())) * std::cos(2.0 * kPi * rng.uniform());
                norm += x * x;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        const double rad = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        for (double x : u) grid.coords.push_back(rad * x / norm);
    }
    return grid;
}

InverseReport inverse_principle_report(const DiscreteDistribution& X, const WeightVector& a, double q,
                                       const InverseInputs& in, const ConstantsConfig& constants) {
    if (a.dim() != 1) throw std::invalid_argument("inverse_principle_report: scalar weights only");
    if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("inverse_principle_report: q must lie in (0, 1]");
    if (!(in.tau > 0.0) || !(in.kappa > 0.0) || !(in.delta > 0.0)) {
        throw std::domain_error("inverse_principle_report: tau, kappa, delta must be positive");
    }
    const double n = static_cast<double>(a.n());
    const DiscreteDistribution G = symmetrize(X);

    InverseReport rep;
    rep.q = q;
    rep.p = tail_mass_p(G, in.tau / in.kappa);
    rep.lambda1 = lambda_d(G, in.tau / in.kappa, 1);
    rep.guard_ok = rep.lambda1 >= constants.c_guard;
    rep.n_prime = in.n_prime > 0.0 ? in.n_prime : n;

    const double rr = static_cast<double>(in.r);
    const double c9r = std::pow(constants.c9, rr + 1.0);
    const double r5 = std::pow(rr + 1.0, 2.5 * rr);
    const double kd = in.kappa / in.delta;
    const double L = std::abs(std::log(q)) + std::log(kd) + 1.0;
    auto inv = [](double x) { return x > 0.0 ? 1.0 / x : kInf; };

    const double base = std::pow(2.0 * c9r * r5 * kd / q, 2.0 / (rr + 1.0));
    rep.n_prime_min_p = base * inv(rep.p);
    rep.n_prime_min_lambda = base * inv(rep.lambda1);
    auto m_budget = [&](double mass) {
        return mass > 0.0 ? 2.0 * c9r * kd / (q * std::sqrt(mass * rep.n_prime)) + 1.0 : kInf;
    };
    rep.m_budget_p = m_budget(rep.p);
    rep.m_budget_lambda = m_budget(rep.lambda1);
    rep.size_budget = std::max(constants.c / (q * std::sqrt(rep.n_prime)), 1.0);
    rep.rank_budget = constants.c * L;
    rep.uncovered_budget_p = constants.c * L * L * L * inv(rep.p);
    rep.uncovered_budget_lambda = constants.c * L * L * L * inv(rep.lambda1);
    auto general = [&](double mass) {
        return mass > 0.0 ? std::max(constants.c * kd / (q * std::sqrt(rep.n_prime * mass)), 1.0) : kInf;
    };
    rep.size_budget_general_p = general(rep.p);
    rep.size_budget_general_lambda = general(rep.lambda1);
    // With b_n = n, A = |log q| / log n and B = log(kappa/delta) / log n, (A + B) log b_n + 1 = L.
    rep.log_rank_budget = constants.c * L;
    rep.log_uncovered_budget_p = constants.c * L * L * L * inv(rep.p);
    rep.log_uncovered_budget_lambda = constants.c * L * L * L * inv(rep.lambda1);

    if (in.s > 0) {
        rep.witness_cap = in.s;
    } else {
        const double m = std::min(rep.m_budget_p, rep.m_budget_lambda);
        const double fallback = 2.0 * n + 1.0;
        rep.witness_cap = static_cast<std::uint64_t>(std::clamp(std::isfinite(m) ? std::floor(m) : fallback, 1.0,
                                                                std::max(fallback, 1.0)));
    }
    const DiscreteDistribution Mstar = spectral_measure_Mstar(a);
    const GammaResult g = gamma_rs(Mstar, in.delta, in.r, rep.witness_cap);
    const PointCloud image = gap_image(g.witness);
    rep.witness_rank = g.witness.rank();
    rep.witness_size = image.size();
    rep.witness_mass = g.value;
    rep.witness_uncovered = neighborhood_coverage(a.rows(), image, in.delta).uncovered.size();
    return rep;
}

}  // namespace anticonc
