#include "anticonc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace anticonc {

namespace {

// Neumaier compensated sum.
double stable_sum(const std::vector<double>& v) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

bool lex_less(std::span<const double> x, std::span<const double> y) {
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

// Sign of the first coordinate that is not negligible; 0 when all are.
int canonical_sign(std::span<const double> z, double tol) {
    for (double v : z) {
        if (std::abs(v) > tol) return v > 0 ? 1 : -1;
    }
    return 0;
}

void merge_atoms_1d(std::vector<double>& xs, std::vector<double>& weights, double tol) {
    std::vector<std::pair<double, double>> items(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) items[i] = {xs[i], weights[i]};
    std::sort(items.begin(), items.end());
    xs.clear();
    weights.clear();
    double rep = 0.0;
    for (const auto& [x, w] : items) {
        if (!xs.empty() && x - rep <= tol) {
            weights.back() += w;
            continue;
        }
        rep = x;
        xs.push_back(x);
        weights.push_back(w);
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (weights[i] > 0.0) {
            xs[out] = xs[i];
            weights[out] = weights[i];
            ++out;
        }
    }
    xs.resize(out);
    weights.resize(out);
}

}  // namespace

void merge_atoms(PointCloud& atoms, std::vector<double>& weights, double tol) {
    if (atoms.size() != weights.size()) throw std::invalid_argument("merge_atoms: atom/weight count mismatch");
    if (atoms.dim == 1) {
        merge_atoms_1d(atoms.coords, weights, tol);
        return;
    }
    const std::size_t n = atoms.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return lex_less(atoms.point(i), atoms.point(j)); });

    PointCloud reps(atoms.dim);
    std::vector<double> rep_w;
    for (std::size_t idx : order) {
        const auto p = atoms.point(idx);
        bool merged = false;
        // Representatives are sorted by first coordinate; only a window of them can be close.
        for (std::size_t r = rep_w.size(); r-- > 0;) {
            const auto q = reps.point(r);
            if (q[0] < p[0] - tol) break;
            if (max_dist(p, q) <= tol) {
                rep_w[r] += weights[idx];
                merged = true;
                break;
            }
        }
        if (!merged) {
            reps.push_back(p);
            rep_w.push_back(weights[idx]);
        }
    }
    PointCloud out(atoms.dim);
    std::vector<double> out_w;
    for (std::size_t r = 0; r < rep_w.size(); ++r) {
        if (rep_w[r] > 0.0) {
            out.push_back(reps.point(r));
            out_w.push_back(rep_w[r]);
        }
    }
    atoms = std::move(out);
    weights = std::move(out_w);
}

DiscreteDistribution::DiscreteDistribution(PointCloud atoms, std::vector<double> weights, bool normalized)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), normalized_(normalized) {
    if (atoms_.dim == 0) throw std::invalid_argument("DiscreteDistribution: dimension must be >= 1");
    if (atoms_.size() != weights_.size()) {
        throw std::invalid_argument("DiscreteDistribution: atoms and weights differ in length");
    }
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("DiscreteDistribution: weights must be finite and nonnegative");
        }
    }
    for (double x : atoms_.coords) {
        if (!std::isfinite(x)) throw std::invalid_argument("DiscreteDistribution: non-finite atom");
    }
    merge_atoms(atoms_, weights_, kAtomTol);
    if (normalized_ && std::abs(stable_sum(weights_) - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "DiscreteDistribution: weights sum to " << stable_sum(weights_)
            << ", expected 1 (clear the normalized flag for measures)";
        throw std::invalid_argument(msg.str());
    }
    if (atoms_.empty()) {
        if (normalized_) throw std::invalid_argument("DiscreteDistribution: probability with no atoms");
    }
}

DiscreteDistribution DiscreteDistribution::point_mass(std::vector<double> y) {
    const std::size_t d = y.size();
    return {PointCloud(d, std::move(y)), {1.0}, true};
}

DiscreteDistribution DiscreteDistribution::uniform(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("uniform: empty support");
    const double w = 1.0 / static_cast<double>(values.size());
    return {PointCloud(1, values), std::vector<double>(values.size(), w), true};
}

DiscreteDistribution DiscreteDistribution::rademacher() { return uniform({-1.0, 1.0}); }

DiscreteDistribution DiscreteDistribution::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
    return {PointCloud(1, {0.0, 1.0}), {1.0 - p, p}, true};
}

double DiscreteDistribution::total_mass() const { return stable_sum(weights_); }

double DiscreteDistribution::support_radius() const {
    double r = 0.0;
    for (std::size_t i = 0; i < size(); ++i) r = std::max(r, max_norm(atom(i)));
    return r;
}

bool DiscreteDistribution::is_symmetric() const {
    const std::size_t n = size();
    // Sorted lexicographically, so atom i pairs with atom n-1-i.
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = atom(i);
        const auto q = atom(n - 1 - i);
        for (std::size_t j = 0; j < dim(); ++j) {
            if (p[j] != -q[j]) return false;
        }
        if (weight(i) != weight(n - 1 - i)) return false;
    }
    return true;
}

DiscreteDistribution symmetrize(const DiscreteDistribution& F) {
    const std::size_t d = F.dim();
    const std::size_t n = F.size();
    PointCloud pos(d);
    std::vector<double> pos_w;
    double zero_w = 0.0;
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = F.atom(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double w = F.weight(i) * F.weight(j);
            if (i == j) {
                zero_w += w;
                continue;
            }
            const auto xj = F.atom(j);
            for (std::size_t c = 0; c < d; ++c) diff[c] = xi[c] - xj[c];
            const int s = canonical_sign(diff, kAtomTol);
            if (s == 0) {
                zero_w += w;
                continue;
            }
            // x_j - x_i is exactly -(x_i - x_j) in IEEE arithmetic.
            if (s < 0) {
                for (double& v : diff) v = -v;
            }
            pos.push_back(diff);
            pos_w.push_back(w);
        }
    }
    merge_atoms(pos, pos_w, kAtomTol);

    PointCloud atoms(d);
    std::vector<double> weights;
    for (std::size_t k = 0; k < pos_w.size(); ++k) {
        const auto p = pos.point(k);
        std::vector<double> neg(p.begin(), p.end());
        for (double& v : neg) v = -v;
        atoms.push_back(neg);
        weights.push_back(pos_w[k] / 2.0);
        atoms.push_back(p);
        weights.push_back(pos_w[k] / 2.0);
    }
    if (zero_w > 0.0) {
        atoms.push_back(std::vector<double>(d, 0.0));
        weights.push_back(zero_w);
    }
    return {std::move(atoms), std::move(weights), F.normalized()};
}

double tail_mass_p(const DiscreteDistribution& G, double delta) {
    if (!(delta >= 0.0)) throw std::domain_error("tail_mass_p: delta must be nonnegative");
    double s = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
        if (max_norm(G.atom(i)) > delta) s += G.weight(i);
    }
    return s;
}

// M, lambda_d and p traverse atoms in the same order and every p-term enters
// M and lambda_d unchanged, so M >= p and lambda_d >= p hold in floating point too.

double truncated_second_moment_M(const DiscreteDistribution& G, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("truncated_second_moment_M: tau must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
        const double z = max_norm(G.atom(i));
        if (z > tau) {
            s += G.weight(i);
        } else {
            const double r = z / tau;
            s += G.weight(i) * std::min(r * r, 1.0);
        }
    }
    return s;
}

double lambda_d(const DiscreteDistribution& G, double ratio, unsigned d) {
    if (!(ratio > 0.0)) throw std::domain_error("lambda_d: ratio must be positive");
    if (d == 0) throw std::domain_error("lambda_d: d must be >= 1");
    double s = 0.0;
    for (std::size_t i = 0; i < G.size(); ++i) {
        const double z = max_norm(G.atom(i));
        if (z == 0.0) continue;
        if (z > ratio) {
            s += G.weight(i);
            continue;
        }
        const double fl = std::floor(ratio / z);
        s += G.weight(i) / std::pow(1.0 + fl, static_cast<double>(d));
    }
    return s;
}

std::complex<double> char_fn(const DiscreteDistribution& F, std::span<const double> t) {
    if (t.size() != F.dim()) throw std::invalid_argument("char_fn: dimension mismatch");
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double phase = dot(t, F.atom(i));
        re += F.weight(i) * std::cos(phase);
        im += F.weight(i) * std::sin(phase);
    }
    return {re, im};
}

CompoundPoisson::CompoundPoisson(double intensity, DiscreteDistribution base)
    : intensity_(intensity), base_(std::move(base)) {
    if (!(intensity_ >= 0.0) || !std::isfinite(intensity_)) {
        throw std::domain_error("CompoundPoisson: intensity must be finite and nonnegative");
    }
    if (!base_.normalized()) throw std::domain_error("CompoundPoisson: base must be a probability distribution");
}

CompoundPoisson CompoundPoisson::power(double lambda) const {
    if (!(lambda >= 0.0)) throw std::domain_error("CompoundPoisson::power: lambda must be nonnegative");
    return {intensity_ * lambda, base_};
}

std::complex<double> cp_char_fn(const CompoundPoisson& D, std::span<const double> t) {
    const std::complex<double> w = char_fn(D.base(), t);
    return std::exp(D.intensity() * (w - 1.0));
}

AtomSampler::AtomSampler(const DiscreteDistribution& F) {
    cumulative_.resize(F.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        acc += F.weight(i);
        cumulative_[i] = acc;
    }
}

std::size_t AtomSampler::operator()(Rng& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

std::uint64_t sample_poisson(Rng& rng, double mean) {
    if (!(mean >= 0.0)) throw std::domain_error("sample_poisson: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean <= 30.0) {
        double p = std::exp(-mean);
        double cdf = p;
        const double u = rng.uniform();
        std::uint64_t k = 0;
        while (u > cdf && k < 10'000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
            if (p == 0.0 && cdf < u) break;
        }
        return k;
    }
    // Hoermann's PTRS.
    const double smu = std::sqrt(mean);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double U = rng.uniform() - 0.5;
        const double V = rng.uniform_open();
        const double us = 0.5 - std::abs(U);
        const double kf = std::floor((2.0 * a / us + b) * U + mean + 0.43);
        if (us >= 0.07 && V <= vr) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && V > us)) continue;
        if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + kf * log_mean - std::lgamma(kf + 1.0)) {
            return static_cast<std::uint64_t>(kf);
        }
    }
}

PointCloud cp_sample(const CompoundPoisson& D, std::size_t n_samples, RngSeed seed) {
    const std::size_t d = D.dim();
    PointCloud out(d);
    out.coords.assign(n_samples * d, 0.0);
    Rng rng(seed);
    const AtomSampler pick(D.base());
    for (std::size_t s = 0; s < n_samples; ++s) {
        const std::uint64_t count = sample_poisson(rng, D.intensity());
        double* dst = out.coords.data() + s * d;
        for (std::uint64_t j = 0; j < count; ++j) {
            const auto y = D.base().atom(pick(rng));
            for (std::size_t c = 0; c < d; ++c) dst[c] += y[c];
        }
    }
    return out;
}

DiscreteDistribution spectral_measure_Mstar(const WeightVector& a) {
    const std::size_t n = a.n();
    PointCloud atoms(a.dim());
    std::vector<double> weights;
    const double w = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const auto row = a.row(k);
        std::vector<double> neg(row.begin(), row.end());
        for (double& v : neg) v = -v;
        atoms.push_back(row);
        weights.push_back(w);
        atoms.push_back(neg);
        weights.push_back(w);
    }
    return {std::move(atoms), std::move(weights), true};
}

DiscreteDistribution half_weight_measure(const WeightVector& a) {
    const double w = 1.0 / (2.0 * static_cast<double>(a.n()));
    return {a.rows(), std::vector<double>(a.n(), w), false};
}

CompoundPoisson h_power(const WeightVector& a, double b) {
    if (!(b >= 0.0)) throw std::domain_error("h_power: b must be nonnegative");
    return {static_cast<double>(a.n()) * b / 2.0, spectral_measure_Mstar(a)};
}

double h_char_fn(const WeightVector& a, std::span<const double> t) {
    if (t.size() != a.dim()) throw std::invalid_argument("h_char_fn: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.n(); ++k) {
        const double h = std::sin(dot(t, a.row(k)) / 2.0);
        s += 2.0 * h * h;  // 1 - cos x
    }
    return std::exp(-0.5 * s);
}

DiscreteDistribution weighted_sum_distribution(const DiscreteDistribution& X, const WeightVector& a,
                                               std::size_t budget) {
    if (X.dim() != 1) throw std::invalid_argument("weighted_sum_distribution: X must be real-valued");
    if (!X.normalized()) throw std::invalid_argument("weighted_sum_distribution: X must be a probability law");
    const std::size_t d = a.dim();
    PointCloud cur(d, std::vector<double>(d, 0.0));
    std::vector<double> cur_w{1.0};
    for (std::size_t k = 0; k < a.n(); ++k) {
        const std::size_t next_size = cur_w.size() * X.size();
        if (next_size > budget) {
            std::ostringstream msg;
            msg << "exact enumeration needs " << next_size << " atoms at step " << k + 1 << ", budget is "
                << budget;
            throw CapacityError(msg.str());
        }
        const auto row = a.row(k);
        PointCloud next(d);
        next.coords.reserve(next_size * d);
        std::vector<double> next_w;
        next_w.reserve(next_size);
        std::vector<double> p(d);
        for (std::size_t i = 0; i < cur_w.size(); ++i) {
            const auto s = cur.point(i);
            for (std::size_t j = 0; j < X.size(); ++j) {
                const double x = X.atom(j)[0];
                for (std::size_t c = 0; c < d; ++c) p[c] = s[c] + x * row[c];
                next.push_back(p);
                next_w.push_back(cur_w[i] * X.weight(j));
            }
        }
        merge_atoms(next, next_w, kConvTol);
        cur = std::move(next);
        cur_w = std::move(next_w);
    }
    return {std::move(cur), std::move(cur_w), true};
}

DiscreteDistribution parse_named_distribution(const std::string& raw) {
    std::string name;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(c);
    }
    if (name == "rademacher") return DiscreteDistribution::rademacher();
    auto parse_number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) {
            throw std::invalid_argument("distribution shorthand '" + raw + "': bad number '" + s + "'");
        }
        return v;
    };
    if (name.rfind("uniform{", 0) == 0 && name.back() == '}') {
        const std::string body = name.substr(8, name.size() - 9);
        std::vector<double> values;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(parse_number(item));
        if (values.empty()) throw std::invalid_argument("distribution shorthand '" + raw + "': empty support");
        return DiscreteDistribution::uniform(values);
    }
    if (name.rfind("bernoulli(", 0) == 0 && name.back() == ')') {
        return DiscreteDistribution::bernoulli(parse_number(name.substr(10, name.size() - 11)));
    }
    throw std::invalid_argument("unknown distribution shorthand '" + raw + "'");
}

}  // namespace anticonc
