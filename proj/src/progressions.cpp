#include "anticonc/progressions.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace anticonc {

Gap::Gap(std::vector<double> dims, PointCloud generators) : dim(generators.dim), L(std::move(dims)), gens(std::move(generators)) {
    if (gens.size() != L.size()) throw std::invalid_argument("Gap: need one generator per dimension L_j");
    for (double l : L) {
        if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("Gap: dimensions L_j must be positive");
    }
}

Gap Gap::zero(std::size_t dim) {
    Gap g;
    g.dim = dim;
    g.gens = PointCloud(dim);
    return g;
}

std::uint64_t Gap::box_count() const {
    std::uint64_t prod = 1;
    for (double l : L) {
        const double side = 2.0 * std::floor(l) + 1.0;
        if (side >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / prod)) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        prod *= static_cast<std::uint64_t>(side);
    }
    return prod;
}

namespace {

// Odometer over the integer box prod [-bound_j, bound_j].
template <class Visit>
void for_each_box_point(const std::vector<std::int64_t>& bound, Visit&& visit) {
    const std::size_t r = bound.size();
    std::vector<std::int64_t> m(r);
    for (std::size_t j = 0; j < r; ++j) m[j] = -bound[j];
    for (;;) {
        visit(std::span<const std::int64_t>(m));
        std::size_t j = 0;
        while (j < r && m[j] == bound[j]) {
            m[j] = -bound[j];
            ++j;
        }
        if (j == r) return;
        ++m[j];
    }
}

}  // namespace

PointCloud gap_image(const Gap& P, std::uint64_t budget) {
    const std::size_t d = P.dim;
    const std::uint64_t count = P.box_count();
    if (count > budget) {
        std::ostringstream msg;
        msg << "gap_image: box has " << count << " points, budget is " << budget;
        throw CapacityError(msg.str());
    }
    PointCloud pts(d);
    pts.coords.reserve(count * d);
    std::vector<std::int64_t> bound(P.rank());
    for (std::size_t j = 0; j < P.rank(); ++j) bound[j] = static_cast<std::int64_t>(std::floor(P.L[j]));
    std::vector<double> v(d);
    for_each_box_point(bound, [&](std::span<const std::int64_t> m) {
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t j = 0; j < m.size(); ++j) {
            const auto g = P.gens.point(j);
            for (std::size_t c = 0; c < d; ++c) v[c] += static_cast<double>(m[j]) * g[c];
        }
        pts.push_back(v);
    });
    std::vector<double> w(pts.size(), 1.0);
    merge_atoms(pts, w, kConvTol);
    return pts;
}

std::size_t gap_size(const Gap& P, std::uint64_t budget) { return gap_image(P, budget).size(); }

bool gap_is_proper(const Gap& P, std::uint64_t budget) { return gap_size(P, budget) == P.box_count(); }

Gap gap_dilate(const Gap& P, double t) {
    if (!(t > 0.0)) throw std::domain_error("gap_dilate: t must be positive");
    Gap out = P;
    for (double& l : out.L) l *= t;
    return out;
}

Cgap Cgap::box(std::vector<double> h, const std::vector<double>& half_widths, std::uint64_t cap) {
    if (h.size() != half_widths.size()) throw std::invalid_argument("Cgap::box: rank mismatch");
    Cgap K;
    K.cap = cap;
    for (std::size_t j = 0; j < h.size(); ++j) {
        Slab s;
        s.u.assign(h.size(), 0.0);
        s.u[j] = 1.0;
        s.b = half_widths[j];
        K.body.push_back(std::move(s));
    }
    K.h = std::move(h);
    return K;
}

bool Cgap::contains(std::span<const double> nu, double tol) const {
    for (const auto& s : body) {
        if (std::abs(dot(s.u, nu)) > s.b + tol) return false;
    }
    return true;
}

namespace {

// Half-extent of the polytope { |<u_i, x>| <= b_i } along each axis, by vertex enumeration.
std::vector<double> body_extent(const std::vector<Slab>& body, std::size_t r) {
    const std::size_t k = body.size();
    Eigen::MatrixXd N(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < k; ++i) {
        if (body[i].u.size() != r) throw std::invalid_argument("Cgap body: slab normal has wrong length");
        if (!(body[i].b >= 0.0)) throw std::invalid_argument("Cgap body: slab half-width must be nonnegative");
        for (std::size_t c = 0; c < r; ++c) N(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = body[i].u[c];
    }
    if (k < r || Eigen::FullPivLU<Eigen::MatrixXd>(N).rank() < static_cast<Eigen::Index>(r)) {
        throw std::invalid_argument("Cgap body: slab normals do not span R^r, body is unbounded");
    }
    std::vector<double> ext(r, 0.0);
    std::vector<std::size_t> pick(r);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    Eigen::MatrixXd S(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(r));
    for (;;) {
        for (std::size_t i = 0; i < r; ++i) S.row(static_cast<Eigen::Index>(i)) = N.row(static_cast<Eigen::Index>(pick[i]));
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
        if (lu.rank() == static_cast<Eigen::Index>(r)) {
            for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << r); ++signs) {
                for (std::size_t i = 0; i < r; ++i) {
                    rhs(static_cast<Eigen::Index>(i)) = ((signs >> i) & 1U ? -1.0 : 1.0) * body[pick[i]].b;
                }
                const Eigen::VectorXd x = lu.solve(rhs);
                bool feasible = true;
                for (std::size_t i = 0; i < k && feasible; ++i) {
                    feasible = std::abs(N.row(static_cast<Eigen::Index>(i)).dot(x)) <= body[i].b * (1.0 + 1e-9) + 1e-9;
                }
                if (!feasible) continue;
                for (std::size_t c = 0; c < r; ++c) ext[c] = std::max(ext[c], std::abs(x(static_cast<Eigen::Index>(c))));
            }
        }
        // Next r-combination of k slabs.
        std::size_t i = r;
        while (i > 0 && pick[i - 1] == k - r + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
    return ext;
}

}  // namespace

std::vector<std::int64_t> cgap_lattice_points(const Cgap& K, std::uint64_t budget) {
    const std::size_t r = K.rank();
    if (r == 0) return {};
    const std::vector<double> ext = body_extent(K.body, r);
    std::vector<std::int64_t> bound(r);
    double box = 1.0;
    for (std::size_t c = 0; c < r; ++c) {
        bound[c] = static_cast<std::int64_t>(std::floor(ext[c] + 1e-9));
        box *= 2.0 * static_cast<double>(bound[c]) + 1.0;
    }
    if (box > static_cast<double>(budget)) {
        std::ostringstream msg;
        msg << "cgap lattice enumeration: bounding box has " << box << " points, budget is " << budget;
        throw CapacityError(msg.str());
    }
    std::vector<std::int64_t> out;
    std::vector<double> nu(r);
    for_each_box_point(bound, [&](std::span<const std::int64_t> m) {
        for (std::size_t c = 0; c < r; ++c) nu[c] = static_cast<double>(m[c]);
        if (K.contains(nu)) out.insert(out.end(), m.begin(), m.end());
    });
    return out;
}

std::vector<double> cgap_image(const Cgap& K, std::uint64_t budget) {
    const std::size_t r = K.rank();
    if (r == 0) return {0.0};
    const std::vector<std::int64_t> pts = cgap_lattice_points(K, budget);
    const std::size_t count = pts.size() / r;
    if (count > K.cap) {
        std::ostringstream msg;
        msg << "Cgap body holds " << count << " lattice points, cap m = " << K.cap;
        throw ClassMembershipError(msg.str());
    }
    std::vector<double> vals(count);
    for (std::size_t i = 0; i < count; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < r; ++j) v += static_cast<double>(pts[i * r + j]) * K.h[j];
        vals[i] = v;
    }
    std::vector<double> w(count, 1.0);
    PointCloud cloud(1, std::move(vals));
    merge_atoms(cloud, w, kConvTol);
    return cloud.coords;
}

Coverage neighborhood_coverage(const PointCloud& points, const PointCloud& K, double delta) {
    if (points.dim != K.dim) throw std::invalid_argument("neighborhood_coverage: dimension mismatch");
    Coverage cov;
    if (points.dim == 1) {
        std::vector<double> ks = K.coords;
        std::sort(ks.begin(), ks.end());
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double x = points.coords[i];
            const auto it = std::lower_bound(ks.begin(), ks.end(), x);
            bool hit = false;
            if (it != ks.end() && std::abs(*it - x) <= delta) hit = true;
            if (it != ks.begin() && std::abs(*std::prev(it) - x) <= delta) hit = true;
            if (hit) {
                ++cov.covered;
            } else {
                cov.uncovered.push_back(i);
            }
        }
        return cov;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool hit = false;
        for (std::size_t j = 0; j < K.size() && !hit; ++j) hit = max_dist(points.point(i), K.point(j)) <= delta;
        if (hit) {
            ++cov.covered;
        } else {
            cov.uncovered.push_back(i);
        }
    }
    return cov;
}

Coverage product_coverage(const PointCloud& points, const std::vector<std::vector<double>>& K,
                          std::span<const double> deltas) {
    if (K.size() != points.dim || deltas.size() != points.dim) {
        throw std::invalid_argument("product_coverage: need one factor set and radius per coordinate");
    }
    Coverage cov;
    std::vector<std::vector<double>> sorted = K;
    for (auto& s : sorted) std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto p = points.point(i);
        bool all = true;
        for (std::size_t j = 0; j < points.dim && all; ++j) {
            const auto& ks = sorted[j];
            const auto it = std::lower_bound(ks.begin(), ks.end(), p[j]);
            bool hit = false;
            if (it != ks.end() && std::abs(*it - p[j]) <= deltas[j]) hit = true;
            if (it != ks.begin() && std::abs(*std::prev(it) - p[j]) <= deltas[j]) hit = true;
            all = hit;
        }
        if (all) {
            ++cov.covered;
        } else {
            cov.uncovered.push_back(i);
        }
    }
    return cov;
}

double outside_mass(const DiscreteDistribution& W, const std::vector<double>& K, double tau) {
    if (W.dim() != 1) throw std::invalid_argument("outside_mass: W must be scalar");
    double s = 0.0;
    for (std::size_t i = 0; i < W.size(); ++i) {
        const double z = W.atom(i)[0];
        const auto it = std::lower_bound(K.begin(), K.end(), z);
        bool hit = false;
        if (it != K.end() && std::abs(z - *it) <= tau) hit = true;
        if (it != K.begin() && std::abs(z - *std::prev(it)) <= tau) hit = true;
        if (!hit) s += W.weight(i);
    }
    return s;
}

std::vector<double> candidate_generators(const DiscreteDistribution& W, std::size_t cf_depth,
                                         std::uint64_t max_denominator) {
    if (W.dim() != 1) throw std::invalid_argument("candidate_generators: W must be scalar");
    std::vector<double> vals;
    for (std::size_t i = 0; i < W.size(); ++i) {
        const double v = std::abs(W.atom(i)[0]);
        if (v > kConvTol) vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

    std::vector<double> out = vals;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        for (std::size_t j = i + 1; j < vals.size(); ++j) {
            const double diff = vals[j] - vals[i];
            if (diff > kConvTol) out.push_back(diff);
            // Convergents p/q of vals[j] / vals[i]: both are near multiples of vals[i] / q.
            double x = vals[j] / vals[i];
            double h0 = 1.0, h1 = std::floor(x);
            double k0 = 0.0, k1 = 1.0;
            double frac = x - std::floor(x);
            for (std::size_t depth = 1; depth < cf_depth && frac > 1e-12; ++depth) {
                x = 1.0 / frac;
                const double ai = std::floor(x);
                frac = x - ai;
                const double h2 = ai * h1 + h0;
                const double k2 = ai * k1 + k0;
                if (k2 > static_cast<double>(max_denominator)) break;
                h0 = h1;
                h1 = h2;
                k0 = k1;
                k1 = k2;
                out.push_back(vals[i] / k1);
            }
        }
    }
    std::sort(out.begin(), out.end());
    std::vector<double> uniq;
    for (double g : out) {
        if (uniq.empty() || g - uniq.back() > 1e-12 * std::max(1.0, g)) uniq.push_back(g);
    }
    return uniq;
}

namespace {

// Scored candidate; ordering is (value, rank, h, widths) lexicographically.
struct Candidate {
    double value = kInf;
    std::vector<double> h;
    std::vector<double> widths;  // integer half-widths b_j

    bool better_than(const Candidate& o) const {
        if (value != o.value) return value < o.value;
        if (h.size() != o.h.size()) return h.size() < o.h.size();
        if (h != o.h) return h < o.h;
        return widths < o.widths;
    }
};

// Smallest |k| with |z - k g| <= tau, or -1 if none (g > 0).
std::int64_t min_multiplier(double z, double g, double tau) {
    const double lo = std::ceil((z - tau) / g);
    const double hi = std::floor((z + tau) / g);
    double k0;
    if (lo <= 0.0 && hi >= 0.0) {
        k0 = 0.0;
    } else if (lo > 0.0) {
        k0 = lo;
    } else {
        k0 = hi;
    }
    std::int64_t best = -1;
    for (double k : {k0 - 1.0, k0, k0 + 1.0}) {
        if (std::abs(z - k * g) <= tau) {
            const auto ak = static_cast<std::int64_t>(std::abs(k));
            if (best < 0 || ak < best) best = ak;
        }
    }
    return best;
}

// Maximal integer boxes (b_1..b_q), b_j >= 1, with prod (2 b_j + 1) <= cap.
void maximal_boxes(std::size_t q, std::uint64_t cap, std::vector<std::vector<double>>& out) {
    std::vector<std::int64_t> b(q, 1);
    auto prod = [&](const std::vector<std::int64_t>& v) {
        double p = 1.0;
        for (auto x : v) p *= static_cast<double>(2 * x + 1);
        return p;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (j == q) {
            if (prod(b) > static_cast<double>(cap)) return;
            for (std::size_t i = 0; i < q; ++i) {
                ++b[i];
                const bool grows = prod(b) <= static_cast<double>(cap);
                --b[i];
                if (grows) return;
            }
            out.emplace_back(b.begin(), b.end());
            return;
        }
        for (std::int64_t v = 1;; ++v) {
            b[j] = v;
            std::vector<std::int64_t> probe = b;
            for (std::size_t i = j + 1; i < q; ++i) probe[i] = 1;
            if (prod(probe) > static_cast<double>(cap)) break;
            rec(j + 1);
        }
        b[j] = 1;
    };
    if (q > 0) rec(0);
}

enum class ProgressionClass { cgap, gap };

struct SearchOutcome {
    Candidate best;
    std::uint64_t evaluated = 0;
};

std::vector<double> candidate_image(const Candidate& c, ProgressionClass cls, std::uint64_t cap) {
    if (c.h.empty()) return {0.0};
    if (cls == ProgressionClass::cgap) {
        std::vector<double> hw(c.widths.size());
        for (std::size_t j = 0; j < hw.size(); ++j) hw[j] = c.widths[j] + 0.4;
        return cgap_image(Cgap::box(c.h, hw, cap));
    }
    PointCloud gens(1, c.h);
    return gap_image(Gap(c.widths, gens)).coords;
}

// Generators sorted by the mass they catch as exact small multiples; independent of tau and the cap.
std::vector<double> generator_pool(const DiscreteDistribution& W, const std::vector<double>& gens, std::size_t size) {
    std::vector<std::pair<double, double>> scored;
    for (double g : gens) {
        double caught = 0.0;
        for (std::size_t i = 0; i < W.size(); ++i) {
            const std::int64_t k = min_multiplier(W.atom(i)[0], g, 0.0);
            if (k >= 0 && k <= 64) caught += W.weight(i);
        }
        scored.emplace_back(-caught, g);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<double> pool;
    for (std::size_t i = 0; i < scored.size() && pool.size() < size; ++i) pool.push_back(scored[i].second);
    std::sort(pool.begin(), pool.end());
    return pool;
}

SearchOutcome search_progressions(const DiscreteDistribution& W, double tau, std::size_t r, std::uint64_t cap,
                                  SearchBudget budget, ProgressionClass cls) {
    if (W.dim() != 1) throw std::invalid_argument("progression search: W must be scalar");
    if (!(tau >= 0.0)) throw std::domain_error("progression search: tau must be nonnegative");
    if (cap == 0) throw std::domain_error("progression search: cap must be >= 1");
    SearchOutcome out;
    // Rank 0.
    out.best.value = outside_mass(W, {0.0}, tau);
    if (r == 0 || out.best.value == 0.0) return out;

    const auto b_max = static_cast<std::int64_t>((cap - 1) / 2);
    if (b_max < 1) return out;
    const std::vector<double> gens =
        candidate_generators(W, 12, static_cast<std::uint64_t>(std::min<std::int64_t>(b_max, 1 << 20)));

    // Rank 1: for each generator the cheapest interval is the smallest that covers every catchable atom.
    for (double g : gens) {
        if (out.evaluated >= budget.candidates) return out;
        ++out.evaluated;
        double mass = 0.0;
        std::int64_t width = 0;
        for (std::size_t i = 0; i < W.size(); ++i) {
            const std::int64_t k = min_multiplier(W.atom(i)[0], g, tau);
            if (k < 0 || k > b_max) {
                mass += W.weight(i);
            } else {
                width = std::max(width, k);
            }
        }
        Candidate c;
        c.value = mass;
        if (width > 0) {
            c.h = {g};
            c.widths = {static_cast<double>(width)};
        }
        if (c.better_than(out.best)) out.best = c;
    }

    // Rank 2..r over a pool of generators with maximal boxes.
    const std::vector<double> pool = generator_pool(W, gens, budget.generator_pool);
    for (std::size_t q = 2; q <= r && q <= pool.size(); ++q) {
        std::vector<std::vector<double>> boxes;
        maximal_boxes(q, cap, boxes);
        if (boxes.empty()) break;
        std::vector<std::size_t> pick(q);
        std::iota(pick.begin(), pick.end(), std::size_t{0});
        for (;;) {
            std::vector<double> h(q);
            for (std::size_t i = 0; i < q; ++i) h[i] = pool[pick[i]];
            for (const auto& box : boxes) {
                if (out.evaluated >= budget.candidates) return out;
                ++out.evaluated;
                Candidate c;
                c.h = h;
                c.widths = box;
                c.value = outside_mass(W, candidate_image(c, cls, cap), tau);
                if (c.better_than(out.best)) out.best = c;
            }
            std::size_t i = q;
            while (i > 0 && pick[i - 1] == pool.size() - q + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < q; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return out;
}

}  // namespace

BetaResult beta_rm(const DiscreteDistribution& W, double tau, std::size_t r, std::uint64_t m, SearchBudget budget) {
    const SearchOutcome s = search_progressions(W, tau, r, m, budget, ProgressionClass::cgap);
    BetaResult res;
    res.exact = (r == 0);
    res.evaluated = s.evaluated;
    if (s.best.h.empty()) {
        res.witness.cap = m;
    } else {
        std::vector<double> hw(s.best.widths.size());
        for (std::size_t j = 0; j < hw.size(); ++j) hw[j] = s.best.widths[j] + 0.4;
        res.witness = Cgap::box(s.best.h, hw, m);
    }
    // The reported value is the witness re-evaluated through the generic path.
    res.value = outside_mass(W, cgap_image(res.witness), tau);
    return res;
}

GammaResult gamma_rs(const DiscreteDistribution& W, double tau, std::size_t r, std::uint64_t s, SearchBudget budget) {
    const SearchOutcome so = search_progressions(W, tau, r, s, budget, ProgressionClass::gap);
    GammaResult res;
    res.exact = (r == 0);
    res.evaluated = so.evaluated;
    if (so.best.h.empty()) {
        res.witness = Gap::zero(1);
    } else {
        res.witness = Gap(so.best.widths, PointCloud(1, so.best.h));
    }
    res.value = outside_mass(W, gap_image(res.witness).coords, tau);
    return res;
}

Lattice Lattice::integer(std::size_t r) {
    Lattice l;
    l.rank = r;
    l.basis.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) l.basis[i * r + i] = 1.0;
    return l;
}

CoverCheck tv_cover_check(const Gap& P, const std::vector<Slab>& body, const Lattice& lattice, double c1,
                          std::uint64_t budget) {
    const std::size_t r = lattice.rank;
    if (P.dim != r) throw std::invalid_argument("tv_cover_check: progression must live in R^r");
    if (!(c1 >= 1.0)) throw std::domain_error("tv_cover_check: c1 must be >= 1");
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> B(lattice.basis.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() < static_cast<Eigen::Index>(r)) throw std::invalid_argument("tv_cover_check: singular lattice basis");

    CoverCheck out;
    const double rr = static_cast<double>(r);
    out.dilation = std::pow(c1 * rr, 1.5 * rr);

    Cgap V;
    V.body = body;
    V.h.assign(r, 0.0);
    V.cap = std::numeric_limits<std::uint64_t>::max();

    // (i) Image(P) in V and Lambda.
    const PointCloud image = gap_image(P, budget);
    out.image_in_body = true;
    for (std::size_t i = 0; i < image.size() && out.image_in_body; ++i) {
        const auto x = image.point(i);
        if (!V.contains(x, 1e-9)) {
            out.image_in_body = false;
            break;
        }
        Eigen::VectorXd xv(static_cast<Eigen::Index>(r));
        for (std::size_t c = 0; c < r; ++c) xv(static_cast<Eigen::Index>(c)) = x[c];
        const Eigen::VectorXd k = lu.solve(xv);
        for (Eigen::Index c = 0; c < k.size(); ++c) {
            if (std::abs(k(c) - std::round(k(c))) > 1e-9) out.image_in_body = false;
        }
    }

    // V and Lambda: integer k with B k in V, i.e. |<B^T u, k>| <= b.
    Cgap Vk;
    Vk.h.assign(r, 0.0);
    Vk.cap = std::numeric_limits<std::uint64_t>::max();
    for (const auto& s : body) {
        Slab t;
        t.b = s.b;
        t.u.assign(r, 0.0);
        for (std::size_t c = 0; c < r; ++c) {
            for (std::size_t i = 0; i < r; ++i) t.u[c] += B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) * s.u[i];
        }
        Vk.body.push_back(std::move(t));
    }
    const std::vector<std::int64_t> ks = cgap_lattice_points(Vk, budget);
    out.lattice_count = r == 0 ? 1 : ks.size() / r;

    // (ii) V and Lambda in Image(P^T).
    const Gap dil = gap_dilate(P, out.dilation);
    PointCloud dimage = gap_image(dil, budget);
    out.dilate_size = dimage.size();
    out.body_in_dilate = true;
    std::vector<double> x(r);
    for (std::size_t i = 0; i < out.lattice_count && out.body_in_dilate && r > 0; ++i) {
        for (std::size_t c = 0; c < r; ++c) {
            x[c] = 0.0;
            for (std::size_t j = 0; j < r; ++j) {
                x[c] += B(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) * static_cast<double>(ks[i * r + j]);
            }
        }
        // dimage is lexicographically sorted: search the first-coordinate window.
        const std::size_t n = dimage.size();
        std::size_t lo = 0, hi = n;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (dimage.point(mid)[0] < x[0] - 1e-9) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        bool found = false;
        for (std::size_t j = lo; j < n && dimage.point(j)[0] <= x[0] + 1e-9 && !found; ++j) {
            found = max_dist(dimage.point(j), x) <= 1e-9;
        }
        out.body_in_dilate = found;
    }

    // (iii) size(P^T) <= (2T + 1)^r |V and Lambda|.
    out.size_bound = std::pow(2.0 * out.dilation + 1.0, rr) * static_cast<double>(out.lattice_count);
    out.size_inequality = static_cast<double>(out.dilate_size) <= out.size_bound;
    return out;
}

}  // namespace anticonc
