#include "anticonc/progressions.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace anticonc;

namespace {

Gap scalar_gap(std::vector<double> L, std::vector<double> g) { return Gap(std::move(L), PointCloud(1, std::move(g))); }

}  // namespace

TEST_CASE("GAP images") {
    CHECK(gap_image(scalar_gap({2}, {3})).coords == std::vector<double>{-6, -3, 0, 3, 6});
    CHECK(gap_image(Gap::zero(1)).coords == std::vector<double>{0});
    const Gap np = scalar_gap({1, 1}, {1, 2});
    CHECK(gap_size(np) == 7);
    CHECK(np.box_count() == 9);
    CHECK_FALSE(gap_is_proper(np));
    CHECK(gap_is_proper(scalar_gap({4}, {0.3})));
    const Gap p = scalar_gap({2, 2}, {1, 10});
    CHECK(gap_size(p) == 25);
    CHECK(gap_is_proper(p));
}

TEST_CASE("GAP dilation") {
    const Gap P = scalar_gap({2}, {3});
    CHECK(gap_image(gap_dilate(P, 1.0)).coords == gap_image(P).coords);
    const Gap P2 = gap_dilate(P, 2.0);
    CHECK(gap_size(P2) == 9);
    CHECK(gap_image(P2).coords.front() == -12);
    CHECK(gap_image(P2).coords.back() == 12);
    // Fractional dilates floor the box.
    CHECK(gap_size(gap_dilate(P, 1.3)) <= gap_dilate(P, 1.3).box_count());
    CHECK(gap_dilate(P, 1.3).box_count() == 5);
}

TEST_CASE("GAP budget") { CHECK_THROWS_AS((void)gap_image(scalar_gap({1000, 1000}, {1, 0.001}), 1000), CapacityError); }

TEST_CASE("CGAP images") {
    CHECK(cgap_image(Cgap::box({}, {}, 1)) == std::vector<double>{0});
    CHECK(cgap_image(Cgap::box({3}, {2.5}, 5)) == std::vector<double>{-6, -3, 0, 3, 6});

    Cgap cross;
    cross.h = {1, 10};
    cross.body = {Slab{{1, 1}, 1}, Slab{{1, -1}, 1}};
    cross.cap = 5;
    CHECK(cgap_image(cross) == std::vector<double>{-10, -1, 0, 1, 10});
    CHECK(cgap_lattice_points(cross).size() == 5 * 2);
    cross.cap = 4;
    CHECK_THROWS_AS((void)cgap_image(cross), ClassMembershipError);

    Cgap open;
    open.h = {1, 2};
    open.body = {Slab{{1, 0}, 1}};
    CHECK_THROWS_AS((void)cgap_image(open), std::invalid_argument);
}

TEST_CASE("neighbourhood coverage") {
    const PointCloud pts(1, {0.9, 2.1, 7.0});
    const PointCloud K(1, {0, 1, 2, 3});
    const Coverage c = neighborhood_coverage(pts, K, 0.15);
    CHECK(c.covered == 2);
    CHECK(c.uncovered == std::vector<std::size_t>{2});
    CHECK(neighborhood_coverage(pts, K, 10.0).covered == 3);
    const PointCloud zeros(1, {0.0, 0.0, 0.5});
    const Coverage z = neighborhood_coverage(zeros, PointCloud(1, {0.0}), 0.0);
    CHECK(z.covered == 2);
    CHECK(z.uncovered == std::vector<std::size_t>{2});
}

TEST_CASE("beta search") {
    const auto M115 = spectral_measure_Mstar(WeightVector::scalar({1, 1, 5}));
    const BetaResult r0 = beta_rm(M115, 0.5, 0, 1);
    CHECK(r0.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r0.exact);

    const auto M = spectral_measure_Mstar(WeightVector::scalar({1, 2, 3, 4, 5}));
    const BetaResult r1 = beta_rm(M, 0.0, 1, 11);
    CHECK(r1.value == 0.0);
    REQUIRE(r1.witness.rank() == 1);
    CHECK(r1.witness.h[0] == 1.0);
    CHECK(r1.witness.body[0].b == doctest::Approx(5.4));
    CHECK(cgap_image(r1.witness).size() == 11);

    const auto E0 = DiscreteDistribution::point_mass({0.0});
    for (std::size_t r = 0; r <= 2; ++r) CHECK(beta_rm(E0, 0.0, r, 1).value == 0.0);
}

TEST_CASE("gamma search") {
    const auto M115 = spectral_measure_Mstar(WeightVector::scalar({1, 1, 5}));
    CHECK(gamma_rs(M115, 0.5, 0, 1).value == beta_rm(M115, 0.5, 0, 1).value);

    const auto M = spectral_measure_Mstar(WeightVector::scalar({3, 6, 9}));
    const GammaResult g = gamma_rs(M, 0.0, 1, 11);
    CHECK(g.value == 0.0);
    REQUIRE(g.witness.rank() == 1);
    CHECK(g.witness.gens.coords[0] == 3.0);
    CHECK(g.witness.L[0] == 3.0);

    // One irrational outlier of weight w: rank-1 progressions cannot catch it.
    const double w = 0.1;
    const DiscreteDistribution W(PointCloud(1, {-3, -2, -1, 1, 2, 3, -std::sqrt(2.0), std::sqrt(2.0)}),
                                 {0.15, 0.15, 0.15, 0.15, 0.15, 0.15, w / 2, w / 2});
    const GammaResult out = gamma_rs(W, 0.0, 1, 7);
    CHECK(out.value == doctest::Approx(w).epsilon(1e-14));
}

TEST_CASE("witness re-evaluation and rank 0 (random measures)") {
    testkit::Gen gen(23);
    for (int it = 0; it < 25; ++it) {
        const auto a = gen.weights(static_cast<std::size_t>(gen.integer(1, 6)), 1, 0.1, 4.0);
        const auto W = spectral_measure_Mstar(a);
        const double tau = gen.uniform(0.0, 0.6);
        for (std::size_t r = 0; r <= 2; ++r) {
            const auto b = beta_rm(W, tau, r, 9);
            CHECK(outside_mass(W, cgap_image(b.witness), tau) == b.value);
            const auto g = gamma_rs(W, tau, r, 9);
            CHECK(outside_mass(W, gap_image(g.witness).coords, tau) == g.value);
            if (r == 0) {
                CHECK(b.value == tail_mass_p(W, tau));
                CHECK(g.value == tail_mass_p(W, tau));
            }
        }
    }
}

TEST_CASE("cover check") {
    const Gap P = scalar_gap({3}, {1});
    const std::vector<Slab> V = {Slab{{1.0}, 3.0}};
    const CoverCheck c = tv_cover_check(P, V, Lattice::integer(1), 1.0);
    CHECK(c.image_in_body);
    CHECK(c.body_in_dilate);
    CHECK(c.size_inequality);
    CHECK(c.dilation == 1.0);
    CHECK(c.dilate_size == 7);
    CHECK(c.lattice_count == 7);
    CHECK(c.size_bound == 21.0);

    const CoverCheck bad = tv_cover_check(scalar_gap({5}, {1}), V, Lattice::integer(1), 1.0);
    CHECK_FALSE(bad.image_in_body);
}

TEST_CASE("candidate generators include continued-fraction convergents") {
    const auto W = spectral_measure_Mstar(WeightVector::scalar({1.0, 0.75}));
    const auto gens = candidate_generators(W);
    // 0.75 = 3/4 so 1/4 divides both atoms.
    CHECK(std::find_if(gens.begin(), gens.end(), [](double g) { return std::abs(g - 0.25) < 1e-12; }) != gens.end());
}
