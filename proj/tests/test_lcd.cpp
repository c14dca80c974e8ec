#include "anticonc/lcd.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace anticonc;

TEST_CASE("dot product vector") {
    const auto a = WeightVector::scalar({1, 3, -1});
    const double zero[1] = {0.0};
    for (double v : dot_product_vector(zero, a)) CHECK(v == 0.0);
    const double two[1] = {2.0};
    CHECK(dot_product_vector(two, a) == std::vector<double>{2, 6, -2});
}

TEST_CASE("distance to the integer lattice") {
    const std::vector<double> ints = {3, -2, 0, 7};
    CHECK(dist_to_lattice(ints) == 0.0);
    const std::vector<double> half = {0.5, 0.5};
    CHECK(dist_to_lattice(half) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    const std::vector<double> v = {0.3, 1.9, -2.2};
    CHECK(dist_to_lattice(v) == doctest::Approx(std::sqrt(0.14)).epsilon(1e-14));

    testkit::Gen gen(31);
    for (int it = 0; it < 500; ++it) {
        std::vector<double> x(static_cast<std::size_t>(gen.integer(1, 6)));
        for (auto& c : x) c = gen.uniform(-20, 20);
        CHECK(dist_to_lattice(x) == doctest::Approx(testkit::oracle_dist_to_lattice(x)).epsilon(1e-13));
    }
}

TEST_CASE("violation condition") {
    const LcdParams p{0.5, 1.0};
    const auto ones = WeightVector::scalar(std::vector<double>(4, 1.0));
    const double zero[1] = {0.0};
    CHECK_FALSE(violation_condition(zero, ones, p));
    const double one[1] = {1.0};
    CHECK(violation_condition(one, ones, p));
    const LcdParams p9{0.9, 1.0};
    const double t3[1] = {0.3};
    CHECK_FALSE(violation_condition(t3, ones, p9));
    CHECK(violation_margin(t3, ones, 0.9, 1.0) == doctest::Approx(0.3 * 2 - 0.27 * 2).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LcdParams({1.0, 1.0}).validate(), std::domain_error);
    CHECK_THROWS_AS(LcdParams({0.5, 0.0}).validate(), std::domain_error);
    LcdParams bad;
    bad.tol = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("LCD of the all-ones vector") {
    const auto a = WeightVector::scalar(std::vector<double>(4, 1.0));
    LcdParams p;
    p.gamma = 0.5;
    p.alpha = 10.0;
    const LcdResult r = compute_lcd(a, p);
    CHECK(r.certified);
    CHECK(r.D_lower <= 2.0 / 3.0 + 1e-12);
    CHECK(r.D_upper >= 2.0 / 3.0 - 1e-12);
    CHECK(r.D_upper - r.D_lower <= 1e-6);
    REQUIRE(r.witness_t.has_value());
    CHECK(violation_condition(*r.witness_t, a, p));

    p.alpha = 0.02;
    const LcdResult s = compute_lcd(a, p);
    CHECK(s.D_lower <= 0.99 + 1e-12);
    CHECK(s.D_upper >= 0.99 - 1e-12);
    CHECK(s.D_upper - s.D_lower <= 1e-6);
}

TEST_CASE("LCD ceiling") {
    const auto a = WeightVector::scalar({std::sqrt(2.0)});
    LcdParams p;
    p.theta_max = 0.3;
    const LcdResult r = compute_lcd(a, p);
    CHECK(r.ceiling_reached);
    CHECK_FALSE(r.witness_t.has_value());
    CHECK(r.D_lower == 0.3);
    CHECK(std::isinf(r.D_upper));
}

TEST_CASE("LCD brackets hold against random probes") {
    testkit::Gen gen(41);
    for (int it = 0; it < 12; ++it) {
        const std::size_t d = 1 + static_cast<std::size_t>(it % 2);
        const auto a = gen.weights(static_cast<std::size_t>(gen.integer(2, 5)), d, 0.3, 1.5);
        LcdParams p;
        p.gamma = gen.uniform(0.2, 0.8);
        p.alpha = gen.uniform(0.05, 2.0);
        p.tol = 1e-4;
        const LcdResult r = compute_lcd(a, p);
        REQUIRE(r.witness_t.has_value());
        CHECK(testkit::oracle_margin(*r.witness_t, a, p.gamma, p.alpha) < 0.0);
        CHECK(r.D_upper == doctest::Approx(euclid_norm(*r.witness_t)));
        for (int k = 0; k < 3000; ++k) {
            std::vector<double> t(d);
            double n2 = 0;
            for (auto& x : t) {
                x = gen.uniform(-1, 1);
                n2 += x * x;
            }
            const double scale = r.D_lower * std::pow(gen.uniform(0, 1), 1.0 / static_cast<double>(d)) / std::sqrt(n2);
            for (auto& x : t) x *= scale;
            CHECK(testkit::oracle_margin(t, a, p.gamma, p.alpha) >= -1e-12);
        }
    }
}

TEST_CASE("heuristic search above d = 3") {
    const WeightVector a(4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1});
    LcdParams p;
    const LcdResult r = compute_lcd(a, p);
    CHECK_FALSE(r.certified);
    CHECK(r.D_lower == doctest::Approx(0.25));
    REQUIRE(r.witness_t.has_value());
    CHECK(violation_condition(*r.witness_t, a, p));
}
