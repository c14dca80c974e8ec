#include "anticonc/distributions.hpp"
#include "anticonc/weights.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace anticonc;

namespace {

std::map<double, double> as_map(const DiscreteDistribution& F) {
    std::map<double, double> m;
    for (std::size_t i = 0; i < F.size(); ++i) m[F.atom(i)[0]] += F.weight(i);
    return m;
}

DiscreteDistribution three_point() { return DiscreteDistribution::uniform({0.0, 1.0, 3.0}); }

}  // namespace

TEST_CASE("symmetrize: Rademacher and point mass") {
    const auto G = as_map(symmetrize(DiscreteDistribution::rademacher()));
    REQUIRE(G.size() == 3);
    CHECK(G.at(-2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(G.at(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(G.at(2.0) == doctest::Approx(0.25).epsilon(1e-15));

    const auto E = as_map(symmetrize(DiscreteDistribution::point_mass({4.5})));
    REQUIRE(E.size() == 1);
    CHECK(E.begin()->first == 0.0);
}

TEST_CASE("symmetrize: three-point law matches the pair enumeration") {
    // 9 ordered pairs, each of probability 1/9.
    std::map<double, double> oracle;
    const double xs[] = {0, 1, 3};
    for (double x : xs) {
        for (double y : xs) oracle[x - y] += 1.0 / 9.0;
    }
    const auto G = as_map(symmetrize(three_point()));
    REQUIRE(G.size() == 7);
    for (const auto& [z, w] : oracle) CHECK(G.at(z) == doctest::Approx(w).epsilon(1e-14));
}

TEST_CASE("tail mass p") {
    const auto G = symmetrize(DiscreteDistribution::rademacher());
    CHECK(tail_mass_p(G, 1.0) == 0.5);
    CHECK(tail_mass_p(G, 3.0) == 0.0);
    // |z| in {2, 3}: z = +-2 from (3,1),(1,3); z = +-3 from (3,0),(0,3).
    CHECK(tail_mass_p(symmetrize(three_point()), 1.5) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    // Closed ball: an atom exactly at delta is inside.
    CHECK(tail_mass_p(G, 2.0) == 0.0);
}

TEST_CASE("truncated second moment M") {
    const auto G = symmetrize(DiscreteDistribution::rademacher());
    CHECK(truncated_second_moment_M(G, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(truncated_second_moment_M(G, 4.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(truncated_second_moment_M(DiscreteDistribution::point_mass({0.0}), 1.7) == 0.0);
    CHECK_THROWS_AS((void)truncated_second_moment_M(G, 0.0), std::domain_error);
}

TEST_CASE("lambda_d") {
    const auto G = symmetrize(DiscreteDistribution::rademacher());
    CHECK(lambda_d(G, 1.0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lambda_d(G, 4.0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(lambda_d(G, 4.0, 2) == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
    for (unsigned d = 1; d <= 3; ++d) CHECK(lambda_d(DiscreteDistribution::point_mass({0.0}), 2.5, d) == 0.0);
}

TEST_CASE("characteristic functions") {
    const double pi[1] = {kPi};
    CHECK(char_fn(DiscreteDistribution::rademacher(), pi).real() == doctest::Approx(-1.0).epsilon(1e-15));
    const double any[1] = {0.37};
    CHECK(std::abs(char_fn(DiscreteDistribution::point_mass({0.0}), any) - 1.0) < 1e-15);

    const auto G = symmetrize(DiscreteDistribution::rademacher());
    const double t[1] = {0.7};
    const double direct = 0.25 * std::cos(-1.4) + 0.5 + 0.25 * std::cos(1.4);
    CHECK(char_fn(G, t).real() == doctest::Approx(direct).epsilon(1e-14));
    CHECK(char_fn(G, t).real() == doctest::Approx(std::cos(0.7) * std::cos(0.7)).epsilon(1e-14));
}

TEST_CASE("compound Poisson characteristic function") {
    const CompoundPoisson zero(0.0, DiscreteDistribution::rademacher());
    const double t[1] = {1.3};
    CHECK(std::abs(cp_char_fn(zero, t) - 1.0) < 1e-15);
    const double origin[1] = {0.0};
    const CompoundPoisson any(3.2, DiscreteDistribution::uniform({-1.0, 2.0}));
    CHECK(std::abs(cp_char_fn(any, origin) - 1.0) < 1e-15);

    // H for a single weight: two formula paths.
    const auto a = WeightVector::scalar({1.7});
    const CompoundPoisson H = h_power(a, 1.0);
    for (double s : {0.0, 0.4, 1.1, 2.9, -5.0}) {
        const double ts[1] = {s};
        const double eq = std::exp(-(1.0 - std::cos(s * 1.7)) / 2.0);
        CHECK(cp_char_fn(H, ts).real() == doctest::Approx(eq).epsilon(1e-13));
        CHECK(h_char_fn(a, ts) == doctest::Approx(eq).epsilon(1e-13));
    }
}

TEST_CASE("compound Poisson sampling") {
    const CompoundPoisson zero(0.0, DiscreteDistribution::rademacher());
    const PointCloud z = cp_sample(zero, 100, RngSeed{3});
    for (double v : z.coords) CHECK(v == 0.0);

    const std::size_t N = 200'000;
    const CompoundPoisson five(5.0, DiscreteDistribution::point_mass({1.0}));
    const PointCloud s = cp_sample(five, N, RngSeed{11});
    double mean = 0;
    for (double v : s.coords) mean += v;
    mean /= static_cast<double>(N);
    CHECK(std::abs(mean - 5.0) <= 4.0 * std::sqrt(5.0 / N));

    const PointCloud again = cp_sample(five, N, RngSeed{11});
    CHECK(again.coords == s.coords);
}

TEST_CASE("Poisson sampler mean and variance on both branches") {
    for (double mean : {0.5, 7.0, 29.0, 31.0, 250.0}) {
        Rng rng(RngSeed{static_cast<std::uint64_t>(mean * 10)});
        const int N = 100'000;
        double s = 0, s2 = 0;
        for (int i = 0; i < N; ++i) {
            const double x = static_cast<double>(sample_poisson(rng, mean));
            s += x;
            s2 += x * x;
        }
        const double m = s / N;
        const double v = s2 / N - m * m;
        CHECK(std::abs(m - mean) <= 4.0 * std::sqrt(mean / N));
        CHECK(std::abs(v - mean) <= 0.05 * mean + 0.05);
    }
}

TEST_CASE("weighted sum distribution") {
    const auto X = DiscreteDistribution::rademacher();
    const auto S11 = as_map(weighted_sum_distribution(X, WeightVector::scalar({1, 1})));
    REQUIRE(S11.size() == 3);  // -2, 0, 2
    CHECK(S11.at(0.0) == 0.5);

    const auto S12 = as_map(weighted_sum_distribution(X, WeightVector::scalar({1, 2})));
    REQUIRE(S12.size() == 4);
    for (double v : {-3.0, -1.0, 1.0, 3.0}) CHECK(S12.at(v) == 0.25);

    const auto S0 = as_map(weighted_sum_distribution(X, WeightVector::scalar({0})));
    REQUIRE(S0.size() == 1);
    CHECK(S0.at(0.0) == 1.0);

    CHECK_THROWS_AS((void)weighted_sum_distribution(X, WeightVector::scalar(std::vector<double>(30, 1.0)), 10),
                    CapacityError);
}

TEST_CASE("spectral measure M* and the half measure") {
    const auto a = WeightVector::scalar({1, 1, 5});
    const auto Ms = as_map(spectral_measure_Mstar(a));
    CHECK(Ms.at(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(Ms.at(-5.0) == doctest::Approx(1.0 / 6.0));
    const DiscreteDistribution half = half_weight_measure(a);
    CHECK(half.total_mass() == doctest::Approx(0.5));
    CHECK_FALSE(half.normalized());
}

TEST_CASE("named distributions") {
    CHECK(parse_named_distribution("rademacher").size() == 2);
    CHECK(parse_named_distribution("uniform{-1,0,1}").size() == 3);
    const auto B = parse_named_distribution("bernoulli(0.3)");
    CHECK(as_map(B).at(1.0) == doctest::Approx(0.3));
    CHECK_THROWS_AS((void)parse_named_distribution("gaussian"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_named_distribution("bernoulli(1.5)"), std::invalid_argument);
}

TEST_CASE("distribution construction errors") {
    CHECK_THROWS_AS(DiscreteDistribution(PointCloud(1, {0.0, 1.0}), {0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteDistribution(PointCloud(1, {0.0, 1.0}), {1.5, -0.5}), std::invalid_argument);
}

TEST_CASE("matrix A and the operator norm") {
    const auto I = matrix_A(WeightVector(2, {1, 0, 0, 1}));
    CHECK(I.det == doctest::Approx(1.0));
    CHECK(I(0, 1) == 0.0);
    CHECK(matrix_A(WeightVector::scalar({1, 2, 3})).det == doctest::Approx(14.0));

    testkit::Gen gen(5);
    for (int it = 0; it < 50; ++it) {
        const std::size_t d = 1 + static_cast<std::size_t>(gen.integer(0, 2));
        const WeightVector a = gen.weights(static_cast<std::size_t>(gen.integer(1, 6)), d);
        const MatrixA A = matrix_A(a);
        CHECK(A.det >= -1e-9);
        // <A t, t> = ||t.a||^2 by two paths.
        std::vector<double> t(d);
        for (auto& x : t) x = gen.uniform(-3, 3);
        double direct = 0;
        for (std::size_t k = 0; k < a.n(); ++k) direct += dot(t, a.row(k)) * dot(t, a.row(k));
        CHECK(A.quadratic_form(t) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(operator_norm(a) * operator_norm(a) * dot(t, t) >= direct - 1e-9);
    }
}
