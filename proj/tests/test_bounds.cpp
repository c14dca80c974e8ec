#include "anticonc/bounds.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace anticonc;

TEST_CASE("Arak-type bounds by plug-in") {
    const BoundValue a = bound_arak_T16(2.0, 2.0, 0, 1, 1.0);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(a.vacuous);
    CHECK(bound_arak_T16(1.0, 1.0, 1, 2, 1.0).value == doctest::Approx(0.5 + std::pow(2.0, 2.5)).epsilon(1e-14));
    CHECK(bound_arak_T16(1e12, 1e12, 2, 5, 1.0).value < 1e-12);
    CHECK(bound_arak_T16(0.0, 1.0, 0, 1, 1.0).vacuous);

    const BoundValue t17 = bound_T17(1.0, 1.0, 0, 1, 4, 1.0, 1.0, 1.0);
    CHECK(t17.value == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t17.vacuous);
    CHECK(bound_T17(1.0, 1.0, 0, 1, 1'000'000'000, 0.2, 0.3, 1.0).value < 1e-3);

    const double ag = 3.0;
    const std::uint64_t s = 4;
    CHECK(bound_T110(ag, 1.0, 0, s, 1.0, 1.0).value ==
          doctest::Approx(1.0 / (s * std::sqrt(ag)) + 1.0 / std::sqrt(ag)).epsilon(1e-15));
    CHECK(bound_T110(0.0, 1.0, 0, 1, 1.0, 1.0).vacuous);
    CHECK(bound_T110(ag, 1.0, 0, 1'000'000'000'000ULL, 1.0, 1.0).value ==
          doctest::Approx(1.0 / std::sqrt(ag)).epsilon(1e-9));
}

TEST_CASE("guarded bounds report the guard") {
    const GuardedBound g = bound_T18(1.0, 0.5, 1, 3, 100, 0.4, 0.3, 1.0, 1.0);
    CHECK_FALSE(g.guard_ok);
    CHECK(g.guard_value == 0.3);
    CHECK(bound_T111(1.0, 0.5, 1, 3, 100, 0.4, 2.0, 1.0, 1.0, 1.0).guard_ok);
}

TEST_CASE("bounds are monotone in their size parameter") {
    testkit::Gen gen(3);
    for (int it = 0; it < 300; ++it) {
        const std::size_t r = static_cast<std::size_t>(gen.integer(0, 3));
        const double x = gen.uniform(0.01, 50.0);
        const double y = x * gen.uniform(1.0, 10.0);
        CHECK(bound_arak_T16(x, 1.0, r, 7, 1.3).value >= bound_arak_T16(y, 1.0, r, 7, 1.3).value);
        CHECK(bound_T110(x, 1.0, r, 7, 1.3, 0.5).value >= bound_T110(y, 1.0, r, 7, 1.3, 0.5).value);
    }
}

TEST_CASE("H-side lemmas") {
    CHECK(bound_lemma15(0.3, 1.0, 1.0).value == bound_lemma13(0.3, 1.0).value);
    CHECK(bound_cor14(0.1, 1.0, 1.0, 2, 1.0).value == doctest::Approx(0.4));
    CHECK(bound_cor14(0.1, 2.5, 1.0, 1, 1.0).value == doctest::Approx(0.3));
    CHECK(bound_lemma15(0.3, 0.0, 1.0).vacuous);
    // p = lambda for the symmetrized Rademacher law at ratio 1.
    const auto G = symmetrize(DiscreteDistribution::rademacher());
    const auto f = functionals_at(G, 1.0, 1);
    CHECK(f.p == f.lambda);
    CHECK(bound_lemma15(0.2, f.lambda, 1.0).value == doctest::Approx(bound_lemma13(0.2, 1.0).value / f.lambda));
}

TEST_CASE("LCD bound T31") {
    CHECK(bound_T31(1.0, 0.5, 2.0, 1.0, 4.0, 1, 1.0).value == doctest::Approx(0.5 + std::exp(-4.0)).epsilon(1e-15));
    const double det = matrix_A(WeightVector(2, {1, 0, 0, 1})).det;
    CHECK(bound_T31(4.0, 0.5, 2.0, 1.0, det, 2, 1.0).value ==
          doctest::Approx(1.0 / 4.0 + std::exp(-16.0)).epsilon(1e-14));
    CHECK(bound_T31(1e9, 0.5, 2.0, 1.0, 4.0, 1, 1.0).value < 1e-4);
}

TEST_CASE("T33, T34, T35") {
    ConstantsConfig C;
    // Two-atom G: p = M, so T34 = T35.
    const auto two = DiscreteDistribution::uniform({-3.0, 3.0});
    const auto f2 = functionals_at(two, 1.0, 1);
    CHECK(f2.p == f2.M);
    const LcdBounds eq = bound_T33_T34_T35(f2, 0.5, 3.0, 1.0, 2.0, 1, C);
    CHECK(eq.T34.value == eq.T35.value);

    const auto G = symmetrize(DiscreteDistribution::rademacher());
    const auto f = taud_functionals(G, 2.0, 2.0, 1);  // tau D = 4
    CHECK(f.p == 0.0);
    CHECK(f.M == 0.125);
    const LcdBounds b = bound_T33_T34_T35(f, 0.5, 2.0, 1.0, 4.0, 1, C);
    CHECK(b.T34.vacuous);
    CHECK(std::isfinite(b.T35.value));
    CHECK(b.dominance_holds());

    // lambda >= p orders the first terms.
    const auto g3 = symmetrize(DiscreteDistribution::uniform({-1.0, 0.0, 1.0}));
    const auto f3 = functionals_at(g3, 1.5, 1);
    CHECK(f3.lambda > f3.p);
    const LcdBounds c = bound_T33_T34_T35(f3, 0.5, 3.0, 1.0, 3.0, 1, C);
    CHECK(c.T33.value * f3.lambda <= c.T34.value + 1e-15);
}

TEST_CASE("functionals at zero take the limit") {
    const auto G = symmetrize(DiscreteDistribution::uniform({0.0, 1.0, 3.0}));
    const auto f = functionals_at(G, 0.0, 2);
    CHECK(f.p == doctest::Approx(2.0 / 3.0));
    CHECK(f.lambda == f.p);
    CHECK(f.M == f.p);
    CHECK_THROWS_AS((void)functionals_at(G, -1.0, 1), std::domain_error);
}

TEST_CASE("pointwise chain") {
    CHECK(cosine_inequality_holds(0.0));
    CHECK(cosine_inequality_holds(kPi));
    CHECK(cosine_inequality_holds(-kPi));
    const auto a = WeightVector::scalar({1.0});
    const double pi[1] = {kPi};
    CHECK(h_char_fn(a, pi) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    const PointCloud origin(1, {0.0, kPi});
    const ChainReport r = verify_pointwise_chain(a, origin, 0.5, 1.0, 1.0);
    CHECK(r.holds());
    CHECK(r.points == 2);

    testkit::Gen gen(71);
    for (int it = 0; it < 10; ++it) {
        const std::size_t d = 1 + static_cast<std::size_t>(it % 3);
        const auto w = gen.weights(static_cast<std::size_t>(gen.integer(1, 10)), d);
        const PointCloud grid = make_t_grid(d, 2 * kPi * 3.0, 2000, RngSeed{static_cast<std::uint64_t>(it)});
        CHECK(grid.size() == 2000);
        CHECK(verify_pointwise_chain(w, grid, 0.5, 1.0, 0.1).holds());
    }
}

TEST_CASE("constants configuration") {
    ConstantsConfig c;
    CHECK(c.get("c_exp35") == 4.0);
    c.set("c2", 2.5);
    CHECK(c.c2 == 2.5);
    CHECK_THROWS_AS(c.set("c99", 1.0), std::invalid_argument);
    CHECK_THROWS_AS(c.set("c3", 0.0), std::domain_error);
    CHECK(ConstantsConfig::names().size() == 17);
}

TEST_CASE("inverse report") {
    const std::size_t n = 6;
    std::vector<double> v;
    for (std::size_t k = 1; k <= n; ++k) v.push_back(static_cast<double>(k));
    const auto a = WeightVector::scalar(v);
    const auto X = DiscreteDistribution::rademacher();
    InverseInputs in;
    in.tau = in.kappa = in.delta = 1.0;
    in.s = 2 * n + 1;
    const double q = exact_Q_1d(X, a, 1.0).value;
    const InverseReport rep = inverse_principle_report(X, a, q, in, ConstantsConfig{});
    CHECK(rep.witness_rank == 1);
    CHECK(rep.witness_uncovered == 0);
    CHECK(rep.witness_size <= 2 * n + 1);
    CHECK(rep.q == q);

    // p(tau / kappa) = 0: p-budgets vacuous, lambda-budgets finite.
    InverseInputs wide = in;
    wide.tau = 4.0;
    const InverseReport z = inverse_principle_report(X, a, exact_Q_1d(X, a, 4.0).value, wide, ConstantsConfig{});
    CHECK(z.p == 0.0);
    CHECK(std::isinf(z.uncovered_budget_p));
    CHECK(std::isfinite(z.uncovered_budget_lambda));

    // q = 1 for a = (0, ..., 0, 1) at tau = 2.
    const auto deg = WeightVector::scalar({0, 0, 0, 1});
    const double q1 = exact_Q_1d(X, deg, 2.0).value;
    CHECK(q1 == 1.0);
    InverseInputs two = in;
    two.tau = 2.0;
    two.kappa = 2.0;
    const InverseReport d = inverse_principle_report(X, deg, q1, two, ConstantsConfig{});
    CHECK(d.witness_rank <= 1);
    CHECK(d.size_budget == doctest::Approx(1.0));
}
