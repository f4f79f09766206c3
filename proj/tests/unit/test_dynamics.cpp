#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gaugedyn/dynamics.hpp"
#include "gaugedyn/errors.hpp"

using namespace gaugedyn;

TEST_CASE("orbits of the exponential family") {
    const FamilyMember f = make_exponential(0.1);
    const ExpParams& p = f.exp();
    const Orbit fixed = iterate(f, p.q, 50);
    CHECK_FALSE(fixed.escaped);
    CHECK(fixed.points.size() == 51);
    for (cplx z : fixed.points) CHECK(std::abs(z - p.q) < 1e-12);

    const Orbit rep = iterate(f, p.beta, 20);
    for (std::size_t k = 1; k < rep.points.size(); ++k)
        CHECK(std::abs(rep.points[k] - rep.points[k - 1]) < 1e-9);

    const Orbit far = iterate(f, 100.0, 50);
    CHECK(far.escaped);
    REQUIRE(far.escape_index);
    CHECK(*far.escape_index <= 3);

    // repeated runs give identical orbits
    const Orbit a = iterate(f, cplx(0.3, 2.0), 200), b = iterate(f, cplx(0.3, 2.0), 200);
    CHECK(a.points == b.points);

    CHECK(eval(f, cplx(1.0, 2.0)) == 0.1 * std::exp(cplx(1.0, 2.0)));
    const cplx big(2000.0, 1.0);
    CHECK(log_eval(f, big).real() == doctest::Approx(std::log(0.1) + 2000.0));
    CHECK(log_eval_at_log(f, cplx(std::log(2000.0), 0.0)).real() == doctest::Approx(std::log(0.1) + 2000.0));
}

TEST_CASE("classification") {
    const FamilyMember f = make_exponential(0.1);
    const ExpParams& p = f.exp();
    CHECK(classify(f, p.q, 100) == Classification::Bounded);
    CHECK(classify(f, 50.0, 100) == Classification::Escaping);
    for (double x = p.beta + 0.05; x < 60.0; x += 0.7) CHECK(classify(f, x, 200) == Classification::Escaping);
    for (double x = -5.0; x < p.beta - 0.05; x += 0.3) CHECK(classify(f, x, 400) == Classification::Bounded);
    CHECK(std::string(to_string(Classification::Undecided)) == "undecided");

    // refinement oracle: a sample near beta + 10 pi i keeps its class under 2x and 4x n_max
    const cplx z0(p.beta, 10.0 * kPi);
    const Classification c1 = classify(f, z0, 100), c4 = classify(f, z0, 400);
    if (c1 != Classification::Undecided) CHECK(c1 == c4);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-2.0, 8.0), im(-8.0, 8.0);
    for (int k = 0; k < 100; ++k) {
        const cplx z(re(rng), im(rng));
        const Classification a = classify(f, z, 100), b = classify(f, z, 200);
        if (a != Classification::Undecided && b != Classification::Undecided) CHECK(a == b);
    }
}

TEST_CASE("Mittag-Leffler members") {
    const FamilyMember g = make_mittag_leffler(3.0);
    const MLParams& p = g.ml();
    CHECK(log_eval(g, 0.0).real() == doctest::Approx(p.log_a));
    // the attractor is fixed and classified as bounded
    CHECK(std::abs(eval(g, g.attractor) - g.attractor) < 1e-12);
    CHECK(classify(g, 0.0, 100) == Classification::Bounded);
    CHECK(classify(g, 30.0, 100) == Classification::Escaping);
}

TEST_CASE("escape scan") {
    const FamilyMember f = make_exponential(0.1);
    const Rect box{-2.0, 8.0, -8.0, 8.0};
    const BoolGrid a = escape_scan(f, box, 64, 48, 100, kDefaultBailout, 1);
    const BoolGrid b = escape_scan(f, box, 64, 48, 100, kDefaultBailout, 8);
    CHECK(a.raw() == b.raw());
    for (std::size_t j = 0; j < a.ny(); ++j)
        for (std::size_t i = 0; i < a.nx(); ++i)
            CHECK(a.at(i, j) == (classify(f, a.center(i, j), 100) == Classification::Escaping));
    CHECK(a.count() > 0);
    CHECK(a.count() < a.size());
    CHECK_THROWS_AS((void)escape_scan(f, Rect{1, 0, 0, 1}, 8, 8, 10), PreconditionError);
}

TEST_CASE("maximum modulus") {
    const FamilyMember f = make_exponential(0.1);
    for (double r : {1.0, 10.0, 1000.0}) CHECK(std::abs(max_modulus(f, r) - (std::log(0.1) + r)) < 1e-9);
    CHECK(max_modulus(f, 1e-9) == doctest::Approx(std::log(0.1)).epsilon(1e-6));

    const FamilyMember g = make_mittag_leffler(3.0);
    const double lm = max_modulus(g, 10.0);
    const double expect = g.ml().log_a + std::log(3.0) + 1000.0;
    CHECK(std::abs(lm - expect) <= 0.01 * std::abs(expect));
    CHECK_THROWS_AS((void)max_modulus(f, 0.0), PreconditionError);
}

TEST_CASE("order estimates") {
    const std::vector<double> r1{10, 20, 40, 80};
    CHECK(order_estimate(make_exponential(0.1), r1).slope == doctest::Approx(1.0).epsilon(0.02));
    const std::vector<double> r2{5, 10, 20, 40};
    CHECK(std::abs(order_estimate(make_mittag_leffler(3.0), r2).slope - 3.0) <= 0.1);
    CHECK(std::abs(order_estimate(make_mittag_leffler(1.0), r2).slope - 1.0) <= 0.05);
    const std::vector<double> few{5, 10, 20};
    CHECK_THROWS_AS((void)order_estimate(make_exponential(0.1), few), PreconditionError);
}
