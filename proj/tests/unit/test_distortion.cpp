#include <doctest.h>

#include <cmath>
#include <random>

#include "gaugedyn/distortion.hpp"
#include "gaugedyn/errors.hpp"

using namespace gaugedyn;

namespace {

cplx koebe(cplx z) { return z / ((1.0 - z) * (1.0 - z)); }

// Random Mobius map with its pole at distance >= 1.5 r from z0.
Mobius random_mobius(std::mt19937_64& rng, cplx z0, double r) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        Mobius m{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        if (std::abs(m.a * m.d - m.b * m.c) < 0.2) continue;
        if (std::abs(m.c * z0 + m.d) > 1.5 * std::abs(m.c) * r && std::abs(m.c * z0 + m.d) > 0.1) return m;
    }
}

}  // namespace

TEST_CASE("Koebe bounds") {
    const auto c = koebe_derivative_bounds(2.0, 3.0, 0.0);
    CHECK(c.lo == doctest::Approx(3.0));
    CHECK(c.hi == doctest::Approx(3.0));
    const auto v0 = koebe_value_bounds(2.0, 3.0, 0.0);
    CHECK(v0.lo == 0.0);
    CHECK(v0.hi == 0.0);
    for (double s : {0.1, 0.5, 0.9}) {
        // the Koebe function is extremal on the positive axis
        CHECK(koebe_derivative_bounds(1.0, 1.0, s).hi == doctest::Approx((1 + s) / std::pow(1 - s, 3)));
        CHECK(koebe_value_bounds(1.0, 1.0, s).hi == doctest::Approx(std::abs(koebe(s))));
        const auto d = koebe_derivative_bounds(1.0, 1.0, s);
        const auto v = koebe_value_bounds(1.0, 1.0, s);
        CHECK(d.lo <= 1.0);
        CHECK(1.0 <= d.hi);
        CHECK(v.lo <= s);
        CHECK(s <= v.hi);
    }
    CHECK_THROWS_AS((void)koebe_derivative_bounds(1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS((void)koebe_value_bounds(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("Koebe sandwich on univalent maps") {
    const auto k = koebe_sandwich(koebe, 0.0, 1.0);
    CHECK(k.worst_hi <= 1.01);
    CHECK(k.worst_hi >= 0.99);  // attained on the positive axis
    CHECK(k.worst_lo <= 1.01);
    const auto e = koebe_sandwich([](cplx z) { return std::exp(z); }, cplx(0.3, 0.2), 1.0);
    CHECK(e.worst_hi <= 1.01);
    CHECK(e.worst_lo <= 1.01);
    const Mobius m{1.0, 0.0, -0.4, 1.0};
    const auto mm = koebe_sandwich(m.as_map(), 0.0, 2.5);
    CHECK(mm.worst_hi <= 1.01);
    CHECK(mm.worst_lo <= 1.01);
}

TEST_CASE("distortion estimates") {
    const auto aff = estimate_distortion([](cplx z) { return 2.0 * z + 1.0; }, Square{cplx(0.3, -0.2), 1.0, 0.4}, 400);
    CHECK(aff.L == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(aff.D_lower == doctest::Approx(1.0).epsilon(1e-8));

    // |exp'| = e^x; the rotated square spans side sqrt 2 in x
    const auto ex = estimate_distortion([](cplx z) { return std::exp(z); }, Square{cplx(1.0, 0.5), 0.1, kPi / 4}, 441);
    CHECK(std::abs(ex.L - std::exp(0.1 * std::sqrt(2.0))) < 1e-3);
    CHECK(ex.D_lower <= ex.L * (1.0 + 1e-6));
    CHECK(ex.D_lower >= 1.0);

    CHECK_THROWS_AS((void)estimate_distortion([](cplx z) { return z * z; }, Square{cplx(0.0, 0.0), 2.0, 0.0}, 100),
                    IllConditionedError);
}

TEST_CASE("z^4 on the ellipse") {
    const auto q = quartic_example();
    // sup|z| on 4(x-1)^2 + y^2 < 1 is sqrt(7/3), reached at x = 4/3
    CHECK(q.L_closed == doctest::Approx(8.0 * std::pow(7.0 / 3.0, 1.5)));
    CHECK(q.L_closed > 16.0 * std::sqrt(2.0));
    CHECK(std::abs(q.L_measured / q.L_closed - 1.0) < 1e-2);
    CHECK_FALSE(q.full_domain_injective);
    REQUIRE(q.D_lower.size() == 3);
    for (std::size_t k = 1; k < q.D_lower.size(); ++k) CHECK(q.D_lower[k] > 5.0 * q.D_lower[k - 1]);
}

TEST_CASE("first distortion lemma") {
    const auto aff = lemma_first_check([](cplx z) { return cplx(0, 3) * z - 2.0; }, 1.0, 0.5, 1.5);
    CHECK(aff.L_measured == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(aff.holds());

    // pole at K r: |f'| = 1 / |1 - z / 3|^2 gives L = ((K+1)/(K-1))^2 on the unit disk
    const double K = 3.0;
    const Mobius m{1.0, 0.0, -1.0 / K, 1.0};
    const auto rep = lemma_first_check(m.as_map(), 0.0, 1.0, K, 1600);
    CHECK(rep.L_bound == doctest::Approx(16.0));
    CHECK(rep.D_bound == doctest::Approx(64.0));
    CHECK(rep.L_measured == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(rep.holds());

    double prev = 10.0;
    for (double r : {0.1, 0.01, 0.001}) {
        // exp is univalent on disks of radius 3 < pi
        const auto e = lemma_first_check([](cplx z) { return std::exp(z); }, cplx(0.5, 0.5), r, 3.0 / r);
        CHECK(e.L_measured == doctest::Approx(std::exp(2 * r)).epsilon(1e-4));
        CHECK(e.L_measured < prev);
        prev = e.L_measured;
        CHECK(e.holds());
    }
    CHECK_THROWS_AS((void)lemma_first_check(m.as_map(), 0.0, 1.0, 1.0), PreconditionError);
}

TEST_CASE("square image frames") {
    const Square Q{cplx(0.5, 0.5), 0.2, 0.3};
    const auto aff = square_image_frames([](cplx z) { return cplx(1, 1) * z + 2.0; }, Q, 1.0, 0.01);
    CHECK(aff.contained);
    CHECK(aff.contains);
    CHECK(aff.inner.side == doctest::Approx(std::sqrt(2.0) * 0.2 * (1 - std::sqrt(2.0) * 0.01)));
    CHECK(aff.inner.angle == doctest::Approx(0.3 + kPi / 4));

    const HoloMap ex = [](cplx z) { return std::exp(z); };
    const Square Qe{cplx(1.0, 0.0), 0.05, 0.0};
    const double d = estimate_distortion(ex, Qe, 400).D_lower;
    const auto fe = square_image_frames(ex, Qe, d, 0.1, 1000);
    CHECK(fe.contained);
    CHECK(fe.contains);
    const double dK = std::pow(101.0 / 99.0, 6);
    const auto fk = square_image_frames(ex, Qe, dK, 0.1, 1000);
    CHECK(fk.contained);
    CHECK(fk.contains);

    const Mobius m{1.0, 0.0, -1.0, 1.0};
    const Square Qm{cplx(0.0, 0.0), 0.1, 0.0};
    const auto fm = square_image_frames(m.as_map(), Qm, std::pow(11.0 / 9.0, 6), 0.2, 1000);
    CHECK(fm.contained);
    CHECK(fm.contains);

    // without the distortion factor the frames fail for a strongly bent image
    const auto tight = square_image_frames(ex, Square{cplx(0.0, 0.0), 1.5, 0.0}, 1.0, 0.01, 1000);
    CHECK_FALSE((tight.contained && tight.contains));
}

TEST_CASE("density transfer") {
    const Rect box{0.0, 1.0, 0.0, 1.0};
    BoolGrid lower(box, 200, 200);
    for (std::size_t j = 0; j < 100; ++j)
        for (std::size_t i = 0; i < 200; ++i) lower.set(i, j, true);
    const Square U{cplx(0.5, 0.5), 1.0, 0.0};
    const auto aff = density_transfer_check([](cplx z) { return 3.0 * z - 1.0; }, lower, U, 4);
    CHECK(aff.lhs == doctest::Approx(aff.rhs).epsilon(1e-9));
    CHECK(aff.lhs == doctest::Approx(0.5));

    BoolGrid left(box, 200, 200);
    for (std::size_t j = 0; j < 200; ++j)
        for (std::size_t i = 0; i < 100; ++i) left.set(i, j, true);
    const auto ex = density_transfer_check([](cplx z) { return std::exp(z); }, left, U, 3);
    CHECK(ex.lhs <= ex.rhs * 1.05);
    CHECK(ex.L == doctest::Approx(std::exp(1.0)).epsilon(0.01));

    const BoolGrid all(box, 200, 200, true);
    const auto full = density_transfer_check([](cplx z) { return std::exp(z); }, all, U);
    CHECK(full.lhs == 1.0);
    CHECK(full.lhs <= full.rhs);
}

TEST_CASE("Mobius distortion calculus") {
    std::mt19937_64 rng(11);
    const cplx z0(0.2, -0.1);
    const double r = 0.5;
    const auto U = disk_samples(z0, r, 10, 40);
    for (int trial = 0; trial < 12; ++trial) {
        const Mobius f = random_mobius(rng, z0, r);
        const auto [c1, r1] = f.image_disk(z0, r);
        for (double t : {0.3, 1.7, 4.0})
            CHECK(std::abs(f(z0 + std::polar(r, t)) - c1) == doctest::Approx(r1).epsilon(1e-9));
        const Mobius g = random_mobius(rng, c1, r1);
        const double Df = f.distortion_on_disk(z0, r), Dg = g.distortion_on_disk(c1, r1);

        const auto ef = estimate_distortion(f.as_map(), U, 1e-7 * r);
        CHECK(ef.D_lower <= Df * (1 + 1e-6));
        CHECK(ef.L <= Df * (1 + 1e-6));
        CHECK(ef.L >= 0.98 * Df);

        const Mobius gf = compose(g, f);
        CHECK(std::abs(gf(z0) - g(f(z0))) < 1e-9 * (1 + std::abs(gf(z0))));
        const auto egf = estimate_distortion(gf.as_map(), U, 1e-7 * r);
        CHECK(egf.D_lower <= Dg * Df * (1 + 1e-6));

        // inverse on an independent lattice of the image disk
        const auto V = disk_samples(c1, r1, 10, 40);
        const auto einv = estimate_distortion(f.inverse().as_map(), V, 1e-7 * r1);
        CHECK(std::abs(einv.D_lower / ef.D_lower - 1.0) < 0.05);
    }
    const Mobius pole_inside{1.0, 0.0, 1.0, -0.5};
    CHECK_THROWS_AS((void)pole_inside.distortion_on_disk(0.0, 1.0), DomainError);
}

TEST_CASE("normalized univalent maps stay close to the identity") {
    const double eps = 0.1, delta = 0.02;
    CHECK(epsdelta_witness(koebe, delta) < eps);
    CHECK(epsdelta_witness(koebe, delta) == doctest::Approx(1.0 / ((1 - delta) * (1 - delta)) - 1.0).epsilon(1e-3));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi), rad(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const cplx a = std::polar(rad(rng), ang(rng));
        CHECK(epsdelta_witness([a](cplx z) { return z / (1.0 - a * z); }, delta) < eps);
        const cplx rot = std::polar(1.0, ang(rng));
        CHECK(epsdelta_witness([rot](cplx z) { return koebe(rot * z) / rot; }, delta) < eps);
    }
}
