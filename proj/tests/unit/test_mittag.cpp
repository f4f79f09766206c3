#include <doctest.h>

#include <cmath>
#include <complex>

#include "gaugedyn/errors.hpp"
#include "gaugedyn/mittag.hpp"

using namespace gaugedyn;

namespace {

const MLParams& params3() {
    static const MLParams p = make_ml_params(3.0);
    return p;
}

const MLParams& params2() {
    static const MLParams p = make_ml_params(2.0);
    return p;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-15));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)gamma_fn(0.0), DomainError);
    for (double x : {0.3, 2.5, 40.0, 250.0}) CHECK(log_gamma(x + 1.0) - log_gamma(x) == doctest::Approx(std::log(x)));
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-3.0) == 0.0);
    // reflection: Gamma(-1/2) = -2 sqrt(pi)
    CHECK(rgamma(-0.5) == doctest::Approx(-1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-14));
    CHECK(rgamma(4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("Mittag-Leffler series closed forms") {
    CHECK(std::abs(ml_series(1.0, 1.0) - std::exp(1.0)) < 1e-14);
    CHECK(std::abs(ml_series(0.5, 4.0) - std::cosh(2.0)) < 1e-14);
    for (double rho : {0.5, 1.0, 2.7, 9.0}) CHECK(ml_series(rho, 0.0) == cplx(1.0, 0.0));

    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const cplx z = std::polar(10.0 * (k % 10 + 1) / 10.0, 0.7 * k);
        worst = std::max(worst, rel(ml_series(1.0, z), std::exp(z)));
    }
    CHECK(worst <= 1e-10);
    worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double x = 20.0 * k / 49.0;
        worst = std::max(worst, rel(ml_series(0.5, x), std::cosh(std::sqrt(x))));
    }
    CHECK(worst <= 1e-10);
    // f_2 = E_{1/2}: e^{z^2} erfc(-z)
    for (double x : {-3.0, -0.5, 0.7, 2.0, 5.0})
        CHECK(ml_series(2.0, x).real() == doctest::Approx(std::exp(x * x) * std::erfc(-x)).epsilon(1e-12));

    const cplx z(900.0, 30.0);  // e^z overflows a double
    const cplx w = ml_series_log(1.0, z);
    CHECK(w.real() == doctest::Approx(900.0).epsilon(1e-12));
    CHECK(std::abs(std::remainder(w.imag() - 30.0, kTwoPi)) < 1e-9);
    CHECK_THROWS_AS((void)ml_series(0.0, 1.0), DomainError);
}

TEST_CASE("sector representation") {
    CHECK(ml_sector(1.0, 50.0).real() == doctest::Approx(50.0));
    CHECK(ml_sector(2.0, 10.0).real() == doctest::Approx(std::log(2.0) + 100.0));
    CHECK(std::abs(ml_series(3.0, 3.0) / (3.0 * std::exp(27.0)) - 1.0) <= 0.05);
    CHECK_THROWS_AS((void)ml_sector(2.0, cplx(0.0, 10.0), 5.0), DomainError);
    CHECK_THROWS_AS((void)ml_sector(2.0, 3.0, 5.0), DomainError);
}

TEST_CASE("scaled evaluation") {
    const MLParams& p = params3();
    CHECK(p.seam_error <= 0.05);
    CHECK(p.R > p.C0 / std::sin(p.delta));
    CHECK(ml_eval(p, 0.0).real() == doctest::Approx(p.log_a));

    // both sides of the seam
    for (double t : {0.0, 0.4, 0.9}) {
        const cplx in = std::polar(p.r_switch * (1 - 1e-9), t), out = std::polar(p.r_switch * (1 + 1e-9), t);
        const cplx a = ml_log(p, in), b = ml_log(p, out);
        CHECK(std::abs(a.real() - b.real()) <= 0.05 * std::max(1.0, std::abs(a.real())));
    }
    // outside the sector the value stays in the unit disk after scaling
    CHECK(ml_eval(p, -10.0).real() <= p.log_a + 1e-12);

    // asymptotic branch against the quad series while its cancellation stays inside quad precision
    const MLParams& q = params2();
    for (cplx z : {cplx(8.0, 0.0), cplx(7.0, 2.0), cplx(-7.0, 0.5), cplx(0.3, 7.2)}) {
        const cplx s = ml_series_log(2.0, z, 1e-30, 200000);
        const cplx m = ml_log(q, z);
        CHECK(m.real() == doctest::Approx(s.real()).epsilon(1e-8));
        CHECK(std::abs(std::remainder(m.imag() - s.imag(), kTwoPi)) < 1e-6);
    }
    for (cplx z : {cplx(1.5, 0.5), cplx(-2.0, 3.0)}) {
        const cplx m = ml_log(q, z);
        CHECK(std::abs(std::exp(m) - ml_series(2.0, z)) <= 1e-12 * std::abs(ml_series(2.0, z)));
    }
    // evaluation in the log plane matches
    const cplx w(1.7, 0.3);
    CHECK(std::abs(ml_log_at_log(q, w) - ml_log(q, std::exp(w))) < 1e-9);
    CHECK_THROWS_AS((void)make_ml_params(0.5), DomainError);
}

TEST_CASE("calibration") {
    CHECK(calibrate_scaling(1.0, 10.0, 720) <= 0.5 * std::exp(-10.0) * (1 + 1e-12));
    const MLParams& p = params2();
    for (int k = 0; k < 720; ++k) {
        const cplx z = std::polar(p.R, kTwoPi * k / 720.0);
        CHECK(ml_eval(p, z).real() <= std::log(0.5) + 1e-9);
    }
    const double a1 = calibrate_scaling_log(3.0, 20.0, 720), a4 = calibrate_scaling_log(3.0, 20.0, 2880);
    CHECK(std::abs(std::expm1(a4 - a1)) < 0.1);
}

TEST_CASE("sector bands") {
    CHECK(sector_contains({1.0}, cplx(0.0, kPi)));
    CHECK_FALSE(sector_contains({1.0}, 0.0));
    CHECK_FALSE(sector_contains({2.0}, cplx(0.0, kPi / 4 - 0.01)));
    CHECK(sector_contains({2.0}, cplx(0.0, kPi / 4 + 0.01)));
    CHECK(sector_contains({2.0}, cplx(5.0, kPi / 4 + 0.01 - 6 * kPi)));
}

TEST_CASE("square packing of the bands") {
    for (auto [rho, K, target] : {std::tuple{100.0, 1000.0, 0.94}, std::tuple{1.0, 500.0, 0.45}, std::tuple{2.0, 400.0, 0.70}}) {
        const SectorSpec spec{rho};
        const Square B{cplx(K / 2 + 3.0, 1.234), K, 0.0};
        const auto sq = sector_square_packing(spec, B);
        const double s = spec.band_height();
        // independent count: whole bands inside B times whole columns per band
        const double y0 = B.center.imag() - K / 2, y1 = y0 + K;
        long rows = 0;
        for (long k = -1000; k < 1000; ++k) {
            const double lo = spec.band_low() + kTwoPi * static_cast<double>(k);
            if (lo >= y0 && lo + s <= y1) ++rows;
        }
        const auto cols = static_cast<long>(std::floor(K / s + 1e-12));
        CHECK(static_cast<long>(sq.size()) == rows * cols);
        const double dens = static_cast<double>(sq.size()) * s * s / (K * K);
        CHECK(dens >= target);
        CHECK(dens >= (1 - 1 / (2 * rho)) - kPackingSlack);
        for (std::size_t i = 0; i < sq.size(); ++i) {
            CHECK(B.contains_square(sq[i], 1e-9));
            CHECK(sector_contains(spec, sq[i].center + cplx(0, s / 2 - 1e-9)));
            CHECK(sector_contains(spec, sq[i].center - cplx(0, s / 2 - 1e-9)));
            if (i + 1 < sq.size()) CHECK(disjoint_axis_aligned(sq[i], sq[i + 1], 1e-9));
        }
    }
    // rotated box
    const Square R{cplx(0.0, 0.0), packing_min_side(5.0, 0.4), 0.4};
    const auto rot = sector_square_packing({5.0}, R);
    double area = 0.0;
    for (const auto& q : rot) {
        CHECK(R.contains_square(q, 1e-9));
        area += q.area();
    }
    CHECK(area / R.area() >= 0.9 - kPackingSlack);
    CHECK_THROWS_AS((void)sector_square_packing({2.0}, Square{cplx(0, 0), 50.0, 0.0}), PreconditionError);
}
