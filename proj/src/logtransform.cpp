#include "gaugedyn/logtransform.hpp"

#include <cmath>
#include <limits>

#include "gaugedyn/errors.hpp"
#include "gaugedyn/io.hpp"
#include "gaugedyn/parallel.hpp"

namespace gaugedyn {

namespace {

double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

}  // namespace

cplx exp_tract_F(const ExpParams& params, cplx w) {
    const cplx ew = std::exp(w);
    if (!(ew.real() > -params.log_lambda)) {
        throw DomainError("w is outside the tract Re e^w > log(1/lambda)");
    }
    return params.log_lambda + ew;
}

cplx exp_tract_G(const ExpParams& params, cplx zeta) { return std::log(zeta - params.log_lambda); }

cplx exp_tract_G_prime(const ExpParams& params, cplx zeta) { return 1.0 / (zeta - params.log_lambda); }

BoolGrid TractGrid::level_mask(double R) const {
    BoolGrid m(in_tract.bbox(), in_tract.nx(), in_tract.ny());
    for (std::size_t j = 0; j < m.ny(); ++j)
        for (std::size_t i = 0; i < m.nx(); ++i) m.set(i, j, in_tract.at(i, j) && re_f(i, j) > R);
    return m;
}

TractGrid tract_scan(const FamilyMember& f, const Rect& bbox, std::size_t nx, std::size_t ny, unsigned threads) {
    if (nx < 16 || ny < 16) throw PreconditionError("tract_scan needs resolution >= 16 x 16");
    TractGrid g{BoolGrid(bbox, nx, ny), std::vector<double>(nx * ny, 0.0), 0};
    std::vector<std::size_t> fail_count(ny, 0);
    parallel_rows(ny, threads, [&](std::size_t j) {
        for (std::size_t i = 0; i < nx; ++i) {
            double v = -std::numeric_limits<double>::infinity();
            try {
                v = log_eval_at_log(f, g.in_tract.center(i, j)).real();
            } catch (const std::exception&) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            if (std::isnan(v)) {
                ++fail_count[j];
                v = -std::numeric_limits<double>::infinity();
            }
            g.ReF[j * nx + i] = v;
            g.in_tract.set(i, j, v > 0.0);
        }
    });
    for (std::size_t c : fail_count) g.failures += c;
    return g;
}

cplx log_transform(const FamilyMember& f, cplx w) { return log_eval_at_log(f, w); }

cplx log_transform_derivative(const FamilyMember& f, cplx w, double h) {
    const cplx fp = log_transform(f, w + h);
    const cplx fm = log_transform(f, w - h);
    const cplx d{fp.real() - fm.real(), wrap_pi(fp.imag() - fm.imag())};
    return d / (2.0 * h);
}

cplx log_transform_inverse(const FamilyMember& f, cplx zeta, cplx w_start) {
    cplx w = w_start;
    for (int it = 0; it < 100; ++it) {
        const cplx v = log_transform(f, w);
        const cplx r{v.real() - zeta.real(), wrap_pi(v.imag() - zeta.imag())};
        if (std::abs(r) <= 1e-12 * (1.0 + std::abs(zeta))) return w;
        const double h = 1e-7 * std::max(1.0, std::abs(w));
        const cplx d = log_transform_derivative(f, w, h);
        if (!(std::abs(d) > 0.0)) break;
        w -= r / d;
    }
    throw ConvergenceError("Newton inversion of the logarithmic transform did not converge");
}

double expansion_bound_check(const FamilyMember& f, std::span<const cplx> samples) {
    double worst = 0.0;
    for (const cplx& zeta : samples) {
        if (!(zeta.real() > 0.0)) throw PreconditionError("expansion bound samples need Re zeta > 0");
        double gprime = 0.0;
        if (f.kind == FamilyMember::Kind::Exponential) {
            gprime = std::abs(exp_tract_G_prime(f.exp(), zeta));
        } else {
            const MLParams& p = f.ml();
            // F(w) ~ log(a rho) + e^{rho w} on the tract around arg z = 0.
            const cplx w0 = std::log(zeta - (p.log_a + std::log(p.rho))) / p.rho;
            const cplx w = log_transform_inverse(f, zeta, w0);
            const double h = 1e-6 * std::max(1.0, std::abs(w));
            gprime = 1.0 / std::abs(log_transform_derivative(f, w, h));
        }
        worst = std::max(worst, gprime * zeta.real() / (4.0 * kPi));
    }
    return worst;
}

double angular_measure_psi(const FamilyMember& f, double beta_exp, double r, std::size_t n_theta) {
    if (!(beta_exp > 0.0 && beta_exp < 0.5)) throw PreconditionError("psi needs beta in (0, 1/2)");
    if (n_theta < 256) throw PreconditionError("psi needs n_theta >= 256");
    if (!(r > 0.0)) throw PreconditionError("psi needs r > 0");
    const double level = std::pow(r, beta_exp);
    const double lr = std::log(r);
    std::size_t hit = 0;
    for (std::size_t k = 0; k < n_theta; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(n_theta);
        if (log_eval_at_log(f, {lr, t}).real() >= level) ++hit;
    }
    return kTwoPi * static_cast<double>(hit) / static_cast<double>(n_theta);
}

GapCheck ab_integral_check(const FamilyMember& f, double beta_exp, double kappa, double r0, double r,
                           std::size_t n_theta, std::size_t n_nodes) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw PreconditionError("kappa must lie in (0, 1)");
    if (!(r0 > 0.0)) throw PreconditionError("r0 must be positive");
    if (!(r >= r0 / kappa * (1.0 - 1e-12))) throw PreconditionError("need r >= r0 / kappa");
    if (n_nodes < 2) throw PreconditionError("quadrature needs at least 2 nodes");
    GapCheck out;
    const double u0 = std::log(r0);
    const double u1 = std::max(u0, std::log(kappa * r));
    const double du = (u1 - u0) / static_cast<double>(n_nodes - 1);
    double acc = 0.0;
    if (du > 0.0) {
        for (std::size_t k = 0; k < n_nodes; ++k) {
            const double psi = angular_measure_psi(f, beta_exp, std::exp(u0 + du * static_cast<double>(k)), n_theta);
            if (psi == 0.0) {
                ++out.dropped;
                continue;
            }
            const double wgt = (k == 0 || k + 1 == n_nodes) ? 0.5 : 1.0;
            acc += wgt / psi;
        }
    }
    out.lhs = kPi * acc * du;
    out.rhs = std::log(max_modulus(f, r));
    return out;
}

double u_r_density(const TractGrid& grid, double R, const Square& Qstar) {
    const BoolGrid& m = grid.in_tract;
    const Rect q = Qstar.bounding_box();
    const Rect& b = m.bbox();
    if (q.x0 < b.x0 || q.x1 > b.x1 || q.y0 < b.y0 || q.y1 > b.y1) {
        throw PreconditionError("Q* must lie inside the grid bbox");
    }
    if (Qstar.side / m.dx() < 64.0 || Qstar.side / m.dy() < 64.0) {
        throw PreconditionError("grid needs >= 64 cells across Q*");
    }
    return density(grid.level_mask(R), Qstar);
}

std::string tract_grid_pgm(const TractGrid& grid) { return encode_pgm(grid.in_tract); }

std::string tract_grid_csv(const TractGrid& grid) {
    CsvTable t({"w_re", "w_im", "in_tract", "ReF"});
    const BoolGrid& m = grid.in_tract;
    for (std::size_t j = 0; j < m.ny(); ++j) {
        for (std::size_t i = 0; i < m.nx(); ++i) {
            const cplx c = m.center(i, j);
            t.add_row_text({format_number(c.real()), format_number(c.imag()), m.at(i, j) ? "1" : "0",
                            format_number(grid.re_f(i, j))});
        }
    }
    return t.text();
}

}  // namespace gaugedyn
