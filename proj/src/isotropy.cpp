#include "ccg/isotropy.hpp"

#include <cmath>
#include <stdexcept>

#include "ccg/parallel.hpp"
#include "ccg/quadrature.hpp"

namespace ccg::iso {

using dist::DistributionSpec;
using dist::Family;
using num::Mat;
using num::Vec;

Vec AffineMap::apply(std::span<const double> x) const {
    Vec y = num::matvec(linear, x);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += shift[i];
    return y;
}

void AffineMap::validate() const {
    if (linear.rows != linear.cols || linear.rows != shift.size())
        throw std::invalid_argument("affine map: shape mismatch");
    if (!num::all_finite(linear))
        throw std::invalid_argument("affine map: non-finite entries");
    if (num::lu_det(linear) == 0.0)
        throw std::invalid_argument("affine map: singular linear part");
}

AffineMap empirical_isotropy(const dist::SampleBatch& batch) {
    const int n = batch.n;
    if (batch.count <= static_cast<std::size_t>(n))
        throw std::invalid_argument("empirical_isotropy: need more samples than dim");
    Vec mu(n, 0.0);
    for (std::size_t i = 0; i < batch.count; ++i) {
        auto row = batch.row(i);
        for (int j = 0; j < n; ++j) mu[j] += row[j];
    }
    for (auto& v : mu) v /= static_cast<double>(batch.count);

    Mat cov(n, n);
    for (std::size_t i = 0; i < batch.count; ++i) {
        auto row = batch.row(i);
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k)
                cov.at(j, k) += (row[j] - mu[j]) * (row[k] - mu[k]);
    }
    for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
            cov.at(j, k) /= static_cast<double>(batch.count);
            cov.at(k, j) = cov.at(j, k);
        }

    AffineMap t;
    try {
        t.linear = num::sym_inv_sqrt(cov);
    } catch (const std::domain_error&) {
        throw std::runtime_error(
            "empirical_isotropy: singular empirical covariance (rank-deficient batch)");
    }
    t.shift = num::matvec(t.linear, mu);
    for (auto& v : t.shift) v = -v;
    return t;
}

double isotropic_constant_body(double volume, const num::Mat& cov) {
    if (!(volume > 0.0))
        throw std::invalid_argument("isotropic_constant_body: volume must be > 0");
    const std::size_t n = cov.rows;
    const double det = num::lu_det(cov);
    if (!(det > 0.0))
        throw std::invalid_argument("isotropic_constant_body: covariance not PD");
    return std::exp(std::log(det) / (2.0 * n) - std::log(volume) / n);
}

namespace {

double uniform_spec_volume(const DistributionSpec& spec) {
    const int n = spec.n;
    switch (spec.family) {
        case Family::uniform_cube: {
            const double a = spec.isotropic ? std::sqrt(3.0) : 1.0;
            return std::pow(2.0 * a, n);
        }
        case Family::uniform_lp_ball: {
            double v = vol::lp_ball_volume(n, spec.p);
            if (spec.isotropic)
                v *= std::pow(1.0 / dist::raw_coordinate_sigma(spec), n);
            return v;
        }
        case Family::uniform_simplex: {
            double lv = -std::lgamma(n + 1.0);
            if (spec.isotropic) lv -= 0.5 * dist::population_log_det_cov(
                                           DistributionSpec::simplex_spec(n, false));
            return std::exp(lv);
        }
        case Family::oracle_uniform:
            if (spec.body && spec.body->exact_volume)
                return *spec.body->exact_volume;
            throw std::invalid_argument(
                "isotropic_constant_body: oracle body volume unknown; "
                "estimate it and use the (volume, cov) overload");
        default:
            throw std::invalid_argument(
                "isotropic_constant_body: spec is not a uniform measure");
    }
}

}  // namespace

double isotropic_constant_body(const DistributionSpec& spec) {
    return isotropic_constant_body(uniform_spec_volume(spec),
                                   dist::population_cov(spec));
}

ConstantCI isotropic_constant_body(double vol_value, double vol_lo,
                                   double vol_hi, const num::Mat& cov) {
    ConstantCI out;
    out.value = isotropic_constant_body(vol_value, cov);
    out.lo = isotropic_constant_body(vol_hi, cov);  // decreasing in volume
    out.hi = isotropic_constant_body(vol_lo, cov);
    return out;
}

double isotropic_constant_density(const DistributionSpec& spec) {
    const int n = spec.n;
    const double ldc = dist::population_log_det_cov(spec);
    const double lf = dist::log_density_at_mean(spec);
    return std::exp(ldc / (2.0 * n) + lf / n);
}

double isotropic_constant_density_image(const DistributionSpec& spec,
                                        const num::Mat& t) {
    const int n = spec.n;
    const double det = std::fabs(num::lu_det(t));
    if (!(det > 0.0))
        throw std::invalid_argument("isotropic_constant_density_image: singular map");
    // Cov(TX) = T Cov T^t; f_{TX}(E TX) = f(EX)/|det T|.
    const double ldc = dist::population_log_det_cov(spec) + 2.0 * std::log(det);
    const double lf = dist::log_density_at_mean(spec) - std::log(det);
    return std::exp(ldc / (2.0 * n) + lf / n);
}

namespace {

// integral_0^inf f(w^{1/p} theta) dw == p * integral t^{p-1} f(t theta) dt.
double ray_integral(const DistributionSpec& f, double p,
                    std::span<const double> unit_theta, double tol) {
    Vec probe(unit_theta.size());
    auto g = [&](double w) {
        const double t = std::pow(w, 1.0 / p);
        for (std::size_t i = 0; i < probe.size(); ++i)
            probe[i] = t * unit_theta[i];
        const double ld = dist::log_density(f, probe).value;
        return std::isinf(ld) ? 0.0 : std::exp(ld);
    };
    try {
        return num::integrate_halfline(g, tol);
    } catch (const num::QuadratureError&) {
        throw std::runtime_error(
            "ball body: defining integral diverges along this ray "
            "(density tail too heavy for this p)");
    }
}

}  // namespace

double ball_body_membership_integral(const DistributionSpec& f, double p,
                                     std::span<const double> x, double tol) {
    if (!(p > 0.0)) throw std::invalid_argument("ball body: p must be > 0");
    const double rho = num::norm2(x);
    if (rho == 0.0)
        throw std::invalid_argument("ball body: membership at the origin is trivial");
    Vec theta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) theta[i] = x[i] / rho;
    // p * integral t^{p-1} f(t x) dt = p rho^{-p} * integral u^{p-1} f(u theta) du
    return std::pow(rho, -p) * ray_integral(f, p, theta, tol);
}

double ball_body_radial(const DistributionSpec& f, double p,
                        std::span<const double> unit_theta, double tol) {
    if (!(p > 0.0)) throw std::invalid_argument("ball body: p must be > 0");
    const double lf0 = dist::log_density(f, Vec(f.n, 0.0)).value;
    if (std::isinf(lf0))
        throw std::invalid_argument("ball body: requires f(0) > 0");
    const double integral = ray_integral(f, p, unit_theta, tol);
    return std::pow(integral / std::exp(lf0), 1.0 / p);
}

BallBody make_ball_body(const DistributionSpec& f, double p, double tol) {
    if (!(p > 0.0)) throw std::invalid_argument("ball body: p must be > 0");
    BallBody b;
    b.source = f;
    b.order = p;
    b.tol = tol;
    b.log_f0 = dist::log_density(f, Vec(f.n, 0.0)).value;
    if (std::isinf(b.log_f0))
        throw std::invalid_argument("ball body: requires f(0) > 0");
    return b;
}

double BallBody::radial(std::span<const double> unit_theta) const {
    return ball_body_radial(source, order, unit_theta, tol);
}

bool BallBody::contains(std::span<const double> x) const {
    const double rho = num::norm2(x);
    if (rho == 0.0) return true;
    Vec theta(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) theta[i] = x[i] / rho;
    return rho <= radial(theta);
}

SectionEstimate section_volume(const vol::ConvexBody& body, const Vec& theta,
                               std::size_t samples_per_replica, int replicas,
                               num::RngStream& rng, int workers) {
    if (body.dim < 2)
        throw std::invalid_argument("section_volume: needs dimension >= 2");
    if (!(body.outer_radius > 0.0))
        throw std::invalid_argument("section_volume: zero outer-radius certificate");
    if (replicas < 2)
        throw std::invalid_argument("section_volume: need >= 2 replicas");
    const int n = body.dim;
    Vec unit = theta;
    const double tn = num::norm2(unit);
    if (!(tn > 0.0)) throw std::invalid_argument("section_volume: zero direction");
    for (auto& v : unit) v /= tn;

    const Mat basis = num::orthonormal_completion(unit);
    const double R = body.outer_radius;
    const double box_vol = std::pow(2.0 * R, n - 1);

    std::vector<double> est(static_cast<std::size_t>(replicas));
    par::for_index(est.size(), workers, [&](std::size_t rep) {
        num::RngStream sub = rng.substream(rep);
        std::size_t hits = 0;
        Vec x(n);
        for (std::size_t s = 0; s < samples_per_replica; ++s) {
            for (int j = 0; j < n; ++j) x[j] = 0.0;
            for (int k = 1; k < n; ++k) {
                const double yk = sub.uniform(-R, R);
                for (int j = 0; j < n; ++j) x[j] += yk * basis.at(j, k);
            }
            if (body.contains(x)) ++hits;
        }
        est[rep] = box_vol * static_cast<double>(hits) /
                   static_cast<double>(samples_per_replica);
    });

    const auto s = num::summarize_replicas(est);
    return {s.mean, s.stderr_, s.lo, s.hi};
}

}  // namespace ccg::iso
