#include "ccg/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ccg/quadrature.hpp"
#include "ccg/walk.hpp"

namespace ccg::dist {

using num::Mat;
using num::Vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// Coordinate variance of the raw uniform measure on the unit l_p ball via the
// marginal density (1 - |t|^p)^{(n-1)/p} on [-1, 1].
double lp_ball_coordinate_var(int n, double p) {
    const double m = static_cast<double>(n - 1) / p;
    auto w = [&](double t) { return std::pow(1.0 - std::pow(t, p), m); };
    auto w2 = [&](double t) { return t * t * w(t); };
    const double eps = 1e-12;
    const double denom = num::adaptive_simpson(w, 0.0, 1.0 - 1e-14, eps);
    const double numer = num::adaptive_simpson(w2, 0.0, 1.0 - 1e-14, eps);
    return numer / denom;
}

}  // namespace

DistributionSpec DistributionSpec::gaussian_spec(int n) {
    DistributionSpec s;
    s.family = Family::gaussian;
    s.n = n;
    s.isotropic = true;  // the standard Gaussian is already isotropic
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::product_exponential_spec(int n, bool iso) {
    DistributionSpec s;
    s.family = Family::product_exponential;
    s.n = n;
    s.isotropic = iso;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::cube_spec(int n, bool iso) {
    DistributionSpec s;
    s.family = Family::uniform_cube;
    s.n = n;
    s.isotropic = iso;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::simplex_spec(int n, bool iso) {
    DistributionSpec s;
    s.family = Family::uniform_simplex;
    s.n = n;
    s.isotropic = iso;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::lp_ball_spec(int n, double p, bool iso) {
    DistributionSpec s;
    s.family = Family::uniform_lp_ball;
    s.n = n;
    s.p = p;
    s.isotropic = iso;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::sconcave_spec(int n, double r, Gauge gauge,
                                                 bool iso) {
    DistributionSpec s;
    s.family = Family::sconcave_gc;
    s.n = n;
    s.r = r;
    s.gauge = gauge;
    s.isotropic = iso;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::oracle_uniform_spec(
    std::shared_ptr<const vol::ConvexBody> body, long walk_budget) {
    DistributionSpec s;
    s.family = Family::oracle_uniform;
    s.body = std::move(body);
    s.n = s.body ? s.body->dim : 0;
    s.walk_budget = walk_budget;
    s.validate();
    return s;
}

void DistributionSpec::validate() const {
    if (n < 1) throw SpecError("spec: dimension must be >= 1");
    switch (family) {
        case Family::uniform_lp_ball:
            if (!(p >= 1.0)) throw SpecError("spec: lp ball requires p >= 1");
            break;
        case Family::sconcave_gc:
            if (!(r > 0.0)) throw SpecError("spec: sconcave requires r > 0");
            if (isotropic && r <= 2.0)
                throw SpecError(
                    "spec: isotropic sconcave requires r > 2 "
                    "(second moments exist only for orders below r)");
            break;
        case Family::oracle_uniform:
            if (!body) throw SpecError("spec: oracle_uniform needs a body");
            if (!(body->inner_radius > 0.0))
                throw SpecError(
                    "spec: oracle_uniform needs a positive inner-radius certificate");
            if (body->dim != n) throw SpecError("spec: body dimension mismatch");
            if (walk_budget < 1)
                throw SpecError("spec: oracle_uniform needs walk_budget >= 1");
            if (isotropic)
                throw SpecError(
                    "spec: oracle_uniform has no closed-form normalization");
            break;
        default:
            break;
    }
}

std::string DistributionSpec::family_name() const {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::product_exponential: return "product_exponential";
        case Family::uniform_cube: return "uniform_cube";
        case Family::uniform_simplex: return "uniform_simplex";
        case Family::uniform_lp_ball: return "uniform_lp_ball";
        case Family::sconcave_gc: return "sconcave_gc";
        case Family::oracle_uniform: return "oracle_uniform";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> DistributionSpec::kv() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("family", family_name());
    out.emplace_back("n", std::to_string(n));
    if (family == Family::uniform_lp_ball)
        out.emplace_back("p", std::isinf(p) ? "inf" : fmt(p));
    if (family == Family::sconcave_gc) {
        out.emplace_back("r", fmt(r));
        out.emplace_back("gauge", gauge == Gauge::l2 ? "l2" : "l1");
    }
    out.emplace_back("isotropic", isotropic ? "true" : "false");
    if (family == Family::oracle_uniform) {
        out.emplace_back("walk_budget", std::to_string(walk_budget));
        out.emplace_back("body", body ? body->descriptor : "");
    }
    return out;
}

std::string DistributionSpec::to_kv() const {
    std::string s;
    for (const auto& [k, v] : kv()) s += k + " = " + v + "\n";
    return s;
}

std::string DistributionSpec::id() const {
    std::string s;
    for (const auto& [k, v] : kv()) {
        if (!s.empty()) s += ",";
        s += k + "=" + v;
    }
    return s;
}

double raw_coordinate_sigma(const DistributionSpec& spec) {
    switch (spec.family) {
        case Family::gaussian:
            return 1.0;
        case Family::product_exponential:
            return std::sqrt(2.0);
        case Family::uniform_cube:
            return 1.0 / std::sqrt(3.0);
        case Family::uniform_lp_ball:
            if (std::isinf(spec.p)) return 1.0 / std::sqrt(3.0);
            return std::sqrt(lp_ball_coordinate_var(spec.n, spec.p));
        case Family::sconcave_gc: {
            if (!(spec.r > 2.0))
                throw SpecError("sconcave: coordinate variance needs r > 2");
            const double n = spec.n, r = spec.r;
            const double rho2 = n * (n + 1.0) / ((r - 1.0) * (r - 2.0));
            const double dir2 =
                (spec.gauge == Gauge::l2) ? 1.0 / n : 2.0 / (n * (n + 1.0));
            return std::sqrt(rho2 * dir2);
        }
        case Family::uniform_simplex:
            throw SpecError("simplex: anisotropic; no scalar coordinate sigma");
        case Family::oracle_uniform:
            throw SpecError("oracle_uniform: no closed-form moments");
    }
    throw SpecError("raw_coordinate_sigma: unreachable");
}

namespace {

// Simplex covariance is aI - bJ; its inverse square root is cI + dJ.
struct SimplexWhitening {
    Vec mean;
    double c;
    double d;
};

SimplexWhitening simplex_whitening(int n) {
    const double nd = n;
    const double lam_diag = 1.0 / ((nd + 1.0) * (nd + 1.0) * (nd + 2.0));
    const double lam_perp = 1.0 / ((nd + 1.0) * (nd + 2.0));
    SimplexWhitening w;
    w.mean.assign(n, 1.0 / (nd + 1.0));
    w.c = 1.0 / std::sqrt(lam_perp);
    w.d = (1.0 / std::sqrt(lam_diag) - w.c) / nd;
    return w;
}

double simplex_log_det_cov(int n) {
    const double nd = n;
    return -std::log((nd + 1.0) * (nd + 1.0) * (nd + 2.0)) -
           (nd - 1.0) * std::log((nd + 1.0) * (nd + 2.0));
}

void sample_simplex_raw(std::span<double> x, num::RngStream& rng) {
    double total = 0.0;
    for (auto& v : x) {
        v = rng.exponential();
        total += v;
    }
    total += rng.exponential();
    for (auto& v : x) v /= total;
}

void apply_simplex_whitening(std::span<double> x, const SimplexWhitening& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= w.mean[i];
        s += x[i];
    }
    for (auto& v : x) v = w.c * v + w.d * s;
}

// Direction with the gauge's cone measure.
void sample_gauge_direction(std::span<double> x, Gauge gauge,
                            num::RngStream& rng) {
    if (gauge == Gauge::l2) {
        double s2 = 0.0;
        for (auto& v : x) {
            v = rng.normal();
            s2 += v * v;
        }
        const double inv = 1.0 / std::sqrt(s2);
        for (auto& v : x) v *= inv;
    } else {
        double s = 0.0;
        for (auto& v : x) {
            v = rng.exponential();
            s += v;
        }
        for (auto& v : x) {
            v /= s;
            if (rng.uniform() < 0.5) v = -v;
        }
    }
}

double sconcave_norm_const(const DistributionSpec& spec) {
    // c with integral of c*(1+||x||)^{-n-r} equal to 1:
    // c = 1 / (n * Vol(gauge ball) * Beta(n, r)).
    const int n = spec.n;
    const double log_ball =
        (spec.gauge == Gauge::l2)
            ? std::log(vol::unit_ball_volume(n))
            : n * std::log(2.0) - std::lgamma(n + 1.0);
    return -std::log(static_cast<double>(n)) - log_ball -
           num::lbeta(n, spec.r);  // returns log c
}

}  // namespace

SampleBatch sample(const DistributionSpec& spec, std::size_t count,
                   num::RngStream& rng) {
    spec.validate();
    if (count < 1) throw SpecError("sample: count must be >= 1");
    SampleBatch batch;
    batch.n = spec.n;
    batch.count = count;
    batch.data.resize(count * static_cast<std::size_t>(spec.n));
    batch.spec_id = spec.id();
    batch.seed = rng.seed();
    batch.stream = rng.stream();
    batch.walk_budget =
        (spec.family == Family::oracle_uniform) ? spec.walk_budget : 0;

    const int n = spec.n;
    switch (spec.family) {
        case Family::gaussian: {
            for (auto& v : batch.data) v = rng.normal();
            break;
        }
        case Family::product_exponential: {
            const double scale = spec.isotropic ? 1.0 / std::sqrt(2.0) : 1.0;
            for (auto& v : batch.data) {
                const double mag = rng.exponential() * scale;
                v = (rng.uniform() < 0.5) ? -mag : mag;
            }
            break;
        }
        case Family::uniform_cube: {
            const double a = spec.isotropic ? std::sqrt(3.0) : 1.0;
            for (auto& v : batch.data) v = rng.uniform(-a, a);
            break;
        }
        case Family::uniform_simplex: {
            const SimplexWhitening w = simplex_whitening(n);
            for (std::size_t i = 0; i < count; ++i) {
                auto row = batch.row(i);
                sample_simplex_raw(row, rng);
                if (spec.isotropic) apply_simplex_whitening(row, w);
            }
            break;
        }
        case Family::uniform_lp_ball: {
            if (std::isinf(spec.p)) {
                // The l_inf ball is the cube; isotropic scaling is sqrt(3).
                const double lim = spec.isotropic ? std::sqrt(3.0) : 1.0;
                for (auto& v : batch.data) v = rng.uniform(-lim, lim);
                break;
            }
            const double p = spec.p;
            const double inv_sigma =
                spec.isotropic ? 1.0 / raw_coordinate_sigma(spec) : 1.0;
            Vec gam(n);
            for (std::size_t i = 0; i < count; ++i) {
                auto row = batch.row(i);
                double total = 0.0;
                for (int j = 0; j < n; ++j) {
                    gam[j] = rng.gamma(1.0 / p);
                    total += gam[j];
                }
                total += rng.exponential();
                const double denom = std::pow(total, 1.0 / p);
                for (int j = 0; j < n; ++j) {
                    double mag = std::pow(gam[j], 1.0 / p) / denom;
                    if (rng.uniform() < 0.5) mag = -mag;
                    row[j] = mag * inv_sigma;
                }
            }
            break;
        }
        case Family::sconcave_gc: {
            const double inv_sigma =
                spec.isotropic ? 1.0 / raw_coordinate_sigma(spec) : 1.0;
            for (std::size_t i = 0; i < count; ++i) {
                auto row = batch.row(i);
                sample_gauge_direction(row, spec.gauge, rng);
                // Radius: v ~ Beta(n, r) via gammas, rho = v/(1-v) = Ga/Gb,
                // exactly the density proportional to rho^{n-1}(1+rho)^{-n-r}.
                const double ga = rng.gamma(static_cast<double>(n));
                const double gb = rng.gamma(spec.r);
                const double rho = ga / gb;
                for (int j = 0; j < n; ++j) row[j] *= rho * inv_sigma;
            }
            break;
        }
        case Family::oracle_uniform: {
            const auto& body = *spec.body;
            Vec x = body.interior_point;
            for (long b = 0; b < spec.walk_budget; ++b)
                x = vol::hit_and_run_step(body, x, rng);
            const long thin = std::max(1, n);
            for (std::size_t i = 0; i < count; ++i) {
                for (long t = 0; t < thin; ++t)
                    x = vol::hit_and_run_step(body, x, rng);
                auto row = batch.row(i);
                for (int j = 0; j < n; ++j) row[j] = x[j];
            }
            break;
        }
    }
    return batch;
}

LogDensity log_density(const DistributionSpec& spec,
                       std::span<const double> x) {
    spec.validate();
    if (static_cast<int>(x.size()) != spec.n)
        throw SpecError("log_density: dimension mismatch");
    const int n = spec.n;
    switch (spec.family) {
        case Family::gaussian: {
            double q = 0.0;
            for (double v : x) q += v * v;
            return {-0.5 * n * std::log(2.0 * num::pi) - 0.5 * q, true};
        }
        case Family::product_exponential: {
            const double s = num::norm1(x);
            if (spec.isotropic)
                return {-0.5 * n * std::log(2.0) - std::sqrt(2.0) * s, true};
            return {-n * std::log(2.0) - s, true};
        }
        case Family::uniform_cube: {
            const double a = spec.isotropic ? std::sqrt(3.0) : 1.0;
            if (num::norm_inf(x) > a) return {-kInf, true};
            return {-n * std::log(2.0 * a), true};
        }
        case Family::uniform_simplex: {
            const double log_simplex = std::lgamma(n + 1.0);
            if (!spec.isotropic) {
                double s = 0.0;
                for (double v : x) {
                    if (v < 0.0) return {-kInf, true};
                    s += v;
                }
                if (s > 1.0) return {-kInf, true};
                return {log_simplex, true};
            }
            // Invert y = c(x - mu) + d*sum(x - mu): sum(x-mu) = sum(y)/(c + n d).
            const SimplexWhitening w = simplex_whitening(n);
            double sy = 0.0;
            for (double v : x) sy += v;
            const double sx = sy / (w.c + n * w.d);
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double xi = (x[i] - w.d * sx) / w.c + w.mean[i];
                if (xi < 0.0) return {-kInf, true};
                s += xi;
            }
            if (s > 1.0) return {-kInf, true};
            return {log_simplex + 0.5 * simplex_log_det_cov(n), true};
        }
        case Family::uniform_lp_ball: {
            const double sigma =
                spec.isotropic ? raw_coordinate_sigma(spec) : 1.0;
            const double gauge = num::norm_p(x, spec.p) * sigma;
            if (gauge > 1.0) return {-kInf, true};
            const double log_vol = std::log(vol::lp_ball_volume(n, spec.p));
            return {-log_vol + n * std::log(sigma), true};
        }
        case Family::sconcave_gc: {
            const double sigma =
                spec.isotropic ? raw_coordinate_sigma(spec) : 1.0;
            const double g = (spec.gauge == Gauge::l2) ? num::norm2(x)
                                                       : num::norm1(x);
            const double logc = sconcave_norm_const(spec);
            return {logc + n * std::log(sigma) -
                        (n + spec.r) * std::log1p(sigma * g),
                    true};
        }
        case Family::oracle_uniform: {
            if (!spec.body->contains(x))
                return {-kInf, spec.body->exact_volume.has_value()};
            if (spec.body->exact_volume)
                return {-std::log(*spec.body->exact_volume), true};
            return {0.0, false};  // additive constant unknown
        }
    }
    throw SpecError("log_density: unreachable");
}

Vec population_mean(const DistributionSpec& spec) {
    spec.validate();
    if (spec.family == Family::oracle_uniform)
        throw SpecError("population_mean: unknown for oracle bodies");
    if (spec.family == Family::uniform_simplex && !spec.isotropic)
        return Vec(spec.n, 1.0 / (spec.n + 1.0));
    return Vec(spec.n, 0.0);
}

Mat population_cov(const DistributionSpec& spec) {
    spec.validate();
    const int n = spec.n;
    if (spec.family == Family::oracle_uniform)
        throw SpecError("population_cov: unknown for oracle bodies");
    if (spec.isotropic) return Mat::identity(n);
    if (spec.family == Family::uniform_simplex) {
        const double nd = n;
        const double a = 1.0 / ((nd + 1.0) * (nd + 2.0));
        const double b = 1.0 / ((nd + 1.0) * (nd + 1.0) * (nd + 2.0));
        Mat cov(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cov.at(i, j) = (i == j) ? a - b : -b;
        return cov;
    }
    const double s = raw_coordinate_sigma(spec);
    Mat cov = Mat::identity(n);
    for (int i = 0; i < n; ++i) cov.at(i, i) = s * s;
    return cov;
}

double population_log_det_cov(const DistributionSpec& spec) {
    spec.validate();
    if (spec.isotropic) return 0.0;
    if (spec.family == Family::uniform_simplex)
        return simplex_log_det_cov(spec.n);
    return 2.0 * spec.n * std::log(raw_coordinate_sigma(spec));
}

double log_density_at_mean(const DistributionSpec& spec) {
    return log_density(spec, population_mean(spec)).value;
}

MidpointCheck midpoint_logconcavity(
    const LogDensityFn& f, std::span<const std::pair<Vec, Vec>> pairs,
    double slack) {
    const double log_slack = std::log1p(-slack);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [x, y] = pairs[k];
        if (x.size() != y.size())
            throw SpecError("midpoint_logconcavity: pair dimension mismatch");
        const double lx = f(x);
        const double ly = f(y);
        if (lx == -kInf || ly == -kInf) continue;  // right side vanishes
        Vec m(x.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (x[i] + y[i]);
        const double lm = f(m);
        if (2.0 * lm < lx + ly + log_slack) return {false, k};
    }
    return {true, 0};
}

MidpointCheck midpoint_logconcavity(
    const DistributionSpec& spec, std::span<const std::pair<Vec, Vec>> pairs,
    double slack) {
    return midpoint_logconcavity(
        [&spec](std::span<const double> x) { return log_density(spec, x).value; },
        pairs, slack);
}

SConcaveParams sconcave_params(int n, double r) {
    if (n < 1) throw SpecError("sconcave_params: n must be >= 1");
    if (!(r > 0.0)) throw SpecError("sconcave_params: r must be > 0");
    SConcaveParams out;
    out.n = n;
    out.r = r;
    if (std::isinf(r)) {
        out.s = 0.0;
        out.beta = kInf;
        out.gamma = 0.0;
        out.log_concave_limit = true;
        return out;
    }
    out.s = -1.0 / r;
    out.beta = n + r;
    out.gamma = -1.0 / (n + r);  // 1/gamma = 1/s - n
    return out;
}

}  // namespace ccg::dist
