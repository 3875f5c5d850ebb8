#include "ccg/body.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ccg/stats.hpp"

namespace ccg::vol {

using num::Vec;

void ConvexBody::validate() const {
    if (dim < 1) throw std::invalid_argument("body: dim must be >= 1");
    if (!contains) throw std::invalid_argument("body: missing membership oracle");
    if (!(inner_radius > 0.0))
        throw std::invalid_argument("body: inner radius certificate must be positive");
    if (inner_radius > outer_radius)
        throw std::invalid_argument("body: inner radius exceeds outer radius");
    if (static_cast<int>(interior_point.size()) != dim)
        throw std::invalid_argument("body: interior point dimension mismatch");
    if (!contains(interior_point))
        throw std::invalid_argument("body: certified interior point not inside");
}

double unit_ball_volume(int n) {
    return std::pow(num::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double lp_ball_volume(int n, double p) {
    if (std::isinf(p)) return std::pow(2.0, n);
    return std::exp(n * std::log(2.0 * std::tgamma(1.0 + 1.0 / p)) -
                    std::lgamma(1.0 + static_cast<double>(n) / p));
}

ConvexBody make_ball(int n, double radius) {
    if (n < 1 || !(radius > 0.0)) throw std::invalid_argument("make_ball: bad args");
    ConvexBody b;
    b.dim = n;
    b.interior_point.assign(n, 0.0);
    b.inner_radius = radius;
    b.outer_radius = radius;
    b.exact_volume = unit_ball_volume(n) * std::pow(radius, n);
    b.contains = [n, radius](std::span<const double> x) {
        return num::norm2(x) <= radius;
    };
    b.separate = [radius](std::span<const double> x) -> std::optional<Vec> {
        const double r = num::norm2(x);
        if (r <= radius) return std::nullopt;
        Vec g(x.begin(), x.end());
        for (auto& v : g) v /= r;
        return g;
    };
    std::ostringstream os;
    os << "ball:n=" << n << ",r=" << radius;
    b.descriptor = os.str();
    return b;
}

ConvexBody make_cube(int n, double half_side) {
    if (n < 1 || !(half_side > 0.0)) throw std::invalid_argument("make_cube: bad args");
    ConvexBody b;
    b.dim = n;
    b.interior_point.assign(n, 0.0);
    b.inner_radius = half_side;
    b.outer_radius = half_side * std::sqrt(static_cast<double>(n));
    b.exact_volume = std::pow(2.0 * half_side, n);
    b.contains = [half_side](std::span<const double> x) {
        return num::norm_inf(x) <= half_side;
    };
    b.separate = [half_side](std::span<const double> x) -> std::optional<Vec> {
        std::size_t k = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (std::fabs(x[i]) > best) {
                best = std::fabs(x[i]);
                k = i;
            }
        if (best <= half_side) return std::nullopt;
        Vec g(x.size(), 0.0);
        g[k] = (x[k] > 0.0) ? 1.0 : -1.0;
        return g;
    };
    std::ostringstream os;
    os << "cube:n=" << n << ",side=" << 2.0 * half_side;
    b.descriptor = os.str();
    return b;
}

ConvexBody make_lp_ball(int n, double p) {
    if (n < 1 || p < 1.0) throw std::invalid_argument("make_lp_ball: bad args");
    if (std::isinf(p)) return make_cube(n, 1.0);
    ConvexBody b;
    b.dim = n;
    b.interior_point.assign(n, 0.0);
    const double nd = static_cast<double>(n);
    if (p <= 2.0) {
        b.inner_radius = std::pow(nd, 0.5 - 1.0 / p);
        b.outer_radius = 1.0;
    } else {
        b.inner_radius = 1.0;
        b.outer_radius = std::pow(nd, 0.5 - 1.0 / p);
    }
    b.exact_volume = lp_ball_volume(n, p);
    b.contains = [p](std::span<const double> x) {
        return num::norm_p(x, p) <= 1.0;
    };
    std::ostringstream os;
    os << "lp:n=" << n << ",p=" << p;
    b.descriptor = os.str();
    return b;
}

ConvexBody make_simplex(int n) {
    if (n < 1) throw std::invalid_argument("make_simplex: bad args");
    ConvexBody b;
    b.dim = n;
    const double nd = static_cast<double>(n);
    b.interior_point.assign(n, 1.0 / (nd + 1.0));
    b.inner_radius = 1.0 / ((nd + 1.0) * std::sqrt(nd));
    // Farthest vertex from the centroid.
    b.outer_radius =
        std::sqrt(nd * nd + nd - 1.0) / (nd + 1.0) + 1e-12;
    b.exact_volume = std::exp(-std::lgamma(nd + 1.0));
    b.contains = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) {
            if (v < 0.0) return false;
            s += v;
        }
        return s <= 1.0;
    };
    std::ostringstream os;
    os << "simplex:n=" << n;
    b.descriptor = os.str();
    return b;
}

ConvexBody make_ellipsoid(const Vec& semiaxes) {
    const int n = static_cast<int>(semiaxes.size());
    if (n < 1) throw std::invalid_argument("make_ellipsoid: empty axes");
    double lo = semiaxes[0], hi = semiaxes[0], logvol = 0.0;
    for (double a : semiaxes) {
        if (!(a > 0.0)) throw std::invalid_argument("make_ellipsoid: axes must be > 0");
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        logvol += std::log(a);
    }
    ConvexBody b;
    b.dim = n;
    b.interior_point.assign(n, 0.0);
    b.inner_radius = lo;
    b.outer_radius = hi;
    b.exact_volume = unit_ball_volume(n) * std::exp(logvol);
    Vec axes = semiaxes;
    b.contains = [axes](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = x[i] / axes[i];
            s += t * t;
        }
        return s <= 1.0;
    };
    std::ostringstream os;
    os << "ellipsoid:n=" << n << ",axes=";
    for (int i = 0; i < n; ++i) os << (i ? ":" : "") << semiaxes[i];
    b.descriptor = os.str();
    return b;
}

ConvexBody intersect_halfspace(ConvexBody body, Vec normal, double offset) {
    if (static_cast<int>(normal.size()) != body.dim)
        throw std::invalid_argument("intersect_halfspace: dimension mismatch");
    const double nn = num::norm2(normal);
    if (!(nn > 0.0)) throw std::invalid_argument("intersect_halfspace: zero normal");
    for (auto& v : normal) v /= nn;
    const double t = offset / nn;
    const double margin = t - num::dot(normal, body.interior_point);
    if (!(margin > 0.0))
        throw std::invalid_argument(
            "intersect_halfspace: certified interior point cut away");
    ConvexBody out = body;
    out.exact_volume.reset();
    out.inner_radius = std::min(body.inner_radius, margin);
    auto base = body.contains;
    out.contains = [base, normal, t](std::span<const double> x) {
        return base(x) && num::dot(normal, x) <= t;
    };
    auto base_sep = body.separate;
    out.separate = [base_sep, normal, t](
                       std::span<const double> x) -> std::optional<Vec> {
        if (num::dot(normal, x) > t) return normal;
        if (base_sep) return base_sep(x);
        return std::nullopt;
    };
    std::ostringstream os;
    os << body.descriptor << "|cut=";
    for (std::size_t i = 0; i < normal.size(); ++i) os << (i ? ":" : "") << normal[i];
    os << ":" << t;
    out.descriptor = os.str();
    return out;
}

ConvexBody affine_image(const ConvexBody& body, const num::Mat& linear,
                        const Vec& shift) {
    if (linear.rows != linear.cols ||
        static_cast<int>(linear.rows) != body.dim ||
        static_cast<int>(shift.size()) != body.dim)
        throw std::invalid_argument("affine_image: shape mismatch");
    const num::Mat gram = num::matmul(num::transpose(linear), linear);
    const num::SymEig eig = num::jacobi_eigensym(gram);
    double smin2 = eig.values[0], smax2 = eig.values[0];
    for (double v : eig.values) {
        smin2 = std::min(smin2, v);
        smax2 = std::max(smax2, v);
    }
    if (!(smin2 > 0.0)) throw std::invalid_argument("affine_image: singular map");
    const double smin = std::sqrt(smin2), smax = std::sqrt(smax2);

    // Solve L y = x - shift by Gaussian elimination each membership call.
    const num::Mat L = linear;
    auto base = body.contains;
    ConvexBody out;
    out.dim = body.dim;
    out.interior_point = num::axpy(1.0, num::matvec(L, body.interior_point), shift);
    out.inner_radius = smin * body.inner_radius;
    out.outer_radius = smax * body.outer_radius;
    if (body.exact_volume)
        out.exact_volume = *body.exact_volume * std::fabs(num::lu_det(L));
    out.contains = [base, L, shift](std::span<const double> x) {
        const std::size_t n = L.rows;
        num::Mat aug = L;
        Vec rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i] - shift[i];
        // Partial-pivot solve.
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::fabs(aug.at(i, k)) > std::fabs(aug.at(piv, k))) piv = i;
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(aug.at(piv, j), aug.at(k, j));
                std::swap(rhs[piv], rhs[k]);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = aug.at(i, k) / aug.at(k, k);
                for (std::size_t j = k; j < n; ++j) aug.at(i, j) -= f * aug.at(k, j);
                rhs[i] -= f * rhs[k];
            }
        }
        Vec y(n);
        for (std::size_t ii = n; ii-- > 0;) {
            double s = rhs[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= aug.at(ii, j) * y[j];
            y[ii] = s / aug.at(ii, ii);
        }
        return base(y);
    };
    out.descriptor = body.descriptor + "|affine";
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_num(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
    return v;
}

}  // namespace

ConvexBody parse_body(const std::string& descriptor) {
    const auto pieces = split(descriptor, '|');
    const std::string& base = pieces[0];
    const auto colon = base.find(':');
    const std::string name = base.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        for (const auto& item : split(base.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("body descriptor: expected key=value in " + item);
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end())
            throw std::invalid_argument("body descriptor: missing key " + k);
        return it->second;
    };

    ConvexBody body;
    if (name == "ball") {
        body = make_ball(static_cast<int>(parse_num(need("n"))),
                         kv.count("r") ? parse_num(kv["r"]) : 1.0);
    } else if (name == "cube") {
        const double side = kv.count("side") ? parse_num(kv["side"]) : 2.0;
        body = make_cube(static_cast<int>(parse_num(need("n"))), 0.5 * side);
    } else if (name == "lp") {
        body = make_lp_ball(static_cast<int>(parse_num(need("n"))),
                            parse_num(need("p")));
    } else if (name == "simplex") {
        body = make_simplex(static_cast<int>(parse_num(need("n"))));
    } else if (name == "ellipsoid") {
        Vec axes;
        for (const auto& a : split(need("axes"), ':')) axes.push_back(parse_num(a));
        if (kv.count("n") && parse_num(kv["n"]) != static_cast<double>(axes.size()))
            throw std::invalid_argument("body descriptor: axes count != n");
        body = make_ellipsoid(axes);
    } else {
        throw std::invalid_argument("body descriptor: unknown family " + name);
    }

    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const std::string& cut = pieces[i];
        if (cut.rfind("cut=", 0) != 0)
            throw std::invalid_argument("body descriptor: expected cut=..., got " + cut);
        const auto vals = split(cut.substr(4), ':');
        if (static_cast<int>(vals.size()) != body.dim + 1)
            throw std::invalid_argument("body descriptor: cut needs n+1 numbers");
        Vec normal;
        for (int j = 0; j < body.dim; ++j) normal.push_back(parse_num(vals[j]));
        body = intersect_halfspace(std::move(body), std::move(normal),
                                   parse_num(vals.back()));
    }
    return body;
}

}  // namespace ccg::vol
