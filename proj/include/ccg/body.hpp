#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "ccg/linalg.hpp"

namespace ccg::vol {

// Membership-oracle convex body with a certified sandwich
// B(interior_point, inner_radius) subset K subset B(interior_point, outer_radius).
// A separation witness (outward normal) is optional.
struct ConvexBody {
    int dim = 0;
    std::function<bool(std::span<const double>)> contains;
    std::function<std::optional<num::Vec>(std::span<const double>)> separate;
    num::Vec interior_point;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    std::optional<double> exact_volume;  // known for the built-ins
    std::string descriptor;

    void validate() const;  // certificate sanity; throws on violation
};

double unit_ball_volume(int n);           // Vol B_2^n
double lp_ball_volume(int n, double p);   // Vol of the unit l_p ball

ConvexBody make_ball(int n, double radius);
ConvexBody make_cube(int n, double half_side);
ConvexBody make_lp_ball(int n, double p);
ConvexBody make_simplex(int n);
ConvexBody make_ellipsoid(const num::Vec& semiaxes);

// K cap {x : <normal, x> <= offset}; the certified interior point must stay
// strictly inside.
ConvexBody intersect_halfspace(ConvexBody body, num::Vec normal, double offset);

// L(K) + shift with soundly transformed certificates.
ConvexBody affine_image(const ConvexBody& body, const num::Mat& linear,
                        const num::Vec& shift);

// CLI descriptor, e.g. "cube:n=4,side=2", "ball:n=3,r=1", "lp:n=4,p=1",
// "simplex:n=3", "ellipsoid:n=2,axes=1:4", with optional
// "|cut=c1:...:cn:t" suffixes for half-space intersections.
ConvexBody parse_body(const std::string& descriptor);

}  // namespace ccg::vol
