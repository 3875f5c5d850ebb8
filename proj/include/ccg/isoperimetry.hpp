#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ccg/distributions.hpp"
#include "ccg/moments.hpp"
#include "ccg/rng.hpp"
#include "ccg/stats.hpp"

namespace ccg::isop {

// Test sets for the boundary-measure estimator: a half space
// {x : <theta, x> <= offset} or a centered Euclidean ball of given radius.
struct SetSpec {
    enum class Kind { halfspace, ball } kind = Kind::halfspace;
    num::Vec theta;       // halfspace normal (normalized internally)
    double offset = 0.0;  // halfspace threshold
    double radius = 0.0;  // ball radius

    static SetSpec halfspace(num::Vec theta, double offset);
    static SetSpec ball(double radius);
};

struct BoundaryEstimate {
    double value = 0.0;  // (mu(S + eps B) - mu(S)) / eps
    double stderr_ = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double eps = 0.0;
    double half_eps_value = 0.0;  // the same estimate at eps/2
    bool eps_too_large = false;   // Richardson disagreement flag
};

// Finite-difference outer boundary measure. For half spaces and centered
// balls S + eps B is exact (shifted threshold / enlarged radius).
BoundaryEstimate boundary_measure(const dist::DistributionSpec& spec,
                                  const SetSpec& set, double eps,
                                  std::size_t samples_per_replica, int replicas,
                                  num::RngStream& rng, int workers = 0);

struct CheegerProbe {
    int direction_id = 0;
    double t = 0.0;
    double density = 0.0;  // Richardson-extrapolated central difference
    double cdf = 0.0;
    double ratio = 0.0;  // density / (F (1 - F)) -- the probed conductance
    double window_mass = 0.0;  // samples inside the differencing window
    bool skipped = false;  // bandwidth instability or too little local mass
};

struct CheegerEstimate {
    double h_upper = 0.0;  // min over valid probes
    int best_direction = 0;
    double best_t = 0.0;
    std::vector<CheegerProbe> probes;
};

// Half-space conductance profile: coordinate axes first, random directions
// after, each probed along t_grid with a CDF-difference density estimate and
// a two-bandwidth consistency check.
CheegerEstimate halfspace_cheeger(const dist::DistributionSpec& spec,
                                  int direction_count,
                                  const std::vector<double>& t_grid,
                                  std::size_t samples_per_direction,
                                  num::RngStream& rng, int workers = 0);

struct CheegerBounds {
    int n = 0;
    double kls = 0.0;         // 1 / E |X|_2
    double bobkov = 0.0;      // (Var |X|_2^2)^{-1/4}
    double eldan = 0.0;       // n^{-1/3} (log n)^{-1/2}
    double gm_implied = 0.0;  // n^{-5/12}
};

// All "up to a universal constant" (set to 1); the Bobkov entry uses the
// measured Var |X|^2.
CheegerBounds cheeger_lower_bounds(const conc::ShellStats& shell);

using ScalarField = std::function<double(std::span<const double>)>;
using GradientField = std::function<num::Vec(std::span<const double>)>;

struct PoincareEstimate {
    double quotient = 0.0;  // E |grad F|^2 / Var F
    double var_f = 0.0;
    double grad_sq = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

PoincareEstimate poincare_quotient(const dist::DistributionSpec& spec,
                                   const ScalarField& f,
                                   const GradientField& grad_f,
                                   std::size_t samples_per_replica,
                                   int replicas, num::RngStream& rng,
                                   int workers = 0);

struct PoincareProbe {
    std::string name;
    PoincareEstimate estimate;
    bool lipschitz = false;     // |grad F| <= 1 everywhere
    double d_inf_certificate = 0.0;  // 1 / Var F for 1-Lipschitz probes
};

// The built-in probe family: linear forms, coordinate square, |x|^2 and a
// smoothed norm (1-Lipschitz).
std::vector<PoincareProbe> poincare_probe_family(
    const dist::DistributionSpec& spec, std::size_t samples_per_replica,
    int replicas, num::RngStream& rng, int workers = 0);

// Gaussian isoperimetric profile: Phi(Phi^{-1}(alpha) + eps).
double gaussian_halfspace_profile(double alpha, double eps);

}  // namespace ccg::isop
