#pragma once

#include <vector>

#include "ccg/body.hpp"
#include "ccg/rng.hpp"

namespace ccg::vol {

// Uniform point on the chord through x in a uniform random direction; chord
// endpoints located by bisection on the membership oracle. Throws if the
// certified outer radius fails to bracket the chord (convexity violation).
num::Vec hit_and_run_step(const ConvexBody& body, const num::Vec& x,
                          num::RngStream& rng);

// Burn-in, then collect `count` states separated by `thin` steps.
std::vector<num::Vec> hit_and_run_chain(const ConvexBody& body,
                                        const num::Vec& start, long burn_in,
                                        long thin, std::size_t count,
                                        num::RngStream& rng);

}  // namespace ccg::vol
