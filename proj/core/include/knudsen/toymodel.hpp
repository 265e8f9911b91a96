#pragma once

#include <cstdint>

#include "knudsen/geometry.hpp"
#include "knudsen/kernel.hpp"
#include "knudsen/particle.hpp"

namespace knudsen {

// Mixed-wall slab: [0,1]^2 periodic in x1, diffuse wall at x2 = 1 held at
// temperature 1, CL wall at x2 = 0 with profile T2 taking values in (0,1)
// and accommodation coefficients coupled by r_par(2 - r_par) = r_perp.
// Under that coupling the steady state is explicit.
struct ToyModelSpec {
  AccommodationParams accommodation;
  TemperatureProfile t2;

  ToyModelSpec(AccommodationParams acc, TemperatureProfile profile);

  double kappa(double foot_x1) const {
    return 1.0 - accommodation.r_perp + t2(foot_x1) * accommodation.r_perp;
  }
  double kappa_min() const {
    return 1.0 - accommodation.r_perp + t2.min_value() * accommodation.r_perp;
  }
  double kappa_max() const {
    return 1.0 - accommodation.r_perp + t2.max_value() * accommodation.r_perp;
  }
};

// First coordinate of the backward exit point q~(x, -v) on the bottom wall;
// requires v2 > 0.
double backward_foot(const Vec& x, const Vec& v);

// Steady density before normalization: a downward half Maxwellian at
// temperature 1 and an upward branch at temperature kappa(foot).
double steady_unnormalized(const ToyModelSpec& spec, const Vec& x,
                           const Vec& v);

struct ToyNormalization {
  double mass = 0.0;  // integral of the unnormalized density
  double beta = 0.0;  // 1 / mass
  bool converged = false;
};

// The upper-branch mass reduces to a 1D integral: in polar velocity
// coordinates the foot is wrap(x1 - x2 cot phi), and averaging any function
// of the foot over a full period of x1 kills the (x2, phi) dependence, so
// mass = sqrt(pi/2) (1 + int_0^1 kappa(y)^{-1/2} dy).
ToyNormalization normalize(const ToyModelSpec& spec);

// Independent oracle: tensor quadrature over (x1, v1, v2) on the bottom-wall
// slab, where the foot equals x1 and no reduction is used.
double unnormalized_mass_bruteforce(const ToyModelSpec& spec);

// Upper branch by quadrature of the defining wall-flux integral instead of
// the closed form.
double steady_upper_integral_form(const ToyModelSpec& spec, const Vec& x,
                                  const Vec& v);

// Normalized residuals of the two wall balance conditions.
double boundary_residual_top(const ToyModelSpec& spec, double x1,
                             const Vec& v);  // v2 < 0
double boundary_residual_bottom(const ToyModelSpec& spec, double x1,
                                const Vec& v);  // v2 > 0

// Normalized upward flux through the top wall at abscissa x1; equals beta.
double upward_flux(const ToyModelSpec& spec, double x1);

// Normalized (int v1 f, int v2 f) at position x; both components vanish.
Vec flow_integrals(const ToyModelSpec& spec, const Vec& x);

struct SteadySampleResult {
  Ensemble particles;
  double acceptance_rate = 0.0;
};

// Exact rejection sampler for the normalized steady state. Proposal: uniform
// position times a half-Gaussian mixture (temperature 1 below, kappa_max
// above); envelope constant sqrt(2 pi) max(1, kappa_max / kappa_min^{3/2}).
SteadySampleResult sample_steady(const ToyModelSpec& spec, std::size_t n,
                                 std::uint64_t seed);

// Periodic box carrying T2 on the bottom wall and temperature 1 on top.
Domain make_toy_domain(const ToyModelSpec& spec);

}  // namespace knudsen
