#pragma once

#include <stdexcept>

#include "knudsen/geometry.hpp"
#include "knudsen/philox.hpp"
#include "knudsen/vec.hpp"

namespace knudsen {

struct AccommodationParams {
  double r_perp;  // normal-energy accommodation, (0,1)
  double r_par;   // tangential-momentum accommodation, (0,2)

  AccommodationParams(double rp, double rl) : r_perp(rp), r_par(rl) {
    if (!(rp > 0.0 && rp < 1.0))
      throw std::invalid_argument("r_perp must lie in (0,1)");
    if (!(rl > 0.0 && rl < 2.0))
      throw std::invalid_argument("r_par must lie in (0,2)");
  }

  double tangential_var_factor() const { return r_par * (2.0 - r_par); }
  // Largest factor by which one wall interaction contracts kinetic energy
  // scales; < 1 on the admissible range.
  double contraction_factor() const {
    const double t = 1.0 - r_par;
    return std::max(1.0 - r_perp, t * t);
  }
};

enum class WallLawKind {
  CercignaniLampis,
  Diffuse,
  Specular,
  BounceBack,
  MaxwellMix
};

struct BoundaryCondition {
  WallLawKind kind = WallLawKind::Diffuse;
  AccommodationParams accommodation{0.5, 0.5};
  double mix_alpha = 0.0;  // diffuse fraction for MaxwellMix

  static BoundaryCondition cercignani_lampis(AccommodationParams p) {
    return {WallLawKind::CercignaniLampis, p, 0.0};
  }
  static BoundaryCondition diffuse() {
    return {WallLawKind::Diffuse, {0.5, 0.5}, 0.0};
  }
  static BoundaryCondition specular() {
    return {WallLawKind::Specular, {0.5, 0.5}, 0.0};
  }
  static BoundaryCondition bounce_back() {
    return {WallLawKind::BounceBack, {0.5, 0.5}, 0.0};
  }
  static BoundaryCondition maxwell_mix(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw std::invalid_argument("mix fraction must lie in [0,1]");
    return {WallLawKind::MaxwellMix, {0.5, 0.5}, alpha};
  }
};

// Orthonormal wall frame: outward normal plus dim-1 tangents, built
// deterministically from the normal.
struct WallFrame {
  Vec normal{};
  Vec tangent[2]{};
  int dim = 2;

  static WallFrame from_normal(const Vec& n, int dim);
};

// Incident state u (u . n > 0) split into normal speed and tangential
// components in the wall frame.
struct IncidentFrame {
  double u_perp = 0.0;
  double u_par[2] = {0.0, 0.0};
};

IncidentFrame decompose_incident(const Vec& u, const WallFrame& frame);

double gauss_pdf(double x, double mean, double var);

// Rice density (x/s2) exp(-(x^2+mu^2)/(2 s2)) I0(mu x / s2) on x >= 0,
// assembled in log space so large mu never overflows.
double rice_pdf(double x, double mu, double sigma2);

// Scattering kernel value R(u -> v) in wall-frame components: normal speeds
// positive, v_par of extent dim-1. Log-space assembly (default) stays finite
// out to incident speeds of order 1e3.
double cl_density_components(double u_perp, const double* u_par, double v_perp,
                             const double* v_par, double theta,
                             const AccommodationParams& p, int dim);
// Naive product-of-factors path; overflows for extreme arguments, kept as a
// cross-check at moderate ones.
double cl_density_components_direct(double u_perp, const double* u_par,
                                    double v_perp, const double* v_par,
                                    double theta, const AccommodationParams& p,
                                    int dim);

// Vector form: u incident (u.n > 0), v outgoing (v.n < 0).
double cl_density(const Vec& u, const Vec& v, const WallFrame& frame,
                  double theta, const AccommodationParams& p);

struct GrazingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Draws the outgoing velocity for an incident u at the given hit. The Rice
// normal speed comes from two Gaussians (never evaluates I0). Velocities
// with |v . n| < 1e-12 |v| are rejected and redrawn, at most 100 times.
Vec sample_outgoing(const Vec& u, const BoundaryHit& hit,
                    const BoundaryCondition& bc, CounterRng& rng);

// ---- quadrature-backed identity oracles ----

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool converged = false;
};

// | integral_{v outgoing} R(u->v) |v.n| dv  -  1 |
IdentityCheck normalization_check(double u_perp, const double* u_par,
                                  double theta, const AccommodationParams& p,
                                  int dim);

struct TailMass {
  double value = 0.0;
  bool converged = false;
};

// integral of R(u->v)|v.n| over outgoing speeds |v| >= m; d = 2 only.
TailMass tail_mass(double u_perp, double u_par1, double theta,
                   const AccommodationParams& p, double m);

// sqrt(b/pi) int e^{a v^2} e^{-b (v-w)^2} dv  vs  sqrt(b/(b-a)) e^{a b w^2/(b-a)}
IdentityCheck chen_gaussian_identity(double a, double b, double w);
// 2b int_0^inf v e^{a v^2} e^{-b v^2} e^{-b w^2} I0(2bvw) dv  vs
// (b/(b-a)) e^{a b w^2/(b-a)}
IdentityCheck chen_rice_identity(double a, double b, double w);

// Flux of a unit-temperature half-space Maxwellian through the CL wall at
// temperature T2 under the coupling r_par(2-r_par) = r_perp, against the
// closed form with kappa = 1 - r_perp + T2 r_perp. v = (v1, v2), v2 > 0.
IdentityCheck cl_flux_identity(const Vec& v, double T2,
                               const AccommodationParams& p);

// |R(b->a;T) - R(-a->-b;T) e^{(|b|^2-|a|^2)/(2T)}| at a flat wall with
// outward normal (0,-1): a2 > 0, b2 < 0.
double reciprocity_residual(const Vec& a, const Vec& b, double T,
                            const AccommodationParams& p);

}  // namespace knudsen
