#include "knudsen/toymodel.hpp"

#include <cmath>

#include "knudsen/quadrature.hpp"

namespace knudsen {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811;

double upper_branch(double speed2, double kappa) {
  return std::exp(-0.5 * speed2 / kappa) / (kappa * std::sqrt(kappa) * kSqrt2Pi);
}

double lower_branch(double speed2) {
  return std::exp(-0.5 * speed2) / kSqrt2Pi;
}

}  // namespace

ToyModelSpec::ToyModelSpec(AccommodationParams acc, TemperatureProfile profile)
    : accommodation(acc), t2(std::move(profile)) {
  if (std::abs(acc.tangential_var_factor() - acc.r_perp) > 1e-12)
    throw std::invalid_argument(
        "toy model requires r_par(2 - r_par) = r_perp within 1e-12");
  if (!(t2.max_value() < 1.0))
    throw std::invalid_argument("toy model requires sup T2 < 1");
  if (std::abs(t2(0.0) - t2(1.0)) > 1e-12)
    throw std::invalid_argument("T2 must be 1-periodic in x1");
}

double backward_foot(const Vec& x, const Vec& v) {
  if (!(v[1] > 0.0))
    throw std::invalid_argument("backward foot needs v2 > 0");
  return wrap01(x[0] - x[1] * v[0] / v[1]);
}

double steady_unnormalized(const ToyModelSpec& spec, const Vec& x,
                           const Vec& v) {
  if (x[1] < 0.0 || x[1] > 1.0)
    throw std::invalid_argument("position outside the slab");
  if (v[1] == 0.0)
    throw std::invalid_argument("steady density undefined at v2 = 0");
  if (v[1] < 0.0) return lower_branch(norm2(v));
  return upper_branch(norm2(v), spec.kappa(backward_foot(x, v)));
}

ToyNormalization normalize(const ToyModelSpec& spec) {
  ToyNormalization out;
  const auto quad = integrate_1d(
      [&](double y) { return 1.0 / std::sqrt(spec.kappa(y)); }, 0.0, 1.0,
      1e-11, 32);
  const double half = std::sqrt(0.5 * kPi);
  out.mass = half * (1.0 + quad.value);
  out.beta = 1.0 / out.mass;
  out.converged = quad.converged;
  return out;
}

double unnormalized_mass_bruteforce(const ToyModelSpec& spec) {
  const double L = 12.0;
  // v2 < 0 and v2 > 0 separately; the integrand jumps across v2 = 0.
  const auto lower = integrate_3d(
      [&](double, double v1, double v2) {
        return lower_branch(v1 * v1 + v2 * v2);
      },
      0.0, 1.0, -L, L, -L, 0.0, 1e-9, 16, 256);
  const auto upper = integrate_3d(
      [&](double x1, double v1, double v2) {
        return upper_branch(v1 * v1 + v2 * v2, spec.kappa(x1));
      },
      0.0, 1.0, -L, L, 0.0, L, 1e-9, 16, 256);
  return lower.value + upper.value;
}

double steady_upper_integral_form(const ToyModelSpec& spec, const Vec& x,
                                  const Vec& v) {
  const double t2 = spec.t2(backward_foot(x, v));
  return cl_flux_identity(v, t2, spec.accommodation).lhs;
}

namespace {

// int_0^inf s^2 exp(-s^2/(2 kappa)) / (kappa^{3/2} sqrt(2 pi)) ds by
// quadrature; analytically sqrt(pi/2)/sqrt(2 pi) = 1/2 independent of kappa.
double radial_flux_moment(double kappa) {
  const double hi = 12.0 * std::sqrt(kappa);
  return integrate_1d(
             [&](double s) { return s * s * upper_branch(s * s, kappa); }, 0.0,
             hi, 1e-11, 32)
      .value;
}

// Upward flux of the unnormalized upper branch through height x2 at abscissa
// x1; the kappa dependence cancels pointwise in the polar angle.
double unnormalized_up_flux(const ToyModelSpec& spec, double x1, double x2) {
  const auto quad = integrate_1d(
      [&](double phi) {
        const double foot =
            wrap01(x1 - x2 * std::cos(phi) / std::sin(phi));
        return std::sin(phi) * radial_flux_moment(spec.kappa(foot));
      },
      0.0, kPi, 1e-9, 32);
  return quad.value;
}

}  // namespace

double boundary_residual_top(const ToyModelSpec& spec, double x1,
                             const Vec& v) {
  if (!(v[1] < 0.0))
    throw std::invalid_argument("top-wall residual needs v2 < 0");
  const double beta = normalize(spec).beta;
  const double lhs = lower_branch(norm2(v));
  // Wall Maxwellian at T1 = 1 times the incoming flux from above.
  const double rhs = lower_branch(norm2(v)) * unnormalized_up_flux(spec, x1, 1.0);
  return beta * std::abs(lhs - rhs);
}

double boundary_residual_bottom(const ToyModelSpec& spec, double x1,
                                const Vec& v) {
  if (!(v[1] > 0.0))
    throw std::invalid_argument("bottom-wall residual needs v2 > 0");
  const double beta = normalize(spec).beta;
  const Vec x = vec2(x1, 0.0);
  const double lhs = steady_unnormalized(spec, x, v);
  const double rhs = cl_flux_identity(v, spec.t2(x1), spec.accommodation).lhs;
  return beta * std::abs(lhs - rhs);
}

double upward_flux(const ToyModelSpec& spec, double x1) {
  return normalize(spec).beta * unnormalized_up_flux(spec, x1, 1.0);
}

Vec flow_integrals(const ToyModelSpec& spec, const Vec& x) {
  const double L = 12.0;
  // Downward half: plain tensor quadrature of v_i times the Maxwellian.
  const auto low1 = integrate_2d(
      [&](double v1, double v2) { return v1 * lower_branch(v1 * v1 + v2 * v2); },
      -L, L, -L, 0.0, 1e-10, 32);
  const auto low2 = integrate_2d(
      [&](double v1, double v2) { return v2 * lower_branch(v1 * v1 + v2 * v2); },
      -L, L, -L, 0.0, 1e-10, 32);
  // Upward half in polar coordinates; radial moment first.
  const auto up = [&](int comp) {
    return integrate_1d(
               [&](double phi) {
                 const double foot =
                     wrap01(x[0] - x[1] * std::cos(phi) / std::sin(phi));
                 const double g = comp == 0 ? std::cos(phi) : std::sin(phi);
                 return g * radial_flux_moment(spec.kappa(foot));
               },
               0.0, kPi, 1e-9, 32)
        .value;
  };
  const double beta = normalize(spec).beta;
  return {beta * (low1.value + up(0)), beta * (low2.value + up(1)), 0.0};
}

SteadySampleResult sample_steady(const ToyModelSpec& spec, std::size_t n,
                                 std::uint64_t seed) {
  const double kmax = spec.kappa_max();
  const double kmin = spec.kappa_min();
  const double envelope =
      kSqrt2Pi * std::max(1.0, kmax / (kmin * std::sqrt(kmin)));
  const double sqrt_kmax = std::sqrt(kmax);

  SteadySampleResult out;
  out.particles.resize(n);
  std::uint64_t attempts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i, kSubstreamInitial);
    bool accepted = false;
    for (int trial = 0; trial < 100000; ++trial) {
      ++attempts;
      const double x1 = rng.uniform();
      const double x2 = rng.uniform();
      const bool lower = rng.uniform() < 0.5;
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      Vec v;
      double proposal;
      if (lower) {
        v = vec2(z1, -std::abs(z2));
        proposal = std::exp(-0.5 * norm2(v)) / (2.0 * kPi);
      } else {
        v = vec2(sqrt_kmax * z1, sqrt_kmax * std::abs(z2));
        proposal = std::exp(-0.5 * norm2(v) / kmax) / (2.0 * kPi * kmax);
      }
      if (v[1] == 0.0) continue;
      const double f = steady_unnormalized(spec, vec2(x1, x2), v);
      if (rng.uniform() * envelope * proposal < f) {
        out.particles[i] = Particle{vec2(x1, x2), v, 0};
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw std::runtime_error("steady-state sampler starved; check the spec");
  }
  out.acceptance_rate = static_cast<double>(n) / static_cast<double>(attempts);
  if (out.acceptance_rate < 0.01)
    throw std::runtime_error(
        "steady-state sampler acceptance below 1%; check the spec");
  return out;
}

Domain make_toy_domain(const ToyModelSpec& spec) {
  return Domain::periodic_box(spec.t2, TemperatureProfile::constant(1.0));
}

}  // namespace knudsen
