#include "knudsen/kernel.hpp"

#include <cmath>

#include "knudsen/bessel.hpp"
#include "knudsen/quadrature.hpp"

namespace knudsen {

namespace {
constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811;
}  // namespace

WallFrame WallFrame::from_normal(const Vec& n, int dim) {
  WallFrame f;
  f.dim = dim;
  f.normal = normalized(n);
  if (dim == 2) {
    f.tangent[0] = {-f.normal[1], f.normal[0], 0.0};
    return f;
  }
  if (dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(f.normal[i]) < std::abs(f.normal[k])) k = i;
  Vec e{};
  e[k] = 1.0;
  f.tangent[0] = normalized(cross(e, f.normal));
  f.tangent[1] = cross(f.normal, f.tangent[0]);
  return f;
}

IncidentFrame decompose_incident(const Vec& u, const WallFrame& frame) {
  IncidentFrame inc;
  inc.u_perp = dot(u, frame.normal);
  if (!(inc.u_perp > 0.0))
    throw std::invalid_argument("incident state must satisfy u.n > 0");
  for (int j = 0; j + 1 < frame.dim; ++j)
    inc.u_par[j] = dot(u, frame.tangent[j]);
  return inc;
}

double gauss_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / (kSqrt2Pi * std::sqrt(var));
}

double rice_pdf(double x, double mu, double sigma2) {
  if (x < 0.0) return 0.0;
  const double m = std::abs(mu);
  const double z = x - m;
  return x / sigma2 * std::exp(-0.5 * z * z / sigma2) *
         bessel_i0_scaled(m * x / sigma2);
}

namespace {

void check_kernel_args(double u_perp, double v_perp, double theta, int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  if (!(theta > 0.0))
    throw std::invalid_argument("wall temperature must be positive");
  if (u_perp < 0.0 || v_perp < 0.0)
    throw std::invalid_argument("normal speeds must be nonnegative");
}

}  // namespace

double cl_density_components(double u_perp, const double* u_par, double v_perp,
                             const double* v_par, double theta,
                             const AccommodationParams& p, int dim) {
  check_kernel_args(u_perp, v_perp, theta, dim);
  const double sp2 = theta * p.r_perp;
  const double mu = std::sqrt(1.0 - p.r_perp) * u_perp;
  const double c = theta * p.tangential_var_factor();
  // exp(-v^2/2s) exp(-mu^2/2s) I0(mu v/s) = exp(-(v-mu)^2/2s) i0e(mu v/s)
  double log_r = -std::log(theta * p.r_perp) -
                 0.5 * (v_perp - mu) * (v_perp - mu) / sp2 +
                 std::log(bessel_i0_scaled(mu * v_perp / sp2));
  for (int j = 0; j < dim - 1; ++j) {
    const double z = v_par[j] - (1.0 - p.r_par) * u_par[j];
    log_r += -0.5 * std::log(2.0 * kPi * c) - 0.5 * z * z / c;
  }
  return std::exp(log_r);
}

double cl_density_components_direct(double u_perp, const double* u_par,
                                    double v_perp, const double* v_par,
                                    double theta, const AccommodationParams& p,
                                    int dim) {
  check_kernel_args(u_perp, v_perp, theta, dim);
  const double sp2 = theta * p.r_perp;
  const double c = theta * p.tangential_var_factor();
  const double one_m_rp = 1.0 - p.r_perp;
  double r = 1.0 / (theta * p.r_perp) *
             std::exp(-0.5 * v_perp * v_perp / sp2) *
             std::exp(-0.5 * one_m_rp * u_perp * u_perp / sp2) *
             bessel_i0(std::sqrt(one_m_rp) * u_perp * v_perp / sp2);
  for (int j = 0; j < dim - 1; ++j) {
    const double z = v_par[j] - (1.0 - p.r_par) * u_par[j];
    r *= std::exp(-0.5 * z * z / c) / std::sqrt(2.0 * kPi * c);
  }
  return r;
}

double cl_density(const Vec& u, const Vec& v, const WallFrame& frame,
                  double theta, const AccommodationParams& p) {
  const IncidentFrame inc = decompose_incident(u, frame);
  const double v_n = dot(v, frame.normal);
  if (!(v_n < 0.0))
    throw std::invalid_argument("outgoing state must satisfy v.n < 0");
  double v_par[2] = {0.0, 0.0};
  for (int j = 0; j + 1 < frame.dim; ++j) v_par[j] = dot(v, frame.tangent[j]);
  return cl_density_components(inc.u_perp, inc.u_par, -v_n, v_par, theta, p,
                               frame.dim);
}

Vec sample_outgoing(const Vec& u, const BoundaryHit& hit,
                    const BoundaryCondition& bc, CounterRng& rng) {
  switch (bc.kind) {
    case WallLawKind::Specular:
      return u - 2.0 * dot(u, hit.normal) * hit.normal;
    case WallLawKind::BounceBack:
      return -u;
    case WallLawKind::MaxwellMix: {
      const BoundaryCondition chosen = rng.uniform() < bc.mix_alpha
                                           ? BoundaryCondition::diffuse()
                                           : BoundaryCondition::specular();
      return sample_outgoing(u, hit, chosen, rng);
    }
    default:
      break;
  }

  const int dim = hit.dim;
  const WallFrame frame = WallFrame::from_normal(hit.normal, dim);
  const double theta = hit.temperature;

  double mu = 0.0, var_perp = theta, tan_var = theta;
  double tan_mean[2] = {0.0, 0.0};
  if (bc.kind == WallLawKind::CercignaniLampis) {
    const IncidentFrame inc = decompose_incident(u, frame);
    const AccommodationParams& p = bc.accommodation;
    mu = std::sqrt(1.0 - p.r_perp) * inc.u_perp;
    var_perp = theta * p.r_perp;
    tan_var = theta * p.tangential_var_factor();
    for (int j = 0; j < dim - 1; ++j)
      tan_mean[j] = (1.0 - p.r_par) * inc.u_par[j];
  }

  const double sigma_perp = std::sqrt(var_perp);
  const double sigma_tan = std::sqrt(tan_var);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double n1 = mu + sigma_perp * rng.normal();
    const double n2 = sigma_perp * rng.normal();
    const double v_perp = std::hypot(n1, n2);
    Vec v = -v_perp * frame.normal;
    double par2 = 0.0;
    for (int j = 0; j < dim - 1; ++j) {
      const double w = tan_mean[j] + sigma_tan * rng.normal();
      v += w * frame.tangent[j];
      par2 += w * w;
    }
    const double speed = std::sqrt(v_perp * v_perp + par2);
    if (speed > 0.0 && v_perp >= 1e-12 * speed) return v;
  }
  throw GrazingError("grazing-velocity resample limit exceeded");
}

// ---- oracles ----

namespace {

struct PerpWindow {
  double lo, hi;
};

// Integration window for the outgoing normal speed: Rice bulk plus margin.
PerpWindow perp_window(double mu, double sigma) {
  return {0.0, mu + 15.0 * sigma};
}

bool quad_ok(const QuadResult& r) {
  return r.converged || r.last_delta <= 1e-6;
}

}  // namespace

IdentityCheck normalization_check(double u_perp, const double* u_par,
                                  double theta, const AccommodationParams& p,
                                  int dim) {
  check_kernel_args(u_perp, 0.0, theta, dim);
  const double mu = std::sqrt(1.0 - p.r_perp) * u_perp;
  const double sigma_p = std::sqrt(theta * p.r_perp);
  const PerpWindow wp = perp_window(mu, sigma_p);
  const double c = theta * p.tangential_var_factor();
  const double s = std::sqrt(c);

  IdentityCheck check;
  check.rhs = 1.0;
  if (dim == 2) {
    const double m = (1.0 - p.r_par) * u_par[0];
    const auto quad = integrate_2d(
        [&](double vp, double w) {
          return vp * cl_density_components(u_perp, u_par, vp, &w, theta, p, 2);
        },
        wp.lo, wp.hi, m - 13.0 * s, m + 13.0 * s, 1e-8, 32);
    check.lhs = quad.value;
    check.converged = quad_ok(quad);
  } else {
    const double m0 = (1.0 - p.r_par) * u_par[0];
    const double m1 = (1.0 - p.r_par) * u_par[1];
    const auto quad = integrate_3d(
        [&](double vp, double w0, double w1) {
          const double v_par[2] = {w0, w1};
          return vp *
                 cl_density_components(u_perp, u_par, vp, v_par, theta, p, 3);
        },
        wp.lo, wp.hi, m0 - 13.0 * s, m0 + 13.0 * s, m1 - 13.0 * s,
        m1 + 13.0 * s, 1e-8, 16, 1024);
    check.lhs = quad.value;
    check.converged = quad_ok(quad);
  }
  check.residual = std::abs(check.lhs - check.rhs);
  return check;
}

TailMass tail_mass(double u_perp, double u_par1, double theta,
                   const AccommodationParams& p, double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("speed threshold must be >= 0");
  const double mu = std::sqrt(1.0 - p.r_perp) * u_perp;
  const double sigma2 = theta * p.r_perp;
  const double c = theta * p.tangential_var_factor();
  const double tan_mean = (1.0 - p.r_par) * u_par1;

  const auto total = normalization_check(u_perp, &u_par1, theta, p, 2);

  // Mass of the factorized flux density over the half-disk s^2 + w^2 < m^2,
  // s >= 0, mapped to (t, xi) so the integrand stays smooth at s = m.
  const auto disk = integrate_2d(
      [&](double t, double xi) {
        const double ct = std::cos(t);
        const double st = std::sin(t);
        const double s = m * st;
        const double w = m * ct * xi;
        return m * ct * rice_pdf(s, mu, sigma2) * m * ct *
               gauss_pdf(w, tan_mean, c);
      },
      0.0, 0.5 * kPi, -1.0, 1.0, 1e-8, 32);

  TailMass out;
  out.value = std::max(total.lhs - disk.value, 0.0);
  out.converged = total.converged && quad_ok(disk);
  return out;
}

IdentityCheck chen_gaussian_identity(double a, double b, double w) {
  if (!(a > 0.0 && a < b))
    throw std::invalid_argument("chen identities require 0 < a < b");
  IdentityCheck check;
  check.rhs = std::sqrt(b / (b - a)) * std::exp(a * b * w * w / (b - a));
  const double center = b * w / (b - a);
  const double sigma = 1.0 / std::sqrt(2.0 * (b - a));
  const auto quad = integrate_1d(
      [&](double v) {
        const double z = v - w;
        return std::exp(a * v * v - b * z * z);
      },
      center - 15.0 * sigma, center + 15.0 * sigma,
      std::max(1e-13, 1e-10 * check.rhs), 32);
  check.lhs = std::sqrt(b / kPi) * quad.value;
  check.converged = quad.converged;
  check.residual = std::abs(check.lhs - check.rhs) / std::max(1.0, std::abs(check.rhs));
  return check;
}

IdentityCheck chen_rice_identity(double a, double b, double w) {
  if (!(a > 0.0 && a < b))
    throw std::invalid_argument("chen identities require 0 < a < b");
  IdentityCheck check;
  check.rhs = b / (b - a) * std::exp(a * b * w * w / (b - a));
  const double aw = std::abs(w);
  const double center = b * aw / (b - a);
  const double sigma = 1.0 / std::sqrt(2.0 * (b - a));
  const auto quad = integrate_1d(
      [&](double v) {
        // e^{(a-b)v^2 - b w^2} I0(2bvw) with the I0 exponent absorbed.
        const double expo =
            -(b - a) * v * v - b * w * w + 2.0 * b * v * aw;
        return v * std::exp(expo) * bessel_i0_scaled(2.0 * b * v * w);
      },
      0.0, center + 15.0 * sigma, std::max(1e-13, 1e-10 * check.rhs), 32);
  check.lhs = 2.0 * b * quad.value;
  check.converged = quad.converged;
  check.residual = std::abs(check.lhs - check.rhs) / std::max(1.0, std::abs(check.rhs));
  return check;
}

IdentityCheck cl_flux_identity(const Vec& v, double T2,
                               const AccommodationParams& p) {
  if (!(v[1] > 0.0))
    throw std::invalid_argument("outgoing state needs v2 > 0");
  if (!(T2 > 0.0)) throw std::invalid_argument("T2 must be positive");
  if (std::abs(p.tangential_var_factor() - p.r_perp) > 1e-12)
    throw std::invalid_argument(
        "closed-form flux requires r_par(2 - r_par) = r_perp");

  IdentityCheck check;
  const double kappa = 1.0 - p.r_perp + T2 * p.r_perp;
  check.rhs = std::exp(-0.5 * norm2(v) / kappa) /
              (kappa * std::sqrt(kappa) * kSqrt2Pi);

  // Bottom-wall frame (normal (0,-1)): incident u has u2 < 0, components
  // u_perp = -u2, u_par = u1; outgoing components v_perp = v2, v_par = v1.
  const double v_perp = v[1], v_par = v[0];
  const double kp = 0.5 + (1.0 - p.r_perp) / (2.0 * T2 * p.r_perp);
  const double lp = std::sqrt(1.0 - p.r_perp) * v_perp / (T2 * p.r_perp);
  const double cp = lp / (2.0 * kp), sp = 1.0 / std::sqrt(2.0 * kp);
  const double c = T2 * p.tangential_var_factor();
  const double kt = 0.5 + (1.0 - p.r_par) * (1.0 - p.r_par) / (2.0 * c);
  const double lt = (1.0 - p.r_par) * v_par / c;
  const double ct = lt / (2.0 * kt), st = 1.0 / std::sqrt(2.0 * kt);

  const auto quad = integrate_2d(
      [&](double u_perp, double u_par) {
        const double r = cl_density_components(u_perp, &u_par, v_perp, &v_par,
                                               T2, p, 2);
        const double g =
            std::exp(-0.5 * (u_perp * u_perp + u_par * u_par)) / kSqrt2Pi;
        return u_perp * r * g;
      },
      0.0, std::max(cp + 15.0 * sp, 15.0 * sp), ct - 15.0 * st, ct + 15.0 * st,
      1e-10, 32);
  check.lhs = quad.value;
  check.converged = quad_ok(quad);
  check.residual = std::abs(check.lhs - check.rhs);
  return check;
}

double reciprocity_residual(const Vec& a, const Vec& b, double T,
                            const AccommodationParams& p) {
  if (!(a[1] > 0.0 && b[1] < 0.0))
    throw std::invalid_argument("reciprocity wants a2 > 0, b2 < 0");
  // R(b->a): incident b, outgoing a.
  const double b_par = b[0], a_par = a[0];
  const double lhs =
      cl_density_components(-b[1], &b_par, a[1], &a_par, T, p, 2);
  // R(-a->-b): incident -a, outgoing -b.
  const double na_par = -a[0], nb_par = -b[0];
  const double r2 =
      cl_density_components(a[1], &na_par, -b[1], &nb_par, T, p, 2);
  const double rhs = r2 * std::exp(0.5 * (norm2(b) - norm2(a)) / T);
  return std::abs(lhs - rhs);
}

}  // namespace knudsen
