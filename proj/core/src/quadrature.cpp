#include "knudsen/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace knudsen {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.141592653589793238462643383280;
  // Newton iteration from the Chebyshev-angle initial guess; symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

std::map<int, GaussLegendreRule> g_rules;
std::mutex g_rules_mutex;

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(n);
  if (it == g_rules.end()) it = g_rules.emplace(n, compute_rule(n)).first;
  return it->second;
}

namespace {

double eval_1d(const std::function<double(double)>& f, double a, double b,
               int n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

double eval_2d(const std::function<double(double, double)>& f, double ax,
               double bx, double ay, double by, int n) {
  const auto& rule = gauss_legendre(n);
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = mx + hx * rule.nodes[i];
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      row += rule.weights[j] * f(x, my + hy * rule.nodes[j]);
    sum += rule.weights[i] * row;
  }
  return hx * hy * sum;
}

double eval_3d(const std::function<double(double, double, double)>& f,
               double ax, double bx, double ay, double by, double az,
               double bz, int n) {
  const auto& rule = gauss_legendre(n);
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  const double mz = 0.5 * (az + bz), hz = 0.5 * (bz - az);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = mx + hx * rule.nodes[i];
    double plane = 0.0;
    for (int j = 0; j < n; ++j) {
      const double y = my + hy * rule.nodes[j];
      double row = 0.0;
      for (int k = 0; k < n; ++k)
        row += rule.weights[k] * f(x, y, mz + hz * rule.nodes[k]);
      plane += rule.weights[j] * row;
    }
    sum += rule.weights[i] * plane;
  }
  return hx * hy * hz * sum;
}

template <typename Eval>
QuadResult refine(Eval eval, double tol, int n0, int cap) {
  QuadResult res;
  double prev = eval(n0);
  for (int n = 2 * n0; n <= cap; n *= 2) {
    const double cur = eval(n);
    res.value = cur;
    res.last_delta = std::abs(cur - prev);
    res.nodes_per_axis = n;
    if (res.last_delta < tol) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  res.converged = false;
  return res;
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a,
                        double b, double tol, int n0, int cap) {
  return refine([&](int n) { return eval_1d(f, a, b, n); }, tol, n0, cap);
}

QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double ax, double bx, double ay, double by, double tol,
                        int n0, int cap) {
  return refine([&](int n) { return eval_2d(f, ax, bx, ay, by, n); }, tol, n0,
                cap);
}

QuadResult integrate_3d(const std::function<double(double, double, double)>& f,
                        double ax, double bx, double ay, double by, double az,
                        double bz, double tol, int n0, int cap) {
  return refine(
      [&](int n) { return eval_3d(f, ax, bx, ay, by, az, bz, n); }, tol, n0,
      cap);
}

}  // namespace knudsen
