#pragma once

#include <functional>
#include <vector>

namespace knudsen {

// Gauss-Legendre nodes/weights on [-1,1]; cached per order, thread-safe.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

struct QuadResult {
  double value = 0.0;
  // |last refinement - previous|; the convergence certificate.
  double last_delta = 0.0;
  int nodes_per_axis = 0;
  bool converged = false;
};

// Node-doubling Gauss-Legendre on [a,b]: evaluate at n, 2n, 4n, ... nodes
// until successive values differ by less than tol, hard cap per axis.
QuadResult integrate_1d(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-8, int n0 = 16,
                        int cap = 16384);

// Tensor-product version; both axes are refined together.
QuadResult integrate_2d(const std::function<double(double, double)>& f,
                        double ax, double bx, double ay, double by,
                        double tol = 1e-8, int n0 = 16, int cap = 16384);

QuadResult integrate_3d(
    const std::function<double(double, double, double)>& f, double ax,
    double bx, double ay, double by, double az, double bz, double tol = 1e-8,
    int n0 = 8, int cap = 1024);

}  // namespace knudsen
