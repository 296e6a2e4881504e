#pragma once

#include <cmath>

#include "gradrom/types.hpp"

namespace gradrom {

// Quadrature on the reference triangle {(x,y) : x,y >= 0, x+y <= 1} and the
// reference edge [0,1]. Triangle weights sum to 1/2 (the reference area), so a
// physical integral is sum_i w_i * f(F(p_i)) * |det J| with |det J| = 2|K|.

struct TriangleRule {
  int degree = 0;  // every polynomial up to this total degree is integrated exactly
  Matrix points;   // n x 2 reference coordinates
  Vector weights;  // sums to 1/2
};

struct EdgeRule {
  int degree = 0;
  Vector points;   // parameters in [0,1]
  Vector weights;  // sums to 1
};

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration on the
// Legendre polynomial. Exact for polynomials of degree 2n-1.
inline void gauss_legendre(int n, Vector& nodes, Vector& weights) {
  nodes.resize(n);
  weights.resize(n);
  const double pi = 3.14159265358979323846264338328;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P_n'(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

inline EdgeRule edge_rule(int degree) {
  EdgeRule rule;
  const int n = degree / 2 + 1;  // 2n-1 >= degree
  Vector x, w;
  gauss_legendre(n, x, w);
  rule.degree = 2 * n - 1;
  rule.points = (0.5 * (x.array() + 1.0)).matrix();
  rule.weights = 0.5 * w;
  return rule;
}

// Symmetric rules for low degree, conical product (Duffy) rules otherwise.
// The n-point conical product rule integrates total degree 2n-2 exactly.
inline TriangleRule triangle_rule(int degree) {
  TriangleRule rule;
  if (degree <= 2) {
    rule.degree = 2;
    rule.points.resize(3, 2);
    rule.points << 2.0 / 3.0, 1.0 / 6.0,  //
        1.0 / 6.0, 2.0 / 3.0,             //
        1.0 / 6.0, 1.0 / 6.0;
    rule.weights = Vector::Constant(3, 1.0 / 6.0);
    return rule;
  }
  if (degree <= 4) {
    // 6-point degree-4 rule (Strang-Fix/Dunavant).
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    rule.degree = 4;
    rule.points.resize(6, 2);
    rule.points << 1.0 - 2.0 * a1, a1,  //
        a1, 1.0 - 2.0 * a1,             //
        a1, a1,                         //
        1.0 - 2.0 * a2, a2,             //
        a2, 1.0 - 2.0 * a2,             //
        a2, a2;
    rule.weights.resize(6);
    rule.weights << w1, w1, w1, w2, w2, w2;
    rule.weights *= 0.5;
    return rule;
  }
  const int n = degree / 2 + 2;  // 2n-2 >= degree, one point of margin
  Vector gx, gw;
  gauss_legendre(n, gx, gw);
  rule.degree = 2 * n - 2;
  rule.points.resize(n * n, 2);
  rule.weights.resize(n * n);
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (gx[i] + 1.0);
    const double wx = 0.5 * gw[i];
    for (int j = 0; j < n; ++j) {
      const double eta = 0.5 * (gx[j] + 1.0);
      const double weta = 0.5 * gw[j];
      rule.points(i * n + j, 0) = x;
      rule.points(i * n + j, 1) = eta * (1.0 - x);
      rule.weights(i * n + j) = wx * weta * (1.0 - x);
    }
  }
  return rule;
}

}  // namespace gradrom
