#include "deltachi/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace deltachi {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (b <= a) return 0.0;
  if (n < 2) n = 2;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double simpson_split(const std::function<double(double)>& f, double a, double b,
                     std::span<const double> breakpoints, int panels) {
  std::vector<double> pts{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    total += simpson(f, pts[i], pts[i + 1], panels);
  return total;
}

double sine_integral(double x) {
  if (x < 0) return -sine_integral(-x);
  if (x <= 16.0) {
    // sum (-1)^m x^{2m+1} / ((2m+1)(2m+1)!)
    double term = x, sum = x;
    for (int m = 1; m < 80; ++m) {
      term *= -x * x / ((2 * m) * (2 * m + 1));
      double add = term / (2 * m + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
  }
  // Si(x) = pi/2 - f(x)cos(x) - g(x)sin(x), 4-term asymptotic series
  const double x2 = x * x;
  double fx = (1.0 - 2.0 / x2 + 24.0 / (x2 * x2) - 720.0 / (x2 * x2 * x2)) / x;
  double gx = (1.0 - 6.0 / x2 + 120.0 / (x2 * x2) - 5040.0 / (x2 * x2 * x2)) / x2;
  return std::numbers::pi / 2 - fx * std::cos(x) - gx * std::sin(x);
}

double tail_cos_over_sq(double cutoff, double a) {
  if (cutoff <= 0) throw std::invalid_argument("tail_cos_over_sq: cutoff <= 0");
  a = std::abs(a);
  if (a == 0.0) return 1.0 / cutoff;
  const double x = a * cutoff;
  return std::cos(x) / cutoff - a * (std::numbers::pi / 2 - sine_integral(x));
}

namespace {

struct GaussRule {
  std::vector<double> nodes, weights;
};

GaussRule legendre_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& cached_rule(int n) {
  static std::array<GaussRule, 81> cache;
  static std::array<bool, 81> have{};
  if (n < 1 || n > 80) throw std::invalid_argument("gauss rule order out of range");
  if (!have[n]) {
    cache[n] = legendre_rule(n);
    have[n] = true;
  }
  return cache[n];
}

}  // namespace

std::span<const double> gauss8_nodes() {
  return std::span<const double>(cached_rule(8).nodes);
}
std::span<const double> gauss8_weights() {
  return std::span<const double>(cached_rule(8).weights);
}

void gauss_rule_for_degree(int degree, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  int n = std::max(1, (degree + 2) / 2);
  if (n > 80) throw std::invalid_argument("gauss_rule_for_degree: degree too high");
  const GaussRule& r = cached_rule(n);
  nodes = r.nodes;
  weights = r.weights;
}

}  // namespace deltachi
