#include "deltachi/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "deltachi/quadrature.hpp"

namespace deltachi {

double rho_closed_form() {
  return std::sqrt(3.0) / std::numbers::pi - 1.0 / 3.0;
}

RhoQuadrature rho_by_quadrature(int panels) {
  if (panels < 64) throw std::invalid_argument("rho_by_quadrature: panels < 64");
  const double pi = std::numbers::pi;
  auto f = [](double t) { return std::max(1.0, 2.0 + 2.0 * std::cos(t)); };
  const double kink = 2.0 * pi / 3.0;
  double bps[] = {-kink, kink};
  double integral = simpson_split(f, -pi, pi, bps, panels);
  double value = integral / (2.0 * pi) - 2.0;
  return {value, value - rho_closed_form()};
}

double kappa(int r) {
  if (r <= 0) throw std::invalid_argument("kappa: r must be >= 1");
  double s = 0.0;
  for (int k = 0; k < r; ++k) {
    double v = 2.0 + 2.0 * std::cos(2.0 * std::numbers::pi * k / r);
    s += std::max(1.0, v);
  }
  return s / r;
}

double ExponentParams::lower_exponent_distinct() const {
  return std::max(y - 1.0, 3.0 * y - 3.0);
}
double ExponentParams::lower_exponent_equal() const {
  return std::max(y - 1.0, 5.0 * y - 4.0);
}

ExponentParams exponent_params(double y, int r) {
  if (!(y > 0.0)) throw std::invalid_argument("exponent_params: y must be > 0");
  ExponentParams p;
  p.y = y;
  p.rho = rho_closed_form();
  p.m = std::max(3.0 * y - 1.0, (p.rho + 2.0) * y);
  p.n_exp = std::max(y + 1.0, p.m);
  p.kappa_r = kappa(r);
  return p;
}

double slack_factor(double x) {
  if (!(x >= 16.0)) throw std::invalid_argument("slack_factor: x must be >= 16");
  double l2 = std::log(std::log(x));
  double l3 = std::log(l2);
  return std::exp(std::sqrt(l2 * l3));
}

double slack_factor_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma <= 0.1))
    throw std::invalid_argument("slack_factor_sigma: sigma must be in (0, 1/10]");
  double l1 = std::log(1.0 / sigma);
  double l2 = std::log(l1);
  return std::exp(std::sqrt(l1 * l2));
}

}  // namespace deltachi
