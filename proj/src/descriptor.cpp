#include "sinelab/descriptor.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "sinelab/errors.hpp"

namespace sinelab {

namespace {

constexpr double kPi = std::numbers::pi;

// Dawson function on [0, 10] tabulated once by RK4 on D' = 1 - 2xD,
// evaluated by cubic Hermite interpolation (the derivative is available
// analytically from the ODE).
struct DawsonTable {
  static constexpr int n = 16384;
  static constexpr double xmax = 10.0;
  std::vector<double> d;
  DawsonTable() : d(n + 1) {
    const double h = xmax / n;
    double y = 0.0;
    d[0] = 0.0;
    auto f = [](double x, double y) { return 1.0 - 2.0 * x * y; };
    for (int i = 0; i < n; ++i) {
      const double x = i * h;
      const double k1 = f(x, y);
      const double k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
      const double k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
      const double k4 = f(x + h, y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      d[i + 1] = y;
    }
  }
};

double dawson_pos(double x) {
  static const DawsonTable tab;
  if (x <= tab.xmax) {
    const double h = tab.xmax / tab.n;
    int i = (int)(x / h);
    if (i >= tab.n) i = tab.n - 1;
    const double x0 = i * h, x1 = x0 + h;
    const double y0 = tab.d[i], y1 = tab.d[i + 1];
    const double m0 = 1.0 - 2.0 * x0 * y0;
    const double m1 = 1.0 - 2.0 * x1 * y1;
    const double s = (x - x0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
  }
  // Asymptotic series.
  const double ix2 = 1.0 / (x * x);
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 4; ++k) {
    term *= (2.0 * k - 1.0) * 0.5 * ix2;
    sum += term;
  }
  return 0.5 / x * sum;
}

}  // namespace

double dawson(double x) { return x < 0 ? -dawson_pos(-x) : dawson_pos(x); }

Descriptor Descriptor::make(const std::string& name, double scale,
                            double amplitude, double half_width) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(amplitude) ||
      !(half_width > 0.0))
    throw DescriptorError("descriptor: bad parameters for " + name);
  Descriptor d;
  d.scale = scale;
  d.amplitude = amplitude;
  d.half_width = half_width;
  if (name == "gaussian") d.shape = Shape::gaussian;
  else if (name == "lorentzian") d.shape = Shape::lorentzian;
  else if (name == "hat") d.shape = Shape::hat;
  else if (name == "indicator") d.shape = Shape::indicator;
  else if (name == "custom") d.shape = Shape::custom;
  else if (name == "ring_gaussian") d.shape = Shape::ring_gaussian;
  else if (name == "ring_lorentzian") d.shape = Shape::ring_lorentzian;
  else if (name == "ring_hat") d.shape = Shape::ring_hat;
  else throw DescriptorError("descriptor: unknown name " + name);
  return d;
}

std::string Descriptor::name() const {
  switch (shape) {
    case Shape::gaussian: return "gaussian";
    case Shape::lorentzian: return "lorentzian";
    case Shape::hat: return "hat";
    case Shape::indicator: return "indicator";
    case Shape::custom: return "custom";
    case Shape::ring_gaussian: return "ring_gaussian";
    case Shape::ring_lorentzian: return "ring_lorentzian";
    case Shape::ring_hat: return "ring_hat";
  }
  return "custom";
}

bool Descriptor::even() const {
  switch (shape) {
    case Shape::gaussian:
    case Shape::lorentzian:
    case Shape::hat:
    case Shape::indicator:
      return true;
    default:
      return false;  // ring shapes are odd, custom unknown
  }
}

bool Descriptor::holomorphic() const {
  switch (shape) {
    case Shape::gaussian:
    case Shape::lorentzian:
    case Shape::ring_lorentzian:
      return true;
    default:
      return false;
  }
}

double Descriptor::natural_strip() const {
  switch (shape) {
    case Shape::gaussian:
      return std::numeric_limits<double>::infinity();
    case Shape::lorentzian:
    case Shape::ring_lorentzian:
      return scale;  // poles at +- i*scale
    default:
      return 0.0;
  }
}

namespace {

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

cplx ring_hat_base(double u) {
  const double v = xlogx(u + 1.0) + xlogx(u - 1.0) - 2.0 * xlogx(u);
  return cplx(0.0, -v / kPi);
}

}  // namespace

cplx Descriptor::eval(double t) const {
  const double u = t / scale;
  cplx base;
  switch (shape) {
    case Shape::gaussian: base = std::exp(-u * u); break;
    case Shape::lorentzian: base = 1.0 / (1.0 + u * u); break;
    case Shape::hat: base = std::max(0.0, 1.0 - std::abs(u)); break;
    case Shape::indicator: base = std::abs(u) <= half_width ? 1.0 : 0.0; break;
    case Shape::ring_gaussian:
      base = cplx(0.0, -2.0 / std::sqrt(kPi) * dawson(u));
      break;
    case Shape::ring_lorentzian: base = cplx(0.0, -u / (1.0 + u * u)); break;
    case Shape::ring_hat: base = ring_hat_base(u); break;
    case Shape::custom:
      throw DescriptorError("descriptor: custom has no closed form");
  }
  return amplitude * base;
}

cplx Descriptor::eval(cplx z) const {
  if (z.imag() == 0.0) return eval(z.real());
  const cplx u = z / scale;
  cplx base;
  switch (shape) {
    case Shape::gaussian: base = std::exp(-u * u); break;
    case Shape::lorentzian: base = 1.0 / (1.0 + u * u); break;
    case Shape::ring_lorentzian:
      base = cplx(0.0, -1.0) * u / (1.0 + u * u);
      break;
    default:
      throw DescriptorError("descriptor: " + name() +
                            " has no strip evaluator");
  }
  return amplitude * base;
}

Descriptor Descriptor::ring() const {
  Descriptor r = *this;
  switch (shape) {
    case Shape::gaussian: r.shape = Shape::ring_gaussian; break;
    case Shape::lorentzian: r.shape = Shape::ring_lorentzian; break;
    case Shape::hat: r.shape = Shape::ring_hat; break;
    default:
      throw DescriptorError("descriptor: no ring closed form for " + name());
  }
  return r;
}

std::map<std::string, double> Descriptor::params() const {
  std::map<std::string, double> p{{"scale", scale}, {"amplitude", amplitude}};
  if (shape == Shape::indicator) p["half_width"] = half_width;
  return p;
}

}  // namespace sinelab
