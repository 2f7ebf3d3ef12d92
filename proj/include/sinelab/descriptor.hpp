#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

namespace sinelab {

using cplx = std::complex<double>;

enum class Shape {
  gaussian,    // exp(-t^2)
  lorentzian,  // 1/(1+t^2)
  hat,         // max(0, 1-|t|)
  indicator,   // 1 on [-half_width, half_width]
  custom,      // grid-only, no closed form
  // Hardy-ring counterparts (i * Hilbert transform structure, purely
  // imaginary for the real shapes above).
  ring_gaussian,
  ring_lorentzian,
  ring_hat,
};

struct Descriptor {
  Shape shape = Shape::custom;
  double scale = 1.0;      // evaluates base(t / scale)
  double amplitude = 1.0;  // times amplitude
  double half_width = 1.0; // indicator only (pre-scaling)

  static Descriptor make(const std::string& name, double scale = 1.0,
                         double amplitude = 1.0, double half_width = 1.0);

  std::string name() const;
  bool has_closed_form() const { return shape != Shape::custom; }
  bool even() const;        // f(-t) = f(t) (ring shapes are odd instead)
  bool holomorphic() const; // closed form extends to a strip
  double natural_strip() const; // largest strip half-width of the closed form

  cplx eval(double t) const;
  cplx eval(cplx z) const;  // throws DescriptorError unless holomorphic()

  // Ring (Hardy) counterpart of this descriptor's shape, same scale/amplitude.
  Descriptor ring() const;

  std::map<std::string, double> params() const;
};

// Dawson function D(x) = exp(-x^2) * int_0^x exp(s^2) ds.
double dawson(double x);

}  // namespace sinelab
