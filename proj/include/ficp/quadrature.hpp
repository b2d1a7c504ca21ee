#ifndef FICP_QUADRATURE_HPP
#define FICP_QUADRATURE_HPP

#include <array>
#include <stdexcept>

namespace ficp {

inline constexpr int kSimpsonPanels = 4096;

/// Composite Simpson rule with an even number of panels.
template <typename Fn>
double simpson(Fn&& fn, double a, double b, int panels = kSimpsonPanels) {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("Simpson needs an even panel count");
  if (a == b) return 0.0;
  const double h = (b - a) / panels;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < panels; ++i) {
    const double v = fn(a + i * h);
    (i % 2 ? odd : even) += v;
  }
  return h / 3.0 * (fn(a) + fn(b) + 4.0 * odd + 2.0 * even);
}

/// Five-point Gauss-Legendre on [a, b].
template <typename Fn>
double gauss_legendre5(Fn&& fn, double a, double b) {
  static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                           0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                           0.2369268850561891, 0.2369268850561891};
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += w[i] * fn(mid + half * x[i]);
  return half * s;
}

}  // namespace ficp

#endif  // FICP_QUADRATURE_HPP
