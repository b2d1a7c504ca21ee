#ifndef FICP_GOLDEN_SECTION_HPP
#define FICP_GOLDEN_SECTION_HPP

#include <cmath>
#include <stdexcept>

namespace ficp {

inline constexpr double kInvGoldenRatio = 0.61803398874989484820;  // 1/phi

struct GoldenResult {
  double x = 0.0;  // best probe
  double value = 0.0;
  int evaluations = 0;
  double lower = 0.0, upper = 0.0;  // final bracket
};

/// Golden-section minimisation of `fn` on [a, b], stopping once the bracket is
/// narrower than `tolerance`. One new evaluation per shrink step after the two
/// initial interior probes. Equal probe values shrink toward `b`.
template <typename Fn>
GoldenResult golden_section_minimize(Fn&& fn, double a, double b, double tolerance) {
  if (!(a < b)) throw std::invalid_argument("golden-section bracket must satisfy a < b");
  if (!(tolerance > 0.0)) throw std::invalid_argument("golden-section tolerance must be positive");

  GoldenResult r;
  double c = b - kInvGoldenRatio * (b - a);
  double d = a + kInvGoldenRatio * (b - a);
  double fc = fn(c), fd = fn(d);
  r.evaluations = 2;
  r.x = fc < fd ? c : d;
  r.value = fc < fd ? fc : fd;

  while (b - a >= tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGoldenRatio * (b - a);
      fc = fn(c);
      if (fc < r.value) {
        r.value = fc;
        r.x = c;
      }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGoldenRatio * (b - a);
      fd = fn(d);
      if (fd < r.value) {
        r.value = fd;
        r.x = d;
      }
    }
    ++r.evaluations;
  }
  r.lower = a;
  r.upper = b;
  return r;
}

/// Evaluations golden_section_minimize makes for a bracket of `width`:
/// 2 + ceil(log_{phi}(width / tolerance)).
inline int golden_section_evaluations(double width, double tolerance) {
  if (width < tolerance) return 2;
  int steps = 0;
  double w = width;
  while (w >= tolerance) {
    w *= kInvGoldenRatio;
    ++steps;
  }
  return 2 + steps;
}

}  // namespace ficp

#endif  // FICP_GOLDEN_SECTION_HPP
