#include "normop/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace normop {

bool TheoryDescriptor::contains(Complex z) const {
  for (const TheoryAtom& a : atoms)
    if (same_point(a.lambda, z)) return true;
  for (const Box& b : perfect)
    if (box_distance(b, z) == 0.0) return true;
  return false;
}

double TheoryDescriptor::distance(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const TheoryAtom& a : atoms) d = std::min(d, std::abs(a.lambda - z));
  for (const Box& b : perfect) d = std::min(d, box_distance(b, z));
  return d;
}

double box_distance(const Box& b, Complex z) {
  const double dx = std::max({b.x0 - z.real(), 0.0, z.real() - b.x1});
  const double dy = std::max({b.y0 - z.imag(), 0.0, z.imag() - b.y1});
  return std::hypot(dx, dy);
}

}  // namespace normop
