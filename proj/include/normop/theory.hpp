#pragma once

#include <vector>

#include "normop/model.hpp"

namespace normop {

struct TheoryAtom {
  Complex lambda;
  Multiplicity mult;      // meaningful only when isolated
  bool isolated = true;
};

/// The data (K, m): atoms of K with isolation marks, plus boxes declared to
/// be perfect parts of K.
struct TheoryDescriptor {
  std::vector<TheoryAtom> atoms;
  std::vector<Box> perfect;

  bool contains(Complex z) const;
  /// Distance from z to K (atoms and closed boxes).
  double distance(Complex z) const;
};

/// Euclidean distance from z to the closed rectangle of `b`.
double box_distance(const Box& b, Complex z);

}  // namespace normop
