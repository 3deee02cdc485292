#pragma once

#include <compare>
#include <vector>

#include "exot/rational.hpp"
#include "exot/signed_cdf.hpp"

namespace exot {

struct AtomicRoute {
  Rational x, y;
  Rational mass;  // > 0
  bool operator==(const AtomicRoute&) const = default;
};

/// Mass spread along a segment of the plane, parameterized by a level band:
/// h in (h0, h1) is pushed through the affine maps to (x(h), y(h)), so the
/// component carries mass h1 - h0. Canonical components use band (0, mass)
/// and run from the lexicographically smaller endpoint to the larger one.
struct CurveComponent {
  Rational h0, h1;
  AffineMap x, y;
  Rational mass() const { return h1 - h0; }
  bool operator==(const CurveComponent&) const = default;
};

/// A transport plan: atomic routes plus curve components, held in canonical
/// form so that equality is measure equality. Canonicalization merges
/// duplicate routes, folds degenerate curves into routes, refines collinear
/// overlapping curve components and merges adjacent ones of equal density.
class TransportPlan {
 public:
  TransportPlan() = default;

  const std::vector<AtomicRoute>& routes() const { return routes_; }
  const std::vector<CurveComponent>& curves() const { return curves_; }
  bool atomic() const { return curves_.empty(); }
  Rational total_mass() const;

  bool operator==(const TransportPlan&) const = default;
  /// Arbitrary total order on canonical plans (for sets and dedup).
  std::strong_ordering operator<=>(const TransportPlan& other) const;

 private:
  friend class PlanBuilder;
  std::vector<AtomicRoute> routes_;
  std::vector<CurveComponent> curves_;
};

/// Accumulates routes and curves, then normalizes into a canonical plan.
class PlanBuilder {
 public:
  void route(Rational x, Rational y, Rational mass);
  /// Level band (h0, h1) with h0 < h1 and position maps for both coordinates.
  void curve(Rational h0, Rational h1, AffineMap x, AffineMap y);
  TransportPlan finish() &&;

 private:
  std::vector<AtomicRoute> routes_;
  std::vector<CurveComponent> raw_curves_;
};

}  // namespace exot
