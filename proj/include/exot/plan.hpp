#pragma once

#include <utility>

#include "exot/measure.hpp"
#include "exot/transport_plan.hpp"

namespace exot {

/// Transport cost |y-x|^p for p > 0, or the indicator cost 1_{x != y}.
struct CostSpec {
  double exponent = 1.0;
  bool indicator = false;

  static CostSpec power(double p);
  static CostSpec zero() { return CostSpec{0.0, true}; }
  bool is_l1() const { return !indicator && exponent == 1.0; }
};

/// Sum of mass * |y-x|^p over routes plus the band integrals over curves
/// (closed form for p = 1, adaptive Gauss-Legendre to 1e-12 otherwise).
/// The indicator cost counts the off-diagonal mass.
double cost(const TransportPlan& plan, const CostSpec& c);

/// Comonotone plan: pairs equal quantile levels of the two measures.
TransportPlan quantile_coupling(const Measure& mu, const Measure& nu);

/// Decreasing rearrangement: level alpha of mu against level mass - alpha of
/// nu.
TransportPlan antitone_coupling(const Measure& mu, const Measure& nu);

/// mu x nu / total mass; atomic measures only.
TransportPlan product_coupling(const Measure& mu, const Measure& nu);

/// Exact pushforwards of the plan onto its two coordinates.
std::pair<Measure, Measure> marginals(const TransportPlan& plan);

/// Distance between plans of equal total mass. Atomic plans are compared in
/// total variation over the union of their route grids (exact, zero iff
/// equal). When curve components are present the plans are compared through
/// the sup distance of their bivariate CDFs, evaluated exactly on the
/// canonical candidate grid; this metrizes the weak convergence of
/// discretized plans toward a continuous one, which total variation cannot.
double plan_distance(const TransportPlan& a, const TransportPlan& b);

/// Exact rational L1 transport cost of an atomic plan.
Rational l1_cost_exact(const TransportPlan& plan);

}  // namespace exot
