#pragma once

#include <vector>

#include "exot/rational.hpp"

namespace exot {

/// A finite positive measure on the real line: atoms plus piecewise-uniform
/// parts, all data exact rationals. The CDF is a right-continuous
/// nondecreasing piecewise-linear step/ramp function. Supports are bounded by
/// construction, so every moment is finite.
///
/// Uniform pieces may be fed in overlapping each other and atoms; the
/// constructor refines them into the normal form: disjoint cells carrying
/// piecewise-constant densities, adjacent equal-density cells merged.
/// Equality compares normal forms, so it is measure equality.
class Measure {
 public:
  struct Atom {
    Rational x;  // position
    Rational w;  // weight > 0
    bool operator==(const Atom&) const = default;
  };
  /// Ingestion form of a uniform part: weight w spread uniformly on [a, b].
  struct UniformPiece {
    Rational a, b;  // a < b
    Rational w;     // weight > 0
  };
  /// Normal form of the continuous part: disjoint, sorted, density > 0.
  struct Cell {
    Rational a, b;
    Rational density;
    Rational mass() const { return density * (b - a); }
    bool operator==(const Cell&) const = default;
  };

  Measure() = default;
  Measure(std::vector<Atom> atoms, std::vector<UniformPiece> uniforms);

  static Measure dirac(Rational x, Rational w = Rational(1));
  static Measure from_atoms(std::vector<Atom> atoms);
  static Measure uniform(Rational a, Rational b, Rational w = Rational(1));

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Rational& total_mass() const { return mass_; }
  bool is_atomic() const { return cells_.empty(); }
  bool is_zero() const { return atoms_.empty() && cells_.empty(); }

  /// m(]-inf, x]), cadlag convention: an atom at x is included.
  Rational cdf(const Rational& x) const;

  /// min { x : cdf(x) >= alpha } for alpha in ]0, total_mass].
  Rational quantile(const Rational& alpha) const;

  /// Integral of |x| dm, exact.
  Rational first_moment() const;

  /// Sum of measures (normal forms merged).
  Measure operator+(const Measure& other) const;

  /// Rescales every weight by c >= 0.
  Measure scaled(const Rational& c) const;

  bool operator==(const Measure&) const = default;

 private:
  std::vector<Atom> atoms_;  // strictly increasing positions
  std::vector<Cell> cells_;  // disjoint, sorted
  Rational mass_;
};

/// mu = eta + mu0, nu = eta + nu0 with eta = mu /\ nu and mu0 _|_ nu0.
struct CommonMassSplit {
  Measure eta, mu0, nu0;
};

/// Largest common measure: per shared atom position the min of weights, on
/// the continuous parts the pointwise min of densities over the common
/// breakpoint refinement.
CommonMassSplit common_mass_split(const Measure& mu, const Measure& nu);

/// Equal-mass atomic approximation: n atoms of mass total/n placed at the
/// conditional medians (quantiles of the mass midpoints of each slice).
Measure discretize_equal_mass(const Measure& m, int n);

}  // namespace exot
