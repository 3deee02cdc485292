#pragma once

#include <optional>
#include <vector>

#include "exot/measure.hpp"
#include "exot/rational.hpp"

namespace exot {

/// Affine level-to-position map h -> slope*h + intercept.
struct AffineMap {
  Rational slope;
  Rational intercept;
  Rational operator()(const Rational& h) const { return slope * h + intercept; }
  bool is_constant() const { return slope == 0; }
  bool operator==(const AffineMap&) const = default;
};

/// The cadlag piecewise-linear function F = F_pos - F_neg of two equal-mass
/// measures, identically 0 outside the joint support. Each node records the
/// left limit, the (right-continuous) value and the slope up to the next
/// node; nodes that change nothing are dropped.
class SignedCdf {
 public:
  struct Node {
    Rational x;
    Rational left;   // F(x^-)
    Rational value;  // F(x)
    Rational slope;  // on [x, next.x) and, for the last node, on [x, +inf)
    bool operator==(const Node&) const = default;
  };

  SignedCdf() = default;  // F identically 0

  /// F_pos - F_neg; the measures must carry equal total mass so that the
  /// limits at +-inf are 0.
  static SignedCdf from_difference(const Measure& pos, const Measure& neg);

  const std::vector<Node>& nodes() const { return nodes_; }
  bool is_zero() const { return nodes_.empty(); }

  Rational value_at(const Rational& x) const;
  Rational left_limit_at(const Rational& x) const;

  bool operator==(const SignedCdf&) const = default;

 private:
  std::vector<Node> nodes_;
};

SignedCdf build_sigma(const CommonMassSplit& split);

enum class CrossKind { up, down, touch };

/// One connected component of { x : h in F*(x) } where F*(x) is the interval
/// between F(x^-) and F(x). Components are single points except plateaus,
/// which span [x_lo, x_hi] and never cross. For h = 0 the two unbounded
/// plateaus outside the support are omitted.
struct GeneralizedSolution {
  Rational x_lo, x_hi;
  CrossKind kind;
  bool is_point() const { return x_lo == x_hi; }
  bool operator==(const GeneralizedSolution&) const = default;
};

std::vector<GeneralizedSolution> generalized_solutions(const SignedCdf& f, const Rational& h);

/// Some x in ]x0, x1] with h in F*(x); requires a strict sign change of
/// F - h between the sampled endpoints.
Rational generalized_ivt_witness(const SignedCdf& f, const Rational& x0, const Rational& x1,
                                 const Rational& h);

enum class Direction { up, down };

/// One crossing of a level band: a jump of F (fixed position) or a strictly
/// monotone linear piece (position affine in the level).
struct Crossing {
  AffineMap position;  // constant for jumps
  Direction direction;
  bool is_jump;
  Rational position_at(const Rational& h) const { return position(h); }
  bool operator==(const Crossing&) const = default;
};

/// Open interval of levels over which the crossing combinatorics of F are
/// constant.
struct LevelBand {
  Rational lo, hi;
  Rational length() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool operator==(const LevelBand&) const = default;
};

struct BandProfile {
  LevelBand band;
  std::vector<Crossing> crossings;  // ordered left to right
  int count_up = 0;
  int count_down = 0;
};

/// Banded Banach indicatrix of F: per band the ordered crossings, with
/// count_up == count_down and alternating directions (first up iff the band
/// is positive). Levels are swept over the finite critical set
/// { F(x), F(x^-) : x breakpoint }, so "almost every h" becomes an exact
/// finite decomposition; plateaus and touch points sit on band endpoints and
/// never contribute.
struct IndicatrixProfile {
  std::vector<BandProfile> bands;  // in increasing level order
};

IndicatrixProfile indicatrix(const SignedCdf& f);

struct TotalVariationParts {
  Rational tv, tv_plus, tv_minus;
};

/// Exact TV, TV+ and TV- of f over ]s, t] (nullopt bounds mean -inf / +inf).
/// Jumps at points of ]s, t] count fully; the jump at s itself does not.
TotalVariationParts total_variation_parts(const SignedCdf& f, const std::optional<Rational>& s,
                                          const std::optional<Rational>& t);

struct ZetaProjection {
  Rational up_mass;    // levels whose up-crossing position lands in ]s, t]
  Rational down_mass;  // same for down-crossings
};

/// First-coordinate projections of the crossing measures: up_mass recovers
/// mu0(]s, t]) and down_mass recovers nu0(]s, t]).
ZetaProjection zeta_projection(const IndicatrixProfile& profile, const std::optional<Rational>& s,
                               const std::optional<Rational>& t);

}  // namespace exot
