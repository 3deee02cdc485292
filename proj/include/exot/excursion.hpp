#pragma once

#include <cstddef>
#include <vector>

#include "exot/measure.hpp"
#include "exot/signed_cdf.hpp"
#include "exot/transport_plan.hpp"

namespace exot {

/// A source/target pair of crossings inside one level band: the source is
/// always an up-crossing, the target a down-crossing. On positive bands the
/// pairs are the consecutive crossings read left to right, on negative bands
/// right to left.
struct ExcursionPair {
  Crossing source, target;
};

struct BandPairs {
  LevelBand band;
  std::vector<ExcursionPair> pairs;
};

/// The paired-crossing set, band by band.
struct ExcursionSet {
  std::vector<BandPairs> bands;
};

/// Pairs the ordered crossings of each band: (c1,c2),(c3,c4),... for
/// positive bands and (c2,c1),(c4,c3),... for negative ones. Parity or
/// alternation violations in the profile raise InternalInvariantError.
ExcursionSet build_gamma(const IndicatrixProfile& profile);

/// The excursion coupling of two equal-mass measures: identity on the common
/// mass eta = mu /\ nu, plus one route or curve component per paired
/// crossing, each pair carrying its band's Lebesgue mass.
TransportPlan excursion_coupling(const Measure& mu, const Measure& nu);

/// Per-pair mass accounting of the randomized description: a level H drawn
/// with density (count_up+count_down)/2 against theta_half_mass, then a pair
/// chosen uniformly among the band's count pairs. The induced mass of every
/// pair is its band length; the report recomputes the masses through the
/// normalization factors and checks the aggregate against
/// excursion_coupling.
struct PairMass {
  LevelBand band;
  std::size_t pair_index;
  Rational source_mid, target_mid;  // positions at the band midpoint
  Rational mass;
};

struct RandomizedDescriptionReport {
  std::vector<PairMass> table;
  Rational theta_half_mass;
  bool matches_excursion;
};

RandomizedDescriptionReport plan_of_random_description(const Measure& mu, const Measure& nu);

/// (id x id) pushforward: every atom and uniform cell stays in place.
TransportPlan identity_plan(const Measure& m);

}  // namespace exot
