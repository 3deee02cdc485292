#include "exot/excursion.hpp"

#include "exot/errors.hpp"

namespace exot {

namespace {

void add_pair_to_plan(PlanBuilder& builder, const LevelBand& band, const ExcursionPair& pair) {
  if (pair.source.position.is_constant() && pair.target.position.is_constant()) {
    builder.route(pair.source.position.intercept, pair.target.position.intercept, band.length());
  } else {
    builder.curve(band.lo, band.hi, pair.source.position, pair.target.position);
  }
}

TransportPlan plan_from_gamma(const Measure& eta, const ExcursionSet& gamma) {
  PlanBuilder builder;
  for (const auto& a : eta.atoms()) builder.route(a.x, a.x, a.w);
  for (const auto& c : eta.cells())
    builder.curve(Rational(0), c.mass(), AffineMap{1 / c.density, c.a},
                  AffineMap{1 / c.density, c.a});
  for (const auto& bp : gamma.bands)
    for (const auto& pair : bp.pairs) add_pair_to_plan(builder, bp.band, pair);
  return std::move(builder).finish();
}

}  // namespace

ExcursionSet build_gamma(const IndicatrixProfile& profile) {
  ExcursionSet gamma;
  for (const auto& bp : profile.bands) {
    if (bp.count_up != bp.count_down || (bp.crossings.size() % 2) != 0)
      throw InternalInvariantError("crossing parity violated while pairing excursions");
    bool positive = bp.band.lo >= 0;
    BandPairs pairs{bp.band, {}};
    for (std::size_t k = 0; k + 1 < bp.crossings.size(); k += 2) {
      const Crossing& first = bp.crossings[k];
      const Crossing& second = bp.crossings[k + 1];
      ExcursionPair pair = positive ? ExcursionPair{first, second} : ExcursionPair{second, first};
      if (pair.source.direction != Direction::up || pair.target.direction != Direction::down)
        throw InternalInvariantError("crossing alternation violated while pairing excursions");
      pairs.pairs.push_back(std::move(pair));
    }
    gamma.bands.push_back(std::move(pairs));
  }
  return gamma;
}

TransportPlan excursion_coupling(const Measure& mu, const Measure& nu) {
  if (mu.total_mass() != nu.total_mass())
    throw DomainError("excursion coupling requires equal total masses");
  CommonMassSplit split = common_mass_split(mu, nu);
  ExcursionSet gamma = build_gamma(indicatrix(build_sigma(split)));
  return plan_from_gamma(split.eta, gamma);
}

RandomizedDescriptionReport plan_of_random_description(const Measure& mu, const Measure& nu) {
  if (mu.total_mass() != nu.total_mass())
    throw DomainError("randomized description requires equal total masses");
  CommonMassSplit split = common_mass_split(mu, nu);
  IndicatrixProfile profile = indicatrix(build_sigma(split));

  RandomizedDescriptionReport report;
  report.theta_half_mass = 0;
  for (const auto& bp : profile.bands)
    report.theta_half_mass += bp.band.length() * (bp.count_up + bp.count_down) / 2;

  ExcursionSet gamma = build_gamma(profile);
  const Rational moving_mass = split.mu0.total_mass();
  PlanBuilder builder;
  for (const auto& a : split.eta.atoms()) builder.route(a.x, a.x, a.w);
  for (const auto& c : split.eta.cells())
    builder.curve(Rational(0), c.mass(), AffineMap{1 / c.density, c.a},
                  AffineMap{1 / c.density, c.a});
  for (std::size_t b = 0; b < gamma.bands.size(); ++b) {
    const auto& band_pairs = gamma.bands[b];
    const auto& bp = profile.bands[b];
    Rational pair_count((bp.count_up + bp.count_down) / 2);
    for (std::size_t k = 0; k < band_pairs.pairs.size(); ++k) {
      const auto& pair = band_pairs.pairs[k];
      // P(H in band) * 1/(N/2), scaled back by the moving mass.
      Rational level_prob =
          band_pairs.band.length() * pair_count / report.theta_half_mass;
      Rational mass = level_prob / pair_count * moving_mass;
      Rational mid = band_pairs.band.midpoint();
      report.table.push_back(
          {band_pairs.band, k, pair.source.position_at(mid), pair.target.position_at(mid), mass});
      if (pair.source.position.is_constant() && pair.target.position.is_constant())
        builder.route(pair.source.position.intercept, pair.target.position.intercept, mass);
      else
        builder.curve(band_pairs.band.lo, band_pairs.band.hi, pair.source.position,
                      pair.target.position);
    }
  }
  TransportPlan induced = std::move(builder).finish();
  report.matches_excursion =
      induced == excursion_coupling(mu, nu) && report.theta_half_mass == moving_mass;
  return report;
}

TransportPlan identity_plan(const Measure& m) {
  PlanBuilder builder;
  for (const auto& a : m.atoms()) builder.route(a.x, a.x, a.w);
  for (const auto& c : m.cells())
    builder.curve(Rational(0), c.mass(), AffineMap{1 / c.density, c.a},
                  AffineMap{1 / c.density, c.a});
  return std::move(builder).finish();
}

}  // namespace exot
