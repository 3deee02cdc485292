#include "exot/measure.hpp"

#include <algorithm>
#include <map>

#include "exot/errors.hpp"

namespace exot {

namespace {

std::vector<Measure::Atom> normalize_atoms(std::vector<Measure::Atom> atoms) {
  for (const auto& a : atoms)
    if (a.w < 0) throw DomainError("atom weight must be nonnegative");
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& l, const auto& r) { return l.x < r.x; });
  std::vector<Measure::Atom> out;
  for (auto& a : atoms) {
    if (a.w == 0) continue;
    if (!out.empty() && out.back().x == a.x)
      out.back().w += a.w;
    else
      out.push_back(std::move(a));
  }
  return out;
}

// Refines possibly-overlapping weighted pieces into disjoint cells with
// summed densities; merges adjacent cells of equal density.
std::vector<Measure::Cell> normalize_cells(const std::vector<Measure::UniformPiece>& pieces) {
  std::vector<Rational> cuts;
  for (const auto& p : pieces) {
    if (p.w < 0) throw DomainError("uniform weight must be nonnegative");
    if (p.w == 0) continue;
    if (!(p.a < p.b)) throw DomainError("uniform piece needs left < right");
    cuts.push_back(p.a);
    cuts.push_back(p.b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Measure::Cell> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rational density = 0;
    for (const auto& p : pieces) {
      if (p.w == 0) continue;
      if (p.a <= cuts[i] && cuts[i + 1] <= p.b) density += p.w / (p.b - p.a);
    }
    if (density == 0) continue;
    if (!out.empty() && out.back().b == cuts[i] && out.back().density == density)
      out.back().b = cuts[i + 1];
    else
      out.push_back({cuts[i], cuts[i + 1], density});
  }
  return out;
}

}  // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<UniformPiece> uniforms)
    : atoms_(normalize_atoms(std::move(atoms))), cells_(normalize_cells(uniforms)) {
  mass_ = 0;
  for (const auto& a : atoms_) mass_ += a.w;
  for (const auto& c : cells_) mass_ += c.mass();
}

Measure Measure::dirac(Rational x, Rational w) {
  return Measure({{std::move(x), std::move(w)}}, {});
}

Measure Measure::from_atoms(std::vector<Atom> atoms) { return Measure(std::move(atoms), {}); }

Measure Measure::uniform(Rational a, Rational b, Rational w) {
  return Measure({}, {{std::move(a), std::move(b), std::move(w)}});
}

Rational Measure::cdf(const Rational& x) const {
  Rational acc = 0;
  for (const auto& a : atoms_) {
    if (a.x > x) break;
    acc += a.w;
  }
  for (const auto& c : cells_) {
    if (c.a >= x) break;
    acc += c.density * (std::min(c.b, x) - c.a);
  }
  return acc;
}

Rational Measure::quantile(const Rational& alpha) const {
  if (!(alpha > 0) || alpha > mass_)
    throw DomainError("quantile level must lie in ]0, total mass]");

  // Merged sweep over atoms and cells in position order, tracking the
  // accumulated CDF; returns the first point where it reaches alpha.
  std::size_t ia = 0, ic = 0;
  Rational acc = 0;
  while (ia < atoms_.size() || ic < cells_.size()) {
    bool take_atom;
    if (ia == atoms_.size())
      take_atom = false;
    else if (ic == cells_.size())
      take_atom = true;
    else
      take_atom = atoms_[ia].x <= cells_[ic].a;
    if (take_atom) {
      acc += atoms_[ia].w;
      if (acc >= alpha) return atoms_[ia].x;
      ++ia;
    } else {
      const Cell& c = cells_[ic];
      // Atoms interior to the cell split the ramp.
      Rational pos = c.a;
      while (ia < atoms_.size() && atoms_[ia].x < c.b) {
        Rational ramp = c.density * (atoms_[ia].x - pos);
        if (acc + ramp >= alpha) return pos + (alpha - acc) / c.density;
        acc += ramp + atoms_[ia].w;
        pos = atoms_[ia].x;
        if (acc >= alpha) return pos;
        ++ia;
      }
      Rational ramp = c.density * (c.b - pos);
      if (acc + ramp >= alpha) return pos + (alpha - acc) / c.density;
      acc += ramp;
      ++ic;
    }
  }
  // alpha <= mass_ guarantees we returned inside the loop.
  throw InternalInvariantError("quantile sweep failed to reach its level");
}

Rational Measure::first_moment() const {
  Rational acc = 0;
  for (const auto& a : atoms_) acc += a.w * rational_abs(a.x);
  for (const auto& c : cells_) {
    // density * integral of |x| over [a, b]
    if (c.a >= 0)
      acc += c.density * (c.b * c.b - c.a * c.a) / 2;
    else if (c.b <= 0)
      acc += c.density * (c.a * c.a - c.b * c.b) / 2;
    else
      acc += c.density * (c.a * c.a + c.b * c.b) / 2;
  }
  return acc;
}

Measure Measure::operator+(const Measure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  std::vector<UniformPiece> pieces;
  for (const auto& c : cells_) pieces.push_back({c.a, c.b, c.mass()});
  for (const auto& c : other.cells_) pieces.push_back({c.a, c.b, c.mass()});
  return Measure(std::move(atoms), std::move(pieces));
}

Measure Measure::scaled(const Rational& c) const {
  if (c < 0) throw DomainError("scale factor must be nonnegative");
  std::vector<Atom> atoms;
  for (const auto& a : atoms_) atoms.push_back({a.x, a.w * c});
  std::vector<UniformPiece> pieces;
  for (const auto& cell : cells_) pieces.push_back({cell.a, cell.b, cell.mass() * c});
  return Measure(std::move(atoms), std::move(pieces));
}

CommonMassSplit common_mass_split(const Measure& mu, const Measure& nu) {
  // Atomic parts: min per shared position.
  std::vector<Measure::Atom> eta_atoms, mu0_atoms, nu0_atoms;
  {
    std::map<Rational, std::pair<Rational, Rational>> at;
    for (const auto& a : mu.atoms()) at[a.x].first += a.w;
    for (const auto& a : nu.atoms()) at[a.x].second += a.w;
    for (const auto& [x, ws] : at) {
      Rational common = std::min(ws.first, ws.second);
      if (common > 0) eta_atoms.push_back({x, common});
      if (ws.first > common) mu0_atoms.push_back({x, ws.first - common});
      if (ws.second > common) nu0_atoms.push_back({x, ws.second - common});
    }
  }

  // Continuous parts: pointwise min of densities over the common refinement.
  std::vector<Measure::UniformPiece> eta_pieces, mu0_pieces, nu0_pieces;
  {
    std::vector<Rational> cuts;
    for (const auto& c : mu.cells()) {
      cuts.push_back(c.a);
      cuts.push_back(c.b);
    }
    for (const auto& c : nu.cells()) {
      cuts.push_back(c.a);
      cuts.push_back(c.b);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto density_at = [](const Measure& m, const Rational& lo, const Rational& hi) {
      for (const auto& c : m.cells())
        if (c.a <= lo && hi <= c.b) return c.density;
      return Rational(0);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Rational dm = density_at(mu, cuts[i], cuts[i + 1]);
      Rational dn = density_at(nu, cuts[i], cuts[i + 1]);
      Rational common = std::min(dm, dn);
      Rational len = cuts[i + 1] - cuts[i];
      if (common > 0) eta_pieces.push_back({cuts[i], cuts[i + 1], common * len});
      if (dm > common) mu0_pieces.push_back({cuts[i], cuts[i + 1], (dm - common) * len});
      if (dn > common) nu0_pieces.push_back({cuts[i], cuts[i + 1], (dn - common) * len});
    }
  }

  return {Measure(std::move(eta_atoms), std::move(eta_pieces)),
          Measure(std::move(mu0_atoms), std::move(mu0_pieces)),
          Measure(std::move(nu0_atoms), std::move(nu0_pieces))};
}

Measure discretize_equal_mass(const Measure& m, int n) {
  if (n < 1) throw DomainError("discretization needs n >= 1");
  if (m.is_zero()) throw DomainError("cannot discretize the zero measure");
  std::vector<Measure::Atom> atoms;
  Rational slice = m.total_mass() / n;
  for (int k = 0; k < n; ++k) {
    Rational level = slice * (2 * k + 1) / 2;
    atoms.push_back({m.quantile(level), slice});
  }
  return Measure::from_atoms(std::move(atoms));
}

}  // namespace exot
