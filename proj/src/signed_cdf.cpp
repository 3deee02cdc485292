#include "exot/signed_cdf.hpp"

#include <algorithm>

#include "exot/errors.hpp"

namespace exot {

namespace {

Rational atom_weight(const Measure& m, const Rational& x) {
  const auto& atoms = m.atoms();
  auto it = std::lower_bound(atoms.begin(), atoms.end(), x,
                             [](const Measure::Atom& a, const Rational& v) { return a.x < v; });
  if (it != atoms.end() && it->x == x) return it->w;
  return Rational(0);
}

// Density of the cell whose interior starts at x (breakpoint grids contain
// every cell endpoint, so a cell covers (x, next breakpoint) fully or not at
// all).
Rational density_right_of(const Measure& m, const Rational& x) {
  for (const auto& c : m.cells())
    if (c.a <= x && x < c.b) return c.density;
  return Rational(0);
}

}  // namespace

SignedCdf SignedCdf::from_difference(const Measure& pos, const Measure& neg) {
  if (pos.total_mass() != neg.total_mass())
    throw DomainError("signed CDF requires equal total masses");

  std::vector<Rational> bps;
  auto collect = [&](const Measure& m) {
    for (const auto& a : m.atoms()) bps.push_back(a.x);
    for (const auto& c : m.cells()) {
      bps.push_back(c.a);
      bps.push_back(c.b);
    }
  };
  collect(pos);
  collect(neg);
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

  SignedCdf f;
  Rational cur = 0, cur_slope = 0, prev_x = 0;
  bool any = false;
  for (const Rational& x : bps) {
    Rational left = any ? Rational(cur + cur_slope * (x - prev_x)) : Rational(0);
    Rational jump = atom_weight(pos, x) - atom_weight(neg, x);
    Rational value = left + jump;
    Rational next_slope = density_right_of(pos, x) - density_right_of(neg, x);
    if (jump != 0 || next_slope != cur_slope)
      f.nodes_.push_back({x, left, value, next_slope});
    cur = value;
    cur_slope = next_slope;
    prev_x = x;
    any = true;
  }
  if (any && (cur != 0 || cur_slope != 0))
    throw InternalInvariantError("signed CDF does not return to 0 at +inf");
  return f;
}

SignedCdf build_sigma(const CommonMassSplit& split) {
  return SignedCdf::from_difference(split.mu0, split.nu0);
}

Rational SignedCdf::value_at(const Rational& x) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                             [](const Rational& v, const Node& n) { return v < n.x; });
  if (it == nodes_.begin()) return Rational(0);
  const Node& n = *std::prev(it);
  return n.value + n.slope * (x - n.x);
}

Rational SignedCdf::left_limit_at(const Rational& x) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x,
                             [](const Node& n, const Rational& v) { return n.x < v; });
  if (it != nodes_.end() && it->x == x) return it->left;
  if (it == nodes_.begin()) return Rational(0);
  const Node& n = *std::prev(it);
  return n.value + n.slope * (x - n.x);
}

std::vector<GeneralizedSolution> generalized_solutions(const SignedCdf& f, const Rational& h) {
  const auto& nodes = f.nodes();
  if (nodes.empty()) return {};

  // Collect solution pieces left to right, merging contiguous ones.
  struct Piece {
    Rational lo, hi;
  };
  std::vector<Piece> pieces;
  auto push = [&](const Rational& lo, const Rational& hi) {
    if (!pieces.empty() && pieces.back().hi == lo)
      pieces.back().hi = hi;
    else
      pieces.push_back({lo, hi});
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (std::min(n.left, n.value) <= h && h <= std::max(n.left, n.value)) push(n.x, n.x);
    if (i + 1 < nodes.size()) {
      const Rational& nx = nodes[i + 1].x;
      if (n.slope == 0) {
        if (n.value == h) push(n.x, nx);  // plateau; endpoints merge via the nodes
      } else {
        Rational xs = n.x + (h - n.value) / n.slope;
        if (n.x < xs && xs < nx) push(xs, xs);
      }
    }
  }

  // Classify each maximal component by the strict behaviour just left of its
  // start and just right of its end: -1 below h, +1 above h, 0 neither.
  auto left_state = [&](const Rational& a) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), a,
                               [](const SignedCdf::Node& n, const Rational& v) { return n.x < v; });
    if (it != nodes.end() && it->x == a) {
      const Rational& lim = it->left;
      if (lim != h) return lim < h ? -1 : 1;
      if (it == nodes.begin()) return 0;  // constant 0 to the left
      const auto& prev = *std::prev(it);
      return prev.slope > 0 ? -1 : prev.slope < 0 ? 1 : 0;
    }
    // interior point of a strictly sloped segment
    const auto& seg = *std::prev(it);
    return seg.slope > 0 ? -1 : seg.slope < 0 ? 1 : 0;
  };
  auto right_state = [&](const Rational& b) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), b,
                               [](const SignedCdf::Node& n, const Rational& v) { return n.x < v; });
    if (it != nodes.end() && it->x == b) {
      if (it->value != h) return it->value < h ? -1 : 1;
      return it->slope > 0 ? 1 : it->slope < 0 ? -1 : 0;
    }
    const auto& seg = *std::prev(it);
    return seg.slope > 0 ? 1 : seg.slope < 0 ? -1 : 0;
  };

  std::vector<GeneralizedSolution> out;
  for (const auto& p : pieces) {
    int ls = left_state(p.lo), rs = right_state(p.hi);
    CrossKind kind = CrossKind::touch;
    if (ls == -1 && rs == 1)
      kind = CrossKind::up;
    else if (ls == 1 && rs == -1)
      kind = CrossKind::down;
    out.push_back({p.lo, p.hi, kind});
  }
  return out;
}

Rational generalized_ivt_witness(const SignedCdf& f, const Rational& x0, const Rational& x1,
                                 const Rational& h) {
  if (!(x0 < x1)) throw DomainError("ivt witness requires x0 < x1");
  Rational v0 = f.value_at(x0), v1 = f.value_at(x1);
  if (!((v0 - h) * (v1 - h) < 0))
    throw DomainError("ivt witness requires a strict sign change of F - h");
  for (const auto& sol : generalized_solutions(f, h)) {
    if (sol.x_hi <= x0) continue;
    if (sol.x_lo > x1) break;
    // Leftmost point of the component inside ]x0, x1].
    return sol.x_lo > x0 ? sol.x_lo : std::min(sol.x_hi, x1);
  }
  throw InternalInvariantError("ivt witness missing despite sign change");
}

IndicatrixProfile indicatrix(const SignedCdf& f) {
  IndicatrixProfile profile;
  const auto& nodes = f.nodes();
  if (nodes.empty()) return profile;

  std::vector<Rational> critical;
  for (const auto& n : nodes) {
    critical.push_back(n.left);
    critical.push_back(n.value);
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  for (std::size_t j = 0; j + 1 < critical.size(); ++j) {
    LevelBand band{critical[j], critical[j + 1]};
    BandProfile bp{band, {}, 0, 0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      // Jumps whose span covers the band.
      if (std::min(n.left, n.value) <= band.lo && band.hi <= std::max(n.left, n.value))
        bp.crossings.push_back(
            {AffineMap{Rational(0), n.x}, n.value > n.left ? Direction::up : Direction::down,
             true});
      // Strictly sloped segments whose value range covers the band.
      if (i + 1 < nodes.size() && n.slope != 0) {
        Rational end = nodes[i + 1].left;
        if (std::min(n.value, end) <= band.lo && band.hi <= std::max(n.value, end))
          bp.crossings.push_back({AffineMap{1 / n.slope, n.x - n.value / n.slope},
                                  n.slope > 0 ? Direction::up : Direction::down, false});
      }
    }
    Rational mid = band.midpoint();
    std::sort(bp.crossings.begin(), bp.crossings.end(),
              [&](const Crossing& a, const Crossing& b) {
                return a.position_at(mid) < b.position_at(mid);
              });
    for (const auto& c : bp.crossings)
      (c.direction == Direction::up ? bp.count_up : bp.count_down)++;

    // Facts the construction relies on: nonempty even profile, matched and
    // alternating directions, first crossing up iff the band is positive.
    if (bp.crossings.empty())
      throw InternalInvariantError("level band without crossings");
    if (bp.count_up != bp.count_down)
      throw InternalInvariantError("crossing parity violated in a level band");
    Direction expected = band.lo >= 0 ? Direction::up : Direction::down;
    for (const auto& c : bp.crossings) {
      if (c.direction != expected)
        throw InternalInvariantError("crossing alternation violated in a level band");
      expected = expected == Direction::up ? Direction::down : Direction::up;
    }
    profile.bands.push_back(std::move(bp));
  }
  return profile;
}

TotalVariationParts total_variation_parts(const SignedCdf& f, const std::optional<Rational>& s,
                                          const std::optional<Rational>& t) {
  if (s && t && !(*s <= *t)) throw DomainError("total variation requires s <= t");
  TotalVariationParts parts{0, 0, 0};
  const auto& nodes = f.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    bool in_range = (!s || *s < n.x) && (!t || n.x <= *t);
    if (in_range) {
      Rational jump = n.value - n.left;
      if (jump > 0)
        parts.tv_plus += jump;
      else
        parts.tv_minus -= jump;
    }
    if (i + 1 < nodes.size() && n.slope != 0) {
      Rational lo = n.x, hi = nodes[i + 1].x;
      if (s && *s > lo) lo = *s;
      if (t && *t < hi) hi = *t;
      if (lo < hi) {
        Rational swing = n.slope * (hi - lo);
        if (swing > 0)
          parts.tv_plus += swing;
        else
          parts.tv_minus -= swing;
      }
    }
  }
  parts.tv = parts.tv_plus + parts.tv_minus;
  return parts;
}

ZetaProjection zeta_projection(const IndicatrixProfile& profile, const std::optional<Rational>& s,
                               const std::optional<Rational>& t) {
  ZetaProjection z{0, 0};
  for (const auto& bp : profile.bands) {
    for (const auto& c : bp.crossings) {
      Rational levels;  // measure of band levels whose position lands in ]s, t]
      if (c.position.is_constant()) {
        const Rational& x = c.position.intercept;
        bool inside = (!s || *s < x) && (!t || x <= *t);
        levels = inside ? bp.band.length() : Rational(0);
      } else {
        Rational lo = bp.band.lo, hi = bp.band.hi;
        // preimages of the spatial bounds under the affine position map
        auto clamp_to = [&](const std::optional<Rational>& bound, bool is_lower_space) {
          if (!bound) return;
          Rational hb = (*bound - c.position.intercept) / c.position.slope;
          bool lower_level = is_lower_space == (c.position.slope > 0);
          if (lower_level)
            lo = std::max(lo, hb);
          else
            hi = std::min(hi, hb);
        };
        clamp_to(s, true);
        clamp_to(t, false);
        levels = lo < hi ? hi - lo : Rational(0);
      }
      if (c.direction == Direction::up)
        z.up_mass += levels;
      else
        z.down_mass += levels;
    }
  }
  return z;
}

}  // namespace exot
