#include "exot/transport_plan.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "exot/errors.hpp"

namespace exot {

namespace {

// Grouping key for collinear curve segments. Non-vertical lines are
// y = s*x + b parameterized by x; vertical ones are x = c parameterized by y.
struct LineKey {
  bool vertical;
  Rational a, b;  // (s, b) or (c, 0)
  auto operator<=>(const LineKey&) const = default;
};

struct ParamPiece {
  Rational lo, hi;  // parameter interval, lo < hi
  Rational density;
};

}  // namespace

Rational TransportPlan::total_mass() const {
  Rational m = 0;
  for (const auto& r : routes_) m += r.mass;
  for (const auto& c : curves_) m += c.mass();
  return m;
}

std::strong_ordering TransportPlan::operator<=>(const TransportPlan& other) const {
  auto cmp_rat = [](const Rational& a, const Rational& b) {
    return a < b ? std::strong_ordering::less
                 : a > b ? std::strong_ordering::greater : std::strong_ordering::equal;
  };
  if (auto c = routes_.size() <=> other.routes_.size(); c != 0) return c;
  for (std::size_t i = 0; i < routes_.size(); ++i) {
    if (auto c = cmp_rat(routes_[i].x, other.routes_[i].x); c != 0) return c;
    if (auto c = cmp_rat(routes_[i].y, other.routes_[i].y); c != 0) return c;
    if (auto c = cmp_rat(routes_[i].mass, other.routes_[i].mass); c != 0) return c;
  }
  if (auto c = curves_.size() <=> other.curves_.size(); c != 0) return c;
  for (std::size_t i = 0; i < curves_.size(); ++i) {
    const auto &a = curves_[i], &b = other.curves_[i];
    if (auto c = cmp_rat(a.h1, b.h1); c != 0) return c;
    if (auto c = cmp_rat(a.x.slope, b.x.slope); c != 0) return c;
    if (auto c = cmp_rat(a.x.intercept, b.x.intercept); c != 0) return c;
    if (auto c = cmp_rat(a.y.slope, b.y.slope); c != 0) return c;
    if (auto c = cmp_rat(a.y.intercept, b.y.intercept); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

void PlanBuilder::route(Rational x, Rational y, Rational mass) {
  if (mass < 0) throw DomainError("route mass must be nonnegative");
  if (mass == 0) return;
  routes_.push_back({std::move(x), std::move(y), std::move(mass)});
}

void PlanBuilder::curve(Rational h0, Rational h1, AffineMap x, AffineMap y) {
  if (!(h0 < h1)) throw DomainError("curve component needs h0 < h1");
  raw_curves_.push_back({std::move(h0), std::move(h1), std::move(x), std::move(y)});
}

TransportPlan PlanBuilder::finish() && {
  TransportPlan plan;

  std::map<LineKey, std::vector<ParamPiece>> lines;
  for (const auto& c : raw_curves_) {
    Rational x0 = c.x(c.h0), y0 = c.y(c.h0);
    Rational x1 = c.x(c.h1), y1 = c.y(c.h1);
    Rational mass = c.mass();
    if (x0 == x1 && y0 == y1) {  // degenerate: a point carrying the band mass
      routes_.push_back({x0, y0, mass});
      continue;
    }
    if (x0 != x1) {
      Rational s = (y1 - y0) / (x1 - x0);
      LineKey key{false, s, y0 - s * x0};
      Rational lo = std::min(x0, x1), hi = std::max(x0, x1);
      lines[key].push_back({lo, hi, mass / (hi - lo)});
    } else {
      LineKey key{true, x0, Rational(0)};
      Rational lo = std::min(y0, y1), hi = std::max(y0, y1);
      lines[key].push_back({lo, hi, mass / (hi - lo)});
    }
  }

  // Per line: refine overlapping parameter intervals, sum densities, merge
  // adjacent equal-density cells, then emit canonical components on (0, m).
  for (auto& [key, pieces] : lines) {
    std::vector<Rational> cuts;
    for (const auto& p : pieces) {
      cuts.push_back(p.lo);
      cuts.push_back(p.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<ParamPiece> cells;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Rational density = 0;
      for (const auto& p : pieces)
        if (p.lo <= cuts[i] && cuts[i + 1] <= p.hi) density += p.density;
      if (density == 0) continue;
      if (!cells.empty() && cells.back().hi == cuts[i] && cells.back().density == density)
        cells.back().hi = cuts[i + 1];
      else
        cells.push_back({cuts[i], cuts[i + 1], density});
    }
    for (const auto& cell : cells) {
      Rational m = cell.density * (cell.hi - cell.lo);
      Rational inv = 1 / cell.density;  // parameter advance per unit mass
      CurveComponent out;
      out.h0 = 0;
      out.h1 = m;
      if (!key.vertical) {
        out.x = {inv, cell.lo};
        out.y = {key.a * inv, key.a * cell.lo + key.b};
      } else {
        out.x = {Rational(0), key.a};
        out.y = {inv, cell.lo};
      }
      plan.curves_.push_back(std::move(out));
    }
  }

  auto endpoint = [](const CurveComponent& c) {
    return std::tuple(c.x(c.h0), c.y(c.h0), c.x(c.h1), c.y(c.h1));
  };
  std::sort(plan.curves_.begin(), plan.curves_.end(),
            [&](const CurveComponent& a, const CurveComponent& b) {
              return endpoint(a) < endpoint(b);
            });

  std::sort(routes_.begin(), routes_.end(), [](const AtomicRoute& a, const AtomicRoute& b) {
    return std::tie(a.x, a.y) < std::tie(b.x, b.y);
  });
  for (auto& r : routes_) {
    if (!plan.routes_.empty() && plan.routes_.back().x == r.x && plan.routes_.back().y == r.y)
      plan.routes_.back().mass += r.mass;
    else
      plan.routes_.push_back(std::move(r));
  }
  return plan;
}

}  // namespace exot
