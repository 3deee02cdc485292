#include "exot/plan.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "exot/errors.hpp"

namespace exot {

namespace {

constexpr double kQuadratureTol = 1e-12;

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGlNode[8] = {
    0.0950125098376374401853, 0.2816035507792589132305, 0.4580167776572273863424,
    0.6178762444026437484467, 0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962};
constexpr double kGlWeight[8] = {
    0.1894506104550684962854, 0.1826034150449235888667, 0.1691565193950025381893,
    0.1495959888165767320815, 0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518};

template <class F>
double gauss_legendre(const F& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i)
    sum += kGlWeight[i] * (f(mid + half * kGlNode[i]) + f(mid - half * kGlNode[i]));
  return half * sum;
}

template <class F>
double adaptive_gl(const F& f, double a, double b, double whole, double tol, int depth) {
  double mid = 0.5 * (a + b);
  double left = gauss_legendre(f, a, mid), right = gauss_legendre(f, mid, b);
  if (std::abs(left + right - whole) < tol || depth > 48) return left + right;
  return adaptive_gl(f, a, mid, left, tol / 2, depth + 1) +
         adaptive_gl(f, mid, b, right, tol / 2, depth + 1);
}

// Integral of |gap_slope*h + gap_icpt|^p over (h0, h1), gap of constant sign.
double curve_cost_one_sign(double p, double gap_slope, double gap_icpt, double h0, double h1) {
  auto f = [&](double h) { return std::pow(std::abs(gap_slope * h + gap_icpt), p); };
  return adaptive_gl(f, h0, h1, gauss_legendre(f, h0, h1), kQuadratureTol, 0);
}

double curve_cost(const CurveComponent& c, const CostSpec& spec) {
  Rational gs = c.y.slope - c.x.slope;
  Rational gi = c.y.intercept - c.x.intercept;
  if (spec.indicator) {
    if (gs == 0 && gi == 0) return 0.0;  // diagonal component
    return to_double(c.mass());          // off-diagonal except at most one level
  }
  if (gs == 0 && gi == 0) return 0.0;
  if (spec.is_l1()) {
    // Exact: area under |linear| with a split at the root.
    Rational total = 0;
    auto trapezoid = [&](const Rational& a, const Rational& b) {
      Rational va = rational_abs(gs * a + gi), vb = rational_abs(gs * b + gi);
      total += (va + vb) * (b - a) / 2;
    };
    if (gs != 0) {
      Rational root = -gi / gs;
      if (c.h0 < root && root < c.h1) {
        trapezoid(c.h0, root);
        trapezoid(root, c.h1);
      } else {
        trapezoid(c.h0, c.h1);
      }
    } else {
      trapezoid(c.h0, c.h1);
    }
    return to_double(total);
  }
  double h0 = to_double(c.h0), h1 = to_double(c.h1);
  double dgs = to_double(gs), dgi = to_double(gi);
  if (gs != 0) {
    Rational root = -gi / gs;
    if (c.h0 < root && root < c.h1) {
      double r = to_double(root);
      return curve_cost_one_sign(spec.exponent, dgs, dgi, h0, r) +
             curve_cost_one_sign(spec.exponent, dgs, dgi, r, h1);
    }
  }
  return curve_cost_one_sign(spec.exponent, dgs, dgi, h0, h1);
}

}  // namespace

CostSpec CostSpec::power(double p) {
  if (!(p > 0)) throw DomainError("cost exponent must be positive");
  return CostSpec{p, false};
}

double cost(const TransportPlan& plan, const CostSpec& c) {
  double total = 0.0;
  for (const auto& r : plan.routes()) {
    if (c.indicator) {
      if (r.x != r.y) total += to_double(r.mass);
    } else if (r.x != r.y) {
      total += to_double(r.mass) * std::pow(to_double(rational_abs(r.y - r.x)), c.exponent);
    }
  }
  for (const auto& cc : plan.curves()) total += curve_cost(cc, c);
  return total;
}

Rational l1_cost_exact(const TransportPlan& plan) {
  Rational total = 0;
  for (const auto& r : plan.routes()) total += r.mass * rational_abs(r.y - r.x);
  for (const auto& c : plan.curves()) {
    Rational gs = c.y.slope - c.x.slope, gi = c.y.intercept - c.x.intercept;
    auto trapezoid = [&](const Rational& a, const Rational& b) {
      total += (rational_abs(gs * a + gi) + rational_abs(gs * b + gi)) * (b - a) / 2;
    };
    if (gs != 0) {
      Rational root = -gi / gs;
      if (c.h0 < root && root < c.h1) {
        trapezoid(c.h0, root);
        trapezoid(root, c.h1);
        continue;
      }
    }
    trapezoid(c.h0, c.h1);
  }
  return total;
}

namespace {

// Quantile function as a piecewise-affine map of the mass level.
struct QuantileCell {
  Rational lo, hi;  // mass interval ]lo, hi]
  AffineMap g;
};

std::vector<QuantileCell> quantile_profile(const Measure& m) {
  std::vector<QuantileCell> out;
  Rational acc = 0;
  const auto& atoms = m.atoms();
  const auto& cells = m.cells();
  std::size_t ia = 0, ic = 0;
  auto push_atom = [&](const Rational& x, const Rational& w) {
    out.push_back({acc, acc + w, AffineMap{Rational(0), x}});
    acc += w;
  };
  auto push_ramp = [&](const Rational& a, const Rational& b, const Rational& density) {
    if (a == b) return;
    Rational w = density * (b - a);
    out.push_back({acc, acc + w, AffineMap{1 / density, a - acc / density}});
    acc += w;
  };
  while (ia < atoms.size() || ic < cells.size()) {
    bool take_atom = ia < atoms.size() &&
                     (ic == cells.size() || atoms[ia].x <= cells[ic].a);
    if (take_atom) {
      push_atom(atoms[ia].x, atoms[ia].w);
      ++ia;
    } else {
      const auto& c = cells[ic];
      Rational pos = c.a;
      while (ia < atoms.size() && atoms[ia].x < c.b) {
        push_ramp(pos, atoms[ia].x, c.density);
        pos = atoms[ia].x;
        push_atom(atoms[ia].x, atoms[ia].w);
        ++ia;
      }
      push_ramp(pos, c.b, c.density);
      ++ic;
    }
  }
  return out;
}

std::vector<QuantileCell> reversed_profile(const Measure& m) {
  // Level alpha maps to mass - alpha of the original quantile profile.
  const Rational mass = m.total_mass();
  std::vector<QuantileCell> out;
  auto fwd = quantile_profile(m);
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
    AffineMap g{-it->g.slope, it->g.slope * mass + it->g.intercept};
    out.push_back({mass - it->hi, mass - it->lo, g});
  }
  return out;
}

TransportPlan couple_profiles(const std::vector<QuantileCell>& gx,
                              const std::vector<QuantileCell>& gy) {
  std::vector<Rational> cuts;
  for (const auto& c : gx) {
    cuts.push_back(c.lo);
    cuts.push_back(c.hi);
  }
  for (const auto& c : gy) {
    cuts.push_back(c.lo);
    cuts.push_back(c.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto cell_covering = [](const std::vector<QuantileCell>& cells, const Rational& lo,
                          const Rational& hi) -> const QuantileCell& {
    for (const auto& c : cells)
      if (c.lo <= lo && hi <= c.hi) return c;
    throw InternalInvariantError("quantile profiles do not cover a mass interval");
  };

  PlanBuilder builder;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto& cx = cell_covering(gx, cuts[i], cuts[i + 1]);
    const auto& cy = cell_covering(gy, cuts[i], cuts[i + 1]);
    if (cx.g.is_constant() && cy.g.is_constant())
      builder.route(cx.g.intercept, cy.g.intercept, cuts[i + 1] - cuts[i]);
    else
      builder.curve(cuts[i], cuts[i + 1], cx.g, cy.g);
  }
  return std::move(builder).finish();
}

}  // namespace

TransportPlan quantile_coupling(const Measure& mu, const Measure& nu) {
  if (mu.total_mass() != nu.total_mass())
    throw DomainError("quantile coupling requires equal total masses");
  return couple_profiles(quantile_profile(mu), quantile_profile(nu));
}

TransportPlan antitone_coupling(const Measure& mu, const Measure& nu) {
  if (mu.total_mass() != nu.total_mass())
    throw DomainError("antitone coupling requires equal total masses");
  return couple_profiles(quantile_profile(mu), reversed_profile(nu));
}

TransportPlan product_coupling(const Measure& mu, const Measure& nu) {
  if (!mu.is_atomic() || !nu.is_atomic())
    throw DomainError("product coupling requires atomic measures");
  if (mu.total_mass() != nu.total_mass())
    throw DomainError("product coupling requires equal total masses");
  PlanBuilder builder;
  for (const auto& a : mu.atoms())
    for (const auto& b : nu.atoms()) builder.route(a.x, b.x, a.w * b.w / mu.total_mass());
  return std::move(builder).finish();
}

std::pair<Measure, Measure> marginals(const TransportPlan& plan) {
  std::vector<Measure::Atom> ax, ay;
  std::vector<Measure::UniformPiece> ux, uy;
  for (const auto& r : plan.routes()) {
    ax.push_back({r.x, r.mass});
    ay.push_back({r.y, r.mass});
  }
  auto side = [](const CurveComponent& c, const AffineMap& map, std::vector<Measure::Atom>& atoms,
                 std::vector<Measure::UniformPiece>& pieces) {
    if (map.is_constant()) {
      atoms.push_back({map.intercept, c.mass()});
    } else {
      Rational p0 = map(c.h0), p1 = map(c.h1);
      pieces.push_back({std::min(p0, p1), std::max(p0, p1), c.mass()});
    }
  };
  for (const auto& c : plan.curves()) {
    side(c, c.x, ax, ux);
    side(c, c.y, ay, uy);
  }
  return {Measure(std::move(ax), std::move(ux)), Measure(std::move(ay), std::move(uy))};
}

namespace {

// Bivariate CDF of a plan, with open/closed boundary control for the sup
// evaluation (open = strict inequality, i.e. the left limit).
Rational plan_cdf(const TransportPlan& p, const Rational& x, const Rational& y, bool x_open,
                  bool y_open) {
  Rational acc = 0;
  for (const auto& r : p.routes()) {
    bool in_x = x_open ? r.x < x : r.x <= x;
    bool in_y = y_open ? r.y < y : r.y <= y;
    if (in_x && in_y) acc += r.mass;
  }
  for (const auto& c : p.curves()) {
    Rational lo = c.h0, hi = c.h1;
    auto constrain = [&](const AffineMap& map, const Rational& bound, bool open) {
      if (map.is_constant()) {
        bool in = open ? map.intercept < bound : map.intercept <= bound;
        if (!in) hi = lo;  // empty
        return;
      }
      Rational hb = (bound - map.intercept) / map.slope;
      if (map.slope > 0)
        hi = std::min(hi, hb);
      else
        lo = std::max(lo, hb);
    };
    constrain(c.x, x, x_open);
    constrain(c.y, y, y_open);
    if (lo < hi) acc += hi - lo;
  }
  return acc;
}

double sup_cdf_distance(const TransportPlan& a, const TransportPlan& b) {
  std::vector<Rational> xs, ys;
  auto base = [&](const TransportPlan& p) {
    for (const auto& r : p.routes()) {
      xs.push_back(r.x);
      ys.push_back(r.y);
    }
    for (const auto& c : p.curves()) {
      xs.push_back(c.x(c.h0));
      xs.push_back(c.x(c.h1));
      ys.push_back(c.y(c.h0));
      ys.push_back(c.y(c.h1));
    }
  };
  base(a);
  base(b);
  // Switch points: where one coordinate's clamp meets the other's candidate.
  auto derived = [&](const TransportPlan& p, const std::vector<Rational>& from_y,
                     const std::vector<Rational>& from_x, std::vector<Rational>& to_x,
                     std::vector<Rational>& to_y) {
    for (const auto& c : p.curves()) {
      if (!c.y.is_constant() && !c.x.is_constant()) {
        for (const auto& yc : from_y) {
          Rational h = (yc - c.y.intercept) / c.y.slope;
          if (c.h0 <= h && h <= c.h1) to_x.push_back(c.x(h));
        }
        for (const auto& xc : from_x) {
          Rational h = (xc - c.x.intercept) / c.x.slope;
          if (c.h0 <= h && h <= c.h1) to_y.push_back(c.y(h));
        }
      }
    }
  };
  std::vector<Rational> base_xs = xs, base_ys = ys;
  derived(a, base_ys, base_xs, xs, ys);
  derived(b, base_ys, base_xs, xs, ys);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  Rational best = 0;
  for (const auto& x : xs)
    for (const auto& y : ys)
      for (bool xo : {false, true})
        for (bool yo : {false, true}) {
          Rational d = rational_abs(plan_cdf(a, x, y, xo, yo) - plan_cdf(b, x, y, xo, yo));
          if (d > best) best = d;
        }
  return to_double(best);
}

}  // namespace

double plan_distance(const TransportPlan& a, const TransportPlan& b) {
  if (a.total_mass() != b.total_mass())
    throw DomainError("plan distance requires equal total masses");
  if (a.atomic() && b.atomic()) {
    std::map<std::pair<Rational, Rational>, Rational> diff;
    for (const auto& r : a.routes()) diff[{r.x, r.y}] += r.mass;
    for (const auto& r : b.routes()) diff[{r.x, r.y}] -= r.mass;
    Rational total = 0;
    for (const auto& [key, d] : diff) total += rational_abs(d);
    return to_double(total / 2);
  }
  return sup_cdf_distance(a, b);
}

}  // namespace exot
