#pragma once

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

#include "singmetric/errors.hpp"
#include "singmetric/mass.hpp"
#include "singmetric/rational.hpp"

namespace singmetric::toric {

struct Vec2 {
  Rat x{0}, y{0};
  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(const Rat& s, const Vec2& a) { return {s * a.x, s * a.y}; }
};

inline bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

inline Rat cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rat cross(const Vec2& o, const Vec2& a, const Vec2& b) { return cross(a - o, b - o); }
inline Rat dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Convex body in the plane stored in canonical form: strictly convex
/// counterclockwise vertex list starting at the lexicographically smallest
/// vertex. Degenerate bodies canonicalize to 2 vertices (segment) or 1
/// (point). Equality of bodies is equality of the vertex lists.
struct RationalPolygon {
  std::vector<Vec2> v;

  RationalPolygon() = default;
  explicit RationalPolygon(std::vector<Vec2> pts) { canonicalize(std::move(pts)); }

  friend bool operator==(const RationalPolygon&, const RationalPolygon&) = default;

  bool is_point() const { return v.size() == 1; }
  bool is_segment() const { return v.size() == 2; }
  bool empty() const { return v.empty(); }

 private:
  void canonicalize(std::vector<Vec2> pts);
};

// Andrew monotone chain with strict turns; collinear points are dropped so
// the canonical list has no three collinear vertices.
inline void RationalPolygon::canonicalize(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) {
    v = std::move(pts);
    return;
  }
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() == 2 && lex_less(hull[1], hull[0])) std::swap(hull[0], hull[1]);
  v = std::move(hull);
}

/// Twice the signed area (shoelace); nonnegative for canonical bodies.
inline Rat area2(const RationalPolygon& p) {
  Rat acc(0);
  const auto& v = p.v;
  for (size_t i = 0, n = v.size(); n >= 3 && i < n; ++i) acc += cross(v[i], v[(i + 1) % n]);
  return acc;
}

inline Rat area(const RationalPolygon& p) { return area2(p) / 2; }

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  if (cross(a, b, p) != 0) return false;
  return dot(p - a, b - a) >= 0 && dot(p - b, a - b) >= 0;
}

inline bool contains(const RationalPolygon& body, const Vec2& p) {
  const auto& v = body.v;
  if (v.empty()) return false;
  if (v.size() == 1) return v[0] == p;
  if (v.size() == 2) return on_segment(v[0], v[1], p);
  for (size_t i = 0, n = v.size(); i < n; ++i)
    if (cross(v[i], v[(i + 1) % n], p) < 0) return false;
  return true;
}

inline bool contains(const RationalPolygon& outer, const RationalPolygon& inner) {
  for (const Vec2& p : inner.v)
    if (!contains(outer, p)) return false;
  return !inner.v.empty();
}

inline RationalPolygon hull_of_union(const RationalPolygon& a, const RationalPolygon& b) {
  std::vector<Vec2> pts = a.v;
  pts.insert(pts.end(), b.v.begin(), b.v.end());
  return RationalPolygon(std::move(pts));
}

inline RationalPolygon scale(const Rat& s, const RationalPolygon& p) {
  std::vector<Vec2> pts;
  pts.reserve(p.v.size());
  for (const Vec2& q : p.v) pts.push_back(s * q);
  return RationalPolygon(std::move(pts));
}

namespace detail {

// Edge list of a canonical body traversed counterclockwise from its
// bottom-most (then left-most) vertex; a segment contributes both of its
// oriented edges, a point none.
inline std::pair<Vec2, std::vector<Vec2>> edge_fan(const RationalPolygon& p) {
  const auto& v = p.v;
  auto bottom = [&] {
    size_t bi = 0;
    for (size_t i = 1; i < v.size(); ++i)
      if (v[i].y < v[bi].y || (v[i].y == v[bi].y && v[i].x < v[bi].x)) bi = i;
    return bi;
  };
  if (v.size() <= 1) return {v.empty() ? Vec2{} : v[0], {}};
  if (v.size() == 2) {
    size_t bi = bottom();
    return {v[bi], {v[1 - bi] - v[bi], v[bi] - v[1 - bi]}};
  }
  size_t bi = bottom(), n = v.size();
  std::vector<Vec2> edges;
  edges.reserve(n);
  for (size_t i = 0; i < n; ++i) edges.push_back(v[(bi + i + 1) % n] - v[(bi + i) % n]);
  return {v[bi], std::move(edges)};
}

// Orders direction vectors by polar angle in [0, 2*pi), exactly.
inline bool angle_less(const Vec2& u, const Vec2& w) {
  auto half = [](const Vec2& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; };
  if (half(u) != half(w)) return half(u) < half(w);
  return cross(u, w) > 0;
}

}  // namespace detail

/// Minkowski sum via counterclockwise edge merge by angle; parallel edges
/// concatenate. Degenerate summands (segments, points) are first-class.
inline RationalPolygon minkowski_sum(const RationalPolygon& a, const RationalPolygon& b) {
  auto [pa, ea] = detail::edge_fan(a);
  auto [pb, eb] = detail::edge_fan(b);
  std::vector<Vec2> pts;
  Vec2 cur = pa + pb;
  pts.push_back(cur);
  size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    Vec2 step;
    if (j == eb.size() || (i < ea.size() && detail::angle_less(ea[i], eb[j]))) {
      step = ea[i++];
    } else if (i == ea.size() || detail::angle_less(eb[j], ea[i])) {
      step = eb[j++];
    } else {
      step = ea[i++] + eb[j++];
    }
    cur = cur + step;
    pts.push_back(cur);
  }
  return RationalPolygon(std::move(pts));
}

/// Mixed area V(A,B) = (area(A+B) - area(A) - area(B)) / 2.
inline Rat mixed_area(const RationalPolygon& a, const RationalPolygon& b) {
  return (area(minkowski_sum(a, b)) - area(a) - area(b)) / 2;
}

namespace detail {

inline void edge_pair_intersections(const Vec2& p, const Vec2& p2, const Vec2& q, const Vec2& q2,
                                    std::vector<Vec2>& out) {
  Vec2 d1 = p2 - p, d2 = q2 - q;
  Rat denom = cross(d1, d2);
  if (denom == 0) return;  // parallel; overlap endpoints come from vertex tests
  Rat t = cross(q - p, d2) / denom;
  Rat s = cross(q - p, d1) / denom;
  if (t >= 0 && t <= 1 && s >= 0 && s <= 1) out.push_back(p + t * d1);
}

inline std::vector<std::pair<Vec2, Vec2>> edges_of(const RationalPolygon& p) {
  std::vector<std::pair<Vec2, Vec2>> out;
  const auto& v = p.v;
  if (v.size() == 2) out.emplace_back(v[0], v[1]);
  for (size_t i = 0, n = v.size(); n >= 3 && i < n; ++i) out.emplace_back(v[i], v[(i + 1) % n]);
  return out;
}

}  // namespace detail

/// Exact intersection of convex bodies; nullopt when disjoint.
inline std::optional<RationalPolygon> intersect(const RationalPolygon& a,
                                                const RationalPolygon& b) {
  std::vector<Vec2> pts;
  for (const Vec2& p : a.v)
    if (contains(b, p)) pts.push_back(p);
  for (const Vec2& p : b.v)
    if (contains(a, p)) pts.push_back(p);
  for (const auto& [p, p2] : detail::edges_of(a))
    for (const auto& [q, q2] : detail::edges_of(b)) detail::edge_pair_intersections(p, p2, q, q2, pts);
  if (pts.empty()) return std::nullopt;
  return RationalPolygon(std::move(pts));
}

/// A toric singularity type: a body Q inside the moment polytope P of the
/// class. body == ambient is the minimal singularity.
///
/// The dictionary used throughout this engine -- types as convex bodies,
/// max of potentials as hull of the union, the rooftop envelope as the
/// intersection, masses as twice the mixed areas -- is the standard toric
/// modeling assumption; the suites cross-check its consequences against
/// statements that hold for arbitrary classes.
struct ToricClass {
  RationalPolygon ambient;
  RationalPolygon body;

  ToricClass() = default;
  ToricClass(RationalPolygon P, RationalPolygon Q) : ambient(std::move(P)), body(std::move(Q)) {
    if (area(ambient) <= 0) throw ParseError("toric ambient polytope must have positive area");
    if (!contains(ambient, body)) throw ParseError("toric body not contained in ambient polytope");
  }

  friend bool operator==(const ToricClass&, const ToricClass&) = default;
};

inline void require_same_ambient(const ToricClass& a, const ToricClass& b) {
  if (!(a.ambient == b.ambient)) throw AmbientMismatch("toric classes live in different polytopes");
}

/// Mixed masses of a toric type, n = 2: m[j] = 2 * V(Q,..,Q,P,..,P) with j
/// copies of P. Exact rationals, tolerance 0.
inline MassVector mass_vector(const ToricClass& t) {
  MassVector mv;
  mv.n = 2;
  mv.budget = area2(t.ambient);
  mv.m = {area2(t.body), 2 * mixed_area(t.body, t.ambient), mv.budget};
  return mv;
}

/// LEQ means "a is more singular than b": body containment a.body <= b.body.
inline Relation compare(const ToricClass& a, const ToricClass& b) {
  require_same_ambient(a, b);
  bool ab = contains(b.body, a.body);
  bool ba = contains(a.body, b.body);
  if (ab) return Relation::LEQ;  // a == b reports LEQ
  if (ba) return Relation::GEQ;
  return Relation::INCOMPARABLE;
}

/// max of the two types: convex hull of the union of the bodies.
inline ToricClass join(const ToricClass& a, const ToricClass& b) {
  require_same_ambient(a, b);
  return ToricClass(a.ambient, hull_of_union(a.body, b.body));
}

/// Rooftop envelope of the two types: intersection of the bodies; nullopt
/// signals that the envelope leaves the model.
inline std::optional<ToricClass> meet(const ToricClass& a, const ToricClass& b) {
  require_same_ambient(a, b);
  auto cap = intersect(a.body, b.body);
  if (!cap) return std::nullopt;
  return ToricClass(a.ambient, *cap);
}

struct DiamondResult {
  Rat lhs, rhs;
  bool holds = false;
  bool strict = false;
};

/// Mass inequality mass(a) + mass(b) <= mass(join) + mass(meet), exact.
/// An empty meet contributes mass zero, which is only consistent when no
/// certified upper bound contradicts the envelope-existence lemma.
inline DiamondResult diamond_check(const ToricClass& a, const ToricClass& b) {
  require_same_ambient(a, b);
  MassVector ma = mass_vector(a), mb = mass_vector(b);
  ToricClass top = join(a, b);
  MassVector mtop = mass_vector(top);
  auto cap = meet(a, b);
  Rat cap_mass = cap ? mass_vector(*cap).m[0] : Rat(0);
  if (!cap && ma.m[0] + mb.m[0] > mtop.m[0])
    throw EnvelopeNonexistent(
        "empty intersection with mass(a)+mass(b) above a common upper bound: model soundness failure");
  DiamondResult r;
  r.lhs = ma.m[0] + mb.m[0];
  r.rhs = mtop.m[0] + cap_mass;
  r.holds = r.lhs <= r.rhs;
  r.strict = r.lhs < r.rhs;
  return r;
}

/// Transport into the class (1+eps)*theta: body Q + eps*P inside (1+eps)*P.
inline ToricClass scaling_transport(const ToricClass& t, const Rat& eps) {
  if (eps < 0 || eps > 1) throw ParseError("scaling transport needs eps in [0,1]");
  if (eps == 0) return t;
  RationalPolygon new_ambient = scale(1 + eps, t.ambient);
  RationalPolygon new_body = minkowski_sum(t.body, scale(eps, t.ambient));
  return ToricClass(std::move(new_ambient), std::move(new_body));
}

}  // namespace singmetric::toric
