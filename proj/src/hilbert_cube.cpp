#include "cochain/codec.hpp"
#include "cochain/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace cochain {

namespace {

// Points are eventually-zero sequences in [0, 1], stored without trailing
// zeros; d(x, y) = sum_{i >= 1} 2^-i |x_i - y_i|.
//
// A box fixes intervals for the first T coordinates and leaves the tail
// free in [0, 1].
struct CubeBox {
  std::vector<Rational> lo, hi;
};

const Rational& coord(const Point& p, std::size_t i) {
  static const Rational zero(0);
  return i < p.size() ? p[i] : zero;
}

Rational exact_distance(const Point& a, const Point& b) {
  Rational s = 0;
  std::size_t len = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < len; ++i) s += abs(coord(a, i) - coord(b, i)) * pow2_neg(static_cast<unsigned>(i + 1));
  return s;
}

Rational farthest(const CubeBox& box, const Point& c) {
  Rational s = 0;
  std::size_t t = box.lo.size();
  for (std::size_t i = 0; i < t; ++i) {
    Rational x = abs(box.lo[i] - coord(c, i));
    Rational y = abs(box.hi[i] - coord(c, i));
    s += (x > y ? x : y) * pow2_neg(static_cast<unsigned>(i + 1));
  }
  std::size_t len = std::max(t, c.size());
  for (std::size_t i = t; i < len; ++i) {
    const Rational& ci = coord(c, i);
    Rational far = ci > Rational(1, 2) ? ci : Rational(1) - ci;
    s += far * pow2_neg(static_cast<unsigned>(i + 1));
  }
  return s + pow2_neg(static_cast<unsigned>(len));
}

Rational nearest(const CubeBox& box, const Point& c) {
  Rational s = 0;
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    const Rational& ci = coord(c, i);
    if (ci < box.lo[i])
      s += (box.lo[i] - ci) * pow2_neg(static_cast<unsigned>(i + 1));
    else if (ci > box.hi[i])
      s += (ci - box.hi[i]) * pow2_neg(static_cast<unsigned>(i + 1));
  }
  return s;
}

Point box_center(const CubeBox& box) {
  Point c(box.lo.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (box.lo[i] + box.hi[i]) / 2;
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
  return c;
}

// Radius of the closed ball around box_center that contains the box.
Rational box_radius(const CubeBox& box) {
  Rational s = 0;
  for (std::size_t i = 0; i < box.lo.size(); ++i)
    s += (box.hi[i] - box.lo[i]) / 2 * pow2_neg(static_cast<unsigned>(i + 1));
  return s + pow2_neg(static_cast<unsigned>(box.lo.size()));
}

// Halves the coordinate with the largest weighted width, or opens a new one
// when the free tail dominates.
std::pair<CubeBox, CubeBox> split(const CubeBox& box) {
  std::size_t t = box.lo.size();
  Rational best = pow2_neg(static_cast<unsigned>(t));
  std::size_t axis = t;
  for (std::size_t i = 0; i < t; ++i) {
    Rational w = (box.hi[i] - box.lo[i]) * pow2_neg(static_cast<unsigned>(i + 1));
    if (w > best) {
      best = w;
      axis = i;
    }
  }
  CubeBox a = box, b = box;
  if (axis == t) {
    a.lo.emplace_back(0);
    a.hi.emplace_back(1, 2);
    b.lo.emplace_back(1, 2);
    b.hi.emplace_back(1);
  } else {
    Rational mid = (box.lo[axis] + box.hi[axis]) / 2;
    a.hi[axis] = mid;
    b.lo[axis] = mid;
  }
  return {std::move(a), std::move(b)};
}

class HilbertCube final : public Space {
 public:
  std::string kind() const override { return "hilbert-cube"; }
  std::size_t dimension() const override { return 0; }

  Point point_at(const Natural& index) const override {
    Point p;
    for (const auto& c : codec::seq_decode(index)) p.push_back(codec::unit_rational_at(c));
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    return p;
  }

  Natural index_of(const Point& p) const override {
    validate_point(p);
    std::vector<Natural> codes;
    std::size_t len = p.size();
    while (len > 0 && sgn(p[len - 1]) == 0) --len;
    for (std::size_t i = 0; i < len; ++i) codes.push_back(codec::unit_rational_index(p[i]));
    if (codes.empty()) codes.emplace_back(0);
    return codec::seq_encode(codes);
  }

  void validate_point(const Point& p) const override {
    for (const auto& x : p)
      if (sgn(x) < 0 || x > 1) throw std::invalid_argument("hilbert cube coordinate outside [0, 1]: " + to_string(x));
  }

  Rational dist_approx(const Point& a, const Point& b, unsigned k) const override {
    // The tail after k + 1 terms contributes at most 2^-(k+1).
    Rational s = 0;
    std::size_t terms = std::min<std::size_t>(std::max(a.size(), b.size()), k + 1);
    for (std::size_t i = 0; i < terms; ++i) s += abs(coord(a, i) - coord(b, i)) * pow2_neg(static_cast<unsigned>(i + 1));
    return s;
  }

  bool has_ecp() const override { return true; }
  bool compact_closed_balls() const override { return true; }

  Verdict ecp_inclusion(std::span<const Ball> a, std::span<const Ball> j, unsigned fuel) const override {
    if (a.empty()) return Verdict::yes(0);
    if (fuel == 0) return Verdict::not_yet(0, "no fuel");
    std::vector<std::pair<CubeBox, unsigned>> stack{{CubeBox{}, 0}};
    while (!stack.empty()) {
      auto [box, depth] = std::move(stack.back());
      stack.pop_back();
      bool meets_a = false;
      for (const auto& b : a)
        if (nearest(box, b.center()) <= b.radius()) {
          meets_a = true;
          break;
        }
      if (!meets_a) continue;
      bool inside = false;
      for (const auto& b : j)
        if (farthest(box, b.center()) < b.radius()) {
          inside = true;
          break;
        }
      if (inside) continue;
      Point c = box_center(box);
      bool c_in_a = std::any_of(a.begin(), a.end(), [&](const Ball& b) { return exact_distance(c, b.center()) <= b.radius(); });
      bool c_in_j = std::any_of(j.begin(), j.end(), [&](const Ball& b) { return exact_distance(c, b.center()) < b.radius(); });
      if (c_in_a && !c_in_j) return Verdict::refute(fuel, "a point of the closed union lies outside the open union");
      if (depth >= fuel) return Verdict::not_yet(fuel, "subdivision depth exhausted");
      auto [lo, hi] = split(box);
      stack.emplace_back(std::move(hi), depth + 1);
      stack.emplace_back(std::move(lo), depth + 1);
    }
    return Verdict::yes(fuel);
  }

  BallUnion refine_cover(const Ball& b, unsigned depth) const override {
    depth = std::min(depth, 16U);
    BallUnion out;
    std::vector<std::pair<CubeBox, unsigned>> stack{{CubeBox{}, 0}};
    while (!stack.empty()) {
      auto [box, d] = std::move(stack.back());
      stack.pop_back();
      if (nearest(box, b.center()) > b.radius()) continue;
      if (d == depth) {
        out.emplace_back(box_center(box), box_radius(box));
        continue;
      }
      auto [lo, hi] = split(box);
      stack.emplace_back(std::move(hi), d + 1);
      stack.emplace_back(std::move(lo), d + 1);
    }
    return out;
  }

  std::optional<Point> interpolate(const Point& a, const Point& b, const Rational& t) const override {
    std::size_t len = std::max(a.size(), b.size());
    Point p(len);
    for (std::size_t i = 0; i < len; ++i) p[i] = coord(a, i) + t * (coord(b, i) - coord(a, i));
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
    return p;
  }
};

}  // namespace

SpacePtr hilbert_cube_space() { return std::make_shared<HilbertCube>(); }

}  // namespace cochain
