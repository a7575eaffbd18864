#include "cochain/codec.hpp"
#include "cochain/kernels.hpp"
#include "cochain/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace cochain {

namespace {

constexpr unsigned kMaxEcpDepth = 45;

class EuclideanSpace final : public Space {
 public:
  explicit EuclideanSpace(std::size_t n) : n_(n) {}

  std::string kind() const override { return "euclidean"; }
  std::size_t dimension() const override { return n_; }

  Point point_at(const Natural& index) const override {
    auto codes = codec::tuple_decode(index, n_);
    Point p;
    p.reserve(n_);
    for (const auto& c : codes) p.push_back(codec::signed_rational_at(c));
    return p;
  }

  Natural index_of(const Point& p) const override {
    validate_point(p);
    std::vector<Natural> codes;
    codes.reserve(n_);
    for (const auto& x : p) codes.push_back(codec::signed_rational_index(x));
    return codec::tuple_encode(codes);
  }

  void validate_point(const Point& p) const override {
    if (p.size() != n_)
      throw std::invalid_argument("point has " + std::to_string(p.size()) + " coordinates, expected " +
                                  std::to_string(n_));
  }

  Rational dist_approx(const Point& a, const Point& b, unsigned k) const override {
    return sqrt_approx(exact::distance_squared(a, b), k);
  }

  bool has_exact_comparator() const override { return true; }
  int compare_distance(const Point& a, const Point& b, const Rational& r) const override {
    return exact::compare_distance(a, b, r);
  }

  bool has_ecp() const override { return true; }
  bool compact_closed_balls() const override { return true; }

  Verdict ecp_inclusion(std::span<const Ball> a, std::span<const Ball> j, unsigned fuel) const override {
    if (a.empty()) return Verdict::yes(0);
    if (fuel == 0) return Verdict::not_yet(0, "no fuel");
    kernels::BoxNode root;
    root.box = dyadic_root_box(a);
    root.first.resize(a.size());
    root.second.resize(j.size());
    for (std::uint32_t i = 0; i < a.size(); ++i) root.first[i] = i;
    for (std::uint32_t i = 0; i < j.size(); ++i) root.second[i] = i;

    auto classify = [a, j](kernels::BoxNode& node) {
      const Box& box = node.box;
      std::erase_if(node.first, [&](std::uint32_t i) { return exact::box_outside_closed_ball(box, a[i]); });
      if (node.first.empty()) return kernels::BoxOutcome::accept;
      std::erase_if(node.second, [&](std::uint32_t i) { return exact::box_misses_open_ball(box, j[i]); });
      for (auto i : node.second)
        if (exact::box_in_open_ball(box, j[i])) return kernels::BoxOutcome::accept;
      // The box center is a concrete point; if it lies in the closed union but
      // in no open ball of j, the inclusion is false.
      Point c;
      for (double x : box.center()) c.emplace_back(x);
      auto cd = box.center();
      bool in_a = std::any_of(node.first.begin(), node.first.end(),
                              [&](std::uint32_t i) { return exact::in_closed_ball(c, cd, a[i]); });
      if (in_a && std::none_of(node.second.begin(), node.second.end(),
                               [&](std::uint32_t i) { return exact::in_open_ball(c, cd, j[i]); }))
        return kernels::BoxOutcome::refute;
      return kernels::BoxOutcome::split;
    };

    unsigned cap = std::min(fuel, kMaxEcpDepth);
    auto result = kernels::subdivide(std::move(root), cap, classify, kernels::default_exec());
    switch (result.status) {
      case kernels::SubdivisionStatus::covered:
        return Verdict::yes(fuel);
      case kernels::SubdivisionStatus::refuted:
        return Verdict::refute(fuel, "a point of the closed union lies outside the open union");
      case kernels::SubdivisionStatus::undecided:
        break;
    }
    return Verdict::not_yet(fuel, "subdivision depth " + std::to_string(cap) + " exhausted");
  }

  BallUnion refine_cover(const Ball& b, unsigned depth) const override {
    depth = std::min(depth, 20U);
    Rational factor = cube_ball_factor(n_);
    BallUnion out;
    std::vector<std::pair<Box, unsigned>> stack{{dyadic_root_box(b), 0}};
    while (!stack.empty()) {
      auto [box, d] = std::move(stack.back());
      stack.pop_back();
      if (exact::box_outside_closed_ball(box, b)) continue;
      if (d == depth) {
        Point c;
        for (double x : box.center()) c.emplace_back(x);
        out.emplace_back(std::move(c), Rational(box.hi[0] - box.lo[0]) * factor);
        continue;
      }
      for (unsigned ch = 1U << n_; ch-- > 0;) stack.emplace_back(box.child(ch), d + 1);
    }
    return out;
  }

  std::optional<Point> interpolate(const Point& a, const Point& b, const Rational& t) const override {
    Point p(n_);
    for (std::size_t i = 0; i < n_; ++i) p[i] = a[i] + t * (b[i] - a[i]);
    return p;
  }

 private:
  std::size_t n_;
};

}  // namespace

SpacePtr euclidean_space(std::size_t n) {
  if (n == 0) throw std::invalid_argument("euclidean space needs dimension at least 1");
  return std::make_shared<EuclideanSpace>(n);
}

}  // namespace cochain
