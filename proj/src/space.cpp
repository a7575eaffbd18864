#include "cochain/space.hpp"

#include "cochain/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace cochain {

ComputableReal ComputableReal::constant(Rational r) {
  return ComputableReal{[r = std::move(r)](unsigned) -> Rational { return r; }};
}

int Space::compare_distance(const Point&, const Point&, const Rational&) const {
  throw std::logic_error(kind() + " space has no exact distance comparator");
}

std::optional<Point> Space::interpolate(const Point&, const Point&, const Rational&) const { return std::nullopt; }

Ball Space::ball_at(const Natural& code) const {
  auto [center, radius] = codec::unpair(code);
  return Ball(point_at(center), codec::rational_at(radius));
}

Natural Space::ball_index(const Ball& b) const {
  return codec::pair(index_of(b.center()), codec::rational_index(b.radius()));
}

BallUnion Space::union_at(const Natural& code) const {
  BallUnion out;
  for (const auto& i : codec::seq_decode(code)) out.push_back(ball_at(i));
  return out;
}

Natural Space::union_index(std::span<const Ball> u) const {
  if (u.empty()) throw std::invalid_argument("union_index: empty union has no code");
  std::vector<Natural> codes;
  codes.reserve(u.size());
  for (const auto& b : u) codes.push_back(ball_index(b));
  return codec::seq_encode(codes);
}

ComputableReal Space::distance(const Point& a, const Point& b) const {
  auto self = shared_from_this();
  return ComputableReal{[self, a, b](unsigned k) -> Rational { return self->dist_approx(a, b, k); }};
}

Rational cube_ball_factor(std::size_t n) {
  constexpr unsigned bits = 12;
  double est = std::sqrt(static_cast<double>(n)) / 2.0;
  Rational rho = dyadic(Natural(std::ceil(std::ldexp(est, bits))) + 1, bits);
  while (rho * rho * 4 <= Rational(static_cast<unsigned long>(n))) rho += pow2_neg(bits);
  return rho;
}

}  // namespace cochain
