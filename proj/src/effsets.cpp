#include "cochain/effsets.hpp"

#include "cochain/codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cochain {

// ---------------------------------------------------------------------------
// BallGrid

BallGrid::BallGrid(std::span<const Ball> balls) : balls_(balls) {
  if (balls.empty()) return;
  axes_ = std::min<std::size_t>(balls[0].dim(), 3);
  lo_.assign(axes_, INFINITY);
  std::vector<double> hi(axes_, -INFINITY);
  double mean_width = 0;
  for (const auto& b : balls) {
    for (std::size_t a = 0; a < axes_; ++a) {
      lo_[a] = std::min(lo_[a], ball_lower(b, a));
      hi[a] = std::max(hi[a], ball_upper(b, a));
    }
    mean_width += 2 * b.radius_d();
  }
  mean_width /= static_cast<double>(balls.size());
  // About one cell per ball, and cells no smaller than a typical ball.
  double per_axis = std::pow(static_cast<double>(balls.size()), 1.0 / static_cast<double>(axes_));
  std::size_t total = 1;
  for (std::size_t a = 0; a < axes_; ++a) {
    double span = hi[a] - lo_[a];
    auto r = static_cast<std::size_t>(std::clamp(std::min(span / std::max(mean_width, 1e-300), 4 * per_axis), 1.0, 4096.0));
    res_.push_back(r);
    width_.push_back(span / static_cast<double>(r));
    total *= r;
  }
  cells_.resize(total);
  for (std::uint32_t i = 0; i < balls.size(); ++i) {
    std::vector<std::size_t> from(axes_), to(axes_);
    for (std::size_t a = 0; a < axes_; ++a) {
      auto clampi = [&](double x) {
        double c = std::floor((x - lo_[a]) / width_[a]);
        return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(res_[a] - 1)));
      };
      from[a] = clampi(ball_lower(balls[i], a));
      to[a] = clampi(ball_upper(balls[i], a));
    }
    std::vector<std::size_t> cur = from;
    while (true) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < axes_; ++a) flat = flat * res_[a] + cur[a];
      cells_[flat].push_back(i);
      std::size_t a = axes_;
      while (a-- > 0) {
        if (cur[a] < to[a]) {
          ++cur[a];
          break;
        }
        cur[a] = from[a];
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
  }
}

std::optional<std::size_t> BallGrid::cell_of(std::span<const double> p) const {
  if (cells_.empty()) return std::nullopt;
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes_; ++a) {
    double c = std::floor((p[a] - lo_[a]) / width_[a]);
    // Points on the outer rim belong to the last cell.
    if (c == static_cast<double>(res_[a]) && p[a] <= lo_[a] + width_[a] * static_cast<double>(res_[a])) c -= 1;
    if (!(c >= 0) || c >= static_cast<double>(res_[a])) return std::nullopt;
    flat = flat * res_[a] + static_cast<std::size_t>(c);
  }
  return flat;
}

std::vector<std::uint32_t> BallGrid::candidates(std::span<const double> p) const {
  auto cell = cell_of(p);
  if (!cell) return {};
  std::vector<std::uint32_t> out;
  for (auto i : cells_[*cell]) {
    bool inside = true;
    for (std::size_t a = 0; a < axes_ && inside; ++a)
      inside = ball_lower(balls_[i], a) <= p[a] && p[a] <= ball_upper(balls_[i], a);
    if (inside) out.push_back(i);
  }
  return out;
}

std::optional<std::uint32_t> BallGrid::locate(const Point& p) const {
  auto pd = to_doubles(p);
  for (auto i : candidates(pd))
    if (exact::in_open_ball(p, pd, balls_[i])) return i;
  return std::nullopt;
}

bool BallGrid::in_open_union(const Point& p) const { return locate(p).has_value(); }

std::optional<std::size_t> find_uncovered(std::span<const Point> points, std::span<const Ball> j) {
  BallGrid grid(j);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!grid.in_open_union(points[i])) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Complement enumerations

std::optional<Ball> CoCeSet::complement(std::size_t i) const {
  for (unsigned t = 0; t <= 24; ++t) {
    auto stage = complement_stage(t);
    if (i < stage.size()) return stage[i];
  }
  return std::nullopt;
}

namespace {

Ball box_ball(const Box& box, const Rational& rho) {
  Point c;
  for (double x : box.center()) c.emplace_back(x);
  return Ball(std::move(c), Rational(box.hi[0] - box.lo[0]) * rho);
}

constexpr std::size_t kMaxPendingBoxes = std::size_t{1} << 22;

class ShapeSet final : public CoCeSet {
 public:
  explicit ShapeSet(ShapePtr shape)
      : shape_(std::move(shape)), bound_(shape_->bounding_ball()), rho_(cube_ball_factor(shape_->dim())) {
    frontier_.push_back(dyadic_root_box(bound_));
  }

  std::string name() const override { return shape_->name(); }
  nlohmann::json spec() const override { return shape_->spec(); }
  Ball bounding_ball() const override { return bound_; }
  const Shape* shape() const override { return shape_.get(); }

  BallUnion complement_stage(unsigned t) const override {
    std::lock_guard lock(mu_);
    while (emitted_.size() <= t && grow()) {
    }
    BallUnion out;
    for (std::size_t level = 0; level <= t && level < emitted_.size(); ++level)
      out.insert(out.end(), emitted_[level].begin(), emitted_[level].end());
    return out;
  }

 private:
  // Classifies the boxes of the next level; false once the level cap is hit.
  bool grow() const {
    if (frontier_.size() > kMaxPendingBoxes) return false;
    BallUnion emitted;
    std::vector<Box> next;
    for (const auto& box : frontier_) {
      Ball b = box_ball(box, rho_);
      if (shape_->closed_ball_misses(b)) {
        emitted.push_back(std::move(b));
        continue;
      }
      for (unsigned ch = 0; ch < (1U << box.dim()); ++ch) next.push_back(box.child(ch));
    }
    emitted_.push_back(std::move(emitted));
    frontier_ = std::move(next);
    return true;
  }

  ShapePtr shape_;
  Ball bound_;
  Rational rho_;
  mutable std::mutex mu_;
  mutable std::vector<BallUnion> emitted_;
  mutable std::vector<Box> frontier_;
};

class ProgramSet final : public CoCeSet {
 public:
  ProgramSet(std::string command, Ball bound, std::size_t n)
      : command_(std::move(command)), bound_(std::move(bound)), n_(n) {
    if (bound_.dim() != n_) throw std::invalid_argument("bounding ball dimension mismatch");
  }
  ~ProgramSet() override {
    if (pipe_) pclose(pipe_);
  }
  ProgramSet(const ProgramSet&) = delete;
  ProgramSet& operator=(const ProgramSet&) = delete;

  std::string name() const override { return "custom"; }
  nlohmann::json spec() const override {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : bound_.center()) c.push_back(to_string(x));
    return {{"shape", "custom"},
            {"complement_program", command_},
            {"bound", {{"center", c}, {"radius", to_string(bound_.radius())}}}};
  }
  Ball bounding_ball() const override { return bound_; }

  BallUnion complement_stage(unsigned t) const override {
    std::size_t want = std::size_t{1} << std::min(t, 20U);
    std::lock_guard lock(mu_);
    read_until(want);
    return BallUnion(balls_.begin(), balls_.begin() + static_cast<std::ptrdiff_t>(std::min(want, balls_.size())));
  }

 private:
  void read_until(std::size_t want) const {
    if (finished_) return;
    if (!pipe_) {
      pipe_ = popen(command_.c_str(), "r");
      if (!pipe_) throw std::runtime_error("cannot start complement program: " + command_);
    }
    std::string line;
    while (balls_.size() < want) {
      int ch = std::fgetc(pipe_);
      if (ch == EOF) {
        if (!line.empty()) parse_line(line);
        finished_ = true;
        pclose(pipe_);
        pipe_ = nullptr;
        return;
      }
      if (ch == '\n') {
        if (!line.empty()) parse_line(line);
        line.clear();
      } else {
        line.push_back(static_cast<char>(ch));
      }
    }
  }

  void parse_line(const std::string& line) const {
    auto j = nlohmann::json::parse(line);
    Point c;
    for (const auto& x : j.at("center")) c.push_back(parse_rational(x.get<std::string>()));
    if (c.size() != n_) throw std::invalid_argument("complement program emitted a ball of wrong dimension");
    balls_.emplace_back(std::move(c), parse_rational(j.at("radius").get<std::string>()));
  }

  std::string command_;
  Ball bound_;
  std::size_t n_;
  mutable std::mutex mu_;
  mutable FILE* pipe_ = nullptr;
  mutable bool finished_ = false;
  mutable BallUnion balls_;
};

constexpr unsigned kMaxCoverDepth = 40;
constexpr std::size_t kRefutationPoints = 256;

// Lazy route: walk the dyadic tree of the shape's complement enumeration and
// the covering test together. A box is settled when it lies outside the
// bounding ball, when its enclosing ball is an enumerated complement ball, or
// when it sits inside one open ball of J.
Verdict covers_lazy(const Shape& shape, std::span<const Ball> j, unsigned fuel, kernels::Exec exec) {
  auto points = shape.exact_points(kRefutationPoints);
  if (auto miss = find_uncovered(points, j))
    return Verdict::refute(1, "a point of the set lies outside the union");

  Ball bound = shape.bounding_ball();
  Rational rho = cube_ball_factor(shape.dim());
  kernels::BoxNode root;
  root.box = dyadic_root_box(bound);
  root.second.resize(j.size());
  for (std::uint32_t i = 0; i < j.size(); ++i) root.second[i] = i;

  auto classify = [&](kernels::BoxNode& node) {
    const Box& box = node.box;
    if (exact::box_outside_closed_ball(box, bound)) return kernels::BoxOutcome::accept;
    std::erase_if(node.second, [&](std::uint32_t i) { return exact::box_misses_open_ball(box, j[i]); });
    for (auto i : node.second)
      if (exact::box_in_open_ball(box, j[i])) return kernels::BoxOutcome::accept;
    if (shape.closed_ball_misses(box_ball(box, rho))) return kernels::BoxOutcome::accept;
    return kernels::BoxOutcome::split;
  };
  unsigned cap = std::min(fuel, kMaxCoverDepth);
  auto result = kernels::subdivide(std::move(root), cap, classify, exec);
  if (result.status == kernels::SubdivisionStatus::covered) return Verdict::yes(fuel);
  return Verdict::not_yet(fuel, "subdivision depth " + std::to_string(cap) + " exhausted");
}

}  // namespace

CoCeSetPtr shape_set(ShapePtr shape) {
  if (!shape) throw std::invalid_argument("shape_set: null shape");
  return std::make_shared<ShapeSet>(std::move(shape));
}

CoCeSetPtr program_set(std::string command, Ball bound, std::size_t n) {
  return std::make_shared<ProgramSet>(std::move(command), std::move(bound), n);
}

Verdict covers_staged(const Space& space, const CoCeSet& set, std::span<const Ball> j, unsigned fuel) {
  if (!space.has_ecp() || !space.compact_closed_balls())
    throw std::logic_error("covers needs a space with the effective covering property and compact closed balls");
  if (fuel == 0) return Verdict::not_yet(0, "no fuel");
  BallUnion u(j.begin(), j.end());
  auto stage = set.complement_stage(fuel);
  u.insert(u.end(), stage.begin(), stage.end());
  Ball w0 = set.bounding_ball();
  auto v = space.ecp_inclusion(std::span<const Ball>(&w0, 1), u, fuel);
  // A refutation of the staged inclusion only says the stage is too small.
  if (!v.is_yes()) return Verdict::not_yet(fuel, v.note);
  return v;
}

Verdict covers(const Space& space, const CoCeSet& set, std::span<const Ball> j, unsigned fuel, kernels::Exec exec) {
  if (!space.has_ecp() || !space.compact_closed_balls())
    throw std::logic_error("covers needs a space with the effective covering property and compact closed balls");
  if (fuel == 0) return Verdict::not_yet(0, "no fuel");
  const Shape* shape = set.shape();
  if (shape && space.kind() == "euclidean" && space.dimension() == shape->dim() && !j.empty())
    return covers_lazy(*shape, j, fuel, exec);
  return covers_staged(space, set, j, fuel);
}

Verdict chain_covers(const Space& space, const CoCeSet& set, const ChainView& view, unsigned fuel,
                     kernels::Exec exec) {
  BallUnion balls;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto& cell = view.cell(i);
    balls.insert(balls.end(), cell.begin(), cell.end());
  }
  return covers(space, set, balls, fuel, exec);
}

// ---------------------------------------------------------------------------
// Hit enumeration from an approximator

CeHitStream::CeHitStream(SpacePtr space, Approximator approximator)
    : space_(std::move(space)), approx_(std::move(approximator)) {
  if (!space_ || !approx_.g) throw std::invalid_argument("CeHitStream: missing space or approximator");
  if (sgn(approx_.c) <= 0) throw std::invalid_argument("CeHitStream: error constant must be positive");
}

const BallUnion& CeHitStream::level(unsigned k) const {
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
  }
  BallUnion u = approx_.g(k);
  std::lock_guard lock(mu_);
  return cache_.emplace(k, std::move(u)).first->second;
}

Verdict CeHitStream::hits(const Ball& target, unsigned fuel) const {
  // Smaller delta only helps, so the least of q_0..q_fuel suffices: that is
  // 1/(b+1) for the largest b with pair(0, b) <= fuel.
  unsigned long b = 0;
  while (codec::pair(Natural(0), Natural(b + 1)) <= fuel) ++b;
  Natural delta_code = codec::pair(Natural(0), Natural(b));
  Rational delta = codec::rational_at(delta_code);
  unsigned delta_index = static_cast<unsigned>(delta_code.get_ui());
  for (unsigned k = 0; k <= fuel; ++k) {
    Rational reach = approx_.c * pow2_neg(k) + delta;
    Rational slack = target.radius() - reach;
    if (sgn(slack) <= 0) continue;
    const auto& members = level(k);
    for (std::size_t p = 0; p < members.size(); ++p) {
      bool inside = space_->has_exact_comparator()
                        ? space_->compare_distance(members[p].center(), target.center(), slack) < 0
                        : distance_less(*space_, members[p].center(), target.center(), slack, fuel).is_yes();
      if (inside)
        return Verdict::yes(k, {Natural(k), Natural(static_cast<unsigned long>(p)), Natural(delta_index)});
    }
  }
  return Verdict::not_yet(fuel);
}

unsigned CeHitStream::fuel_bound(const Rational& depth) const {
  if (sgn(depth) <= 0) throw std::invalid_argument("fuel_bound: depth must be positive");
  Rational quarter = depth / 4;
  unsigned k = 0;
  while (approx_.c * pow2_neg(k) > quarter) ++k;
  // 1/(b+1) sits at Cantor index pair(0, b).
  Rational inv = 1 / quarter;
  Natural b = inv.get_num() / inv.get_den();
  if (b * inv.get_den() < inv.get_num()) b += 1;
  Natural index = codec::rational_index(Rational(1) / Rational(b));
  if (!index.fits_uint_p()) throw std::overflow_error("fuel_bound: depth too small");
  return std::max(k, static_cast<unsigned>(index.get_ui()));
}

std::optional<Natural> CeHitStream::next(std::size_t budget) {
  for (std::size_t step = 0; step < budget; ++step) {
    auto [i, t] = codec::unpair(cursor_);
    ++cursor_;
    if (std::find(emitted_.begin(), emitted_.end(), i) != emitted_.end()) continue;
    if (!t.fits_uint_p()) continue;
    if (hits(space_->ball_at(i), static_cast<unsigned>(t.get_ui()))) {
      emitted_.push_back(i);
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace cochain
