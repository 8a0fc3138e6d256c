#include <limits>
#include <map>
#include <queue>

#include "symkit/metrics.hpp"

namespace symkit {

namespace {

constexpr std::size_t kBaseBallCap = 1 << 16;
constexpr std::size_t kMaxSettled = 1 << 20;

struct SearchResult {
  std::vector<std::pair<Point, Rational>> settled;  // in order of settlement
  std::optional<Rational> found;
  bool pruned = false;  // some edge was cut by the radius
  bool truncated = false;
};

// Dijkstra over d-edges (cost d(x, y)) and move edges x -> x u^{+-1} (cost 1), keeping costs < radius.
SearchResult search(const GeneralizedMetric& base, const std::vector<Permutation>& moves, Point source,
                    const Rational& radius, std::optional<Point> target, std::size_t cap) {
  using Item = std::pair<Rational, Point>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::map<Point, Rational> best;
  std::map<Point, bool> done;
  SearchResult out;
  auto cap_radius = base.finite_distance_cap();

  auto relax = [&](Point y, const Rational& cost) {
    auto it = best.find(y);
    if (it == best.end() || cost < it->second) {
      best[y] = cost;
      queue.emplace(cost, y);
    }
  };

  if (radius <= 0) return out;
  relax(source, Rational(0));
  while (!queue.empty()) {
    auto [dx, x] = queue.top();
    queue.pop();
    if (done[x]) continue;
    done[x] = true;
    out.settled.emplace_back(x, dx);
    if (target && x == *target) {
      out.found = dx;
      return out;
    }
    if (out.settled.size() >= cap) {
      out.truncated = true;
      return out;
    }
    if (out.settled.size() >= kMaxSettled)
      throw Error(ErrorKind::Budget, "refined search settled more than " + std::to_string(kMaxSettled) + " points");

    Rational rest = radius - dx;
    Ball nbrs = base.ball(x, rest, kBaseBallCap);
    if (!nbrs.complete)
      throw Error(ErrorKind::NotUncrowded,
                  base.name() + ": ball around " + std::to_string(x) + " of radius " + rational_text(rest) +
                      " exceeds " + std::to_string(kBaseBallCap) + " points");
    if (!cap_radius || rest <= *cap_radius) out.pruned = true;
    for (Point y : nbrs.points) {
      if (done[y]) continue;
      relax(y, dx + base.dist(x, y).value());
    }
    for (const auto& u : moves) {
      for (Point y : {u.apply(x), u.apply_inverse(x)}) {
        if (y == x || done[y]) continue;
        if (dx + 1 < radius)
          relax(y, dx + 1);
        else
          out.pruned = true;
      }
    }
  }
  return out;
}

std::string moves_text(const std::vector<Permutation>& moves) {
  std::string s;
  for (std::size_t i = 0; i < moves.size(); ++i) s += (i ? "," : "") + moves[i].to_string();
  return s;
}

}  // namespace

RefinedMetric::RefinedMetric(MetricPtr base, std::vector<Permutation> moves, Rational max_radius)
    : base_(std::move(base)), moves_(std::move(moves)), max_radius_(max_radius) {}

std::string RefinedMetric::name() const { return "refine(" + base_->name() + ";U=" + moves_text(moves_) + ")"; }

RefinedMetric::Answer RefinedMetric::query(Point a, Point b, const Rational& radius) const {
  auto r = search(*base_, moves_, a, radius, b, std::numeric_limits<std::size_t>::max());
  Answer ans;
  if (r.found) {
    ans.exact = true;
    ans.value = *r.found;
  } else if (!r.pruned) {
    ans.exact = true;
    ans.infinite = true;
  } else {
    ans.value = radius;
  }
  return ans;
}

ExtendedDistance RefinedMetric::dist(Point a, Point b) const {
  if (a == b) return ExtendedDistance(0);
  ExtendedDistance direct = base_->dist(a, b);
  Rational radius = direct.is_infinite() ? max_radius_ : direct.value() + 1;
  Answer ans = query(a, b, radius);
  if (!ans.exact)
    throw Error(ErrorKind::Budget, name() + ": distance from " + std::to_string(a) + " to " + std::to_string(b) +
                                       " is at least " + rational_text(radius));
  return ans.infinite ? ExtendedDistance::infinity() : ExtendedDistance(ans.value);
}

bool RefinedMetric::less_than(Point a, Point b, const Rational& r) const {
  if (a == b) return r > 0;
  Answer ans = query(a, b, r);
  return ans.exact && !ans.infinite && ans.value < r;
}

Ball RefinedMetric::ball(Point a, const Rational& r, std::size_t cap) const {
  auto res = search(*base_, moves_, a, r, std::nullopt, cap);
  Ball out;
  for (const auto& [p, _] : res.settled) out.points.push_back(p);
  std::sort(out.points.begin(), out.points.end());
  out.complete = !res.truncated;
  return out;
}

std::optional<std::uint64_t> RefinedMetric::uniform_bound(const Rational& r) const {
  return refined_ball_bound(*base_, moves_.size(), r);
}

std::shared_ptr<const RefinedMetric> refine_metric(MetricPtr d, std::vector<Permutation> moves) {
  if (!d->rational_valued())
    throw Error(ErrorKind::UnsupportedMetric, d->name() + " answers comparisons only and cannot be refined");
  for (const auto& u : moves) {
    auto rep = verify_window(u, 64);
    if (!rep.pass) throw Error(ErrorKind::Precondition, u.to_string() + " fails window check: " + rep.detail);
  }
  return std::make_shared<RefinedMetric>(std::move(d), std::move(moves));
}

std::optional<std::uint64_t> refined_ball_bound(const GeneralizedMetric& base, std::size_t moves,
                                                const Rational& r) {
  if (r <= 0) return 0;
  auto lambda = base.uniform_bound(r);
  if (!lambda) return std::nullopt;
  constexpr auto top = std::numeric_limits<std::uint64_t>::max();
  auto mul = [](std::uint64_t x, std::uint64_t y) { return (x != 0 && y > top / x) ? top : x * y; };
  std::int64_t steps = (r.numerator() + r.denominator() - 1) / r.denominator() - 1;
  std::uint64_t total = 0, term = *lambda;  // lambda^{k+1} (2m)^k
  for (std::int64_t k = 0; k <= steps; ++k) {
    total = total > top - term ? top : total + term;
    term = mul(mul(term, *lambda), 2 * moves);
  }
  return total;
}

}  // namespace symkit
