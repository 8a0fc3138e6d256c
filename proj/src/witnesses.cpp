#include "symkit/witnesses.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>

namespace symkit {

namespace {

// Greedy packing for one half of B: round k covers the B-block of rank 2k + half with the next
// A-block that is large enough. Everything else an A-block holds goes, in increasing order, onto
// the points of the other half, so that half is filled exactly.
struct Packer {
  PartitionPtr a, b;
  std::int64_t half = 0;
  std::size_t skip_limit = 4096;

  std::mutex mu;
  std::map<Point, Point> fwd, bwd;
  std::int64_t next_source = 0;
  std::int64_t round = 0;
  Point dump_cursor = 0;
  std::vector<PackingEntry> log;

  bool covered_half(Point y) const { return b->block_rank(b->block_of(y)) % 2 == half; }

  Point next_dump_point() {
    while (covered_half(dump_cursor)) ++dump_cursor;
    return dump_cursor++;
  }

  void assign(Point x, Point y) {
    fwd[x] = y;
    bwd[y] = x;
  }

  void dump_block(BlockId src, std::size_t from) {
    auto pts = a->members(src);
    for (std::size_t i = from; i < pts.size(); ++i) assign(pts[i], next_dump_point());
  }

  void step() {
    BlockId target = b->block_at(2 * round + half);
    auto tm = b->members(target);
    PackingEntry e{target, 0, {}};
    std::size_t dumped = 0;
    for (std::size_t skips = 0;; ++skips) {
      if (skips > skip_limit)
        throw Error(ErrorKind::ProfileViolation, a->name() + ": no block of size >= " + std::to_string(tm.size()) +
                                                     " within " + std::to_string(skip_limit) + " blocks");
      BlockId src = a->block_at(next_source++);
      auto sm = a->members(src);
      if (sm.size() >= tm.size()) {
        for (std::size_t i = 0; i < tm.size(); ++i) assign(sm[i], tm[i]);
        dump_block(src, tm.size());
        dumped += sm.size() - tm.size();
        e.source = src;
        break;
      }
      dump_block(src, 0);
      dumped += sm.size();
      e.dumped.push_back(src);
    }
    if (dumped == 0) {
      // Keep the other half moving so every one of its points is eventually hit.
      BlockId extra = a->block_at(next_source++);
      dump_block(extra, 0);
      e.dumped.push_back(extra);
    }
    log.push_back(std::move(e));
    ++round;
  }

  Point forward(Point x) {
    std::lock_guard<std::mutex> lock(mu);
    std::int64_t rank = a->block_rank(a->block_of(x));
    while (next_source <= rank) step();
    return fwd.at(x);
  }

  Point backward(Point y) {
    std::lock_guard<std::mutex> lock(mu);
    if (covered_half(y)) {
      std::int64_t k = b->block_rank(b->block_of(y)) / 2;
      while (round <= k) step();
    } else {
      while (dump_cursor <= y) step();
    }
    return bwd.at(y);
  }

  void run(std::size_t rounds) {
    std::lock_guard<std::mutex> lock(mu);
    while (round < static_cast<std::int64_t>(rounds)) step();
  }
};

Permutation packer_permutation(const std::shared_ptr<Packer>& p, const std::string& name) {
  return Permutation::rule(
      name, [p](Point x) -> std::optional<Point> { return p->forward(x); },
      [p](Point y) -> std::optional<Point> { return p->backward(y); },
      {{"a", p->a->name()}, {"b", p->b->name()}, {"half", std::to_string(p->half)}});
}

void require_p_class(const PartitionPtr& a) {
  auto tag = classify_partition(*a);
  if (tag.tag != PartitionClassTag::Tag::InP)
    throw Error(ErrorKind::Precondition, a->name() + " is not of unbounded finite block sizes: " + tag.reason);
}

}  // namespace

PWitness p_equiv_witness(PartitionPtr a, PartitionPtr b, std::size_t depth) {
  require_p_class(a);
  require_p_class(b);
  PWitness w{a, b, Permutation(), Permutation(), {}, {}, depth};
  auto pf = std::make_shared<Packer>();
  auto pg = std::make_shared<Packer>();
  pf->a = pg->a = a;
  pf->b = pg->b = b;
  pf->half = 0;
  pg->half = 1;
  pf->run(depth);
  pg->run(depth);
  w.packing_f.assign(pf->log.begin(), pf->log.begin() + static_cast<std::ptrdiff_t>(depth));
  w.packing_g.assign(pg->log.begin(), pg->log.begin() + static_cast<std::ptrdiff_t>(depth));
  w.f = packer_permutation(pf, "p-witness-f");
  w.g = packer_permutation(pg, "p-witness-g");
  return w;
}

namespace {

// The part of h living on blocks of B whose rank has the given parity.
Permutation restrict_to_half(const Permutation& h, const PartitionPtr& b, std::int64_t half) {
  auto on_half = [b, half](Point x) { return b->block_rank(b->block_of(x)) % 2 == half; };
  if (auto sb = h.support_bound()) {
    std::vector<std::pair<Point, Point>> pairs;
    for (Point x : support_of(h))
      if (on_half(x)) pairs.emplace_back(x, h.apply(x));
    return Permutation::from_map(pairs).with_block_certificate(b->name());
  }
  return Permutation::rule(
             "restrict", [h, on_half](Point x) -> std::optional<Point> { return on_half(x) ? h.apply(x) : x; },
             [h, on_half](Point x) -> std::optional<Point> { return on_half(x) ? h.apply_inverse(x) : x; },
             {{"half", std::to_string(half)}})
      .with_block_certificate(b->name());
}

// Whether c = conj p conj^-1 preserves the blocks of A: exact for finite-support p, else probed.
Tri conjugate_preserves(const Permutation& conj, const Permutation& p, const Partition& a, Point window) {
  Permutation c = Permutation::word({conj, p, conj.inverse()});
  if (p.support_bound()) {
    for (Point y : support_of(p)) {
      Point x = conj.apply_inverse(y);
      if (a.block_of(c.apply(x)) != a.block_of(x)) return Tri::No;
    }
    return Tri::Yes;
  }
  return first_unpreserved_block(c, a, window) ? Tri::No : Tri::Unknown;
}

}  // namespace

FactorThrough factor_through(const Permutation& h, const PWitness& w, Point window) {
  const auto& certs = h.block_certificates();
  bool certified = std::find(certs.begin(), certs.end(), w.b->name()) != certs.end();
  if (!certified && h.support_bound())
    certified = stabilizer_membership(h, *w.b, window).answer == Tri::Yes;
  if (!certified)
    throw Error(ErrorKind::NoCertificate, h.to_string() + " carries no block certificate for " + w.b->name());
  FactorThrough out{restrict_to_half(h, w.b, 0), restrict_to_half(h, w.b, 1)};
  out.window = window;
  out.product_matches = true;
  for (Point x = 0; x < window; ++x) {
    if (out.q.apply(out.p.apply(x)) != h.apply(x)) {
      out.product_matches = false;
      break;
    }
  }
  out.p_conjugate_in_stabilizer = conjugate_preserves(w.f, out.p, *w.a, window);
  out.q_conjugate_in_stabilizer = conjugate_preserves(w.g, out.q, *w.a, window);
  return out;
}

struct EvenShift::Index {
  PartitionPtr a;
  std::recursive_mutex mu;
  std::int64_t scanned = 0;
  std::vector<BlockId> singles, multis;

  void scan_one() {
    if (scanned > (1 << 22)) throw Error(ErrorKind::Budget, "marked-point scan too long");
    BlockId b = a->block_at(scanned++);
    auto m = a->members(b, 5);
    if (m.size() == 1) {
      singles.push_back(b);
    } else {
      if (m.size() < 4)
        throw Error(ErrorKind::ProfileViolation,
                    a->name() + ": block " + std::to_string(b) + " has " + std::to_string(m.size()) + " points");
      multis.push_back(b);
    }
  }

  Point marked(std::int64_t i) {
    std::lock_guard<std::recursive_mutex> lock(mu);
    if (i >= 0) {
      auto t = static_cast<std::size_t>(i / 4);
      while (multis.size() <= t) scan_one();
      return a->members(multis[t], 4)[static_cast<std::size_t>(i % 4)];
    }
    auto k = static_cast<std::size_t>(-i - 1);
    while (singles.size() <= k) scan_one();
    return singles[k];
  }

  std::optional<std::int64_t> index_of(Point x) {
    std::lock_guard<std::recursive_mutex> lock(mu);
    BlockId b = a->block_of(x);
    auto m = a->members(b, 5);
    std::int64_t rank = a->block_rank(b);
    while (scanned <= rank) scan_one();
    if (m.size() == 1) {
      auto pos = std::lower_bound(singles.begin(), singles.end(), b) - singles.begin();
      return -(pos + 1);
    }
    auto s = std::find(m.begin(), m.begin() + 4, x) - m.begin();
    if (s == 4) return std::nullopt;
    auto t = std::lower_bound(multis.begin(), multis.end(), b) - multis.begin();
    return 4 * t + s;
  }
};

EvenShift::EvenShift(PartitionPtr a) : a_(std::move(a)), index_(std::make_shared<Index>()) {
  index_->a = a_;
  auto idx = index_;
  shift_ = Permutation::rule(
      "even-shift",
      [idx](Point x) -> std::optional<Point> {
        auto i = idx->index_of(x);
        return i ? idx->marked(*i + 2) : x;
      },
      [idx](Point x) -> std::optional<Point> {
        auto i = idx->index_of(x);
        return i ? idx->marked(*i - 2) : x;
      },
      {{"partition", a_->name()}});
}

Point EvenShift::marked(std::int64_t index) const { return index_->marked(index); }
std::optional<std::int64_t> EvenShift::index_of(Point x) const { return index_->index_of(x); }

Permutation EvenShift::pair_element(const std::vector<bool>& bits) const {
  std::vector<std::vector<Point>> swaps;
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j]) swaps.push_back({marked(2 * static_cast<std::int64_t>(j)), marked(2 * static_cast<std::int64_t>(j) + 1)});
  return Permutation::cycles(swaps);
}

EvenShift even_shift_witness(PartitionPtr a) {
  require_p_class(a);
  std::size_t singles = 0, multis = 0;
  for (std::int64_t r = 0; r < 256; ++r) {
    BlockId b = a->block_at(r);
    std::size_t n = a->members(b, 5).size();
    if (n == 2 || n == 3)
      throw Error(ErrorKind::ProfileViolation, a->name() + ": block " + std::to_string(b) + " has " +
                                                   std::to_string(n) + " points; need 1 or at least 4");
    (n == 1 ? singles : multis)++;
  }
  if (singles == 0 || multis == 0)
    throw Error(ErrorKind::ProfileViolation, a->name() + ": probes need both singletons and large blocks");
  return EvenShift(std::move(a));
}

Z2Split decompose_z2(const std::vector<bool>& a) {
  if (a.size() % 2 != 0) throw Error(ErrorKind::Precondition, "prefix length must be even");
  Z2Split s{std::vector<bool>(a.size()), std::vector<bool>(a.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i % 2 == 0) {
      s.y[i] = i == 0 ? false : s.y[i - 1];
      s.x[i] = a[i] != s.y[i];
    } else {
      s.x[i] = s.x[i - 1];
      s.y[i] = a[i] != s.x[i];
    }
  }
  return s;
}

std::pair<Point, Point> commutator_block(std::int64_t i) {
  Point base = 4 * z_to_n(i);
  return {base, base + 1};
}

Permutation block_shift() {
  auto move = [](std::int64_t by) {
    return [by](Point x) -> std::optional<Point> {
      Point r = x % 4;
      if (r >= 2) return x;
      return 4 * z_to_n(n_to_z(x / 4) + by) + r;
    };
  };
  return Permutation::rule("block-shift", move(1), move(-1));
}

Permutation block_flips(std::function<bool(std::int64_t)> active) {
  auto fn = [active](Point x) -> std::optional<Point> {
    if (x % 4 >= 2) return x;
    return active(n_to_z(x / 4)) ? (x ^ 1) : x;
  };
  return Permutation::rule("block-flips", fn, fn);
}

CommutatorSolution commutator_solve(std::int64_t lo, const std::vector<bool>& target, std::int64_t anchor,
                                    bool anchor_bit) {
  CommutatorSolution s;
  s.lo = lo;
  s.hi = lo + static_cast<std::int64_t>(target.size());
  if (anchor < lo - 1 || anchor >= s.hi)
    throw Error(ErrorKind::Precondition, "anchor " + std::to_string(anchor) + " outside [" +
                                             std::to_string(lo - 1) + ", " + std::to_string(s.hi) + ")");
  auto c = [&](std::int64_t i) { return static_cast<bool>(target[static_cast<std::size_t>(i - lo)]); };
  s.flips[anchor] = anchor_bit;
  for (std::int64_t i = anchor + 1; i < s.hi; ++i) s.flips[i] = s.flips[i - 1] != c(i);
  for (std::int64_t i = anchor; i >= lo; --i) s.flips[i - 1] = s.flips[i] != c(i);
  auto flips = std::make_shared<std::map<std::int64_t, bool>>(s.flips);
  std::int64_t first = lo - 1, last = s.hi - 1;
  s.f = block_flips([flips, first, last](std::int64_t i) { return flips->at(std::clamp(i, first, last)); });
  Permutation h = block_shift();
  s.commutator = Permutation::word({h.inverse(), s.f.inverse(), h, s.f});
  return s;
}

Permutation three_cycle_extract(const Permutation& g, const Permutation& s) {
  for (const auto* p : {&g, &s})
    if (!p->support_bound())
      throw Error(ErrorKind::NoSupportCertificate, p->to_string() + " is not certified finite-support");
  auto sg = support_of(g), ss = support_of(s);
  std::vector<Point> common;
  std::set_intersection(sg.begin(), sg.end(), ss.begin(), ss.end(), std::back_inserter(common));
  if (common.size() != 1) {
    std::string list;
    for (Point x : common) list += (list.empty() ? "" : " ") + std::to_string(x);
    throw Error(ErrorKind::Precondition, "supports must meet in exactly one point; they meet in {" + list + "}");
  }
  Permutation c = to_cycles(Permutation::word({s.inverse(), g.inverse(), s, g}));
  auto cycles = c.cycle_list();
  if (cycles.size() != 1 || cycles[0].size() != 3)
    throw Error(ErrorKind::HypothesisFailure, "commutator " + c.to_string() + " is not a 3-cycle");
  return c;
}

const char* to_string(FiniteClass c) {
  switch (c) {
    case FiniteClass::Trivial: return "trivial";
    case FiniteClass::EvenFinite: return "even-finite";
    case FiniteClass::OddFinite: return "odd-finite";
  }
  return "";
}

FiniteGroupReport sfinite_class(const std::vector<Permutation>& gens, std::size_t cap) {
  FiniteGroupReport rep;
  std::set<Point> dom;
  for (const auto& g : gens) {
    if (!g.support_bound())
      throw Error(ErrorKind::NoSupportCertificate, g.to_string() + " is not certified finite-support");
    for (Point x : support_of(g)) dom.insert(x);
  }
  rep.domain.assign(dom.begin(), dom.end());
  const std::size_t n = rep.domain.size();
  using Elem = std::vector<std::uint16_t>;
  std::vector<Elem> gen_elems;
  for (const auto& g : gens) {
    Elem e(n);
    for (std::size_t i = 0; i < n; ++i) {
      Point y = g.apply(rep.domain[i]);
      e[i] = static_cast<std::uint16_t>(std::lower_bound(rep.domain.begin(), rep.domain.end(), y) - rep.domain.begin());
    }
    gen_elems.push_back(std::move(e));
  }
  Elem id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<std::uint16_t>(i);
  std::set<Elem> seen{id};
  std::deque<Elem> queue{id};
  bool odd = false;
  auto is_odd = [n](const Elem& e) {
    std::vector<bool> visited(n);
    std::size_t transpositions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t len = 0;
      for (std::size_t j = i; !visited[j]; j = e[j], ++len) visited[j] = true;
      if (len > 0) transpositions += len - 1;
    }
    return transpositions % 2 == 1;
  };
  while (!queue.empty()) {
    Elem cur = queue.front();
    queue.pop_front();
    for (const auto& g : gen_elems) {
      Elem next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = g[cur[i]];
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw Error(ErrorKind::Budget, "generated group exceeds " + std::to_string(cap) + " elements");
        odd = odd || is_odd(next);
        queue.push_back(std::move(next));
      }
    }
  }
  rep.order = seen.size();
  rep.cls = rep.order == 1 ? FiniteClass::Trivial : (odd ? FiniteClass::OddFinite : FiniteClass::EvenFinite);
  return rep;
}

}  // namespace symkit
