#pragma once
/**
 * @file search.hpp
 * @brief Symmetry-reduced exhaustive and sampled searches over permutation
 * graphs and Besicovitch covers.
 *
 * Permutations. The group of maps (x, y) -> (ax + b, cy + d), a, c != 0,
 * together with the transpose (sigma -> sigma^-1) has order 2 q^2 (q-1)^2 and
 * preserves collinearity, so every quantity searched here is constant on
 * orbits. Every orbit contains permutations with sigma(0) = 0 and
 * sigma(1) = 1, and the lexicographically least element of an orbit is one of
 * them. The search places sigma(2), sigma(3), ... in order and keeps a leaf
 * only if it is that least element. A partial assignment is cut as soon as some
 * group image is already provably smaller on the determined prefix.
 *
 * Covers. Translations act freely on covers, so the vertical line and the
 * slope-0 line are pinned to key 0 and only the keys of slopes 1..q-1 vary.
 *
 * Work is split into shards by the first two free placements. Each shard
 * prunes against its own bound (seeded from a known construction), so node
 * counts and reports do not depend on the number of workers.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "kakeyalab/collinear.hpp"
#include "kakeyalab/kakeya.hpp"
#include "kakeyalab/permgraph.hpp"

namespace kakeyalab {

struct SearchOptions {
  bool exhaustive = true;
  /// Node budget; 0 means unlimited. Split evenly over shards so results stay deterministic.
  long long budget = 0;
  /// Sampled mode: number of random instances.
  long long samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Cap on the number of witnesses kept.
  std::size_t max_witnesses = 16;
};

struct ShardRecord {
  std::vector<int> prefix;
  long long nodes = 0;
  long long leaves = 0;            // complete assignments reached
  long long canonical_leaves = 0;  // orbit representatives among them
  long long covered = 0;           // leaves reached + leaves cut off by pruning
  long long orbit_sum = 0;         // sum of orbit sizes of the representatives
  bool budget_hit = false;
};

/// What a rerun needs to audit coverage of an exhaustive search.
struct ExhaustionCertificate {
  long long group_order = 0;
  std::string reduced_space;  // size of the space the shards partition
  std::vector<ShardRecord> shards;
  /// Sum of orbit sizes over the representatives; equals q! when every orbit
  /// was visited (only meaningful without objective pruning).
  std::optional<long long> orbit_total;

  long long covered() const {
    long long c = 0;
    for (const auto& s : shards) c += s.covered;
    return c;
  }
};

struct SearchReport {
  int q = 0;
  std::string objective;
  std::string witness_kind;  // "function_table" or "cover_keys"
  Rational value;            // minimum (or maximum, for the matching extremes)
  std::vector<std::vector<int>> witnesses;
  std::string search_space_size;
  long long nodes_visited = 0;
  bool exhaustive = false;
  bool budget_exceeded = false;
  long long symmetry_group_order = 1;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  std::optional<ExhaustionCertificate> certificate;
  std::vector<std::string> violations;
  nlohmann::json details = nlohmann::json::object();

  bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

inline std::string factorial_string(int n) {
  boost::multiprecision::cpp_int r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r.str();
}

inline std::string power_string(int base, int e) {
  boost::multiprecision::cpp_int r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r.str();
}

inline long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
inline void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Keeps the lexicographically smallest witnesses up to a cap.
inline void add_witness(std::vector<std::vector<int>>& ws, std::vector<int> w, std::size_t cap) {
  auto it = std::lower_bound(ws.begin(), ws.end(), w);
  if (it != ws.end() && *it == w) return;
  ws.insert(it, std::move(w));
  if (ws.size() > cap) ws.pop_back();
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Integer tables for the permutation group action and line bookkeeping.
class PermutationCanon {
 public:
  explicit PermutationCanon(const Field& f) : q_(f.q()), mul_(q_ * q_), inv_(q_), add_(q_ * q_), neg_(q_) {
    for (int a = 0; a < q_; ++a) {
      neg_[a] = f.neg(E(a)).v;
      if (a) inv_[a] = f.inv(E(a)).v;
      for (int b = 0; b < q_; ++b) {
        mul_[a * q_ + b] = f.mul(E(a), E(b)).v;
        add_[a * q_ + b] = f.add(E(a), E(b)).v;
      }
    }
  }

  int q() const noexcept { return q_; }
  int mul(int a, int b) const noexcept { return mul_[a * q_ + b]; }
  int add(int a, int b) const noexcept { return add_[a * q_ + b]; }
  int sub(int a, int b) const noexcept { return add_[a * q_ + neg_[b]]; }
  int inv(int a) const noexcept { return inv_[a]; }

  /// 2 q^2 (q-1)^2.
  long long group_order() const noexcept {
    return 2LL * q_ * q_ * static_cast<long long>(q_ - 1) * (q_ - 1);
  }

  /**
   * False when some normalized group image is lexicographically smaller than
   * sigma on positions that are already determined. sigma[0..last] are set;
   * inv[y] is the preimage of y or -1.
   */
  bool prefix_may_be_canonical(const int* sigma, const int* inv, int last) const {
    for (int t = 0; t < 2; ++t) {
      const int* src = t == 0 ? sigma : inv;
      for (int x0 = 0; x0 < q_; ++x0) {
        if (!known(src, t, x0, last)) continue;
        for (int x1 = 0; x1 < q_; ++x1) {
          if (x1 == x0 || (t == 0 && x0 == 0 && x1 == 1)) continue;
          if (!known(src, t, x1, last)) continue;
          const int d = sub(x1, x0), base = src[x0], scale = inv_[sub(src[x1], base)];
          for (int u = 2; u <= last; ++u) {
            const int x = add(x0, mul(u, d));
            if (!known(src, t, x, last)) break;
            const int img = mul(sub(src[x], base), scale);
            if (img < sigma[u]) return false;
            if (img > sigma[u]) break;
          }
        }
      }
    }
    return true;
  }

  struct LeafCheck {
    bool canonical;
    int stabilizer;
  };

  /// Full check on a complete normalized permutation.
  LeafCheck leaf(const int* sigma, const int* inv) const {
    int stab = 0;
    for (int t = 0; t < 2; ++t) {
      const int* src = t == 0 ? sigma : inv;
      for (int x0 = 0; x0 < q_; ++x0)
        for (int x1 = 0; x1 < q_; ++x1) {
          if (x1 == x0) continue;
          const int d = sub(x1, x0), base = src[x0], scale = inv_[sub(src[x1], base)];
          int cmp = 0;
          for (int u = 2; u < q_ && cmp == 0; ++u) {
            const int img = mul(sub(src[add(x0, mul(u, d))], base), scale);
            cmp = img < sigma[u] ? -1 : (img > sigma[u] ? 1 : 0);
          }
          if (cmp < 0) return {false, 0};
          if (cmp == 0) ++stab;
        }
    }
    return {true, stab};
  }

  /// Image of sigma under (x, y) -> (a x + b, c y + d), transposed first when `transpose`.
  std::vector<int> act(const std::vector<int>& sigma, bool transpose, int a, int b, int c, int d) const {
    std::vector<int> src = sigma;
    if (transpose)
      for (int x = 0; x < q_; ++x) src[sigma[x]] = x;
    std::vector<int> out(q_);
    for (int x = 0; x < q_; ++x) out[add(mul(a, x), b)] = add(mul(c, src[x]), d);
    return out;
  }

 private:
  static Elem E(int v) { return Elem{static_cast<std::uint16_t>(v)}; }
  // Non-transposed sources know x iff x <= last; transposed ones iff inv[x] >= 0.
  static bool known(const int* src, int t, int x, int last) { return t == 0 ? x <= last : src[x] >= 0; }

  int q_;
  std::vector<int> mul_, inv_, add_, neg_;
};

/// Triple count and norm of a permutation graph from line counters (no structure build).
struct GraphCounts {
  long long triples = 0;
  long long norm = 0;
};

/**
 * Depth-first enumeration of normalized permutations (sigma(0) = 0, sigma(1) = 1)
 * restricted to one shard prefix. Keeps per-line point counters so that the
 * triple count and the norm of the partial graph are known at every node;
 * both only grow, which makes them valid lower bounds.
 */
class PermutationDfs {
 public:
  enum class Objective { kNone, kTriples, kNorm };

  struct Leaf {
    const std::vector<int>& sigma;
    GraphCounts counts;
    int stabilizer;
  };

  PermutationDfs(const PermutationCanon& canon, Objective objective, long long bound, long long budget)
      : c_(canon), q_(canon.q()), objective_(objective), bound_(bound), budget_(budget) {}

  /// Current pruning bound (leaves with objective > bound are cut). Leaf callbacks may lower it.
  long long& bound() noexcept { return bound_; }

  ShardRecord run(const std::vector<int>& prefix, const std::function<void(const Leaf&)>& on_leaf) {
    rec_ = ShardRecord{};
    rec_.prefix = prefix;
    sigma_.assign(q_, -1);
    inv_.assign(q_, -1);
    cnt_.assign(static_cast<std::size_t>(q_) * q_, 0);
    counts_ = {};
    on_leaf_ = &on_leaf;

    std::vector<int> assigned{0, 1};
    assigned.insert(assigned.end(), prefix.begin(), prefix.end());
    if (static_cast<int>(assigned.size()) > q_) assigned.resize(q_);
    for (int j = 0; j < static_cast<int>(assigned.size()); ++j) {
      const int v = assigned[j];
      if (v < 0 || v >= q_ || inv_[v] >= 0) return rec_;  // not a valid prefix
      place(j, v);
    }
    const int last = static_cast<int>(assigned.size()) - 1;
    ++rec_.nodes;
    if (cut(last)) {
      rec_.covered += detail::factorial(q_ - 1 - last);
    } else {
      descend(last + 1);
    }
    return rec_;
  }

 private:
  long long objective_value() const noexcept {
    return objective_ == Objective::kTriples ? counts_.triples : counts_.norm;
  }

  bool cut(int last) const {
    if (objective_ != Objective::kNone && objective_value() > bound_) return true;
    return last >= 3 && last < q_ - 1 && !c_.prefix_may_be_canonical(sigma_.data(), inv_.data(), last);
  }

  void place(int j, int v) {
    sigma_[j] = v;
    inv_[v] = j;
    for (int m = 1; m < q_; ++m) {
      const int key = c_.sub(v, c_.mul(m, j));
      const long long k = cnt_[m * q_ + key]++;
      counts_.triples += k * (k - 1) / 2;
      counts_.norm += k >= 1 ? k - 1 : 0;
    }
  }

  void unplace(int j) {
    const int v = sigma_[j];
    for (int m = 1; m < q_; ++m) {
      const int key = c_.sub(v, c_.mul(m, j));
      const long long k = --cnt_[m * q_ + key];
      counts_.triples -= k * (k - 1) / 2;
      counts_.norm -= k >= 1 ? k - 1 : 0;
    }
    inv_[v] = -1;
    sigma_[j] = -1;
  }

  void descend(int j) {
    if (j == q_) {
      ++rec_.leaves;
      ++rec_.covered;
      auto check = c_.leaf(sigma_.data(), inv_.data());
      if (!check.canonical) return;
      ++rec_.canonical_leaves;
      rec_.orbit_sum += c_.group_order() / check.stabilizer;
      (*on_leaf_)({sigma_, counts_, check.stabilizer});
      return;
    }
    for (int v = 0; v < q_; ++v) {
      if (inv_[v] >= 0) continue;
      if (budget_ > 0 && rec_.nodes >= budget_) {
        rec_.budget_hit = true;
        return;
      }
      place(j, v);
      ++rec_.nodes;
      if (cut(j))
        rec_.covered += detail::factorial(q_ - 1 - j);
      else
        descend(j + 1);
      unplace(j);
    }
  }

  const PermutationCanon& c_;
  int q_;
  Objective objective_;
  long long bound_;
  long long budget_;
  std::vector<int> sigma_, inv_, cnt_;
  GraphCounts counts_;
  ShardRecord rec_;
  const std::function<void(const Leaf&)>* on_leaf_ = nullptr;
};

/// Shard prefixes: every ordered pair of distinct values for sigma(2), sigma(3) (none for q = 3).
inline std::vector<std::vector<int>> permutation_shards(int q) {
  std::vector<std::vector<int>> out;
  if (q < 5) {
    out.push_back({});
    return out;
  }
  for (int a = 2; a < q; ++a)
    for (int b = 2; b < q; ++b)
      if (a != b) out.push_back({a, b});
  return out;
}

/// Triple count and norm of a permutation graph via line counters.
inline GraphCounts graph_counts(const PermutationCanon& c, const std::vector<int>& sigma) {
  const int q = c.q();
  std::vector<int> cnt(static_cast<std::size_t>(q) * q, 0);
  GraphCounts out;
  for (int j = 0; j < q; ++j)
    for (int m = 1; m < q; ++m) {
      const long long k = cnt[m * q + c.sub(sigma[j], c.mul(m, j))]++;
      out.triples += k * (k - 1) / 2;
      out.norm += k >= 1 ? k - 1 : 0;
    }
  return out;
}

/// (5q - 1)/14.
inline Rational permutation_norm_bound(long long q) { return Rational(5 * q - 1, 14); }
/// (5q - 5)/14.
inline Rational semipermutation_norm_bound(long long q) { return Rational(5 * q - 5, 14); }

/// |M| < (q - sqrt(q/7))/3, decided exactly: q - 3|M| > 0 and q < 7 (q - 3|M|)^2.
inline bool matching_below_bound(long long q, long long m) {
  const long long gap = q - 3 * m;
  return gap > 0 && q < 7 * gap * gap;
}

namespace detail {

struct PermLeafSummary {
  std::vector<int> sigma;
  GraphCounts counts;
};

/// Runs the sharded permutation DFS and merges per-shard results in shard order.
template <class ShardState, class OnLeaf>
std::vector<ShardState> run_permutation_shards(const PermutationCanon& canon, PermutationDfs::Objective objective,
                                               long long initial_bound, const SearchOptions& opt,
                                               ExhaustionCertificate& cert, OnLeaf on_leaf) {
  const auto prefixes = permutation_shards(canon.q());
  std::vector<ShardState> states(prefixes.size());
  cert.group_order = canon.group_order();
  cert.reduced_space = factorial_string(canon.q() - 2);
  cert.shards.assign(prefixes.size(), {});
  const long long per_shard =
      opt.budget > 0 ? (opt.budget + static_cast<long long>(prefixes.size()) - 1) / static_cast<long long>(prefixes.size())
                     : 0;
  parallel_for(prefixes.size(), opt.workers, [&](std::size_t i) {
    PermutationDfs dfs(canon, objective, initial_bound, per_shard);
    auto& st = states[i];
    std::function<void(const PermutationDfs::Leaf&)> cb = [&](const PermutationDfs::Leaf& leaf) {
      on_leaf(st, leaf, dfs.bound());
    };
    cert.shards[i] = dfs.run(prefixes[i], cb);
  });
  return states;
}

}  // namespace detail

/**
 * Minimum collinear-triple count and minimum norm over all permutations of GF(q),
 * each by its own branch-and-bound pass. Every representative reached is also
 * checked against ||Gamma|| >= (5q-1)/14.
 */
inline SearchReport min_triples_over_permutations(const FieldPtr& field, const SearchOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const int q = field->q();
  const PermutationCanon canon(*field);
  const auto bound = permutation_norm_bound(q);
  SearchReport rep;
  rep.q = q;
  rep.objective = "min_triples_over_permutations";
  rep.witness_kind = "function_table";
  rep.search_space_size = detail::factorial_string(q);
  rep.seed = opt.seed;

  if (!opt.exhaustive) {
    std::mt19937_64 rng(opt.seed);
    std::vector<int> sigma(q);
    std::iota(sigma.begin(), sigma.end(), 0);
    long long best_t = -1, best_n = -1;
    std::vector<std::vector<int>> norm_w;
    for (long long i = 0; i < opt.samples; ++i) {
      std::shuffle(sigma.begin(), sigma.end(), rng);
      const auto c = graph_counts(canon, sigma);
      ++rep.nodes_visited;
      if (Rational(c.norm) < bound)
        rep.violations.push_back("norm below (5q-1)/14 for a sampled permutation");
      if (best_t < 0 || c.triples < best_t) best_t = c.triples, rep.witnesses.clear();
      if (c.triples == best_t) detail::add_witness(rep.witnesses, sigma, opt.max_witnesses);
      if (best_n < 0 || c.norm < best_n) best_n = c.norm, norm_w.clear();
      if (c.norm == best_n) detail::add_witness(norm_w, sigma, opt.max_witnesses);
    }
    rep.value = Rational(best_t);
    rep.details = {{"mode", "sampled"}, {"samples", opt.samples}, {"min_norm", to_string(Rational(best_n))},
                   {"norm_witnesses", norm_w}, {"norm_bound", to_string(bound)}};
    rep.wall_time = detail::seconds_since(t0);
    return rep;
  }

  const auto inv = inverse_construction(field);
  const auto seed_counts = graph_counts(canon, inv.indices());
  struct State {
    long long best = -1;
    std::vector<std::vector<int>> witnesses;
    long long below_bound = 0;
  };
  auto leaf_fn = [&](bool by_triples) {
    return [&, by_triples](State& st, const PermutationDfs::Leaf& leaf, long long& prune_bound) {
      if (Rational(leaf.counts.norm) < bound) ++st.below_bound;
      const long long v = by_triples ? leaf.counts.triples : leaf.counts.norm;
      if (st.best < 0 || v < st.best) {
        st.best = v;
        st.witnesses.clear();
      }
      if (v == st.best) detail::add_witness(st.witnesses, leaf.sigma, opt.max_witnesses);
      prune_bound = std::min(prune_bound, st.best);
    };
  };

  auto merge = [&](std::vector<State>& states, long long& best, std::vector<std::vector<int>>& ws,
                   long long& below) {
    best = -1;
    for (auto& s : states) {
      below += s.below_bound;
      if (s.best >= 0 && (best < 0 || s.best < best)) best = s.best;
    }
    for (auto& s : states)
      if (s.best == best)
        for (auto& w : s.witnesses) detail::add_witness(ws, w, opt.max_witnesses);
  };

  ExhaustionCertificate cert_t, cert_n;
  auto st_t = detail::run_permutation_shards<State>(canon, PermutationDfs::Objective::kTriples, seed_counts.triples,
                                                    opt, cert_t, leaf_fn(true));
  auto st_n = detail::run_permutation_shards<State>(canon, PermutationDfs::Objective::kNorm, seed_counts.norm, opt,
                                                    cert_n, leaf_fn(false));
  long long best_t, best_n, below = 0;
  std::vector<std::vector<int>> norm_w;
  merge(st_t, best_t, rep.witnesses, below);
  merge(st_n, best_n, norm_w, below);

  const long long reduced = detail::factorial(q - 2);
  for (const auto* cert : {&cert_t, &cert_n}) {
    for (const auto& s : cert->shards) {
      rep.nodes_visited += s.nodes;
      rep.budget_exceeded |= s.budget_hit;
    }
    if (!rep.budget_exceeded && cert->covered() != reduced)
      rep.violations.push_back("coverage audit failed: " + std::to_string(cert->covered()) + " of " +
                               std::to_string(reduced) + " normalized permutations accounted for");
  }
  rep.exhaustive = !rep.budget_exceeded;
  rep.symmetry_group_order = canon.group_order();
  rep.value = Rational(best_t);
  if (below > 0) rep.violations.push_back(std::to_string(below) + " representatives with norm below (5q-1)/14");
  if (Rational(best_n) < bound) rep.violations.push_back("minimum norm below (5q-1)/14");
  rep.certificate = cert_t;
  rep.details = {{"mode", "exhaustive"},
                 {"min_norm", to_string(Rational(best_n))},
                 {"norm_witnesses", norm_w},
                 {"norm_bound", to_string(bound)},
                 {"conjectured_min_triples", (q - 1) / 2},
                 {"norm_pass_nodes",
                  std::accumulate(cert_n.shards.begin(), cert_n.shards.end(), 0LL,
                                  [](long long a, const ShardRecord& s) { return a + s.nodes; })}};
  rep.wall_time = detail::seconds_since(t0);
  return rep;
}

/// Per-representative data gathered by a full (unpruned) orbit enumeration.
struct OrbitVisit {
  const std::vector<int>& sigma;
  GraphCounts counts;
  long long orbit_size;
};

/**
 * Visits one representative of every orbit of permutations of GF(q). The visitor
 * is called from worker threads with the shard index; callers keep per-shard
 * state and merge in shard order. Returns the certificate, whose orbit_total
 * must equal q!.
 */
inline ExhaustionCertificate enumerate_permutation_orbits(
    const FieldPtr& field, const SearchOptions& opt, std::size_t& shard_count,
    const std::function<void(std::size_t, const OrbitVisit&)>& visit) {
  const PermutationCanon canon(*field);
  const auto prefixes = permutation_shards(field->q());
  shard_count = prefixes.size();
  ExhaustionCertificate cert;
  cert.group_order = canon.group_order();
  cert.reduced_space = detail::factorial_string(field->q() - 2);
  cert.shards.assign(prefixes.size(), {});
  const long long per_shard =
      opt.budget > 0 ? (opt.budget + static_cast<long long>(prefixes.size()) - 1) / static_cast<long long>(prefixes.size())
                     : 0;
  detail::parallel_for(prefixes.size(), opt.workers, [&](std::size_t i) {
    PermutationDfs dfs(canon, PermutationDfs::Objective::kNone, 0, per_shard);
    std::function<void(const PermutationDfs::Leaf&)> cb = [&](const PermutationDfs::Leaf& leaf) {
      visit(i, {leaf.sigma, leaf.counts, canon.group_order() / leaf.stabilizer});
    };
    cert.shards[i] = dfs.run(prefixes[i], cb);
  });
  long long total = 0;
  for (const auto& s : cert.shards) total += s.orbit_sum;
  cert.orbit_total = total;
  return cert;
}

namespace detail {

inline void finish_orbit_report(SearchReport& rep, const ExhaustionCertificate& cert, int q) {
  for (const auto& s : cert.shards) {
    rep.nodes_visited += s.nodes;
    rep.budget_exceeded |= s.budget_hit;
  }
  rep.exhaustive = !rep.budget_exceeded;
  rep.symmetry_group_order = cert.group_order;
  if (rep.exhaustive && cert.orbit_total && *cert.orbit_total != factorial(q))
    rep.violations.push_back("orbit coverage audit failed: orbit sizes sum to " + std::to_string(*cert.orbit_total) +
                             ", expected " + std::to_string(factorial(q)));
  rep.certificate = cert;
}

}  // namespace detail

/**
 * Looks for a permutation whose collinear-triple hypergraph has an isolated
 * edge and at least two edges. q = 3 is reported as the trivial single-line case.
 */
inline SearchReport isolated_edge_probe(const FieldPtr& field, const SearchOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const int q = field->q();
  SearchReport rep;
  rep.q = q;
  rep.objective = "isolated_edge_probe";
  rep.witness_kind = "function_table";
  rep.search_space_size = detail::factorial_string(q);
  rep.seed = opt.seed;
  struct State {
    long long hits = 0;
    long long trivial = 0;
    std::vector<std::vector<int>> witnesses;
  };
  std::size_t shards = 0;
  std::vector<State> states(permutation_shards(q).size());
  auto cert = enumerate_permutation_orbits(field, opt, shards, [&](std::size_t i, const OrbitVisit& v) {
    if (v.counts.triples == 0) return;
    auto cs = build_structure(*field, classify(field, v.sigma).points());
    if (isolated_edges(cs).empty()) return;
    auto& st = states[i];
    if (cs.triple_count() == 1) {
      ++st.trivial;
      return;
    }
    ++st.hits;
    detail::add_witness(st.witnesses, v.sigma, opt.max_witnesses);
  });
  long long hits = 0, trivial = 0;
  for (auto& s : states) {
    hits += s.hits;
    trivial += s.trivial;
    for (auto& w : s.witnesses) detail::add_witness(rep.witnesses, w, opt.max_witnesses);
  }
  detail::finish_orbit_report(rep, cert, q);
  rep.value = Rational(hits);
  rep.details = {{"outcome", hits > 0 ? "witness" : (rep.exhaustive ? "exhausted" : "incomplete")},
                 {"nontrivial_orbits_with_isolated_edge", hits},
                 {"single_edge_orbits", trivial}};
  if (q == 3) rep.details["trivial_case"] = "every permutation graph of GF(3) is one line; its single edge is isolated";
  rep.wall_time = detail::seconds_since(t0);
  return rep;
}

/**
 * Largest maximum isolated matching over all permutations, checked against
 * (q - sqrt(q/7))/3 for q >= 5, with the smallest leftover t against sqrt(q/7).
 */
inline SearchReport max_isolated_matching_extremes(const FieldPtr& field, const SearchOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const int q = field->q();
  SearchReport rep;
  rep.q = q;
  rep.objective = "max_isolated_matching_extremes";
  rep.witness_kind = "function_table";
  rep.search_space_size = detail::factorial_string(q);
  rep.seed = opt.seed;
  struct State {
    long long best = -1, min_t = -1, violations = 0;
    std::vector<std::vector<int>> witnesses;
  };
  std::size_t shards = 0;
  std::vector<State> states(permutation_shards(q).size());
  auto cert = enumerate_permutation_orbits(field, opt, shards, [&](std::size_t i, const OrbitVisit& v) {
    auto cs = build_structure(*field, classify(field, v.sigma).points());
    auto m = max_isolated_matching(cs);
    const auto size = static_cast<long long>(m.edges.size());
    const auto t = static_cast<long long>(m.t());
    auto& st = states[i];
    if (!matching_below_bound(q, size) || 7 * t * t <= q) ++st.violations;
    if (st.min_t < 0 || t < st.min_t) st.min_t = t;
    if (size > st.best) {
      st.best = size;
      st.witnesses.clear();
    }
    if (size == st.best) detail::add_witness(st.witnesses, v.sigma, opt.max_witnesses);
  });
  long long best = -1, min_t = -1, bad = 0;
  for (auto& s : states) {
    bad += s.violations;
    if (s.min_t >= 0 && (min_t < 0 || s.min_t < min_t)) min_t = s.min_t;
    best = std::max(best, s.best);
  }
  for (auto& s : states)
    if (s.best == best)
      for (auto& w : s.witnesses) detail::add_witness(rep.witnesses, w, opt.max_witnesses);
  detail::finish_orbit_report(rep, cert, q);
  rep.value = Rational(best);
  const bool asserted = q >= 5;
  rep.details = {{"max_matching", best},
                 {"min_t", min_t},
                 {"bound", "(q - sqrt(q/7))/3"},
                 {"bound_value", (q - std::sqrt(q / 7.0)) / 3.0},
                 {"asserted", asserted},
                 {"representatives_violating", bad}};
  if (asserted && bad > 0)
    rep.violations.push_back(std::to_string(bad) + " representatives violate |M| < (q - sqrt(q/7))/3 or t > sqrt(q/7)");
  if (!asserted) rep.details["note"] = "q = 3 degenerates (the only graph is a full line); reported, not asserted";
  rep.wall_time = detail::seconds_since(t0);
  return rep;
}

/**
 * Minimum |P| over covers of the one-line-per-slope form. The vertical and the
 * slope-0 line are pinned to key 0; the remaining keys are searched depth-first
 * with the bound |P| >= q(q+1)/2 + sum over covered y of binom(mu(y)-1, 2) on
 * the partial multiplicities. Leaves record |P| by direct count.
 */
inline SearchReport min_besicovitch(const FieldPtr& field, const SearchOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  const Field& f = *field;
  const int q = f.q();
  const auto lower = besicovitch_lower_bound(q);
  SearchReport rep;
  rep.q = q;
  rep.objective = "min_besicovitch";
  rep.witness_kind = "cover_keys";
  rep.search_space_size = detail::power_string(q, q + 1);
  rep.seed = opt.seed;

  if (!opt.exhaustive) {
    std::mt19937_64 rng(opt.seed);
    long long best = -1;
    for (long long i = 0; i < opt.samples; ++i) {
      std::vector<int> keys(q + 1);
      for (auto& k : keys) k = static_cast<int>(rng() % q);
      const auto c = build_cover(field, keys);
      ++rep.nodes_visited;
      if (Rational(c.size()) < lower) rep.violations.push_back("sampled cover below the lower bound");
      if (best < 0 || c.size() < best) best = c.size(), rep.witnesses.clear();
      if (c.size() == best) detail::add_witness(rep.witnesses, keys, opt.max_witnesses);
    }
    rep.value = Rational(best);
    rep.details = {{"mode", "sampled"}, {"samples", opt.samples}, {"lower_bound", to_string(lower)},
                   {"conjectured_minimum", conjectured_minimum(q)}};
    rep.wall_time = detail::seconds_since(t0);
    return rep;
  }

  // Line point tables: line_pts[s][key] -> q point indices.
  std::vector<std::vector<std::vector<int>>> line_pts(q + 1, std::vector<std::vector<int>>(q));
  for (int s = 0; s <= q; ++s)
    for (int key = 0; key < q; ++key)
      for (const auto& p : line_points(f, {slope_from_index(s, q), Elem{static_cast<std::uint16_t>(key)}}))
        line_pts[s][key].push_back(point_index(p, q));

  const long long base = static_cast<long long>(q) * (q + 1) / 2;
  const long long seed_best = parabola_construction(field).size();
  std::vector<std::vector<int>> prefixes;
  if (q >= 5) {
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) prefixes.push_back({a, b});
  } else {
    prefixes.push_back({});
  }

  struct State {
    long long best = -1;
    long long below = 0, mismatch = 0, found = 0;
    std::vector<std::vector<int>> witnesses;
  };
  std::vector<State> states(prefixes.size());
  ExhaustionCertificate cert;
  cert.group_order = static_cast<long long>(q) * q;
  cert.reduced_space = detail::power_string(q, q - 1);
  cert.shards.assign(prefixes.size(), {});
  const long long per_shard =
      opt.budget > 0 ? (opt.budget + static_cast<long long>(prefixes.size()) - 1) / static_cast<long long>(prefixes.size())
                     : 0;

  detail::parallel_for(prefixes.size(), opt.workers, [&](std::size_t si) {
    auto& st = states[si];
    auto& rec = cert.shards[si];
    rec.prefix = prefixes[si];
    std::vector<int> mu(static_cast<std::size_t>(q) * q, 0);
    std::vector<int> keys(q + 1, 0);
    long long size = 0, excess = 0, bound = seed_best;
    auto add_line = [&](int s, int key) {
      for (int pi : line_pts[s][key]) {
        const int m = mu[pi]++;
        if (m == 0) ++size;
        excess += m >= 2 ? m - 1 : 0;
      }
    };
    auto remove_line = [&](int s, int key) {
      for (int pi : line_pts[s][key]) {
        const int m = --mu[pi];
        if (m == 0) --size;
        excess -= m >= 2 ? m - 1 : 0;
      }
    };
    // Order: vertical, slope 0, then slopes 1..q-1.
    std::vector<int> order{q, 0};
    for (int s = 1; s < q; ++s) order.push_back(s);
    const int total = q + 1;
    std::function<void(int)> descend = [&](int depth) {
      if (depth == total) {
        ++rec.leaves;
        ++rec.covered;
        ++rec.canonical_leaves;
        ++rec.orbit_sum;
        if (size != base + excess) ++st.mismatch;
        if (Rational(size) < lower) ++st.below;
        if (st.best < 0 || size < st.best) {
          st.best = size;
          st.witnesses.clear();
          st.found = 0;
        }
        if (size == st.best) {
          ++st.found;
          detail::add_witness(st.witnesses, keys, opt.max_witnesses);
        }
        bound = std::min(bound, st.best);
        return;
      }
      const int s = order[depth];
      for (int key = 0; key < q; ++key) {
        if (per_shard > 0 && rec.nodes >= per_shard) {
          rec.budget_hit = true;
          return;
        }
        add_line(s, key);
        keys[s] = key;
        ++rec.nodes;
        long long remaining = 1;
        for (int r = depth + 1; r < total; ++r) remaining *= q;
        if (base + excess > bound)
          rec.covered += remaining;
        else
          descend(depth + 1);
        remove_line(s, key);
      }
    };
    // Pinned lines plus the shard prefix (keys of slopes 1 and 2).
    add_line(q, 0);
    add_line(0, 0);
    int depth = 2;
    for (int k : prefixes[si]) {
      keys[order[depth]] = k;
      add_line(order[depth], k);
      ++depth;
    }
    ++rec.nodes;
    long long remaining = 1;
    for (int r = depth; r < total; ++r) remaining *= q;
    if (base + excess > bound)
      rec.covered += remaining;
    else
      descend(depth);
  });

  long long best = -1, below = 0, mismatch = 0, found = 0;
  for (auto& s : states) {
    below += s.below;
    mismatch += s.mismatch;
    if (s.best >= 0 && (best < 0 || s.best < best)) best = s.best;
  }
  for (auto& s : states)
    if (s.best == best) {
      found += s.found;
      for (auto& w : s.witnesses) detail::add_witness(rep.witnesses, w, opt.max_witnesses);
    }
  for (const auto& s : cert.shards) {
    rep.nodes_visited += s.nodes;
    rep.budget_exceeded |= s.budget_hit;
  }
  rep.exhaustive = !rep.budget_exceeded;
  long long reduced = 1;
  for (int i = 0; i < q - 1; ++i) reduced *= q;
  if (rep.exhaustive && cert.covered() != reduced)
    rep.violations.push_back("coverage audit failed: " + std::to_string(cert.covered()) + " of " +
                             std::to_string(reduced) + " pinned covers accounted for");
  if (below) rep.violations.push_back(std::to_string(below) + " covers below q(q+1)/2 + 5q/14 - 1/14");
  if (mismatch) rep.violations.push_back(std::to_string(mismatch) + " covers where |P| disagrees with the incidence formula");
  rep.symmetry_group_order = cert.group_order;
  rep.certificate = cert;
  rep.value = Rational(best);
  rep.details = {{"mode", "exhaustive"},
                 {"lower_bound", to_string(lower)},
                 {"conjectured_minimum", conjectured_minimum(q)},
                 {"minimal_pinned_covers", found},
                 {"initial_bound", seed_best}};
  rep.wall_time = detail::seconds_since(t0);
  return rep;
}

struct AuditCheck {
  std::string id;
  Rational lhs;
  Rational rhs;  // the check is lhs >= rhs
  bool holds() const noexcept { return lhs >= rhs; }
};

struct AuditReport {
  std::string kind;  // "permutation", "semipermutation" or "cover"
  int q = 0;
  std::vector<AuditCheck> checks;
  nlohmann::json details = nlohmann::json::object();

  bool ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.holds(); });
  }
  const AuditCheck* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

/**
 * Evaluates the quantities of the norm lower-bound argument on a permutation or
 * semipermutation graph, for the maximum isolated matching M and T = the rest:
 *   one_point_slopes  #{m in F_q* : some line of slope m meets the graph in exactly one point, lying in T}
 *                     >= 2|M| + t - ||G|| - 1   (- 3 for semipermutations)
 *   T_norm            ||T|| >= R/3   ((R-2)/3), R = #lines with |line & G| = 1 whose point is in T
 *   norm_bound        ||G|| >= (5q-1)/14   ((5q-5)/14)
 * Semipermutations must have no isolated point.
 */
inline AuditReport bound_audit(const FunctionGraph& g) {
  const Field& f = *g.field();
  const int q = f.q();
  const bool semi = g.kind() == FunctionKind::kSemipermutation;
  if (g.kind() == FunctionKind::kOther) throw WrongKind("bound audit needs a permutation or semipermutation");
  const auto cs = build_structure(f, g.points());
  if (semi && !isolated_points(cs).empty())
    throw PreconditionViolated("semipermutation graph has an isolated point");
  const auto m = max_isolated_matching(cs);
  const long long msize = static_cast<long long>(m.edges.size());
  const long long t = static_cast<long long>(m.t());

  long long slopes = 0, lines = 0;
  std::vector<int> cnt(q);
  std::vector<int> witness(q);
  for (int mi = 1; mi < q; ++mi) {
    const Slope s{false, Elem{static_cast<std::uint16_t>(mi)}};
    std::fill(cnt.begin(), cnt.end(), 0);
    for (const auto& p : g.points()) {
      const int key = line_through(f, p, s).key.v;
      if (cnt[key]++ == 0) witness[key] = point_index(p, q);
    }
    bool any = false;
    for (int key = 0; key < q; ++key)
      if (cnt[key] == 1 && m.rest.contains(point_at(witness[key], q))) {
        ++lines;
        any = true;
      }
    slopes += any;
  }
  const Rational norm = cs.norm();
  const Rational t_norm = subset_norm(f, cs, m.rest, SubsetNorm::kPointNormSum);
  const long long slack = semi ? 3 : 1;
  AuditReport rep;
  rep.kind = semi ? "semipermutation" : "permutation";
  rep.q = q;
  rep.checks.push_back({"one_point_slopes", Rational(slopes), Rational(2 * msize + t - slack) - norm});
  rep.checks.push_back({"T_norm", t_norm, Rational(lines - (semi ? 2 : 0), 3)});
  rep.checks.push_back({"norm_bound", norm, semi ? semipermutation_norm_bound(q) : permutation_norm_bound(q)});
  rep.details = {{"matching_size", msize}, {"t", t}, {"R", lines}, {"norm", to_string(norm)}};
  return rep;
}

/// Cover audit: the main lower bound, the incidence formula, at most one rho = 0, and the R >= 2 chain.
inline AuditReport bound_audit(const BesicovitchCover& c) {
  const int q = c.q();
  AuditReport rep;
  rep.kind = "cover";
  rep.q = q;
  const auto inc = incidence_size(c);
  rep.checks.push_back({"lower_bound", Rational(c.size()), besicovitch_lower_bound(q)});
  rep.checks.push_back({"incidence_formula_ge", Rational(inc.direct), Rational(inc.formula)});
  rep.checks.push_back({"incidence_formula_le", Rational(inc.formula), Rational(inc.direct)});
  rep.checks.push_back({"rho_zero_at_most_one", Rational(1), Rational(check_rho_zero(c))});
  if (c.r_min() >= 2) {
    const auto a = r_ge2_bound_audit(c);
    rep.checks.push_back({"rho_sum_bound", a.size, a.rho_bound});
    rep.checks.push_back({"r_ge2_bound", a.rho_bound, a.final_bound});
  }
  rep.details = {{"size", c.size()}, {"R", c.r_min()}};
  return rep;
}

}  // namespace kakeyalab
