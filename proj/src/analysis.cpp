/*
Copyright 2026 The exg authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "exg/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "json.hpp"

namespace exg::analysis {

// ---------------------------------------------------------------------------
// Digraph basics

void Digraph::add_edge(int u, int v) {
  auto& row = succ[u];
  auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) row.insert(it, v);
}

bool Digraph::has_edge(int u, int v) const {
  const auto& row = succ[u];
  return std::binary_search(row.begin(), row.end(), v);
}

std::size_t Digraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& row : succ) total += row.size();
  return total;
}

std::vector<std::vector<int>> Digraph::predecessors() const {
  std::vector<std::vector<int>> pred(n);
  for (int u = 0; u < n; ++u) {
    for (int v : succ[u]) pred[v].push_back(u);
  }
  return pred;
}

Digraph from_execution_graph(const ExecutionGraph& g, KindMask kinds) {
  Digraph d;
  d.n = static_cast<int>(g.vertex_count());
  d.succ.assign(d.n, {});
  d.labels.reserve(d.n);
  std::map<ExecId, int> index;
  for (const auto& [id, v] : g.vertices()) {
    index.emplace(id, static_cast<int>(d.labels.size()));
    d.labels.push_back(VertexLabel{v.exec_id, v.region_id});
  }
  for (const Edge& e : g.edges()) {
    if (!(kinds & kind_bit(e.kind))) continue;
    int u = index.at(e.from.exec_id);
    int v = index.at(e.to.exec_id);
    d.add_edge(u, v);
    d.edge_kinds[{u, v}] |= kind_bit(e.kind);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Reachability: bitset transitive closure (works on cyclic graphs too)

Reachability::Reachability(const Digraph& g)
    : n_(g.n), words_((g.n + 63) / 64) {
  bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
  for (int u = 0; u < n_; ++u) {
    for (int v : g.succ[u]) {
      bits_[static_cast<std::size_t>(u) * words_ + v / 64] |= 1ull << (v % 64);
    }
  }
  for (int k = 0; k < n_; ++k) {
    const std::uint64_t* row_k = &bits_[static_cast<std::size_t>(k) * words_];
    for (int i = 0; i < n_; ++i) {
      std::uint64_t* row_i = &bits_[static_cast<std::size_t>(i) * words_];
      if ((row_i[k / 64] >> (k % 64)) & 1u) {
        for (int w = 0; w < words_; ++w) row_i[w] |= row_k[w];
      }
    }
  }
}

namespace {

void check_vertex(const Reachability& r, int v) {
  if (v < 0 || v >= r.size()) {
    throw Error("vertex index " + std::to_string(v) + " out of range");
  }
}

std::vector<int> dedupe_sorted(std::span<const int> set) {
  std::vector<int> s(set.begin(), set.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

bool independent(const Reachability& r, int u, int v) {
  check_vertex(r, u);
  check_vertex(r, v);
  if (u == v) {
    throw SamePair("independence is defined for distinct vertices");
  }
  return !r.reach(u, v) && !r.reach(v, u);
}

std::vector<int> independence_class(const Reachability& r, int v) {
  check_vertex(r, v);
  std::vector<int> out;
  for (int u = 0; u < r.size(); ++u) {
    if (u == v || independent(r, u, v)) out.push_back(u);
  }
  return out;
}

bool is_independent_set(const Reachability& r, std::span<const int> set) {
  if (set.empty()) throw EmptySet("empty vertex set");
  std::vector<int> s = dedupe_sorted(set);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!independent(r, s[i], s[j])) return false;
    }
  }
  return true;
}

bool is_maximally_independent(const Reachability& r,
                              std::span<const int> set) {
  if (set.empty()) throw EmptySet("empty vertex set");
  std::vector<int> s = dedupe_sorted(set);
  // Fixed point test: the set must equal the intersection of the
  // independence classes of its members.
  std::vector<int> inter = independence_class(r, s[0]);
  for (std::size_t i = 1; i < s.size() && !inter.empty(); ++i) {
    std::vector<int> cls = independence_class(r, s[i]);
    std::vector<int> next;
    std::set_intersection(inter.begin(), inter.end(), cls.begin(), cls.end(),
                          std::back_inserter(next));
    inter = std::move(next);
  }
  return inter == s;
}

// ---------------------------------------------------------------------------
// DAG checks

namespace {

std::optional<std::vector<int>> topological_order(const Digraph& g) {
  std::vector<int> indeg(g.n, 0);
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.succ[u]) ++indeg[v];
  }
  std::vector<int> queue;
  for (int v = 0; v < g.n; ++v) {
    if (indeg[v] == 0) queue.push_back(v);
  }
  std::vector<int> order;
  order.reserve(g.n);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    order.push_back(u);
    for (int v : g.succ[u]) {
      if (--indeg[v] == 0) queue.push_back(v);
    }
  }
  if (static_cast<int>(order.size()) != g.n) return std::nullopt;
  return order;
}

}  // namespace

bool is_dag(const Digraph& g) { return topological_order(g).has_value(); }

namespace {

// Independence class sizes for every vertex, sharing one closure.
std::vector<int> class_sizes(const Reachability& r) {
  std::vector<int> sizes(r.size(), 0);
  for (int v = 0; v < r.size(); ++v) {
    int count = 1;
    for (int u = 0; u < r.size(); ++u) {
      if (u != v && !r.reach(u, v) && !r.reach(v, u)) ++count;
    }
    sizes[v] = count;
  }
  return sizes;
}

}  // namespace

bool is_completely_serial(const Digraph& g) {
  if (!is_dag(g)) throw NotADag("classification requires an acyclic graph");
  Reachability r(g);
  for (int size : class_sizes(r)) {
    if (size != 1) return false;
  }
  return true;
}

bool is_completely_parallel(const Digraph& g) {
  if (!is_dag(g)) throw NotADag("classification requires an acyclic graph");
  Reachability r(g);
  for (int size : class_sizes(r)) {
    if (size != g.n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Partitions and quotients

Partition Partition::singletons(int n) {
  Partition p;
  p.blocks.resize(n);
  p.block_of.resize(n);
  for (int v = 0; v < n; ++v) {
    p.blocks[v] = {v};
    p.block_of[v] = v;
  }
  return p;
}

Partition Partition::from_block_of(const std::vector<int>& raw_ids) {
  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < static_cast<int>(raw_ids.size()); ++v) {
    groups[raw_ids[v]].push_back(v);
  }
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (auto& [id, members] : groups) blocks.push_back(std::move(members));
  // Canonical order: by smallest member. Members are ascending already.
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Partition p;
  p.block_of.assign(raw_ids.size(), -1);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (int v : blocks[b]) p.block_of[v] = b;
  }
  p.blocks = std::move(blocks);
  return p;
}

namespace {

void validate_partition(int n, const Partition& p) {
  if (static_cast<int>(p.block_of.size()) != n) {
    throw InvalidPartition("partition covers a different vertex count");
  }
  std::size_t total = 0;
  for (int b = 0; b < p.size(); ++b) {
    const auto& block = p.blocks[b];
    if (block.empty()) throw InvalidPartition("empty block");
    total += block.size();
    for (int v : block) {
      if (v < 0 || v >= n) throw InvalidPartition("block member out of range");
      if (p.block_of[v] != b) {
        throw InvalidPartition("block_of disagrees with block membership");
      }
    }
  }
  if (total != static_cast<std::size_t>(n)) {
    throw InvalidPartition("blocks do not partition the vertex set");
  }
}

}  // namespace

QuotientGraph quotient(const Digraph& g, const Partition& p) {
  validate_partition(g.n, p);
  Digraph q;
  q.n = p.size();
  q.succ.assign(q.n, {});
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.succ[u]) {
      int bu = p.block_of[u];
      int bv = p.block_of[v];
      if (bu != bv) q.add_edge(bu, bv);
    }
  }
  for (const auto& [uv, mask] : g.edge_kinds) {
    int bu = p.block_of[uv.first];
    int bv = p.block_of[uv.second];
    if (bu != bv) q.edge_kinds[{bu, bv}] |= mask;
  }
  return QuotientGraph{std::move(q), p};
}

bool is_dag_preserving(const Digraph& g, const Partition& p) {
  if (!is_dag(g)) throw NotADag("input graph must be acyclic");
  return is_dag(quotient(g, p).graph);
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

struct AdjBits {
  int n = 0;
  int w = 0;
  std::vector<std::uint64_t> fwd;

  explicit AdjBits(const Digraph& g) : n(g.n), w((g.n + 63) / 64) {
    fwd.assign(static_cast<std::size_t>(n) * w, 0);
    for (int u = 0; u < n; ++u) {
      for (int v : g.succ[u]) {
        fwd[static_cast<std::size_t>(u) * w + v / 64] |= 1ull << (v % 64);
      }
    }
  }

  bool edge(int u, int v) const {
    return (fwd[static_cast<std::size_t>(u) * w + v / 64] >> (v % 64)) & 1u;
  }
};

// One colour refinement run over the same graph for two initial
// colourings, kept in lockstep so colour ids stay comparable between the
// two sides. Each round recolours by (own colour, successor colour
// multiset, predecessor colour multiset); ids are assigned from the
// sorted union of both sides' signatures. Returns false as soon as the
// signature multisets diverge, i.e. no automorphism can match the pins.
bool refine_lockstep(const Digraph& g, std::vector<int>& a,
                     std::vector<int>& b) {
  const int n = g.n;
  const auto pred = g.predecessors();

  auto signature = [&](const std::vector<int>& color, int v) {
    std::vector<int> sig;
    sig.reserve(2 + g.succ[v].size() + pred[v].size());
    sig.push_back(color[v]);
    std::vector<int> nb;
    nb.reserve(g.succ[v].size());
    for (int u : g.succ[v]) nb.push_back(color[u]);
    std::sort(nb.begin(), nb.end());
    sig.push_back(-1);
    sig.insert(sig.end(), nb.begin(), nb.end());
    nb.clear();
    for (int u : pred[v]) nb.push_back(color[u]);
    std::sort(nb.begin(), nb.end());
    sig.push_back(-2);
    sig.insert(sig.end(), nb.begin(), nb.end());
    return sig;
  };

  auto distinct = [](const std::vector<int>& color) {
    std::vector<int> c = color;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c.size();
  };

  while (true) {
    std::vector<std::vector<int>> sig_a(n), sig_b(n);
    for (int v = 0; v < n; ++v) {
      sig_a[v] = signature(a, v);
      sig_b[v] = signature(b, v);
    }
    std::vector<std::vector<int>> all;
    all.reserve(2 * n);
    all.insert(all.end(), sig_a.begin(), sig_a.end());
    all.insert(all.end(), sig_b.begin(), sig_b.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    std::vector<int> na(n), nb(n);
    for (int v = 0; v < n; ++v) {
      na[v] = static_cast<int>(
          std::lower_bound(all.begin(), all.end(), sig_a[v]) - all.begin());
      nb[v] = static_cast<int>(
          std::lower_bound(all.begin(), all.end(), sig_b[v]) - all.begin());
    }

    std::vector<int> ha = na, hb = nb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return false;

    bool stable = distinct(na) == distinct(a);
    a = std::move(na);
    b = std::move(nb);
    if (stable) return true;
  }
}

// Backtracking search for a single automorphism honouring the pinned
// images. Complete: returns a permutation iff one exists.
class AutSearch {
 public:
  AutSearch(const Digraph& g, const AdjBits& adj) : g_(g), adj_(adj) {}

  std::optional<std::vector<int>> find(
      const std::vector<int>& base,
      const std::vector<std::pair<int, int>>& pins) {
    const int n = g_.n;
    std::vector<int> ca = base, cb = base;
    for (std::size_t i = 0; i < pins.size(); ++i) {
      auto [s, d] = pins[i];
      if (base[s] != base[d]) return std::nullopt;
      // individualize each pinned vertex with its own fresh colour
      ca[s] = n + static_cast<int>(i);
      cb[d] = n + static_cast<int>(i);
    }
    if (!refine_lockstep(g_, ca, cb)) return std::nullopt;
    ca_ = std::move(ca);

    int ncolors = 0;
    for (int v = 0; v < n; ++v) ncolors = std::max(ncolors, ca_[v] + 1);
    for (int v = 0; v < n; ++v) ncolors = std::max(ncolors, cb[v] + 1);
    by_color_b_.assign(ncolors, {});
    for (int v = 0; v < n; ++v) by_color_b_[cb[v]].push_back(v);

    perm_.assign(n, -1);
    used_.assign(n, false);
    assigned_.clear();
    for (auto [s, d] : pins) {
      if (perm_[s] != -1) {
        if (perm_[s] == d) continue;
        return std::nullopt;
      }
      if (used_[d] || ca_[s] != cb[d] || !consistent(s, d)) {
        return std::nullopt;
      }
      assign(s, d);
    }

    order_.clear();
    std::vector<int> cell_size(ncolors, 0);
    for (int v = 0; v < n; ++v) ++cell_size[ca_[v]];
    for (int v = 0; v < n; ++v) {
      if (perm_[v] == -1) order_.push_back(v);
    }
    std::sort(order_.begin(), order_.end(), [&](int x, int y) {
      if (cell_size[ca_[x]] != cell_size[ca_[y]]) {
        return cell_size[ca_[x]] < cell_size[ca_[y]];
      }
      if (ca_[x] != ca_[y]) return ca_[x] < ca_[y];
      return x < y;
    });

    if (!backtrack(0)) return std::nullopt;
    return perm_;
  }

 private:
  bool consistent(int x, int y) const {
    for (int a : assigned_) {
      int b = perm_[a];
      if (adj_.edge(a, x) != adj_.edge(b, y)) return false;
      if (adj_.edge(x, a) != adj_.edge(y, b)) return false;
    }
    return true;
  }

  void assign(int x, int y) {
    perm_[x] = y;
    used_[y] = true;
    assigned_.push_back(x);
  }

  void unassign(int x) {
    used_[perm_[x]] = false;
    perm_[x] = -1;
    assigned_.pop_back();
  }

  bool backtrack(std::size_t idx) {
    if (idx == order_.size()) return true;
    int x = order_[idx];
    for (int y : by_color_b_[ca_[x]]) {
      if (used_[y] || !consistent(x, y)) continue;
      assign(x, y);
      if (backtrack(idx + 1)) return true;
      unassign(x);
    }
    return false;
  }

  const Digraph& g_;
  const AdjBits& adj_;
  std::vector<int> ca_;
  std::vector<std::vector<int>> by_color_b_;
  std::vector<int> perm_;
  std::vector<char> used_;
  std::vector<int> assigned_;
  std::vector<int> order_;
};

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller index wins, keeps orbits canonical
  }
};

Partition partition_from_union_find(UnionFind& uf, int n) {
  std::vector<int> raw(n);
  for (int v = 0; v < n; ++v) raw[v] = uf.find(v);
  return Partition::from_block_of(raw);
}

}  // namespace

AutGroup automorphism_group(const Digraph& g, bool with_order) {
  const int n = g.n;
  AutGroup out;
  if (n == 0) {
    out.orbits = Partition::singletons(0);
    if (with_order) out.order = 1;
    return out;
  }

  AdjBits adj(g);
  std::vector<int> base(n, 0);
  {
    std::vector<int> twin = base;
    refine_lockstep(g, base, twin);
  }
  AutSearch search(g, adj);
  UnionFind uf(n);

  if (!with_order) {
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < n; ++v) cells[base[v]].push_back(v);
    for (const auto& [color, cell] : cells) {
      std::set<int> done;
      for (std::size_t i = 0; i < cell.size(); ++i) {
        int v = cell[i];
        if (done.count(uf.find(v))) continue;
        for (std::size_t j = i + 1; j < cell.size(); ++j) {
          int u = cell[j];
          if (uf.find(u) == uf.find(v)) continue;
          auto p = search.find(base, {{v, u}});
          if (p) {
            for (int x = 0; x < n; ++x) uf.unite(x, (*p)[x]);
            out.generators.push_back(std::move(*p));
          }
        }
        done.insert(uf.find(v));
      }
    }
  } else {
    // Stabilizer chain over the vertices in index order: the found
    // automorphisms form a strong generating set and the group order is
    // the product of the per-level orbit sizes.
    std::uint64_t order = 1;
    std::vector<std::pair<int, int>> prefix;
    for (int v = 0; v < n; ++v) {
      std::uint64_t level = 1;
      for (int u = v + 1; u < n; ++u) {
        if (base[u] != base[v]) continue;
        auto pins = prefix;
        pins.emplace_back(v, u);
        auto p = search.find(base, pins);
        if (p) {
          ++level;
          for (int x = 0; x < n; ++x) uf.unite(x, (*p)[x]);
          out.generators.push_back(std::move(*p));
        }
      }
      order *= level;
      prefix.emplace_back(v, v);
    }
    out.order = order;
  }

  out.orbits = partition_from_union_find(uf, n);
  return out;
}

AutGroup brute_force_automorphisms(const Digraph& g) {
  const int n = g.n;
  if (n > 8) {
    throw TooLarge("brute force automorphism search is capped at 8 vertices");
  }
  AutGroup out;
  if (n == 0) {
    out.orbits = Partition::singletons(0);
    out.order = 1;
    return out;
  }

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int u = 0; u < n; ++u) {
    for (int v : g.succ[u]) adj[u][v] = 1;
  }

  UnionFind uf(n);
  std::uint64_t count = 0;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> identity = perm;
  do {
    bool ok = true;
    for (int u = 0; u < n && ok; ++u) {
      for (int v = 0; v < n && ok; ++v) {
        if (adj[u][v] != adj[perm[u]][perm[v]]) ok = false;
      }
    }
    if (!ok) continue;
    ++count;
    if (perm != identity) {
      for (int x = 0; x < n; ++x) uf.unite(x, perm[x]);
      out.generators.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  out.order = count;
  out.orbits = partition_from_union_find(uf, n);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetry reduction

SymmetryReduction reduce_by_symmetry(const Digraph& g) {
  if (!is_dag(g)) throw NotADag("symmetry reduction requires an acyclic graph");

  SymmetryReduction res;
  res.composed = Partition::singletons(g.n);
  Digraph q = g;
  while (true) {
    AutGroup aut = automorphism_group(q);
    if (aut.trivial()) break;
    res.level_partitions.push_back(aut.orbits);
    std::vector<int> raw(g.n);
    for (int v = 0; v < g.n; ++v) {
      raw[v] = aut.orbits.block_of[res.composed.block_of[v]];
    }
    res.composed = Partition::from_block_of(raw);
    q = quotient(q, aut.orbits).graph;
    ++res.iterations;
  }
  res.final_quotient = QuotientGraph{std::move(q), res.composed};
  return res;
}

// ---------------------------------------------------------------------------
// Cost and shape

std::int64_t exec_time_of_block(const Reachability& r,
                                std::span<const int> block) {
  if (block.empty()) throw EmptySet("empty block");
  std::vector<int> s = dedupe_sorted(block);
  if (s.size() == 1 || is_independent_set(r, s)) return 1;
  return static_cast<std::int64_t>(s.size());
}

std::int64_t exec_time_of_partition(const Digraph& g, const Partition& p) {
  validate_partition(g.n, p);
  Reachability r(g);
  std::int64_t total = 0;
  for (const auto& block : p.blocks) total += exec_time_of_block(r, block);
  return total;
}

int longest_path_vertices(const Digraph& g) {
  if (g.n == 0) throw EmptyGraph("longest path needs at least one vertex");
  auto order = topological_order(g);
  if (!order) throw NotADag("longest path requires an acyclic graph");
  std::vector<int> dist(g.n, 1);
  for (int u : *order) {
    for (int v : g.succ[u]) dist[v] = std::max(dist[v], dist[u] + 1);
  }
  return *std::max_element(dist.begin(), dist.end());
}

bool is_chain(const Digraph& g) {
  if (g.n == 0) return false;
  if (g.edge_count() != static_cast<std::size_t>(g.n) - 1) return false;
  std::vector<int> indeg(g.n, 0);
  int source = -1;
  for (int u = 0; u < g.n; ++u) {
    if (g.succ[u].size() > 1) return false;
    for (int v : g.succ[u]) ++indeg[v];
  }
  for (int v = 0; v < g.n; ++v) {
    if (indeg[v] > 1) return false;
    if (indeg[v] == 0) {
      if (source != -1) return false;
      source = v;
    }
  }
  if (source == -1) return false;
  // Walk the unique successor pointers; a chain covers every vertex.
  int visited = 1;
  int at = source;
  while (!g.succ[at].empty()) {
    at = g.succ[at].front();
    ++visited;
    if (visited > g.n) return false;
  }
  return visited == g.n;
}

// ---------------------------------------------------------------------------
// Full pipeline

AnalysisReport analyze(const ExecutionGraph& eg) {
  Digraph g = from_execution_graph(
      eg, kind_bit(DependencyKind::RAW) | kind_bit(DependencyKind::EXT));

  AnalysisReport rep;
  rep.trace_id = eg.trace_id();
  rep.vertex_count = static_cast<std::size_t>(g.n);
  rep.edge_count = g.edge_count();
  rep.is_dag = is_dag(g);
  if (!rep.is_dag) throw NotADag("analysis requires an acyclic graph");
  if (g.n == 0) throw EmptyGraph("analysis needs at least one task");

  Reachability r(g);
  std::vector<int> sizes = class_sizes(r);
  rep.completely_serial = true;
  rep.completely_parallel = true;
  rep.ind_class_sizes.reserve(g.n);
  for (int v = 0; v < g.n; ++v) {
    if (sizes[v] != 1) rep.completely_serial = false;
    if (sizes[v] != g.n) rep.completely_parallel = false;
    rep.ind_class_sizes.emplace_back(g.labels[v].exec_id, sizes[v]);
  }

  rep.longest_path = longest_path_vertices(g);

  SymmetryReduction sym = reduce_by_symmetry(g);
  rep.iterations = sym.iterations;
  rep.final_quotient_size = static_cast<std::size_t>(sym.final_quotient.graph.n);
  rep.chain = is_chain(sym.final_quotient.graph);
  rep.classification = rep.final_quotient_size == 1 ? "parallel"
                       : rep.chain                  ? "chain"
                                                    : "other";

  bool all_independent = true;
  rep.composed_exec_time = 0;
  for (const auto& block : sym.composed.blocks) {
    rep.composed_exec_time += exec_time_of_block(r, block);
    if (block.size() > 1 && !is_independent_set(r, block)) {
      all_independent = false;
    }
    std::vector<ExecId> ids;
    ids.reserve(block.size());
    for (int v : block) ids.push_back(g.labels[v].exec_id);
    rep.composed_blocks.push_back(std::move(ids));
  }

  // A chain of independent blocks schedules one block per step, so its
  // cost must be exactly the longest path. Anything else is a bug.
  if (rep.chain && all_independent &&
      rep.composed_exec_time != rep.longest_path) {
    throw InternalError("chain quotient cost diverges from the longest path");
  }

  const Digraph& q = sym.final_quotient.graph;
  for (int u = 0; u < q.n; ++u) {
    for (int v : q.succ[u]) {
      KindMask mask = 0;
      auto it = q.edge_kinds.find({u, v});
      if (it != q.edge_kinds.end()) mask = it->second;
      rep.final_quotient_edges.push_back({u, v, mask});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Report file

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json kinds_to_json(KindMask mask) {
  ordered_json arr = ordered_json::array();
  for (DependencyKind k : {DependencyKind::RAW, DependencyKind::WAR,
                           DependencyKind::WAW, DependencyKind::EXT}) {
    if (mask & kind_bit(k)) arr.push_back(to_string(k));
  }
  return arr;
}

KindMask kinds_from_json(const ordered_json& arr) {
  KindMask mask = 0;
  for (const auto& item : arr) {
    auto kind = dependency_kind_from_string(item.get_ref<const std::string&>());
    if (!kind) throw MalformedReport("report: unknown dependency kind");
    mask |= kind_bit(*kind);
  }
  return mask;
}

}  // namespace

void write_report(const AnalysisReport& rep, std::ostream& os) {
  ordered_json j;
  j["version"] = 1;
  j["type"] = "report";
  j["trace_id"] = rep.trace_id;
  j["vertex_count"] = rep.vertex_count;
  j["edge_count"] = rep.edge_count;
  j["is_dag"] = rep.is_dag;
  j["completely_serial"] = rep.completely_serial;
  j["completely_parallel"] = rep.completely_parallel;
  j["longest_path_vertices"] = rep.longest_path;
  auto& classes = j["ind_class_sizes"] = ordered_json::array();
  for (const auto& [exec_id, size] : rep.ind_class_sizes) {
    ordered_json jc;
    jc["exec_id"] = exec_id;
    jc["size"] = size;
    classes.push_back(std::move(jc));
  }
  ordered_json sym;
  sym["iterations"] = rep.iterations;
  sym["final_quotient_size"] = rep.final_quotient_size;
  sym["classification"] = rep.classification;
  sym["chain"] = rep.chain;
  sym["composed_exec_time"] = rep.composed_exec_time;
  auto& blocks = sym["composed_blocks"] = ordered_json::array();
  for (const auto& block : rep.composed_blocks) blocks.push_back(block);
  auto& edges = sym["final_quotient_edges"] = ordered_json::array();
  for (const auto& e : rep.final_quotient_edges) {
    ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    je["kinds"] = kinds_to_json(e.kinds);
    edges.push_back(std::move(je));
  }
  j["sym_explore"] = std::move(sym);
  os << j.dump(2) << '\n';
}

AnalysisReport read_report(std::istream& is) {
  ordered_json j;
  try {
    j = ordered_json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedReport(std::string("report file: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("type", "") != "report") {
      throw MalformedReport("report file: not a report document");
    }
    if (j.at("version").get<std::uint64_t>() != 1) {
      throw MalformedReport("report file: unsupported version");
    }
    AnalysisReport rep;
    rep.trace_id = j.at("trace_id").get<TraceId>();
    rep.vertex_count = j.at("vertex_count").get<std::size_t>();
    rep.edge_count = j.at("edge_count").get<std::size_t>();
    rep.is_dag = j.at("is_dag").get<bool>();
    rep.completely_serial = j.at("completely_serial").get<bool>();
    rep.completely_parallel = j.at("completely_parallel").get<bool>();
    rep.longest_path = j.at("longest_path_vertices").get<int>();
    for (const auto& jc : j.at("ind_class_sizes")) {
      rep.ind_class_sizes.emplace_back(jc.at("exec_id").get<ExecId>(),
                                       jc.at("size").get<int>());
    }
    const auto& sym = j.at("sym_explore");
    rep.iterations = sym.at("iterations").get<int>();
    rep.final_quotient_size = sym.at("final_quotient_size").get<std::size_t>();
    rep.classification = sym.at("classification").get<std::string>();
    rep.chain = sym.at("chain").get<bool>();
    rep.composed_exec_time = sym.at("composed_exec_time").get<std::int64_t>();
    for (const auto& jb : sym.at("composed_blocks")) {
      rep.composed_blocks.push_back(jb.get<std::vector<ExecId>>());
    }
    for (const auto& je : sym.at("final_quotient_edges")) {
      rep.final_quotient_edges.push_back({je.at("from").get<int>(),
                                          je.at("to").get<int>(),
                                          kinds_from_json(je.at("kinds"))});
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedReport(std::string("report file: ") + e.what());
  }
}

void write_report_file(const AnalysisReport& rep, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_report(rep, os);
  if (!os) throw Error("failed writing '" + path + "'");
}

AnalysisReport read_report_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "' for reading");
  return read_report(is);
}

std::string summary_line(const AnalysisReport& rep) {
  auto yesno = [](bool b) { return b ? "true" : "false"; };
  std::string s;
  s += "trace_id=" + std::to_string(rep.trace_id);
  s += " vertices=" + std::to_string(rep.vertex_count);
  s += " edges=" + std::to_string(rep.edge_count);
  s += " completely_serial=" + std::string(yesno(rep.completely_serial));
  s += " completely_parallel=" + std::string(yesno(rep.completely_parallel));
  s += " classification=" + rep.classification;
  s += " chain=" + std::string(yesno(rep.chain));
  s += " final_quotient_size=" + std::to_string(rep.final_quotient_size);
  s += " ExecT=" + std::to_string(rep.composed_exec_time);
  s += " longest_path=" + std::to_string(rep.longest_path);
  return s;
}

}  // namespace exg::analysis
