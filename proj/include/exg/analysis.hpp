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

#ifndef EXG_ANALYSIS_HPP
#define EXG_ANALYSIS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exg/graph.hpp"

namespace exg::analysis {

struct VertexLabel {
  ExecId exec_id = 0;
  RegionId region_id = 0;
};

/// Plain directed graph over vertices 0..n-1. No self loops, no parallel
/// edges. labels (if present) tie vertices back to task instances;
/// edge_kinds (if present) carries the dependency kinds merged into each
/// edge. Both survive quotienting where that makes sense.
struct Digraph {
  int n = 0;
  std::vector<std::vector<int>> succ;  // sorted, unique
  std::vector<VertexLabel> labels;     // size n, or empty
  std::map<std::pair<int, int>, KindMask> edge_kinds;  // optional

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  std::size_t edge_count() const;
  std::vector<std::vector<int>> predecessors() const;
};

/// Vertices of the execution graph sorted by execution id become
/// vertices 0..n-1; parallel kinds merge into edge_kinds masks.
Digraph from_execution_graph(const ExecutionGraph& g,
                             KindMask kinds = kAllKinds);

/// Pairwise "is there a directed path of length >= 1" relation.
class Reachability {
 public:
  explicit Reachability(const Digraph& g);

  bool reach(int u, int v) const {
    return (bits_[static_cast<std::size_t>(u) * words_ + v / 64] >>
            (v % 64)) & 1u;
  }
  int size() const { return n_; }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Neither vertex reaches the other. Throws SamePair when u == v.
bool independent(const Reachability& r, int u, int v);

/// All vertices independent of v, plus v itself; ascending order.
std::vector<int> independence_class(const Reachability& r, int v);

/// Pairwise independence of a non-empty vertex set (duplicates collapse).
bool is_independent_set(const Reachability& r, std::span<const int> set);

/// True iff the set equals the intersection of the independence classes
/// of its members (the fixed-point characterisation of maximality).
bool is_maximally_independent(const Reachability& r, std::span<const int> set);

bool is_dag(const Digraph& g);

/// Every independence class is a singleton / the whole vertex set.
/// Both require a DAG and are vacuously true on the empty graph.
bool is_completely_serial(const Digraph& g);
bool is_completely_parallel(const Digraph& g);

/// Blocks in canonical form: members ascending, blocks ordered by their
/// smallest member.
struct Partition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of;

  static Partition singletons(int n);
  /// Builds canonical blocks from an arbitrary block id per vertex.
  static Partition from_block_of(const std::vector<int>& raw_ids);

  int size() const { return static_cast<int>(blocks.size()); }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Quotient: vertex i of graph is blocks.blocks[i]; edges between distinct
/// blocks deduplicate, intra-block edges disappear. edge_kinds masks merge.
struct QuotientGraph {
  Digraph graph;
  Partition blocks;
};

/// Throws InvalidPartition unless p partitions 0..g.n-1 exactly.
QuotientGraph quotient(const Digraph& g, const Partition& p);

/// g must be a DAG (else NotADag); true iff the quotient stays acyclic.
bool is_dag_preserving(const Digraph& g, const Partition& p);

/// Permutation group data. generators never includes the identity;
/// orbits are the connected components of "some generator maps x to y".
/// order is filled only when requested.
struct AutGroup {
  std::vector<std::vector<int>> generators;
  Partition orbits;
  std::optional<std::uint64_t> order;

  bool trivial() const { return generators.empty(); }
};

/// Edge-preserving vertex bijections of the unlabeled digraph.
///
/// Colour refinement narrows candidates, then a backtracking search finds,
/// per refinement cell, one automorphism for every orbit-mate of the cell's
/// representatives; that is enough for exact orbits and triviality. With
/// with_order set, a full stabilizer-chain sweep runs instead, making the
/// generators a strong generating set and order the exact group size.
AutGroup automorphism_group(const Digraph& g, bool with_order = false);

/// Checks every vertex permutation; n <= 8 or TooLarge. order is exact.
AutGroup brute_force_automorphisms(const Digraph& g);

/// Result of iterating "replace the graph by its quotient under the
/// automorphism orbits" until the group goes trivial.
struct SymmetryReduction {
  /// Final quotient; its blocks live on the ORIGINAL vertex set.
  QuotientGraph final_quotient;
  /// Orbit partition used at each iteration, on that iteration's vertices.
  std::vector<Partition> level_partitions;
  /// Accumulated partition of the original vertices.
  Partition composed;
  int iterations = 0;
};

/// Requires a DAG. Terminates because each round with a non-trivial group
/// strictly shrinks the graph; every intermediate quotient stays a DAG.
SymmetryReduction reduce_by_symmetry(const Digraph& g);

/// Cost of running a block of tasks: 1 if they are pairwise independent
/// (can all run at once), else the block size. Empty blocks throw EmptySet.
std::int64_t exec_time_of_block(const Reachability& r,
                                std::span<const int> block);

/// Sum of block costs over a partition of g's vertices.
std::int64_t exec_time_of_partition(const Digraph& g, const Partition& p);

/// Number of vertices on a longest directed path. Throws EmptyGraph on
/// n == 0 and NotADag on cyclic input.
int longest_path_vertices(const Digraph& g);

/// True iff the graph is one simple path v1 -> v2 -> ... -> vk (k >= 1).
bool is_chain(const Digraph& g);
inline bool is_chain(const QuotientGraph& q) { return is_chain(q.graph); }

struct AnalysisReport {
  TraceId trace_id = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  bool is_dag = false;
  bool completely_serial = false;
  bool completely_parallel = false;
  int longest_path = 0;
  std::vector<std::pair<ExecId, int>> ind_class_sizes;  // by exec id

  int iterations = 0;
  std::size_t final_quotient_size = 0;
  std::string classification;  // "parallel" | "chain" | "other"
  bool chain = false;
  std::int64_t composed_exec_time = 0;
  std::vector<std::vector<ExecId>> composed_blocks;  // member exec ids

  struct QuotientEdge {
    int from = 0;
    int to = 0;
    KindMask kinds = 0;
    friend bool operator==(const QuotientEdge&, const QuotientEdge&) = default;
  };
  std::vector<QuotientEdge> final_quotient_edges;
};

/// Full pipeline over the RAW(+EXT) projection of an execution graph:
/// serial/parallel classification, independence class sizes, longest path,
/// symmetry reduction and the execution-time score of the composed blocks
/// (always scored against the ORIGINAL graph's reachability). When the
/// final quotient is a chain over pairwise-independent composed blocks,
/// the score must equal the longest path; a mismatch is an InternalError.
AnalysisReport analyze(const ExecutionGraph& g);

void write_report(const AnalysisReport& report, std::ostream& os);
AnalysisReport read_report(std::istream& is);
void write_report_file(const AnalysisReport& report, const std::string& path);
AnalysisReport read_report_file(const std::string& path);

/// One-line human summary of a report (used by the analyze command).
std::string summary_line(const AnalysisReport& report);

}  // namespace exg::analysis

#endif  // EXG_ANALYSIS_HPP
