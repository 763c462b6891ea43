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

#ifndef EXG_GRAPH_HPP
#define EXG_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "exg/trace.hpp"

namespace exg {

enum class DependencyKind : std::uint8_t { RAW = 0, WAR = 1, WAW = 2, EXT = 3 };

const char* to_string(DependencyKind kind);
std::optional<DependencyKind> dependency_kind_from_string(std::string_view s);

/// Small bitmask over DependencyKind values.
using KindMask = unsigned;

constexpr KindMask kind_bit(DependencyKind k) {
  return 1u << static_cast<unsigned>(k);
}

inline constexpr KindMask kAllKinds =
    kind_bit(DependencyKind::RAW) | kind_bit(DependencyKind::WAR) |
    kind_bit(DependencyKind::WAW) | kind_bit(DependencyKind::EXT);

struct Edge {
  TaskInstance from;
  TaskInstance to;
  DependencyKind kind = DependencyKind::RAW;
};

/// Task instances plus typed dependency edges for one trace region.
///
/// Vertices are keyed by execution id; edges are unique per
/// (from, to, kind) triple and never connect a vertex to itself.
class ExecutionGraph {
 public:
  explicit ExecutionGraph(TraceId trace_id = 0) : trace_id_(trace_id) {}

  TraceId trace_id() const { return trace_id_; }

  void add_vertex(TaskInstance t);
  bool has_vertex(ExecId id) const { return vertices_.count(id) != 0; }

  /// Inserts both endpoints and the edge; duplicate triples collapse.
  /// Throws SelfDependency when from and to share an execution id.
  void add_dependency(TaskInstance from, TaskInstance to, DependencyKind kind);

  bool has_edge(ExecId from, ExecId to, DependencyKind kind) const;

  /// Vertices in ascending execution id order.
  const std::map<ExecId, TaskInstance>& vertices() const { return vertices_; }

  /// Edges sorted by (from, to, kind).
  std::vector<Edge> edges() const;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  friend bool operator==(const ExecutionGraph& a, const ExecutionGraph& b);

 private:
  TraceId trace_id_ = 0;
  std::map<ExecId, TaskInstance> vertices_;
  std::set<std::tuple<ExecId, ExecId, std::uint8_t>> edges_;
};

/// How the per-address history reacts to a new access.
///
/// LastAccess keeps one (task, kind) entry per address: a read following a
/// read yields nothing, so only the first reader after a write picks up the
/// RAW dependency. MultiReader keeps the last writer plus every reader seen
/// since that write, so every consumer of a value depends on its producer
/// and a write anti-depends on all of them.
enum class TableMode { LastAccess, MultiReader };

/// What a write-back does when a dependency points at a later task:
/// Plain inserts the edge as-is; Ext renews the current task's id so every
/// edge keeps pointing forward (see add_dependency_with_renewal).
enum class DepPolicy { Plain, Ext };

/// Per-address access history. update() returns the dependencies the new
/// access creates, as (previous task, kind) pairs. Pairs naming the
/// accessing task itself are returned too; callers filter them.
class AddressTable {
 public:
  explicit AddressTable(TableMode mode) : mode_(mode) {}

  std::vector<std::pair<TaskInstance, DependencyKind>> update(Address a,
                                                              TaskInstance t,
                                                              AccessKind rw);

 private:
  struct LastEntry {
    TaskInstance task;
    AccessKind kind;
  };
  struct MultiEntry {
    std::optional<TaskInstance> last_writer;
    std::vector<TaskInstance> readers;  // since last write, insertion order
  };

  TableMode mode_;
  std::map<Address, LastEntry> last_;
  std::map<Address, MultiEntry> multi_;
};

/// Tracks which fresh instance currently stands in for a renewed task.
/// Keys are the original execution ids from the trace; fresh ids are
/// strictly larger than every trace id and every id minted before.
class RenameMap {
 public:
  explicit RenameMap(ExecId first_fresh_id) : next_(first_fresh_id) {}

  /// The instance a task currently resolves to (identity if never renewed).
  TaskInstance resolve(TaskInstance t) const;

  /// Mints a fresh instance for the task and rebinds the original id to it.
  TaskInstance renew(TaskInstance original);

  ExecId next_fresh_id() const { return next_; }

 private:
  std::map<ExecId, TaskInstance> current_;
  ExecId next_;
};

/// Inserts a dependency, renewing the consumer when the edge would point
/// backwards. Both endpoints resolve through the rename map first; if the
/// resolved producer has an id >= the resolved consumer's, the consumer
/// gets a fresh instance t'' and the edges become (consumer -> t'', EXT)
/// and (producer -> t'', kind). Throws SelfDependency when both endpoints
/// resolve to the same instance.
void add_dependency_with_renewal(ExecutionGraph& g, RenameMap& rmap,
                                 TaskInstance t_prev, TaskInstance t,
                                 DependencyKind kind);

struct BuildConfig {
  TableMode table_mode = TableMode::MultiReader;
  DepPolicy dep_policy = DepPolicy::Ext;
  /// Kinds kept in the output. EXT edges are always kept under DepPolicy::Ext.
  KindMask kind_filter = kind_bit(DependencyKind::RAW);
};

/// Builds one execution graph per trace region id found in the trace.
///
/// Records are replayed in order through an AddressTable; each returned
/// (previous task, kind) pair with a valid id naming a different task
/// becomes an edge (directly under Plain, through the rename machinery
/// under Ext). Every task that made any access appears as a vertex even
/// when no edge touches it. Edge kinds outside the filter are removed at
/// the end; renewals they caused still stand.
std::map<TraceId, ExecutionGraph> build_execution_graphs(
    const ProgramTrace& trace, const BuildConfig& config = {});

/// Same vertices, edges restricted to the given kinds.
ExecutionGraph project(const ExecutionGraph& g, KindMask kinds);

/// True iff every edge runs from a smaller to a larger execution id
/// (which forces acyclicity).
bool has_topological_ids(const ExecutionGraph& g);

/// Graph file round-trip. The document carries version, trace_id,
/// vertices sorted by exec_id and edges sorted by (from, to, kind).
void write_graph(const ExecutionGraph& g, std::ostream& os);
ExecutionGraph read_graph(std::istream& is);
void write_graph_file(const ExecutionGraph& g, const std::string& path);
ExecutionGraph read_graph_file(const std::string& path);

}  // namespace exg

#endif  // EXG_GRAPH_HPP
