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

#include "exg/graph.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "json.hpp"

namespace exg {

const char* to_string(DependencyKind kind) {
  switch (kind) {
    case DependencyKind::RAW: return "RAW";
    case DependencyKind::WAR: return "WAR";
    case DependencyKind::WAW: return "WAW";
    case DependencyKind::EXT: return "EXT";
  }
  return "?";
}

std::optional<DependencyKind> dependency_kind_from_string(std::string_view s) {
  if (s == "RAW") return DependencyKind::RAW;
  if (s == "WAR") return DependencyKind::WAR;
  if (s == "WAW") return DependencyKind::WAW;
  if (s == "EXT") return DependencyKind::EXT;
  return std::nullopt;
}

void ExecutionGraph::add_vertex(TaskInstance t) {
  vertices_.emplace(t.exec_id, t);
}

void ExecutionGraph::add_dependency(TaskInstance from, TaskInstance to,
                                    DependencyKind kind) {
  if (from.exec_id == to.exec_id) {
    throw SelfDependency("edge would connect task " +
                         std::to_string(from.exec_id) + " to itself");
  }
  add_vertex(from);
  add_vertex(to);
  edges_.emplace(from.exec_id, to.exec_id, static_cast<std::uint8_t>(kind));
}

bool ExecutionGraph::has_edge(ExecId from, ExecId to,
                              DependencyKind kind) const {
  return edges_.count({from, to, static_cast<std::uint8_t>(kind)}) != 0;
}

std::vector<Edge> ExecutionGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [from, to, kind] : edges_) {
    out.push_back(Edge{vertices_.at(from), vertices_.at(to),
                       static_cast<DependencyKind>(kind)});
  }
  return out;
}

bool operator==(const ExecutionGraph& a, const ExecutionGraph& b) {
  if (a.trace_id_ != b.trace_id_ || a.edges_ != b.edges_) return false;
  if (a.vertices_.size() != b.vertices_.size()) return false;
  for (auto ia = a.vertices_.begin(), ib = b.vertices_.begin();
       ia != a.vertices_.end(); ++ia, ++ib) {
    if (ia->first != ib->first ||
        ia->second.region_id != ib->second.region_id) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Address table

std::vector<std::pair<TaskInstance, DependencyKind>> AddressTable::update(
    Address a, TaskInstance t, AccessKind rw) {
  std::vector<std::pair<TaskInstance, DependencyKind>> deps;

  if (mode_ == TableMode::LastAccess) {
    auto it = last_.find(a);
    std::optional<LastEntry> prev;
    if (it != last_.end()) prev = it->second;
    last_[a] = LastEntry{t, rw};  // entry overwritten on every access
    if (prev) {
      if (prev->kind == AccessKind::Read && rw == AccessKind::Write) {
        deps.emplace_back(prev->task, DependencyKind::WAR);
      } else if (prev->kind == AccessKind::Write && rw == AccessKind::Read) {
        deps.emplace_back(prev->task, DependencyKind::RAW);
      } else if (prev->kind == AccessKind::Write && rw == AccessKind::Write) {
        deps.emplace_back(prev->task, DependencyKind::WAW);
      }
      // read after read: nothing, but the entry above already moved on
    }
    return deps;
  }

  MultiEntry& e = multi_[a];
  if (rw == AccessKind::Read) {
    if (e.last_writer) deps.emplace_back(*e.last_writer, DependencyKind::RAW);
    bool known = std::any_of(e.readers.begin(), e.readers.end(),
                             [&](const TaskInstance& r) {
                               return r.exec_id == t.exec_id;
                             });
    if (!known) e.readers.push_back(t);
  } else {
    for (const TaskInstance& r : e.readers) {
      deps.emplace_back(r, DependencyKind::WAR);
    }
    if (e.last_writer) deps.emplace_back(*e.last_writer, DependencyKind::WAW);
    e.readers.clear();
    e.last_writer = t;
  }
  return deps;
}

// ---------------------------------------------------------------------------
// Renewal

TaskInstance RenameMap::resolve(TaskInstance t) const {
  auto it = current_.find(t.exec_id);
  return it == current_.end() ? t : it->second;
}

TaskInstance RenameMap::renew(TaskInstance original) {
  TaskInstance cur = resolve(original);
  TaskInstance fresh{cur.region_id, next_++};
  current_[original.exec_id] = fresh;
  return fresh;
}

void add_dependency_with_renewal(ExecutionGraph& g, RenameMap& rmap,
                                 TaskInstance t_prev, TaskInstance t,
                                 DependencyKind kind) {
  TaskInstance prev = rmap.resolve(t_prev);
  TaskInstance cur = rmap.resolve(t);
  if (prev.exec_id == cur.exec_id) {
    throw SelfDependency("dependency of task " + std::to_string(cur.exec_id) +
                         " on itself");
  }
  if (prev.exec_id >= cur.exec_id) {
    TaskInstance renewed = rmap.renew(t);
    g.add_dependency(cur, renewed, DependencyKind::EXT);
    g.add_dependency(prev, renewed, kind);
  } else {
    g.add_dependency(prev, cur, kind);
  }
}

// ---------------------------------------------------------------------------
// Build

std::map<TraceId, ExecutionGraph> build_execution_graphs(
    const ProgramTrace& trace, const BuildConfig& config) {
  if (config.kind_filter == 0) {
    throw Error("build: empty dependency kind filter");
  }

  std::map<TraceId, std::vector<const AccessRecord*>> parts;
  for (const AccessRecord& r : trace.records) {
    parts[r.trace_id].push_back(&r);
  }

  KindMask keep = config.kind_filter;
  if (config.dep_policy == DepPolicy::Ext) {
    keep |= kind_bit(DependencyKind::EXT);
  }

  // Fresh ids stay unique across the whole run, so the counter carries
  // over from one trace region's graph to the next.
  ExecId fresh_from = trace.max_exec_id + 1;

  std::map<TraceId, ExecutionGraph> out;
  for (const auto& [tid, recs] : parts) {
    ExecutionGraph g(tid);
    AddressTable table(config.table_mode);
    RenameMap rmap(fresh_from);
    for (const AccessRecord* r : recs) {
      auto deps = table.update(r->address, r->task, r->kind);
      for (const auto& [t_prev, kind] : deps) {
        if (!valid_exec_id(t_prev.exec_id)) continue;
        if (t_prev.exec_id == r->task.exec_id) continue;  // no self edges
        if (config.dep_policy == DepPolicy::Plain) {
          g.add_dependency(t_prev, r->task, kind);
        } else {
          add_dependency_with_renewal(g, rmap, t_prev, r->task, kind);
        }
      }
      g.add_vertex(config.dep_policy == DepPolicy::Ext ? rmap.resolve(r->task)
                                                       : r->task);
    }
    fresh_from = rmap.next_fresh_id();
    out.emplace(tid, project(g, keep));
  }
  return out;
}

ExecutionGraph project(const ExecutionGraph& g, KindMask kinds) {
  ExecutionGraph out(g.trace_id());
  for (const auto& [id, v] : g.vertices()) out.add_vertex(v);
  for (const Edge& e : g.edges()) {
    if (kinds & kind_bit(e.kind)) out.add_dependency(e.from, e.to, e.kind);
  }
  return out;
}

bool has_topological_ids(const ExecutionGraph& g) {
  for (const Edge& e : g.edges()) {
    if (e.from.exec_id >= e.to.exec_id) return false;
  }
  // Strictly ascending ids along every edge rule out cycles.
  return true;
}

// ---------------------------------------------------------------------------
// Graph file

using ordered_json = nlohmann::ordered_json;

void write_graph(const ExecutionGraph& g, std::ostream& os) {
  ordered_json j;
  j["version"] = 1;
  j["trace_id"] = g.trace_id();
  auto& vs = j["vertices"] = ordered_json::array();
  for (const auto& [id, v] : g.vertices()) {
    ordered_json jv;
    jv["exec_id"] = v.exec_id;
    jv["region_id"] = v.region_id;
    vs.push_back(std::move(jv));
  }
  auto& es = j["edges"] = ordered_json::array();
  for (const Edge& e : g.edges()) {
    ordered_json je;
    je["from"] = e.from.exec_id;
    je["to"] = e.to.exec_id;
    je["kind"] = to_string(e.kind);
    es.push_back(std::move(je));
  }
  os << j.dump(2) << '\n';
}

ExecutionGraph read_graph(std::istream& is) {
  ordered_json j;
  try {
    j = ordered_json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedGraph(std::string("graph file: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("version") || !j.contains("trace_id") ||
        !j.contains("vertices") || !j.contains("edges")) {
      throw MalformedGraph("graph file: missing required field");
    }
    if (j["version"].get<std::uint64_t>() != 1) {
      throw MalformedGraph("graph file: unsupported version");
    }
    ExecutionGraph g(j["trace_id"].get<TraceId>());
    for (const auto& jv : j["vertices"]) {
      TaskInstance t{jv.at("region_id").get<RegionId>(),
                     jv.at("exec_id").get<ExecId>()};
      if (!valid_exec_id(t.exec_id)) {
        throw MalformedGraph("graph file: vertex with invalid exec id 0");
      }
      g.add_vertex(t);
    }
    for (const auto& je : j["edges"]) {
      ExecId from = je.at("from").get<ExecId>();
      ExecId to = je.at("to").get<ExecId>();
      auto kind = dependency_kind_from_string(
          je.at("kind").get_ref<const std::string&>());
      if (!kind) throw MalformedGraph("graph file: unknown edge kind");
      if (!g.has_vertex(from) || !g.has_vertex(to)) {
        throw MalformedGraph("graph file: edge endpoint is not a vertex");
      }
      if (from == to) throw MalformedGraph("graph file: self edge");
      g.add_dependency(g.vertices().at(from), g.vertices().at(to), *kind);
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedGraph(std::string("graph file: ") + e.what());
  }
}

void write_graph_file(const ExecutionGraph& g, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_graph(g, os);
  if (!os) throw Error("failed writing '" + path + "'");
}

ExecutionGraph read_graph_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "' for reading");
  return read_graph(is);
}

}  // namespace exg
