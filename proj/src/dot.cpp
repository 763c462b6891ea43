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

#include "exg/dot.hpp"

#include <string>
#include <vector>

namespace exg {

namespace {

std::string task_name(const TaskInstance& t) {
  return std::to_string(t.exec_id) + ": " + std::to_string(t.region_id);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string kinds_label(KindMask mask) {
  std::string label;
  for (DependencyKind k : {DependencyKind::RAW, DependencyKind::WAR,
                           DependencyKind::WAW, DependencyKind::EXT}) {
    if (!(mask & kind_bit(k))) continue;
    if (!label.empty()) label += ",";
    label += to_string(k);
  }
  return label;
}

}  // namespace

std::string to_dot(const ExecutionGraph& g) {
  std::string out = "digraph execution {\n";
  for (const auto& [id, v] : g.vertices()) {
    out += "  " + quoted(task_name(v)) + ";\n";
  }
  for (const Edge& e : g.edges()) {
    out += "  " + quoted(task_name(e.from)) + " -> " + quoted(task_name(e.to)) +
           " [label=" + quoted(to_string(e.kind)) + "];\n";
  }
  out += "}\n";
  return out;
}

std::string quotient_to_dot(const analysis::AnalysisReport& report) {
  std::vector<std::string> names;
  names.reserve(report.composed_blocks.size());
  for (const auto& block : report.composed_blocks) {
    std::string name;
    for (ExecId id : block) {
      if (!name.empty()) name += ",";
      name += std::to_string(id);
    }
    names.push_back(std::move(name));
  }

  std::string out = "digraph quotient {\n";
  for (const auto& name : names) {
    out += "  " + quoted(name) + ";\n";
  }
  for (const auto& e : report.final_quotient_edges) {
    out += "  " + quoted(names.at(e.from)) + " -> " + quoted(names.at(e.to));
    std::string label = kinds_label(e.kinds);
    if (!label.empty()) out += " [label=" + quoted(label) + "]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace exg
