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

#ifndef EXG_DOT_HPP
#define EXG_DOT_HPP

#include <string>

#include "exg/analysis.hpp"
#include "exg/graph.hpp"

namespace exg {

/// Graphviz rendering. Vertex names are "<exec_id>: <region_id>";
/// edge labels carry the dependency kind.
std::string to_dot(const ExecutionGraph& g);

/// Final quotient of a report. Each block is named by its member
/// execution ids, ascending and comma-separated; edge labels list the
/// dependency kinds merged into the quotient edge.
std::string quotient_to_dot(const analysis::AnalysisReport& report);

}  // namespace exg

#endif  // EXG_DOT_HPP
