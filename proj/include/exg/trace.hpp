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

#ifndef EXG_TRACE_HPP
#define EXG_TRACE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "exg/errors.hpp"

namespace exg {

using RegionId = std::uint32_t;
using TraceId = std::uint32_t;
using ExecId = std::uint64_t;
using InstrId = std::uint32_t;

/// Execution id 0 never names a real task; it marks "no previous accessor".
inline constexpr ExecId kInvalidExecId = 0;

inline constexpr bool valid_exec_id(ExecId id) { return id != kInvalidExecId; }

enum class AccessKind : std::uint8_t { Read, Write };

/// Symbolic memory location: a named array plus an element offset.
struct Address {
  std::uint32_t array_id = 0;
  std::uint64_t offset = 0;

  friend auto operator<=>(const Address&, const Address&) = default;
};

/// One dynamic task execution. Identity and equality follow the execution
/// id alone; region_id is carried metadata about the static task region.
struct TaskInstance {
  RegionId region_id = 0;
  ExecId exec_id = kInvalidExecId;

  friend bool operator==(const TaskInstance& a, const TaskInstance& b) {
    return a.exec_id == b.exec_id;
  }
  friend auto operator<=>(const TaskInstance& a, const TaskInstance& b) {
    return a.exec_id <=> b.exec_id;
  }
};

/// One traced memory access, attributed to the innermost open task.
struct AccessRecord {
  TraceId trace_id = 0;
  TaskInstance task;
  Address address;
  AccessKind kind = AccessKind::Read;
  InstrId instr_id = 0;

  friend bool operator==(const AccessRecord& a, const AccessRecord& b) {
    return a.trace_id == b.trace_id && a.task.exec_id == b.task.exec_id &&
           a.task.region_id == b.task.region_id && a.address == b.address &&
           a.kind == b.kind && a.instr_id == b.instr_id;
  }
};

/// Complete recording of one instrumented sequential run.
struct ProgramTrace {
  std::vector<AccessRecord> records;       // in recording order
  std::uint64_t dropped_accesses = 0;      // accesses seen outside any task
  ExecId max_exec_id = 0;                  // highest id handed out by the run
};

/// Collects access records from an instrumented run.
///
/// A run opens at most one trace region at a time (sequential regions are
/// fine), nests task regions freely inside it, and reports every array
/// element access. Accesses inside a trace region but outside any task are
/// dropped and counted, not recorded.
class Recorder {
 public:
  /// Opens a trace region. The region id doubles as the trace id tagged
  /// onto every record made inside it. Throws NestedTrace if one is open.
  TraceId begin_trace(TraceId trace_region_id);

  /// Closes the open trace region. Throws NoOpenTrace if none is open and
  /// UnclosedRegion if task regions are still open.
  void end_trace();

  /// Enters a task region and mints a fresh execution id, strictly larger
  /// than every id handed out before. Throws NoOpenTrace outside a trace.
  TaskInstance begin_task(RegionId region_id);

  /// Leaves the innermost open task. Throws EmptyTaskStack when none is open.
  void end_task();

  /// Reports one memory access. Attributed to the innermost open task;
  /// dropped (and counted) when no task is open. Throws NoOpenTrace
  /// outside a trace region.
  void record_access(Address address, AccessKind kind, InstrId instr_id);

  /// Hands out the finished trace and resets the recorder. Throws
  /// UnclosedRegion while a trace or task region is still open.
  ProgramTrace finalize();

  bool trace_open() const { return current_trace_.has_value(); }
  std::size_t task_depth() const { return task_stack_.size(); }
  std::uint64_t dropped_accesses() const { return dropped_; }

 private:
  ExecId next_exec_id_ = 1;
  std::optional<TraceId> current_trace_;
  std::vector<TaskInstance> task_stack_;
  std::vector<AccessRecord> records_;
  std::uint64_t dropped_ = 0;
};

/// Writes the line-oriented text form:
///   EXGTRACE 1
///   T <trace_id> <exec_id> <region_id> <array_id> <offset> <R|W> <instr_id>
///   END <record_count> <dropped_count> <max_exec_id>
void write_trace(const ProgramTrace& trace, std::ostream& os);

/// Parses the text form back. Rejects unknown versions and any structural
/// damage with MalformedTrace naming the offending line.
ProgramTrace read_trace(std::istream& is);

void write_trace_file(const ProgramTrace& trace, const std::string& path);
ProgramTrace read_trace_file(const std::string& path);

}  // namespace exg

#endif  // EXG_TRACE_HPP
