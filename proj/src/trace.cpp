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

#include "exg/trace.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

namespace exg {

TraceId Recorder::begin_trace(TraceId trace_region_id) {
  if (current_trace_) {
    throw NestedTrace("begin_trace: a trace region is already open");
  }
  current_trace_ = trace_region_id;
  return trace_region_id;
}

void Recorder::end_trace() {
  if (!current_trace_) {
    throw NoOpenTrace("end_trace: no trace region is open");
  }
  if (!task_stack_.empty()) {
    throw UnclosedRegion("end_trace: task regions still open");
  }
  current_trace_.reset();
}

TaskInstance Recorder::begin_task(RegionId region_id) {
  if (!current_trace_) {
    throw NoOpenTrace("begin_task: no trace region is open");
  }
  TaskInstance t{region_id, next_exec_id_++};
  task_stack_.push_back(t);
  return t;
}

void Recorder::end_task() {
  if (task_stack_.empty()) {
    throw EmptyTaskStack("end_task: no task region is open");
  }
  task_stack_.pop_back();
}

void Recorder::record_access(Address address, AccessKind kind,
                             InstrId instr_id) {
  if (!current_trace_) {
    throw NoOpenTrace("record_access: no trace region is open");
  }
  if (task_stack_.empty()) {
    ++dropped_;
    return;
  }
  records_.push_back(AccessRecord{*current_trace_, task_stack_.back(), address,
                                  kind, instr_id});
}

ProgramTrace Recorder::finalize() {
  if (current_trace_ || !task_stack_.empty()) {
    throw UnclosedRegion("finalize: trace or task region still open");
  }
  ProgramTrace trace;
  trace.records = std::move(records_);
  trace.dropped_accesses = dropped_;
  trace.max_exec_id = next_exec_id_ - 1;
  records_.clear();
  dropped_ = 0;
  next_exec_id_ = 1;
  return trace;
}

// ---------------------------------------------------------------------------
// Text format

void write_trace(const ProgramTrace& trace, std::ostream& os) {
  os << "EXGTRACE 1\n";
  for (const AccessRecord& r : trace.records) {
    os << "T " << r.trace_id << ' ' << r.task.exec_id << ' '
       << r.task.region_id << ' ' << r.address.array_id << ' '
       << r.address.offset << ' ' << (r.kind == AccessKind::Read ? 'R' : 'W')
       << ' ' << r.instr_id << '\n';
  }
  os << "END " << trace.records.size() << ' ' << trace.dropped_accesses << ' '
     << trace.max_exec_id << '\n';
}

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw MalformedTrace("trace line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t next = line.find(' ', pos);
    if (next == std::string_view::npos) next = line.size();
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view tok, std::size_t line_no,
                        const char* field) {
  std::uint64_t value = 0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || tok.empty()) {
    malformed(line_no, std::string("bad ") + field + " value '" +
                           std::string(tok) + "'");
  }
  return value;
}

std::uint32_t parse_u32(std::string_view tok, std::size_t line_no,
                        const char* field) {
  std::uint64_t v = parse_u64(tok, line_no, field);
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    malformed(line_no, std::string(field) + " out of range");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

ProgramTrace read_trace(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) malformed(1, "missing header");
  {
    auto f = split_fields(line);
    if (f.size() != 2 || f[0] != "EXGTRACE") malformed(line_no, "bad header");
    std::uint64_t version = parse_u64(f[1], line_no, "version");
    if (version != 1) {
      malformed(line_no, "unsupported version " + std::to_string(version));
    }
  }

  ProgramTrace trace;
  ExecId seen_max = 0;
  bool saw_end = false;
  std::uint64_t end_count = 0, end_dropped = 0, end_max = 0;

  while (next_line()) {
    auto f = split_fields(line);
    if (f.empty()) malformed(line_no, "empty line");
    if (f[0] == "T") {
      if (saw_end) malformed(line_no, "record after END");
      if (f.size() != 8) {
        malformed(line_no, "expected 8 fields in record " +
                               std::to_string(trace.records.size() + 1));
      }
      AccessRecord r;
      r.trace_id = parse_u32(f[1], line_no, "trace_id");
      r.task.exec_id = parse_u64(f[2], line_no, "exec_id");
      r.task.region_id = parse_u32(f[3], line_no, "region_id");
      r.address.array_id = parse_u32(f[4], line_no, "array_id");
      r.address.offset = parse_u64(f[5], line_no, "offset");
      if (f[6] == "R") {
        r.kind = AccessKind::Read;
      } else if (f[6] == "W") {
        r.kind = AccessKind::Write;
      } else {
        malformed(line_no, "access kind must be R or W");
      }
      r.instr_id = parse_u32(f[7], line_no, "instr_id");
      if (!valid_exec_id(r.task.exec_id)) {
        malformed(line_no, "record attributed to invalid exec id 0");
      }
      seen_max = std::max(seen_max, r.task.exec_id);
      trace.records.push_back(r);
    } else if (f[0] == "END") {
      if (saw_end) malformed(line_no, "duplicate END");
      if (f.size() != 4) malformed(line_no, "expected 4 fields in END");
      end_count = parse_u64(f[1], line_no, "record count");
      end_dropped = parse_u64(f[2], line_no, "dropped count");
      end_max = parse_u64(f[3], line_no, "max exec id");
      saw_end = true;
    } else {
      malformed(line_no, "unknown line tag '" + std::string(f[0]) + "'");
    }
  }

  if (!saw_end) malformed(line_no + 1, "missing END");
  if (end_count != trace.records.size()) {
    malformed(line_no, "END count " + std::to_string(end_count) +
                           " does not match " +
                           std::to_string(trace.records.size()) + " records");
  }
  if (end_max < seen_max) {
    malformed(line_no, "END max exec id smaller than a recorded exec id");
  }
  trace.dropped_accesses = end_dropped;
  trace.max_exec_id = end_max;
  return trace;
}

void write_trace_file(const ProgramTrace& trace, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_trace(trace, os);
  if (!os) throw Error("failed writing '" + path + "'");
}

ProgramTrace read_trace_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open '" + path + "' for reading");
  return read_trace(is);
}

}  // namespace exg
