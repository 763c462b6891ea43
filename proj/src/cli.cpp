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

#include "exg/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exg/analysis.hpp"
#include "exg/dot.hpp"
#include "exg/errors.hpp"
#include "exg/graph.hpp"
#include "exg/kernels.hpp"
#include "exg/trace.hpp"

namespace exg::cli {
namespace {

namespace fs = std::filesystem;

struct KernelFlags {
  std::string kernel;
  std::string grain;
  std::uint64_t n = 0, nx = 0, nt = 0, len = 0, len1 = 0, len2 = 0;
  CLI::Option* n_opt = nullptr;
  CLI::Option* nx_opt = nullptr;
  CLI::Option* nt_opt = nullptr;
  CLI::Option* len_opt = nullptr;
  CLI::Option* len1_opt = nullptr;
  CLI::Option* len2_opt = nullptr;
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& f) {
  cmd->add_option("--kernel", f.kernel, "kernel name: madd|mmult|heat|fft|sw")
      ->required();
  f.n_opt = cmd->add_option("--n", f.n, "matrix dimension (madd, mmult)");
  f.nx_opt = cmd->add_option("--nx", f.nx, "interior grid points (heat)");
  f.nt_opt = cmd->add_option("--nt", f.nt, "time steps (heat)");
  f.len_opt =
      cmd->add_option("--len", f.len, "signal length, power of two (fft)");
  f.len1_opt = cmd->add_option("--len1", f.len1, "first sequence length (sw)");
  f.len2_opt =
      cmd->add_option("--len2", f.len2, "second sequence length (sw)");
  cmd->add_option("--grain", f.grain, "task granularity: fine|coarse")
      ->required()
      ->check(CLI::IsMember({"fine", "coarse"}));
}

kernels::KernelSpec spec_from_flags(const KernelFlags& f) {
  kernels::KernelSpec spec;
  spec.name = f.kernel;
  if (f.n_opt->count() > 0) spec.n = f.n;
  if (f.nx_opt->count() > 0) spec.nx = f.nx;
  if (f.nt_opt->count() > 0) spec.nt = f.nt;
  if (f.len_opt->count() > 0) spec.len = f.len;
  if (f.len1_opt->count() > 0) spec.len1 = f.len1;
  if (f.len2_opt->count() > 0) spec.len2 = f.len2;
  spec.grain =
      f.grain == "coarse" ? kernels::Grain::Coarse : kernels::Grain::Fine;
  return spec;
}

KindMask parse_kinds(const std::string& csv) {
  KindMask mask = 0;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string token = csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (token == "raw") {
      mask |= kind_bit(DependencyKind::RAW);
    } else if (token == "war") {
      mask |= kind_bit(DependencyKind::WAR);
    } else if (token == "waw") {
      mask |= kind_bit(DependencyKind::WAW);
    } else {
      throw InvalidParam("unknown dependency kind '" + token +
                         "' in --kinds (expected raw, war, waw)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (mask == 0) throw InvalidParam("--kinds must name at least one kind");
  return mask;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error("failed writing '" + path + "'");
}

std::string suffixed_path(const std::string& out, TraceId trace_id) {
  fs::path p(out);
  fs::path name = p.stem();
  name += ".t" + std::to_string(trace_id);
  name += p.extension();
  return (p.parent_path() / name).string();
}

void do_trace(const KernelFlags& flags, const std::string& out_path) {
  ProgramTrace trace = kernels::run_kernel(spec_from_flags(flags));
  write_trace_file(trace, out_path);
}

struct BuildFlags {
  std::string table = "multi-reader";
  std::string dep = "ext";
  std::string kinds = "raw";
};

void do_build(const std::string& in_path, const std::string& out_path,
              const BuildFlags& flags, std::ostream& out) {
  BuildConfig cfg;
  cfg.table_mode = flags.table == "strict" ? TableMode::LastAccess
                                           : TableMode::MultiReader;
  cfg.dep_policy = flags.dep == "plain" ? DepPolicy::Plain : DepPolicy::Ext;
  cfg.kind_filter = parse_kinds(flags.kinds);

  ProgramTrace trace = read_trace_file(in_path);
  auto graphs = build_execution_graphs(trace, cfg);
  if (graphs.empty()) {
    out << "no trace regions in '" << in_path << "'; nothing written\n";
    return;
  }
  if (graphs.size() == 1) {
    write_graph_file(graphs.begin()->second, out_path);
    return;
  }
  for (const auto& [trace_id, graph] : graphs) {
    write_graph_file(graph, suffixed_path(out_path, trace_id));
  }
}

void do_analyze(const std::string& in_path, const std::string& out_path,
                std::ostream& out) {
  ExecutionGraph graph = read_graph_file(in_path);
  analysis::AnalysisReport report = analysis::analyze(graph);
  write_report_file(report, out_path);
  out << analysis::summary_line(report) << '\n';
}

void do_export(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
  // The input may be a graph document or a report document.
  try {
    ExecutionGraph graph = read_graph_file(in_path);
    if (format == "dot") {
      write_text_file(out_path, to_dot(graph));
    } else {
      write_graph_file(graph, out_path);
    }
    return;
  } catch (const MalformedGraph& graph_error) {
    try {
      analysis::AnalysisReport report = analysis::read_report_file(in_path);
      if (format == "dot") {
        write_text_file(out_path, quotient_to_dot(report));
      } else {
        analysis::write_report_file(report, out_path);
      }
      return;
    } catch (const MalformedReport&) {
      throw MalformedGraph("'" + in_path +
                           "' is neither a graph nor a report document (" +
                           graph_error.what() + ")");
    }
  }
}

void do_demo(const KernelFlags& flags, const std::string& out_dir,
             std::ostream& out) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir)) {
    throw Error("cannot create output directory '" + out_dir + "'");
  }
  fs::path dir(out_dir);
  std::string trace_path = (dir / "trace.exg").string();
  std::string graph_path = (dir / "graph.json").string();
  std::string report_path = (dir / "report.json").string();

  // Same steps, same defaults as the individual commands.
  do_trace(flags, trace_path);
  do_build(trace_path, graph_path, BuildFlags{}, out);
  do_analyze(graph_path, report_path, out);
  do_export(graph_path, "dot", (dir / "graph.dot").string());
  do_export(report_path, "dot", (dir / "quotient.dot").string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"task tracing, execution graphs, and parallelism discovery"};
  app.name("exg");
  app.require_subcommand(1);

  auto* trace_cmd = app.add_subcommand(
      "trace", "run an instrumented kernel and write its memory trace");
  KernelFlags trace_flags;
  add_kernel_flags(trace_cmd, trace_flags);
  std::string trace_out;
  trace_cmd->add_option("-o,--output", trace_out, "trace file path")
      ->required();

  auto* build_cmd = app.add_subcommand(
      "build", "build execution graphs from a trace file");
  std::string build_in, build_out;
  BuildFlags build_flags;
  build_cmd->add_option("-i,--input", build_in, "trace file path")->required();
  build_cmd->add_option("-o,--output", build_out, "graph file path")
      ->required();
  build_cmd
      ->add_option("--table", build_flags.table,
                   "address table mode (default multi-reader)")
      ->check(CLI::IsMember({"strict", "multi-reader"}));
  build_cmd
      ->add_option("--dep", build_flags.dep,
                   "dependency insertion policy (default ext)")
      ->check(CLI::IsMember({"plain", "ext"}));
  build_cmd->add_option("--kinds", build_flags.kinds,
                        "kinds kept in the graph: raw[,war][,waw]");

  auto* analyze_cmd = app.add_subcommand(
      "analyze", "analyze a graph file and write a report");
  std::string analyze_in, analyze_out;
  analyze_cmd->add_option("-i,--input", analyze_in, "graph file path")
      ->required();
  analyze_cmd->add_option("-o,--output", analyze_out, "report file path")
      ->required();

  auto* export_cmd = app.add_subcommand(
      "export", "render a graph or report file for inspection");
  std::string export_in, export_format, export_out;
  export_cmd->add_option("-i,--input", export_in, "graph or report file")
      ->required();
  export_cmd->add_option("--format", export_format, "dot|structured")
      ->required()
      ->check(CLI::IsMember({"dot", "structured"}));
  export_cmd->add_option("-o,--output", export_out, "output path")->required();

  auto* demo_cmd = app.add_subcommand(
      "demo", "full pipeline: trace, build, analyze, export");
  KernelFlags demo_flags;
  add_kernel_flags(demo_cmd, demo_flags);
  std::string demo_dir;
  demo_cmd->add_option("-o,--output", demo_dir, "output directory")
      ->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("exg");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (trace_cmd->parsed()) {
      do_trace(trace_flags, trace_out);
    } else if (build_cmd->parsed()) {
      do_build(build_in, build_out, build_flags, out);
    } else if (analyze_cmd->parsed()) {
      do_analyze(analyze_in, analyze_out, out);
    } else if (export_cmd->parsed()) {
      do_export(export_in, export_format, export_out);
    } else if (demo_cmd->parsed()) {
      do_demo(demo_flags, demo_dir, out);
    }
    return 0;
  } catch (const InternalError& e) {
    err << "exg: internal error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "exg: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "exg: unexpected error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace exg::cli
