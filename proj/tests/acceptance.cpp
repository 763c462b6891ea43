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

// Acceptance checks for the whole toolkit. Each criterion is verified
// against an oracle that does not share code with the implementation
// (quantifier-style dependence enumeration, exhaustive path search,
// brute-force permutation search, direct DFT). One line per criterion,
// exit status 0 only when every line says PASS.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "exg/analysis.hpp"
#include "exg/cli.hpp"
#include "exg/graph.hpp"
#include "exg/kernels.hpp"
#include "exg/trace.hpp"
#include "oracles.hpp"

using namespace exg;
namespace an = exg::analysis;
namespace fs = std::filesystem;

namespace {

struct Checker {
  bool ok = true;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) first_failure = what;
    ok = ok && cond;
  }
};

ExecutionGraph raw_graph(const ProgramTrace& trace, TraceId tid) {
  return build_execution_graphs(trace).at(tid);  // defaults: multi-reader, raw
}

testing::EdgeSet oracle_raw(const ProgramTrace& trace, TraceId tid) {
  testing::EdgeSet out;
  for (const auto& e : testing::multi_reader_oracle(trace, tid)) {
    if (std::get<2>(e) == static_cast<int>(DependencyKind::RAW)) {
      out.insert(e);
    }
  }
  return out;
}

int raw_out_degree(const ExecutionGraph& g, ExecId from) {
  int n = 0;
  for (const auto& e : g.edges()) {
    if (e.from.exec_id == from && e.kind == DependencyKind::RAW) ++n;
  }
  return n;
}

// ---- criterion 1: elementwise add is one fully parallel block -------------

bool criterion_madd(Checker& c) {
  auto run = kernels::run_madd(2, kernels::Grain::Fine);
  ExecutionGraph g = raw_graph(run.trace, kernels::region::madd_trace);
  c.expect(g.vertex_count() == 4, "madd vertex count");
  c.expect(g.edge_count() == 0, "madd edge count");
  c.expect(an::is_completely_parallel(an::from_execution_graph(g)),
           "madd completely parallel");
  an::AnalysisReport rep = an::analyze(g);
  c.expect(rep.final_quotient_size == 1, "madd quotient size");
  c.expect(rep.composed_exec_time == 1, "madd exec time");
  return c.ok;
}

// ---- criterion 2: matrix multiply serializes per accumulator --------------

bool criterion_mmult(Checker& c) {
  auto run = kernels::run_mmult(2, kernels::Grain::Fine);
  ExecutionGraph g = raw_graph(run.trace, kernels::region::mmult_trace);
  c.expect(g.vertex_count() == 8, "mmult vertex count");
  c.expect(g.edge_count() == 4, "mmult edge count");
  c.expect(testing::edge_set(g) ==
               oracle_raw(run.trace, kernels::region::mmult_trace),
           "mmult edges match enumeration oracle");
  testing::EdgeSet chains;  // 4 disjoint 2-chains over ids 1..8
  for (ExecId k = 1; k <= 7; k += 2) {
    chains.insert({k, k + 1, static_cast<int>(DependencyKind::RAW)});
  }
  c.expect(testing::edge_set(g) == chains, "mmult chain structure");

  an::AnalysisReport rep = an::analyze(g);
  c.expect(rep.classification == "chain" && rep.final_quotient_size == 2,
           "mmult reduces to a 2-chain");
  c.expect(rep.composed_blocks ==
               std::vector<std::vector<ExecId>>{{1, 3, 5, 7}, {2, 4, 6, 8}},
           "mmult composed blocks");
  an::Digraph d = an::from_execution_graph(g);
  an::Reachability r(d);
  for (const auto& block : rep.composed_blocks) {
    std::vector<int> idx;
    for (ExecId id : block) idx.push_back(static_cast<int>(id) - 1);
    c.expect(an::is_independent_set(r, idx), "mmult block independent");
  }
  c.expect(rep.composed_exec_time == 2 && rep.longest_path == 2,
           "mmult exec time equals longest path");

  auto coarse = kernels::run_mmult(2, kernels::Grain::Coarse);
  an::AnalysisReport crep =
      an::analyze(raw_graph(coarse.trace, kernels::region::mmult_trace));
  c.expect(crep.completely_parallel && crep.final_quotient_size == 1,
           "mmult coarse fully parallel");
  return c.ok;
}

// ---- criterion 3: heat stencil levels fold into a time chain --------------

bool criterion_heat(Checker& c) {
  auto run = kernels::run_heat(4, 4, kernels::Grain::Fine);
  ExecutionGraph g = raw_graph(run.trace, kernels::region::heat_trace);
  c.expect(g.vertex_count() == 16, "heat vertex count");
  an::AnalysisReport rep = an::analyze(g);
  c.expect(rep.chain && rep.final_quotient_size == 4, "heat chain of 4");
  c.expect(rep.composed_exec_time == 4, "heat exec time");
  c.expect(rep.longest_path == 4, "heat longest path");
  c.expect(rep.composed_exec_time == rep.longest_path,
           "heat cost equality is exact");
  return c.ok;
}

// ---- criterion 4: fft stages are the only serialization -------------------

bool criterion_fft(Checker& c) {
  auto run = kernels::run_fft(8, kernels::Grain::Fine);
  ExecutionGraph g = raw_graph(run.trace, kernels::region::fft_trace);
  c.expect(g.vertex_count() == 12, "fft vertex count");
  an::AnalysisReport rep = an::analyze(g);
  c.expect(rep.chain && rep.final_quotient_size == 3, "fft chain of 3");
  c.expect(rep.composed_exec_time == 3, "fft exec time");

  auto want = testing::direct_dft(run.input);
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    double mag = std::max(1.0, std::abs(want[i]));
    worst = std::max(worst, std::abs(want[i] - run.output[i]) / mag);
  }
  c.expect(worst <= 1e-9, "fft output within 1e-9 of direct transform");
  return c.ok;
}

// ---- criterion 5: alignment grid keeps its wavefront ----------------------

bool criterion_sw(Checker& c) {
  auto run = kernels::run_sw(4, 4, kernels::Grain::Fine);
  ExecutionGraph g = raw_graph(run.trace, kernels::region::sw_trace);
  c.expect(g.vertex_count() == 16, "sw vertex count");
  an::Digraph d = an::from_execution_graph(g);
  c.expect(testing::longest_path_exhaustive(d) == 7,
           "sw longest path oracle says 7");
  an::AnalysisReport rep = an::analyze(g);
  c.expect(rep.longest_path == 7, "sw longest path");
  c.expect(!rep.chain, "sw does not reduce to a chain");

  // first-round orbits must be exactly the grid transpose: cell (i, j) of
  // the 4x4 task grid pairs with (j, i)
  auto id_of = [](int i, int j) { return static_cast<ExecId>(i * 4 + j + 1); };
  std::vector<std::vector<ExecId>> expected;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) expected.push_back({id_of(i, j)});
      if (i < j) expected.push_back({id_of(i, j), id_of(j, i)});
    }
  }
  std::sort(expected.begin(), expected.end());
  c.expect(rep.composed_blocks == expected, "sw blocks are transpose orbits");
  c.expect(rep.final_quotient_size == 10, "sw quotient size");

  // the transpose map really is a symmetry of the dependence graph
  auto perm_of = [&](int v) {
    int i = v / 4, j = v % 4;
    return j * 4 + i;
  };
  bool sym = true;
  for (int u = 0; u < 16; ++u) {
    for (int v = 0; v < 16; ++v) {
      if (u != v && d.has_edge(u, v) != d.has_edge(perm_of(u), perm_of(v))) {
        sym = false;
      }
    }
  }
  c.expect(sym, "sw transpose is edge preserving");

  auto coarse = kernels::run_sw(4, 4, kernels::Grain::Coarse);
  ExecutionGraph cg = raw_graph(coarse.trace, kernels::region::sw_trace);
  c.expect(an::is_completely_serial(an::from_execution_graph(cg)),
           "sw coarse completely serial");
  return c.ok;
}

// ---- criterion 6: randomized property suites, zero tolerated failures -----

bool criterion_properties(Checker& c) {
  {  // (a) flat scripts, plain policy: ids are already a topological order
    std::mt19937_64 rng(601);
    BuildConfig cfg;
    cfg.dep_policy = DepPolicy::Plain;
    cfg.kind_filter = kAllKinds;
    for (int i = 0; i < 200; ++i) {
      testing::ScriptConfig sc;
      sc.max_depth = 1;
      ProgramTrace t = testing::random_script(rng, sc);
      for (const auto& [tid, g] : build_execution_graphs(t, cfg)) {
        c.expect(has_topological_ids(g), "flat plain graph in id order");
      }
    }
  }
  {  // (b) nested scripts, renewal policy: ids are again topological
    std::mt19937_64 rng(602);
    BuildConfig cfg;
    cfg.kind_filter = kAllKinds;
    for (int i = 0; i < 200; ++i) {
      testing::ScriptConfig sc;
      sc.max_depth = 4;
      sc.outside_accesses = true;
      ProgramTrace t = testing::random_script(rng, sc);
      for (const auto& [tid, g] : build_execution_graphs(t, cfg)) {
        c.expect(has_topological_ids(g), "nested ext graph in id order");
      }
    }
  }
  {  // (c) orbit blocks are independent and orbit quotients stay acyclic
    std::mt19937_64 rng(603);
    for (int i = 0; i < 200; ++i) {
      int n = 1 + static_cast<int>(rng() % 7);
      an::Digraph g = testing::random_dag(rng, n, 30);
      an::AutGroup aut = an::brute_force_automorphisms(g);
      an::Reachability r(g);
      for (const auto& block : aut.orbits.blocks) {
        if (block.size() > 1) {
          c.expect(an::is_independent_set(r, block), "orbit independent");
        }
      }
      c.expect(an::is_dag_preserving(g, aut.orbits), "orbit quotient acyclic");
    }
  }
  {  // (d) set checks agree with brute-force subset enumeration
    std::mt19937_64 rng(604);
    for (int i = 0; i < 200; ++i) {
      int n = 2 + static_cast<int>(rng() % 5);
      an::Digraph g = testing::random_dag(rng, n, 35);
      an::Reachability r(g);
      auto pair_ok = [&](int u, int v) {
        return !testing::reaches_dfs(g, u, v) &&
               !testing::reaches_dfs(g, v, u);
      };
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> set;
        for (int v = 0; v < n; ++v) {
          if (mask & (1u << v)) set.push_back(v);
        }
        bool ind = true;
        for (std::size_t a = 0; a < set.size() && ind; ++a) {
          for (std::size_t b = a + 1; b < set.size() && ind; ++b) {
            ind = pair_ok(set[a], set[b]);
          }
        }
        bool max = ind;
        for (int v = 0; v < n && max; ++v) {
          if (mask & (1u << v)) continue;
          bool extends = true;
          for (int u : set) {
            if (!pair_ok(u, v)) extends = false;
          }
          if (extends) max = false;
        }
        c.expect(an::is_independent_set(r, set) == ind, "independence check");
        c.expect(an::is_maximally_independent(r, set) == max,
                 "maximality check");
      }
    }
  }
  {  // (e) refined search matches brute-force orbits and group order
    std::mt19937_64 rng(605);
    for (int i = 0; i < 200; ++i) {
      int n = 1 + static_cast<int>(rng() % 7);
      an::Digraph g = testing::random_digraph(rng, n, 25);
      an::AutGroup fast = an::automorphism_group(g, true);
      an::AutGroup brute = an::brute_force_automorphisms(g);
      c.expect(fast.orbits == brute.orbits, "orbit agreement");
      c.expect(fast.order == brute.order, "group order agreement");
    }
  }
  return c.ok;
}

// ---- criterion 7: address table modes ---------------------------------

bool criterion_table_modes(Checker& c) {
  auto run = kernels::run_heat(4, 4, kernels::Grain::Fine);
  BuildConfig multi_cfg;  // defaults: multi-reader, raw
  BuildConfig strict_cfg;
  strict_cfg.table_mode = TableMode::LastAccess;
  ExecutionGraph multi = build_execution_graphs(run.trace, multi_cfg)
                             .at(kernels::region::heat_trace);
  ExecutionGraph strict = build_execution_graphs(run.trace, strict_cfg)
                              .at(kernels::region::heat_trace);

  c.expect(testing::edge_set(multi) ==
               oracle_raw(run.trace, kernels::region::heat_trace),
           "multi-reader graph matches enumeration oracle");
  testing::EdgeSet strict_raw;
  for (const auto& e :
       testing::last_access_oracle(run.trace, kernels::region::heat_trace)) {
    if (std::get<2>(e) == static_cast<int>(DependencyKind::RAW)) {
      strict_raw.insert(e);
    }
  }
  c.expect(testing::edge_set(strict) == strict_raw,
           "strict graph matches last-access oracle");

  // interior values (grid columns 2..3, steps 1..3) feed three stencil
  // reads each; the strict table only ever sees the first of them
  for (int t = 1; t <= 3; ++t) {
    for (int x = 2; x <= 3; ++x) {
      ExecId writer = static_cast<ExecId>((t - 1) * 4 + x);
      c.expect(raw_out_degree(multi, writer) == 3,
               "interior value read three times");
      c.expect(raw_out_degree(strict, writer) == 1,
               "strict keeps the first reader only");
    }
  }

  // the strict transition table, one branch at a time
  BuildConfig all_strict;
  all_strict.table_mode = TableMode::LastAccess;
  all_strict.kind_filter = kAllKinds;
  auto script = [&](std::initializer_list<AccessKind> kinds) {
    Recorder rec;
    rec.begin_trace(1);
    InstrId instr = 1;
    for (AccessKind k : kinds) {
      rec.begin_task(1);
      rec.record_access({0, 0}, k, instr++);
      rec.end_task();
    }
    rec.end_trace();
    return build_execution_graphs(rec.finalize(), all_strict).at(1);
  };
  using K = AccessKind;
  c.expect(testing::edge_set(script({K::Write, K::Read})) ==
               testing::EdgeSet{{1, 2, static_cast<int>(DependencyKind::RAW)}},
           "write then read is RAW");
  c.expect(testing::edge_set(script({K::Read, K::Write})) ==
               testing::EdgeSet{{1, 2, static_cast<int>(DependencyKind::WAR)}},
           "read then write is WAR");
  c.expect(testing::edge_set(script({K::Write, K::Write})) ==
               testing::EdgeSet{{1, 2, static_cast<int>(DependencyKind::WAW)}},
           "write then write is WAW");
  c.expect(testing::edge_set(script({K::Read, K::Read})).empty(),
           "read then read is free");
  return c.ok;
}

// ---- criterion 8: round-trips, determinism, naming conventions ------------

bool criterion_round_trips(Checker& c) {
  {  // trace files survive a write/read/write cycle byte for byte
    std::mt19937_64 rng(801);
    for (int i = 0; i < 40; ++i) {
      testing::ScriptConfig sc;
      sc.max_depth = (i % 2) ? 3 : 1;
      sc.outside_accesses = (i % 2) != 0;
      ProgramTrace t = testing::random_script(rng, sc);
      std::ostringstream first;
      write_trace(t, first);
      std::istringstream in(first.str());
      ProgramTrace back = read_trace(in);
      std::ostringstream second;
      write_trace(back, second);
      c.expect(t.records == back.records, "trace records round-trip");
      c.expect(first.str() == second.str(), "trace bytes round-trip");
    }
  }
  {  // graph files too
    std::mt19937_64 rng(802);
    for (int i = 0; i < 40; ++i) {
      ProgramTrace t = testing::random_script(rng, {});
      BuildConfig cfg;
      cfg.kind_filter = kAllKinds;
      for (const auto& [tid, g] : build_execution_graphs(t, cfg)) {
        std::ostringstream first;
        write_graph(g, first);
        std::istringstream in(first.str());
        ExecutionGraph back = read_graph(in);
        std::ostringstream second;
        write_graph(back, second);
        c.expect(g == back, "graph round-trips");
        c.expect(first.str() == second.str(), "graph bytes round-trip");
      }
    }
  }
  {  // two demo runs write the same bytes everywhere
    fs::path scratch = fs::temp_directory_path() / "exg_acceptance";
    fs::remove_all(scratch);
    fs::create_directories(scratch);
    auto demo = [&](const std::string& leaf) {
      std::ostringstream out, err;
      std::vector<std::string> args = {
          "demo", "--kernel", "heat",   "--nx", "4", "--nt", "4",
          "--grain", "fine", "-o", (scratch / leaf).string()};
      return cli::run(args, out, err);
    };
    c.expect(demo("a") == 0 && demo("b") == 0, "demo runs succeed");
    for (const char* f : {"trace.exg", "graph.json", "report.json",
                          "graph.dot", "quotient.dot"}) {
      std::ifstream fa(scratch / "a" / f, std::ios::binary);
      std::ifstream fb(scratch / "b" / f, std::ios::binary);
      std::stringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      c.expect(fa.good() && fb.good() && sa.str() == sb.str() &&
                   !sa.str().empty(),
               std::string("demo file stable: ") + f);
    }
    // vertex labels follow "exec_id: region_id"
    std::ifstream dotf(scratch / "a" / "graph.dot", std::ios::binary);
    std::stringstream dots;
    dots << dotf.rdbuf();
    std::string dot = dots.str();
    for (int id = 1; id <= 16; ++id) {
      std::string label = "\"" + std::to_string(id) + ": " +
                          std::to_string(kernels::region::heat_task) + "\"";
      c.expect(dot.find(label) != std::string::npos, "dot label " + label);
    }
  }
  return c.ok;
}

}  // namespace

int main() {
  struct Item {
    const char* label;
    std::function<bool(Checker&)> fn;
  };
  const Item items[] = {
      {"madd fine n=2: single fully parallel block", criterion_madd},
      {"mmult fine n=2: four 2-chains fold to one", criterion_mmult},
      {"heat fine 4x4: time levels form a chain of 4", criterion_heat},
      {"fft fine len=8: stage chain of 3, numerics match", criterion_fft},
      {"sw fine 4x4: wavefront survives, transpose orbits", criterion_sw},
      {"randomized property suites (5 x 200 cases)", criterion_properties},
      {"address table modes on the heat trace", criterion_table_modes},
      {"round-trips, demo determinism, dot naming", criterion_round_trips},
  };

  int failures = 0;
  int number = 1;
  for (const Item& item : items) {
    Checker c;
    bool ok = false;
    std::string note;
    try {
      ok = item.fn(c);
      note = c.first_failure;
    } catch (const std::exception& e) {
      ok = false;
      note = std::string("exception: ") + e.what();
    }
    if (ok) {
      std::printf("[%d] PASS %s\n", number, item.label);
    } else {
      std::printf("[%d] FAIL %s (%s)\n", number, item.label, note.c_str());
      ++failures;
    }
    ++number;
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", std::size(items));
  } else {
    std::printf("acceptance: %d of %zu criteria FAILED\n", failures,
                std::size(items));
  }
  return failures == 0 ? 0 : 1;
}
