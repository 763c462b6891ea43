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

#include "exg/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace exg::kernels {

namespace {

// Values are decorative (the trace structure is input independent), but
// they must be reproducible, so derive them from mt19937_64 directly
// instead of the implementation-defined distribution adapters.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::int64_t int_below(std::int64_t bound) {
    return static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(bound));
  }
  double unit_real() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 gen_;
};

IntMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  IntMatrix m(rows, cols);
  for (auto& v : m.data) v = rng.int_below(100);
  return m;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParam(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// madd: C = A + B

MaddRun run_madd(std::size_t n, Grain grain, std::uint64_t seed) {
  require(n >= 1, "madd: n must be >= 1");
  constexpr std::uint32_t arr_a = 0, arr_b = 1, arr_c = 2;

  Rng rng(seed);
  MaddRun run;
  run.a = random_matrix(n, n, rng);
  run.b = random_matrix(n, n, rng);
  run.c = IntMatrix(n, n);

  Recorder rec;
  rec.begin_trace(region::madd_trace);
  for (std::size_t i = 0; i < n; ++i) {
    if (grain == Grain::Coarse) rec.begin_task(region::madd_task);
    for (std::size_t j = 0; j < n; ++j) {
      if (grain == Grain::Fine) rec.begin_task(region::madd_task);
      std::uint64_t off = i * n + j;
      rec.record_access({arr_a, off}, AccessKind::Read, 1);
      rec.record_access({arr_b, off}, AccessKind::Read, 2);
      run.c.at(i, j) = run.a.at(i, j) + run.b.at(i, j);
      rec.record_access({arr_c, off}, AccessKind::Write, 3);
      if (grain == Grain::Fine) rec.end_task();
    }
    if (grain == Grain::Coarse) rec.end_task();
  }
  rec.end_trace();
  run.trace = rec.finalize();
  return run;
}

// ---------------------------------------------------------------------------
// mmult: C += A * B, C zeroed before the trace region

MmultRun run_mmult(std::size_t n, Grain grain, std::uint64_t seed) {
  require(n >= 1, "mmult: n must be >= 1");
  constexpr std::uint32_t arr_a = 0, arr_b = 1, arr_c = 2;

  Rng rng(seed);
  MmultRun run;
  run.a = random_matrix(n, n, rng);
  run.b = random_matrix(n, n, rng);
  run.c = IntMatrix(n, n);  // zeroed, untraced

  Recorder rec;
  rec.begin_trace(region::mmult_trace);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (grain == Grain::Coarse) rec.begin_task(region::mmult_task);
      for (std::size_t k = 0; k < n; ++k) {
        if (grain == Grain::Fine) rec.begin_task(region::mmult_task);
        rec.record_access({arr_a, i * n + k}, AccessKind::Read, 1);
        rec.record_access({arr_b, k * n + j}, AccessKind::Read, 2);
        std::int64_t prod = run.a.at(i, k) * run.b.at(k, j);
        rec.record_access({arr_c, i * n + j}, AccessKind::Read, 3);
        run.c.at(i, j) += prod;
        rec.record_access({arr_c, i * n + j}, AccessKind::Write, 4);
        if (grain == Grain::Fine) rec.end_task();
      }
      if (grain == Grain::Coarse) rec.end_task();
    }
  }
  rec.end_trace();
  run.trace = rec.finalize();
  return run;
}

// ---------------------------------------------------------------------------
// heat: explicit 1-d diffusion stepping, u(x,t) from the t-1 column

HeatRun run_heat(std::size_t nx, std::size_t nt, Grain grain,
                 std::uint64_t seed) {
  require(nx >= 1, "heat: nx must be >= 1");
  require(nt >= 1, "heat: nt must be >= 1");
  constexpr std::uint32_t arr_u = 0;
  constexpr double r = 0.25;

  Rng rng(seed);
  HeatRun run;
  run.nx = nx;
  run.nt = nt;
  run.u.assign((nx + 2) * (nt + 1), 0.0);
  auto off = [&](std::size_t x, std::size_t t) { return x * (nt + 1) + t; };
  // Initial column and boundary rows are written before tracing starts.
  for (std::size_t x = 1; x <= nx; ++x) run.u[off(x, 0)] = rng.unit_real();

  Recorder rec;
  rec.begin_trace(region::heat_trace);
  for (std::size_t t = 1; t <= nt; ++t) {
    if (grain == Grain::Coarse) rec.begin_task(region::heat_task);
    for (std::size_t x = 1; x <= nx; ++x) {
      if (grain == Grain::Fine) rec.begin_task(region::heat_task);
      rec.record_access({arr_u, off(x, t - 1)}, AccessKind::Read, 1);
      rec.record_access({arr_u, off(x + 1, t - 1)}, AccessKind::Read, 2);
      rec.record_access({arr_u, off(x - 1, t - 1)}, AccessKind::Read, 3);
      run.u[off(x, t)] = (1.0 - 2.0 * r) * run.u[off(x, t - 1)] +
                         r * run.u[off(x + 1, t - 1)] +
                         r * run.u[off(x - 1, t - 1)];
      rec.record_access({arr_u, off(x, t)}, AccessKind::Write, 4);
      if (grain == Grain::Fine) rec.end_task();
    }
    if (grain == Grain::Coarse) rec.end_task();
  }
  rec.end_trace();
  run.trace = rec.finalize();
  return run;
}

// ---------------------------------------------------------------------------
// fft: iterative radix-2 decimation in time

namespace {

bool power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t bit_reverse(std::size_t v, unsigned bits) {
  std::size_t out = 0;
  for (unsigned i = 0; i < bits; ++i) {
    out = (out << 1) | ((v >> i) & 1);
  }
  return out;
}

}  // namespace

FftRun run_fft_on(std::vector<std::complex<double>> input, Grain grain) {
  const std::size_t len = input.size();
  if (len < 2 || !power_of_two(len)) {
    throw InvalidLength("fft: len must be a power of two >= 2");
  }
  constexpr std::uint32_t arr_x = 0;

  FftRun run;
  run.input = input;

  unsigned stages = 0;
  while ((std::size_t{1} << stages) < len) ++stages;

  // Bit-reversal reordering happens before the trace region opens.
  std::vector<std::complex<double>> x(len);
  for (std::size_t i = 0; i < len; ++i) x[bit_reverse(i, stages)] = input[i];

  Recorder rec;
  rec.begin_trace(region::fft_trace);
  for (unsigned s = 1; s <= stages; ++s) {
    const std::size_t m = std::size_t{1} << s;
    const std::size_t mh = m >> 1;
    for (std::size_t k = 0; k < len; k += m) {
      if (grain == Grain::Coarse) rec.begin_task(region::fft_task);
      for (std::size_t j = 0; j < mh; ++j) {
        if (grain == Grain::Fine) rec.begin_task(region::fft_task);
        const double ang = -2.0 * std::numbers::pi *
                           static_cast<double>(j) / static_cast<double>(m);
        const std::complex<double> w(std::cos(ang), std::sin(ang));
        rec.record_access({arr_x, k + j + mh}, AccessKind::Read, 1);
        const std::complex<double> t = w * x[k + j + mh];
        rec.record_access({arr_x, k + j}, AccessKind::Read, 2);
        const std::complex<double> u = x[k + j];
        x[k + j] = u + t;
        rec.record_access({arr_x, k + j}, AccessKind::Write, 3);
        x[k + j + mh] = u - t;
        rec.record_access({arr_x, k + j + mh}, AccessKind::Write, 4);
        if (grain == Grain::Fine) rec.end_task();
      }
      if (grain == Grain::Coarse) rec.end_task();
    }
  }
  rec.end_trace();
  run.trace = rec.finalize();
  run.output = std::move(x);
  return run;
}

FftRun run_fft(std::size_t len, Grain grain, std::uint64_t seed) {
  if (len < 2 || !power_of_two(len)) {
    throw InvalidLength("fft: len must be a power of two >= 2");
  }
  Rng rng(seed);
  std::vector<std::complex<double>> input(len);
  for (auto& v : input) {
    double re = rng.unit_real() * 2.0 - 1.0;
    double im = rng.unit_real() * 2.0 - 1.0;
    v = {re, im};
  }
  return run_fft_on(std::move(input), grain);
}

// ---------------------------------------------------------------------------
// sw: local alignment score table

SwRun run_sw(std::size_t len1, std::size_t len2, Grain grain,
             std::uint64_t seed) {
  require(len1 >= 1, "sw: len1 must be >= 1");
  require(len2 >= 1, "sw: len2 must be >= 1");
  constexpr std::uint32_t arr_m = 0, arr_s1 = 1, arr_s2 = 2;
  constexpr char alphabet[] = {'A', 'C', 'G', 'T'};

  Rng rng(seed);
  SwRun run;
  for (std::size_t i = 0; i < len1; ++i) {
    run.seq1.push_back(alphabet[rng.int_below(4)]);
  }
  for (std::size_t j = 0; j < len2; ++j) {
    run.seq2.push_back(alphabet[rng.int_below(4)]);
  }
  run.score = IntMatrix(len1 + 1, len2 + 1);  // borders zeroed, untraced
  IntMatrix& m = run.score;
  auto off = [&](std::size_t i, std::size_t j) { return i * (len2 + 1) + j; };

  Recorder rec;
  rec.begin_trace(region::sw_trace);
  for (std::size_t i = 1; i <= len1; ++i) {
    if (grain == Grain::Coarse) rec.begin_task(region::sw_task);
    for (std::size_t j = 1; j <= len2; ++j) {
      if (grain == Grain::Fine) rec.begin_task(region::sw_task);
      rec.record_access({arr_s1, i - 1}, AccessKind::Read, 1);
      rec.record_access({arr_s2, j - 1}, AccessKind::Read, 2);
      const std::int64_t sc =
          run.seq1[i - 1] == run.seq2[j - 1] ? kSwMatch : kSwMiss;
      rec.record_access({arr_m, off(i, j)}, AccessKind::Read, 3);
      std::int64_t best = m.at(i, j) + sc;
      rec.record_access({arr_m, off(i, j - 1)}, AccessKind::Read, 4);
      best = std::max(best, m.at(i, j - 1) + kSwGap);
      rec.record_access({arr_m, off(i - 1, j)}, AccessKind::Read, 5);
      best = std::max(best, m.at(i - 1, j) + kSwGap);
      best = std::max<std::int64_t>(best, 0);
      m.at(i, j) = best;
      rec.record_access({arr_m, off(i, j)}, AccessKind::Write, 6);
      if (grain == Grain::Fine) rec.end_task();
    }
    if (grain == Grain::Coarse) rec.end_task();
  }
  rec.end_trace();
  run.trace = rec.finalize();
  return run;
}

// ---------------------------------------------------------------------------
// Dispatch

ProgramTrace run_kernel(const KernelSpec& spec) {
  auto want = [&](const std::optional<std::uint64_t>& p, const char* flag,
                  bool needed) -> std::uint64_t {
    if (needed && !p) {
      throw InvalidParam(spec.name + ": missing required parameter " + flag);
    }
    if (!needed && p) {
      throw InvalidParam(spec.name + ": parameter " + flag +
                         " does not apply");
    }
    return p.value_or(0);
  };

  const bool is_madd = spec.name == "madd";
  const bool is_mmult = spec.name == "mmult";
  const bool is_heat = spec.name == "heat";
  const bool is_fft = spec.name == "fft";
  const bool is_sw = spec.name == "sw";
  if (!is_madd && !is_mmult && !is_heat && !is_fft && !is_sw) {
    throw InvalidParam("unknown kernel '" + spec.name + "'");
  }

  std::uint64_t n = want(spec.n, "--n", is_madd || is_mmult);
  std::uint64_t nx = want(spec.nx, "--nx", is_heat);
  std::uint64_t nt = want(spec.nt, "--nt", is_heat);
  std::uint64_t len = want(spec.len, "--len", is_fft);
  std::uint64_t len1 = want(spec.len1, "--len1", is_sw);
  std::uint64_t len2 = want(spec.len2, "--len2", is_sw);

  if (is_madd) return run_madd(n, spec.grain, spec.seed).trace;
  if (is_mmult) return run_mmult(n, spec.grain, spec.seed).trace;
  if (is_heat) return run_heat(nx, nt, spec.grain, spec.seed).trace;
  if (is_fft) return run_fft(len, spec.grain, spec.seed).trace;
  return run_sw(len1, len2, spec.grain, spec.seed).trace;
}

}  // namespace exg::kernels
