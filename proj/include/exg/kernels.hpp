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

#ifndef EXG_KERNELS_HPP
#define EXG_KERNELS_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exg/trace.hpp"

namespace exg::kernels {

/// Task placement: Fine puts a task around the innermost loop body,
/// Coarse around the next loop level up. Both run identical arithmetic
/// and touch identical addresses; only the attribution changes.
enum class Grain { Fine, Coarse };

/// Seed for the pseudorandom input data. Fixed so repeated runs of the
/// same kernel spec produce byte-identical traces.
inline constexpr std::uint64_t kDefaultSeed = 0x5eed2026u;

// Region id constants: one trace region and one task region per kernel.
namespace region {
inline constexpr TraceId madd_trace = 10;
inline constexpr RegionId madd_task = 11;
inline constexpr TraceId mmult_trace = 20;
inline constexpr RegionId mmult_task = 21;
inline constexpr TraceId heat_trace = 30;
inline constexpr RegionId heat_task = 31;
inline constexpr TraceId fft_trace = 40;
inline constexpr RegionId fft_task = 41;
inline constexpr TraceId sw_trace = 50;
inline constexpr RegionId sw_task = 51;
}  // namespace region

// Alignment scoring used by the sw kernel.
inline constexpr std::int64_t kSwMatch = 3;
inline constexpr std::int64_t kSwMiss = -3;
inline constexpr std::int64_t kSwGap = -2;

struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  std::int64_t& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Element-wise matrix add, C = A + B over an n x n grid.
/// Fine: one task per element. Coarse: one task per row.
struct MaddRun {
  ProgramTrace trace;
  IntMatrix a, b, c;
};
MaddRun run_madd(std::size_t n, Grain grain, std::uint64_t seed = kDefaultSeed);

/// Matrix multiply accumulating into a pre-zeroed C, C += A * B.
/// Fine: one task per (i, j, k) update. Coarse: one task per C element.
struct MmultRun {
  ProgramTrace trace;
  IntMatrix a, b, c;
};
MmultRun run_mmult(std::size_t n, Grain grain,
                   std::uint64_t seed = kDefaultSeed);

/// Explicit 1-d heat diffusion over nx interior points and nt time steps.
/// The grid u has nx+2 rows (boundaries at x=0 and x=nx+1) and nt+1
/// columns; column 0 and the boundary rows are filled before tracing.
/// Fine: one task per (x, t) update. Coarse: one task per time step.
struct HeatRun {
  ProgramTrace trace;
  std::size_t nx = 0, nt = 0;
  std::vector<double> u;  // (nx+2) x (nt+1), row-major by x

  double at(std::size_t x, std::size_t t) const { return u[x * (nt + 1) + t]; }
};
HeatRun run_heat(std::size_t nx, std::size_t nt, Grain grain,
                 std::uint64_t seed = kDefaultSeed);

/// Iterative radix-2 decimation-in-time transform, in place after an
/// untraced bit-reversal copy. len must be a power of two >= 2.
/// Fine: one task per butterfly. Coarse: one task per (stage, group).
struct FftRun {
  ProgramTrace trace;
  std::vector<std::complex<double>> input;   // pre bit-reversal
  std::vector<std::complex<double>> output;  // transformed
};
FftRun run_fft(std::size_t len, Grain grain, std::uint64_t seed = kDefaultSeed);
/// Same kernel on a caller-supplied signal.
FftRun run_fft_on(std::vector<std::complex<double>> input, Grain grain);

/// Local alignment score table over two random sequences (basic form:
/// each cell folds its own previous value, the left and the upper
/// neighbour, clamped at zero). Row 0 and column 0 are pre-zeroed.
/// Fine: one task per cell. Coarse: one task per row.
struct SwRun {
  ProgramTrace trace;
  std::string seq1, seq2;
  IntMatrix score;  // (len1+1) x (len2+1)
};
SwRun run_sw(std::size_t len1, std::size_t len2, Grain grain,
             std::uint64_t seed = kDefaultSeed);

/// Parsed kernel selection, e.g. from command-line flags. Exactly the
/// parameters the named kernel needs must be present.
struct KernelSpec {
  std::string name;  // madd | mmult | heat | fft | sw
  std::optional<std::uint64_t> n;          // madd, mmult
  std::optional<std::uint64_t> nx, nt;     // heat
  std::optional<std::uint64_t> len;        // fft
  std::optional<std::uint64_t> len1, len2; // sw
  Grain grain = Grain::Fine;
  std::uint64_t seed = kDefaultSeed;
};

/// Runs the selected kernel and returns its trace.
/// Throws InvalidParam (InvalidLength for bad fft sizes) on bad specs.
ProgramTrace run_kernel(const KernelSpec& spec);

}  // namespace exg::kernels

#endif  // EXG_KERNELS_HPP
