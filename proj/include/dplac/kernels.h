// Copyright 2026 The DP-LAC Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLAC_KERNELS_H_
#define DPLAC_KERNELS_H_

// Dense double-precision vector kernels used by the aggregation and local
// training inner loops.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a SIMD variant (AVX2 on x86-64, NEON on AArch64). The variant
// is chosen once at first use from the running CPU's features; setting the
// environment variable DPLAC_SIMD=scalar forces the reference path.
//
// Elementwise kernels (Axpy, Add, Scale) produce bit-identical results on all
// paths: the SIMD variants use a separate multiply and add, never a fused
// operation. Reductions (Dot, SumSquares) reassociate, so SIMD and scalar
// agree only to rounding.

#include <cstddef>
#include <span>

namespace dplac::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y += x
  void (*add)(const double* x, double* y, std::size_t n);
  // x *= a
  void (*scale)(double a, double* x, std::size_t n);
};

const KernelTable& ScalarTable();
// nullptr when the build or the CPU lacks the instruction set.
const KernelTable* Avx2Table();
const KernelTable* NeonTable();

// The table selected for this process.
const KernelTable& Active();
const char* IsaName(Isa isa);

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}
inline double SumSquares(std::span<const double> a) {
  return Active().sum_squares(a.data(), a.size());
}
inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  Active().axpy(a, x.data(), y.data(), y.size());
}
inline void Add(std::span<const double> x, std::span<double> y) {
  Active().add(x.data(), y.data(), y.size());
}
inline void Scale(double a, std::span<double> x) {
  Active().scale(a, x.data(), x.size());
}

}  // namespace dplac::kernels

#endif  // DPLAC_KERNELS_H_
