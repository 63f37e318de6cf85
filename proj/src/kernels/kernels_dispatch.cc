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

#include <cstdlib>
#include <cstring>

#include "dplac/kernels.h"

namespace dplac::kernels {

#if defined(DPLAC_HAVE_AVX2_TU)
const KernelTable& Avx2TableUnchecked();
#endif
#if defined(DPLAC_HAVE_NEON_TU)
const KernelTable& NeonTableUnchecked();
#endif

const KernelTable* Avx2Table() {
#if defined(DPLAC_HAVE_AVX2_TU)
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &Avx2TableUnchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* NeonTable() {
#if defined(DPLAC_HAVE_NEON_TU)
  return &NeonTableUnchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& Select() {
  const char* forced = std::getenv("DPLAC_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
    return ScalarTable();
  }
  if (const KernelTable* t = Avx2Table()) return *t;
  if (const KernelTable* t = NeonTable()) return *t;
  return ScalarTable();
}

}  // namespace

const KernelTable& Active() {
  static const KernelTable& table = Select();
  return table;
}

const char* IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

}  // namespace dplac::kernels
