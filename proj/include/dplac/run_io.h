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

#ifndef DPLAC_RUN_IO_H_
#define DPLAC_RUN_IO_H_

// On-disk artifacts of an experiment run.
//
// rounds.csv   header "round,cohort_size,C,v,sigma,acc,loss,flags", one row
//              per round, reals printed with 9 significant digits, flags
//              joined with '|'.
// summary.txt  "# generated <UTC timestamp>" then key=value lines.
// model.bin    16-byte header (magic "DPLW", u32 version 1, u64 dimension,
//              all little-endian) followed by the parameters as
//              little-endian IEEE-754 doubles.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dplac/harness.h"
#include "dplac/param_vector.h"

namespace dplac {

inline constexpr char kRoundsHeader[] =
    "round,cohort_size,C,v,sigma,acc,loss,flags";

// %.9g
std::string FormatReal(double v);

void WriteRoundsCsv(const std::vector<RoundRecord>& records, std::ostream& out);

struct RoundsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column, or -1.
  int Column(const std::string& name) const;
};
RoundsTable ReadRoundsCsv(std::istream& in);

void WriteSummary(const ExperimentConfig& cfg, const ExperimentResult& result,
                  std::ostream& out);

inline constexpr std::uint32_t kSnapshotVersion = 1;
void WriteModelSnapshot(const ParamVector& params, std::ostream& out);
ParamVector ReadModelSnapshot(std::istream& in);

}  // namespace dplac

#endif  // DPLAC_RUN_IO_H_
