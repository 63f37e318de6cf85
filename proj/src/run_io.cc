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

#include "dplac/run_io.h"

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include "dplac/error.h"

namespace dplac {
namespace {

constexpr char kMagic[4] = {'D', 'P', 'L', 'W'};

void PutLe(std::uint64_t v, int bytes, std::ostream& out) {
  for (int i = 0; i < bytes; ++i) {
    out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

std::uint64_t GetLe(int bytes, std::istream& in) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      throw InvalidArgumentError("model snapshot truncated");
    }
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
  }
  return v;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string::npos
                                       ? std::string::npos
                                       : comma - pos));
    if (comma == std::string::npos) return out;
    pos = comma + 1;
  }
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string FormatReal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void WriteRoundsCsv(const std::vector<RoundRecord>& records,
                    std::ostream& out) {
  out << kRoundsHeader << '\n';
  for (const RoundRecord& r : records) {
    out << r.round << ',' << r.cohort.size() << ',' << FormatReal(r.threshold)
        << ',' << FormatReal(r.v) << ',' << FormatReal(r.sigma) << ','
        << FormatReal(r.accuracy) << ',' << FormatReal(r.loss) << ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) {
      if (i > 0) out << '|';
      out << r.flags[i];
    }
    out << '\n';
  }
}

int RoundsTable::Column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

RoundsTable ReadRoundsCsv(std::istream& in) {
  RoundsTable table;
  std::string line;
  if (!std::getline(in, line) || line != kRoundsHeader) {
    throw InvalidArgumentError("rounds.csv: unexpected header");
  }
  table.columns = SplitCsv(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = SplitCsv(line);
    if (cells.size() != table.columns.size()) {
      throw InvalidArgumentError("rounds.csv: ragged row " +
                                 std::to_string(table.rows.size() + 1));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void WriteSummary(const ExperimentConfig& cfg, const ExperimentResult& result,
                  std::ostream& out) {
  out << "# generated " << UtcTimestamp() << '\n';
  out << "strategy=" << StrategyName(cfg.strategy.kind) << '\n';
  out << "rounds=" << result.records.size() << '\n';
  out << "dimension=" << result.num_params << '\n';
  out << "z=" << FormatReal(result.z.value()) << '\n';
  if (result.z_loss) out << "z_loss=" << FormatReal(result.z_loss->value()) << '\n';
  out << "source=" << InitSourceName(result.init.source) << '\n';
  out << "C0=" << FormatReal(result.init.c0) << '\n';
  if (result.init.histogram) {
    out << "histogram=";
    const auto& counts = result.init.histogram->counts;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i > 0) out << ',';
      out << FormatReal(counts[i]);
    }
    out << '\n';
  }
  out << "v0=" << FormatReal(result.v0) << '\n';
  if (!result.records.empty()) {
    const RoundRecord& last = result.records.back();
    out << "final_C=" << FormatReal(last.threshold) << '\n';
    out << "final_acc=" << FormatReal(last.accuracy) << '\n';
    out << "final_loss=" << FormatReal(last.loss) << '\n';
  }
}

void WriteModelSnapshot(const ParamVector& params, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  PutLe(kSnapshotVersion, 4, out);
  PutLe(params.size(), 8, out);
  for (double v : params.values()) PutLe(std::bit_cast<std::uint64_t>(v), 8, out);
}

ParamVector ReadModelSnapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InvalidArgumentError("not a model snapshot");
  }
  const std::uint64_t version = GetLe(4, in);
  if (version != kSnapshotVersion) {
    throw InvalidArgumentError("unsupported snapshot version " +
                               std::to_string(version));
  }
  const std::uint64_t dim = GetLe(8, in);
  std::vector<double> values(dim);
  for (auto& v : values) v = std::bit_cast<double>(GetLe(8, in));
  return ParamVector(std::move(values));
}

}  // namespace dplac
