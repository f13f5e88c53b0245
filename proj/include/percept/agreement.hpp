/*
 * Copyright 2026 The percept-xai Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Agreement between a component map and the overall map.
//
//   pearson  Pearson correlation of the flattened maps (default).
//   raw-dot  sum_ij R_ij * S_ij after scaling each map to unit L2 norm.

#ifndef PERCEPT_AGREEMENT_HPP_
#define PERCEPT_AGREEMENT_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "percept/engine.hpp"

namespace percept {

enum class AgreementMode { kPearson, kRawDot };

std::string_view ToString(AgreementMode mode);
AgreementMode ParseAgreementMode(std::string_view name);

// Degenerate inputs (zero variance for pearson, zero norm for raw-dot)
// score 0 and append a warning when `warnings` is non-null.
double AgreementScore(std::span<const double> component,
                      std::span<const double> overall, AgreementMode mode,
                      std::vector<std::string>* warnings = nullptr);

double AgreementScore(const ImportanceMap& component,
                      const ImportanceMap& overall, AgreementMode mode,
                      std::vector<std::string>* warnings = nullptr);

struct AgreementReport {
  std::string image_id;
  double color = 0.0;
  double shape = 0.0;
  double texture = 0.0;
  AgreementMode mode = AgreementMode::kPearson;
  std::size_t count = 1;  // images represented (> 1 after aggregation)
};

// Scores every component map in `run` against its overall map.
AgreementReport ScoreRun(const RunReport& run, std::string image_id,
                         AgreementMode mode,
                         std::vector<std::string>* warnings = nullptr);

// Arithmetic mean per component; `count` sums the inputs' counts.
AgreementReport Aggregate(std::span<const AgreementReport> reports);

// CSV: header "image_id,color,shape,texture,mode", one row per report, then
// an aggregate footer whose image_id is "aggregate(n=<count>)".
std::string CsvHeader();
std::string CsvRow(const AgreementReport& report);
void WriteAgreementCsv(std::ostream& out,
                       std::span<const AgreementReport> reports);
void WriteAgreementCsv(const std::filesystem::path& path,
                       std::span<const AgreementReport> reports);

struct AgreementTable {
  std::vector<AgreementReport> rows;
  AgreementReport aggregate;
};
AgreementTable ReadAgreementCsv(const std::filesystem::path& path);

}  // namespace percept

#endif  // PERCEPT_AGREEMENT_HPP_
