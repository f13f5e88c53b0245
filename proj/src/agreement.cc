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

#include "percept/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "percept/error.hpp"

namespace percept {
namespace {

constexpr double kFlatTolerance = 1e-12;

double Pearson(std::span<const double> a, std::span<const double> b,
               std::vector<std::string>* warnings) {
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  const double sd_a = std::sqrt(saa / n);
  const double sd_b = std::sqrt(sbb / n);
  if (sd_a <= kFlatTolerance * std::max(1.0, std::abs(mean_a)) ||
      sd_b <= kFlatTolerance * std::max(1.0, std::abs(mean_b))) {
    if (warnings) {
      warnings->push_back("zero-variance map; pearson agreement defined as 0");
    }
    return 0.0;
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double UnitDot(std::span<const double> a, std::span<const double> b,
               std::vector<std::string>* warnings) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (std::sqrt(na) <= kFlatTolerance || std::sqrt(nb) <= kFlatTolerance) {
    if (warnings) {
      warnings->push_back("zero-norm map; raw-dot agreement defined as 0");
    }
    return 0.0;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::string FormatScore(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::string_view ToString(AgreementMode mode) {
  return mode == AgreementMode::kPearson ? "pearson" : "raw-dot";
}

AgreementMode ParseAgreementMode(std::string_view name) {
  if (name == "pearson") return AgreementMode::kPearson;
  if (name == "raw-dot") return AgreementMode::kRawDot;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown agreement mode '" + std::string(name) +
                  "' (expected pearson or raw-dot)");
}

double AgreementScore(std::span<const double> component,
                      std::span<const double> overall, AgreementMode mode,
                      std::vector<std::string>* warnings) {
  if (component.size() != overall.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "agreement between maps of " +
                    std::to_string(component.size()) + " and " +
                    std::to_string(overall.size()) + " pixels");
  }
  if (component.empty()) {
    throw Error(ErrorKind::kEmptyInput, "agreement of empty maps");
  }
  return mode == AgreementMode::kPearson
             ? Pearson(component, overall, warnings)
             : UnitDot(component, overall, warnings);
}

double AgreementScore(const ImportanceMap& component,
                      const ImportanceMap& overall, AgreementMode mode,
                      std::vector<std::string>* warnings) {
  if (component.size != overall.size) {
    throw Error(ErrorKind::kDimensionMismatch,
                "agreement between maps of " + ToString(component.size) +
                    " and " + ToString(overall.size));
  }
  const std::vector<double> a(component.values.begin(),
                              component.values.end());
  const std::vector<double> b(overall.values.begin(), overall.values.end());
  return AgreementScore(a, b, mode, warnings);
}

AgreementReport ScoreRun(const RunReport& run, std::string image_id,
                         AgreementMode mode,
                         std::vector<std::string>* warnings) {
  const ImportanceMap& overall = run.Get(Component::kOverall);
  AgreementReport report;
  report.image_id = std::move(image_id);
  report.mode = mode;
  report.color = AgreementScore(run.Get(Component::kColor), overall, mode,
                                warnings);
  report.shape = AgreementScore(run.Get(Component::kShape), overall, mode,
                                warnings);
  report.texture = AgreementScore(run.Get(Component::kTexture), overall, mode,
                                  warnings);
  return report;
}

AgreementReport Aggregate(std::span<const AgreementReport> reports) {
  if (reports.empty()) {
    throw Error(ErrorKind::kEmptyInput, "cannot aggregate zero reports");
  }
  AgreementReport out;
  out.mode = reports.front().mode;
  out.count = 0;
  for (const auto& r : reports) {
    if (r.mode != out.mode) {
      throw Error(ErrorKind::kMixedModes,
                  "cannot aggregate pearson and raw-dot reports together");
    }
    out.color += r.color;
    out.shape += r.shape;
    out.texture += r.texture;
    out.count += r.count;
  }
  const double n = static_cast<double>(reports.size());
  out.color /= n;
  out.shape /= n;
  out.texture /= n;
  out.image_id = "aggregate(n=" + std::to_string(out.count) + ")";
  return out;
}

std::string CsvHeader() { return "image_id,color,shape,texture,mode"; }

std::string CsvRow(const AgreementReport& report) {
  return report.image_id + "," + FormatScore(report.color) + "," +
         FormatScore(report.shape) + "," + FormatScore(report.texture) + "," +
         std::string(ToString(report.mode));
}

void WriteAgreementCsv(std::ostream& out,
                       std::span<const AgreementReport> reports) {
  out << CsvHeader() << "\n";
  for (const auto& r : reports) out << CsvRow(r) << "\n";
  out << CsvRow(Aggregate(reports)) << "\n";
}

void WriteAgreementCsv(const std::filesystem::path& path,
                       std::span<const AgreementReport> reports) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  WriteAgreementCsv(out, reports);
}

AgreementTable ReadAgreementCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != CsvHeader()) {
    throw Error(ErrorKind::kIo, "unexpected CSV header in " + path.string());
  }
  AgreementTable table;
  bool have_footer = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitCsv(line);
    if (f.size() != 5) {
      throw Error(ErrorKind::kIo, "malformed CSV row: " + line);
    }
    AgreementReport r;
    r.image_id = f[0];
    r.color = std::stod(f[1]);
    r.shape = std::stod(f[2]);
    r.texture = std::stod(f[3]);
    r.mode = ParseAgreementMode(f[4]);
    if (r.image_id.starts_with("aggregate(n=")) {
      r.count = std::stoul(r.image_id.substr(12));
      table.aggregate = r;
      have_footer = true;
    } else {
      table.rows.push_back(std::move(r));
    }
  }
  if (!have_footer) {
    throw Error(ErrorKind::kIo, "CSV has no aggregate footer: " + path.string());
  }
  return table;
}

}  // namespace percept
