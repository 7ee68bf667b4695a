// Copyright 2026 The qprecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qprecode {

enum class MetricKind { BER, SumRate, PerUserRate, AnalyticBER, AnalyticRate, RateLB };

std::string_view to_string(MetricKind m);
/// Throws std::invalid_argument on an unknown name.
MetricKind parse_metric(std::string_view name);

/// One CSV record. levels = 0 stands for infinite resolution and is
/// written as "inf"; an absent eps is an empty field.
struct ResultRow {
  std::string precoder;
  int B = 0;
  int U = 0;
  int levels = 0;
  double snr_db = 0.0;
  std::optional<double> eps;
  MetricKind metric = MetricKind::BER;
  double value = 0.0;
  double std_error = 0.0;
  long long trials = 0;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr std::string_view kCsvHeader =
    "precoder,B,U,L,snr_db,eps,metric,value,stderr,trials";

/// Header plus one line per row. Numbers use the shortest representation
/// that round-trips, independent of the locale.
std::string format_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(std::string_view text);

void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

}  // namespace qprecode
