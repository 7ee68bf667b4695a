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

#include "qprecode/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qprecode {

namespace {

constexpr std::array<std::pair<MetricKind, std::string_view>, 6> kMetricNames{{
    {MetricKind::BER, "BER"},
    {MetricKind::SumRate, "SumRate"},
    {MetricKind::PerUserRate, "PerUserRate"},
    {MetricKind::AnalyticBER, "AnalyticBER"},
    {MetricKind::AnalyticRate, "AnalyticRate"},
    {MetricKind::RateLB, "RateLB"},
}};

void append_double(std::string& out, double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_csv: number formatting failed");
  out.append(buf.data(), ptr);
}

template <typename T>
T parse_field(std::string_view field, int line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw std::invalid_argument("parse_csv: bad number on line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace

std::string_view to_string(MetricKind m) {
  for (const auto& [kind, name] : kMetricNames) {
    if (kind == m) return name;
  }
  return "?";
}

MetricKind parse_metric(std::string_view name) {
  for (const auto& [kind, n] : kMetricNames) {
    if (n == name) return kind;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    if (r.precoder.find_first_of(",\n\"") != std::string::npos) {
      throw std::invalid_argument("format_csv: precoder tag needs no quoting");
    }
    out += r.precoder;
    out += ',';
    out += std::to_string(r.B);
    out += ',';
    out += std::to_string(r.U);
    out += ',';
    out += r.levels == 0 ? std::string("inf") : std::to_string(r.levels);
    out += ',';
    append_double(out, r.snr_db);
    out += ',';
    if (r.eps) append_double(out, *r.eps);
    out += ',';
    out += to_string(r.metric);
    out += ',';
    append_double(out, r.value);
    out += ',';
    append_double(out, r.std_error);
    out += ',';
    out += std::to_string(r.trials);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string_view, 10> f{};
    std::size_t n = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (n == f.size()) throw std::invalid_argument("parse_csv: too many fields");
      f[n++] = line.substr(start, comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (n != f.size()) {
      throw std::invalid_argument("parse_csv: expected 10 fields on line " + std::to_string(line_no));
    }
    ResultRow r;
    r.precoder = std::string(f[0]);
    r.B = parse_field<int>(f[1], line_no);
    r.U = parse_field<int>(f[2], line_no);
    r.levels = f[3] == "inf" ? 0 : parse_field<int>(f[3], line_no);
    r.snr_db = parse_field<double>(f[4], line_no);
    if (!f[5].empty()) r.eps = parse_field<double>(f[5], line_no);
    r.metric = parse_metric(f[6]);
    r.value = parse_field<double>(f[7], line_no);
    r.std_error = parse_field<double>(f[8], line_no);
    r.trials = parse_field<long long>(f[9], line_no);
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw std::invalid_argument("parse_csv: missing header");
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  const std::string text = format_csv(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace qprecode
