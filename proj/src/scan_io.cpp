// Copyright 2026 The twopath Authors
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

#include "twopath/scan_io.hpp"

#include <charconv>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twopath {

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json-lines") return OutputFormat::kJsonLines;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json-lines)");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double rate(std::uint64_t counts, double t) { return static_cast<double>(counts) / t; }

template <class T>
T parse_field(const std::string& text, std::size_t line, const char* column) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    std::ostringstream msg;
    msg << "scan csv line " << line << ": bad value '" << text << "' in column " << column;
    throw std::invalid_argument(msg.str());
  }
  return value;
}

}  // namespace

void write_scan_csv(std::ostream& out, std::span<const detection::ScanRecord> records) {
  out << kScanCsvHeader << '\n';
  for (const auto& r : records) {
    const double t = r.integration_time_s;
    out << format_double(r.delay_s) << ',' << r.counts_a << ',' << r.counts_b << ','
        << r.counts_cc << ',' << format_double(t) << ',' << format_double(rate(r.counts_a, t))
        << ',' << format_double(rate(r.counts_b, t)) << ','
        << format_double(rate(r.counts_cc, t)) << ',' << r.rng_seed << '\n';
  }
}

void write_scan_json_lines(std::ostream& out, std::span<const detection::ScanRecord> records) {
  for (const auto& r : records) {
    const double t = r.integration_time_s;
    nlohmann::ordered_json j;
    j["delay_s"] = r.delay_s;
    j["counts_a"] = r.counts_a;
    j["counts_b"] = r.counts_b;
    j["counts_cc"] = r.counts_cc;
    j["int_time_s"] = t;
    j["rate_a_hz"] = rate(r.counts_a, t);
    j["rate_b_hz"] = rate(r.counts_b, t);
    j["rate_cc_hz"] = rate(r.counts_cc, t);
    j["seed"] = r.rng_seed;
    out << j.dump() << '\n';
  }
}

void write_scan(std::ostream& out, std::span<const detection::ScanRecord> records,
                OutputFormat format) {
  if (format == OutputFormat::kCsv)
    write_scan_csv(out, records);
  else
    write_scan_json_lines(out, records);
}

std::vector<detection::ScanRecord> read_scan_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("scan csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kScanCsvHeader)
    throw std::invalid_argument("scan csv: header mismatch, expected '" +
                                std::string(kScanCsvHeader) + "'");
  std::vector<detection::ScanRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 9) {
      std::ostringstream msg;
      msg << "scan csv line " << line_no << ": expected 9 columns, got " << cols.size();
      throw std::invalid_argument(msg.str());
    }
    detection::ScanRecord r;
    r.delay_s = parse_field<double>(cols[0], line_no, "delay_s");
    r.counts_a = parse_field<std::uint64_t>(cols[1], line_no, "counts_a");
    r.counts_b = parse_field<std::uint64_t>(cols[2], line_no, "counts_b");
    r.counts_cc = parse_field<std::uint64_t>(cols[3], line_no, "counts_cc");
    r.integration_time_s = parse_field<double>(cols[4], line_no, "int_time_s");
    r.rng_seed = parse_field<std::uint64_t>(cols[8], line_no, "seed");
    if (!(r.integration_time_s > 0.0)) {
      std::ostringstream msg;
      msg << "scan csv line " << line_no << ": int_time_s must be positive";
      throw std::invalid_argument(msg.str());
    }
    out.push_back(r);
  }
  return out;
}

std::vector<detection::ScanRecord> read_scan_json_lines(std::istream& in) {
  std::vector<detection::ScanRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      detection::ScanRecord r;
      r.delay_s = j.at("delay_s").get<double>();
      r.counts_a = j.at("counts_a").get<std::uint64_t>();
      r.counts_b = j.at("counts_b").get<std::uint64_t>();
      r.counts_cc = j.at("counts_cc").get<std::uint64_t>();
      r.integration_time_s = j.at("int_time_s").get<double>();
      r.rng_seed = j.at("seed").get<std::uint64_t>();
      out.push_back(r);
    } catch (const nlohmann::json::exception& e) {
      std::ostringstream msg;
      msg << "scan json line " << line_no << ": " << e.what();
      throw std::invalid_argument(msg.str());
    }
  }
  return out;
}

std::vector<detection::ScanRecord> read_scan(std::istream& in) {
  in >> std::ws;
  if (in.peek() == '{') return read_scan_json_lines(in);
  return read_scan_csv(in);
}

}  // namespace twopath
