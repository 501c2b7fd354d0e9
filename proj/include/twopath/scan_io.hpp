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

#ifndef TWOPATH_SCAN_IO_HPP
#define TWOPATH_SCAN_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twopath/detection.hpp"

namespace twopath {

enum class OutputFormat { kCsv, kJsonLines };

OutputFormat parse_format(const std::string& name);

inline constexpr const char* kScanCsvHeader =
    "delay_s,counts_a,counts_b,counts_cc,int_time_s,rate_a_hz,rate_b_hz,rate_cc_hz,seed";

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_scan_csv(std::ostream& out, std::span<const detection::ScanRecord> records);
void write_scan_json_lines(std::ostream& out, std::span<const detection::ScanRecord> records);
void write_scan(std::ostream& out, std::span<const detection::ScanRecord> records,
                OutputFormat format);

/// Throws std::invalid_argument on a header mismatch or malformed row.
std::vector<detection::ScanRecord> read_scan_csv(std::istream& in);
std::vector<detection::ScanRecord> read_scan_json_lines(std::istream& in);
/// Dispatches on the first non-blank character ('{' means JSON lines).
std::vector<detection::ScanRecord> read_scan(std::istream& in);

}  // namespace twopath

#endif  // TWOPATH_SCAN_IO_HPP
