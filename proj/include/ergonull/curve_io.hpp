// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ergonull Authors
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

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergonull/experiment.hpp"

namespace ergonull {

// Raised for unreadable or unwritable files; the message carries the path.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& message, std::filesystem::path path);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

// Header "<x_label>,<scheme>_mean,<scheme>_stderr,..." then one row per x.
std::string curve_csv(const RateCurve& curve);
void write_curve_csv(const RateCurve& curve, const std::filesystem::path& path);

// Parses a file written by write_curve_csv. Trial counts are not stored in
// the CSV and come back empty.
RateCurve read_curve_csv(const std::filesystem::path& path);

// Two-column "theta_deg,gain" beam pattern.
void write_beam_pattern_csv(std::span<const double> theta_deg, std::span<const double> gain,
                            const std::filesystem::path& path);

// Whole-file helpers; failures raise IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void append_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace ergonull
