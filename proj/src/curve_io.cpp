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


#include "ergonull/curve_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace ergonull {

IoError::IoError(const std::string& message, std::filesystem::path path)
    : std::runtime_error(message + ": " + path.string()), path_(std::move(path)) {}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& field, const std::filesystem::path& path, std::size_t line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw IoError("malformed number '" + field + "' on line " + std::to_string(line), path);
  return v;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string curve_csv(const RateCurve& curve) {
  std::string s = curve.x_label.empty() ? "x" : curve.x_label;
  for (const std::string& name : curve.schemes) s += "," + name + "_mean," + name + "_stderr";
  s += '\n';
  for (std::size_t k = 0; k < curve.x.size(); ++k) {
    s += format_double(curve.x[k]);
    for (std::size_t j = 0; j < curve.schemes.size(); ++j) {
      s += ',';
      s += format_double(curve.mean.at(j).at(k));
      s += ',';
      s += format_double(curve.std_error.at(j).at(k));
    }
    s += '\n';
  }
  return s;
}

void write_curve_csv(const RateCurve& curve, const std::filesystem::path& path) {
  write_text_file(path, curve_csv(curve));
}

RateCurve read_curve_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV file", path);
  const std::vector<std::string> header = split_commas(line);
  if (header.empty() || (header.size() - 1) % 2 != 0) throw IoError("malformed CSV header", path);
  RateCurve c;
  c.x_label = header[0];
  for (std::size_t k = 1; k < header.size(); k += 2) {
    const std::string& m = header[k];
    const std::string suffix = "_mean";
    if (m.size() <= suffix.size() || m.compare(m.size() - suffix.size(), suffix.size(), suffix) != 0)
      throw IoError("header column '" + m + "' is not a _mean column", path);
    const std::string name = m.substr(0, m.size() - suffix.size());
    if (header[k + 1] != name + "_stderr") throw IoError("header column '" + header[k + 1] + "' out of place", path);
    c.schemes.push_back(name);
  }
  c.mean.assign(c.schemes.size(), {});
  c.std_error.assign(c.schemes.size(), {});
  c.trials.assign(c.schemes.size(), {});
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> f = split_commas(line);
    if (f.size() != header.size())
      throw IoError("line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(header.size()),
                    path);
    c.x.push_back(parse_double(f[0], path, line_no));
    for (std::size_t j = 0; j < c.schemes.size(); ++j) {
      c.mean[j].push_back(parse_double(f[1 + 2 * j], path, line_no));
      c.std_error[j].push_back(parse_double(f[2 + 2 * j], path, line_no));
    }
  }
  return c;
}

void write_beam_pattern_csv(std::span<const double> theta_deg, std::span<const double> gain,
                            const std::filesystem::path& path) {
  if (theta_deg.size() != gain.size()) throw std::invalid_argument("write_beam_pattern_csv: length mismatch");
  std::string s = "theta_deg,gain\n";
  for (std::size_t k = 0; k < gain.size(); ++k) {
    s += format_double(theta_deg[k]);
    s += ',';
    s += format_double(gain[k]);
    s += '\n';
  }
  write_text_file(path, s);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed", path);
}

void append_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open for appending", path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed", path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed", path);
  return ss.str();
}

}  // namespace ergonull
