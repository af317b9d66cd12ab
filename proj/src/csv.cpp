// Copyright 2026 The chirpdd Authors
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

#include "chirpdd/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace chirpdd::csv {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Writer::comment(std::string_view key, std::string_view value) {
  if (columns_ != 0) throw std::logic_error("csv::Writer: comment after header");
  if (value.find_first_of("\r\n") != std::string_view::npos) {
    throw std::invalid_argument("csv::Writer: comment value spans lines");
  }
  out_ << "# " << key << ": " << value << '\n';
}

void Writer::header(const std::vector<std::string>& names) {
  if (columns_ != 0) throw std::logic_error("csv::Writer: header written twice");
  if (names.empty()) throw std::invalid_argument("csv::Writer: empty header");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(names[i]);
  }
  out_ << '\n';
  columns_ = names.size();
}

void Writer::row(const std::vector<Field>& fields) {
  if (fields.size() != columns_) {
    throw std::invalid_argument("csv::Writer: row width does not match the header");
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_number(f);
          } else if constexpr (std::is_same_v<T, long long>) {
            out_ << f;
          } else {
            out_ << quote(f);
          }
        },
        fields[i]);
  }
  out_ << '\n';
}

}  // namespace chirpdd::csv
