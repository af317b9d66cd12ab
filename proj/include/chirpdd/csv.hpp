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

#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chirpdd::csv {

/// Quote a field when it contains a comma, quote or line break.
std::string quote(std::string_view field);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

using Field = std::variant<double, long long, std::string>;

// Header row and data rows with RFC 4180 quoting. Metadata goes into
// leading "# key: value" lines, before the header.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void comment(std::string_view key, std::string_view value);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<Field>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace chirpdd::csv
