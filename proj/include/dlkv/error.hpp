// Copyright 2026 The dlkv Authors.
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

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlkv {

// Bad or unusable input data: unreadable files, malformed records, empty
// vocabularies, analyses with nothing to analyze.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A NaN or Inf showed up where finite values are required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on arguments are reported as std::invalid_argument.

namespace log {

enum class Level { kInfo, kWarn };

using Sink = std::function<void(Level, std::string_view)>;

// Replaces the process-wide sink (default: stderr). Returns the previous one.
Sink set_sink(Sink sink);

void info(std::string_view message);
void warn(std::string_view message);

}  // namespace log
}  // namespace dlkv
