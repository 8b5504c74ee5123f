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

#include <iostream>
#include <mutex>
#include <utility>

#include "dlkv/error.hpp"

namespace dlkv::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

Sink& sink() {
  static Sink s = [](Level level, std::string_view message) {
    std::cerr << (level == Level::kWarn ? "[warn] " : "[info] ") << message << '\n';
  };
  return s;
}

void emit(Level level, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(level, message);
}

}  // namespace

Sink set_sink(Sink s) {
  std::lock_guard lock(sink_mutex());
  return std::exchange(sink(), std::move(s));
}

void info(std::string_view message) { emit(Level::kInfo, message); }
void warn(std::string_view message) { emit(Level::kWarn, message); }

}  // namespace dlkv::log
