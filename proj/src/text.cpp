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

#include "dlkv/text.hpp"

#include <cstdint>

namespace dlkv::text {
namespace {

struct Decoded {
  char32_t cp;
  std::size_t len;
  bool valid;
};

Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1, false};
  }
  if (pos + len > s.size()) return {b0, 1, false};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len, true};
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// One code point (or one invalid byte) at a time.
struct Unit {
  std::string_view bytes;
  char32_t cp;
  bool valid;
};

template <typename F>
void for_each_unit(std::string_view s, F&& f) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const Decoded d = decode(s, pos);
    f(Unit{s.substr(pos, d.len), d.cp, d.valid});
    pos += d.len;
  }
}

void append_lower(const Unit& u, std::string& out) {
  if (!u.valid) {
    out.append(u.bytes);
    return;
  }
  encode(to_lower(u.cp), out);
}

}  // namespace

bool is_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
         cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0xA1: case 0xA6: case 0xA7: case 0xA8: case 0xAB: case 0xAC:
    case 0xAF: case 0xB0: case 0xB4: case 0xB6: case 0xB7: case 0xB8:
    case 0xBB: case 0xBF: case 0xD7: case 0xF7:
      return true;
    default:
      break;
  }
  return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
         (cp >= 0x3001 && cp <= 0x303F) || cp == 0xFF01 || cp == 0xFF0C ||
         cp == 0xFF0E || cp == 0xFF1A || cp == 0xFF1B || cp == 0xFF1F;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp == 0x1E9E) return 0xDF;
  return cp;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for_each_unit(s, [&](const Unit& u) { append_lower(u, out); });
  return out;
}

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::vector<Unit> piece;
  auto flush = [&] {
    std::size_t lo = 0;
    std::size_t hi = piece.size();
    while (lo < hi && piece[lo].valid && is_punct(piece[lo].cp)) ++lo;
    while (hi > lo && piece[hi - 1].valid && is_punct(piece[hi - 1].cp)) --hi;
    if (lo < hi) {
      std::string tok;
      for (std::size_t i = lo; i < hi; ++i) append_lower(piece[i], tok);
      tokens.push_back(std::move(tok));
    }
    piece.clear();
  };
  for_each_unit(line, [&](const Unit& u) {
    if (u.valid && is_space(u.cp)) {
      flush();
    } else {
      piece.push_back(u);
    }
  });
  flush();
  return tokens;
}

std::string first_line_key(std::string_view line) {
  std::string out;
  bool pending_space = false;
  for_each_unit(line, [&](const Unit& u) {
    if (u.valid && is_space(u.cp)) {
      pending_space = !out.empty();
      return;
    }
    if (u.valid && is_punct(u.cp)) return;
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_lower(u, out);
  });
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (lo < hi && space(s[lo])) ++lo;
  while (hi > lo && space(s[hi - 1])) --hi;
  return s.substr(lo, hi - lo);
}

}  // namespace dlkv::text
