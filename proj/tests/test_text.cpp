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

#include "doctest.h"

using dlkv::text::first_line_key;
using dlkv::text::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize splits, strips edge punctuation and lowercases") {
  CHECK(tokenize("Die Liebe blüht.") == Tokens{"die", "liebe", "blüht"});
  CHECK(tokenize("  \"Ach!\"  ,  wie   schön; ") == Tokens{"ach", "wie", "schön"});
  CHECK(tokenize("").empty());
  CHECK(tokenize(" ... -- ").empty());
}

TEST_CASE("tokenize keeps inner punctuation") {
  CHECK(tokenize("Heil'ge Nacht-Luft") == Tokens{"heil'ge", "nacht-luft"});
}

TEST_CASE("tokenize folds non-ASCII capitals") {
  CHECK(tokenize("ÜBER ÄCKER ÖDE") == Tokens{"über", "äcker", "öde"});
  CHECK(tokenize("ΑΒΓ Жизнь") == Tokens{"αβγ", "жизнь"});
}

TEST_CASE("tokenize splits on Unicode whitespace") {
  // U+00A0 no-break space and U+2003 em space.
  CHECK(tokenize("Herz\xC2\xA0und\xE2\x80\x83Schmerz") == Tokens{"herz", "und", "schmerz"});
}

TEST_CASE("tokenize strips Unicode quotation marks") {
  CHECK(tokenize("\xE2\x80\x9E" "Liebe" "\xE2\x80\x9C") == Tokens{"liebe"});
  CHECK(tokenize("\xC2\xBB" "Nacht" "\xC2\xAB") == Tokens{"nacht"});
}

TEST_CASE("invalid UTF-8 passes through") {
  const Tokens t = tokenize("a\xFF" "b c");
  REQUIRE(t.size() == 2);
  CHECK(t[0] == "a\xFF" "b");
}

TEST_CASE("first line key ignores case, punctuation and spacing") {
  CHECK(first_line_key("Ich liebe dich!") == "ich liebe dich");
  CHECK(first_line_key("  ICH,  liebe   dich ") == "ich liebe dich");
  CHECK(first_line_key("Ich liebe dich") == first_line_key("ich - liebe dich."));
  CHECK(first_line_key("") == "");
}
