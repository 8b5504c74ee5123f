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

#include "dlkv/model_io.hpp"

#include <fmt/format.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>

#include "dlkv/error.hpp"

namespace dlkv {
namespace {

constexpr std::array<char, 4> kMagic{'D', 'L', 'K', 'V'};
constexpr std::array<char, 4> kCountsTag{'S', 'L', 'T', 'C'};
constexpr std::uint32_t kMaxWordBytes = 1u << 20;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  template <typename U>
  void le(U v) {
    std::array<unsigned char, sizeof(U)> buf;
    for (std::size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    bytes(buf.data(), buf.size());
  }
  void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v)); }
  void f32s(std::span<const float> values) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(values.data(), values.size_bytes());
    } else {
      for (float f : values) le(std::bit_cast<std::uint32_t>(f));
    }
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw DataError("truncated model file");
  }
  template <typename U>
  U le() {
    std::array<unsigned char, sizeof(U)> buf;
    bytes(buf.data(), buf.size());
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(le<std::uint32_t>()); }
  void f32s(std::span<float> values) {
    if constexpr (std::endian::native == std::endian::little) {
      bytes(values.data(), values.size_bytes());
    } else {
      for (float& f : values) f = std::bit_cast<float>(le<std::uint32_t>());
    }
  }
  bool at_eof() { return in_.peek() == std::char_traits<char>::eof(); }

  // Bytes left when the stream is seekable; otherwise unknown.
  std::optional<std::uint64_t> remaining() {
    const auto here = in_.tellg();
    if (here == std::streampos(-1)) return std::nullopt;
    in_.seekg(0, std::ios::end);
    const auto end = in_.tellg();
    in_.seekg(here);
    if (end == std::streampos(-1)) return std::nullopt;
    return static_cast<std::uint64_t>(end - here);
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_model(const JointEmbeddingModel& model, std::ostream& out) {
  const Vocabulary& vocab = model.vocab();
  const TimeSlotTable& slots = model.slots();
  Writer w(out);
  w.bytes(kMagic.data(), kMagic.size());
  w.le<std::uint32_t>(kModelFormatVersion);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(model.dim()));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(vocab.size()));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(slots.size()));
  for (const TimeSlot& s : slots.slots) {
    w.i32(s.start);
    w.i32(s.end);
  }
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const std::string& word = vocab.word(static_cast<WordId>(i));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(word.size()));
    w.bytes(word.data(), word.size());
    w.le<std::uint64_t>(vocab.global_count(static_cast<WordId>(i)));
  }
  const JointParams<float>& p = model.params();
  w.f32s(p.main.data());
  for (const MatrixF& d : p.deltas) w.f32s(d.data());
  w.f32s(p.context.data());

  if (vocab.has_slot_counts()) {
    w.bytes(kCountsTag.data(), kCountsTag.size());
    w.i32(slots.window_years);
    w.i32(slots.step_years);
    for (std::uint64_t c : vocab.slot_counts()) w.le<std::uint64_t>(c);
  }
  if (!out) throw DataError("failed writing model");
}

void save_model(const JointEmbeddingModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  save_model(model, out);
  out.close();
  if (!out) throw DataError(fmt::format("failed writing {}", path.string()));
}

JointEmbeddingModel load_model(std::istream& in) {
  Reader r(in);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kMagic) throw DataError("not a model file (bad magic)");
  const auto version = r.le<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw DataError(fmt::format("unsupported model version {} (expected {})", version,
                                kModelFormatVersion));
  }
  const std::size_t dim = r.le<std::uint32_t>();
  const std::size_t words = r.le<std::uint32_t>();
  const std::size_t slot_count = r.le<std::uint32_t>();
  if (dim == 0 || words == 0 || slot_count < 2) {
    throw DataError("model header has zero dimension, empty vocabulary or < 2 slots");
  }
  if (auto left = r.remaining()) {
    const std::uint64_t matrices = static_cast<std::uint64_t>(slot_count + 2) * words * dim * 4;
    if (*left < matrices) throw DataError("truncated model file");
  }

  std::vector<TimeSlot> slot_list(slot_count);
  for (TimeSlot& s : slot_list) {
    s.start = r.i32();
    s.end = r.i32();
  }
  std::vector<std::string> vocab_words(words);
  std::vector<std::uint64_t> counts(words);
  for (std::size_t i = 0; i < words; ++i) {
    const auto len = r.le<std::uint32_t>();
    if (len > kMaxWordBytes) throw DataError("model vocabulary entry too long");
    vocab_words[i].resize(len);
    r.bytes(vocab_words[i].data(), len);
    counts[i] = r.le<std::uint64_t>();
  }

  JointParams<float> params(words, dim, slot_count);
  r.f32s(params.main.data());
  for (MatrixF& d : params.deltas) r.f32s(d.data());
  r.f32s(params.context.data());

  // Without the count section, slot geometry is inferred from the intervals.
  int window = slot_list[1].end - slot_list[1].start;
  int step = slot_list[1].start - slot_list[0].start;
  std::vector<std::uint64_t> slot_counts;
  if (!r.at_eof()) {
    std::array<char, 4> tag{};
    r.bytes(tag.data(), tag.size());
    if (tag != kCountsTag) throw DataError("unknown trailing section in model file");
    window = r.i32();
    step = r.i32();
    slot_counts.resize(words * slot_count);
    for (std::uint64_t& c : slot_counts) c = r.le<std::uint64_t>();
    if (!r.at_eof()) throw DataError("trailing bytes after model file");
  }

  TimeSlotTable table;
  Vocabulary vocab;
  try {
    table = make_slot_table(std::move(slot_list), window, step);
    vocab = Vocabulary(std::move(vocab_words), std::move(counts), slot_count,
                       std::move(slot_counts));
  } catch (const std::invalid_argument& e) {
    throw DataError(fmt::format("corrupt model file: {}", e.what()));
  }
  JointEmbeddingModel model(std::move(vocab), std::move(table), dim);
  model.params() = std::move(params);
  return model;
}

JointEmbeddingModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return load_model(in);
}

}  // namespace dlkv
