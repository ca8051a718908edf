// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

#include "curate/core/records.hpp"
#include "curate/error.hpp"

namespace curate::merge {

struct Tensor {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<float> values;
  bool operator==(const Tensor&) const = default;
};

inline std::uint64_t element_count(const std::vector<std::uint64_t>& shape) {
  std::uint64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

/// Named tensors in file order.
class Checkpoint {
 public:
  void add(Tensor t) {
    if (t.values.size() != element_count(t.shape))
      throw Error(ErrorCode::shape_mismatch, "tensor '" + t.name + "' has " + std::to_string(t.values.size()) +
                                                 " values for shape of " + std::to_string(element_count(t.shape)));
    if (!names_.insert(t.name).second) throw Error(ErrorCode::duplicate_id, "tensor '" + t.name + "' appears twice");
    tensors_.push_back(std::move(t));
  }

  const std::vector<Tensor>& tensors() const { return tensors_; }
  std::size_t size() const { return tensors_.size(); }
  const Tensor* find(const std::string& name) const {
    for (const auto& t : tensors_)
      if (t.name == name) return &t;
    return nullptr;
  }

  /// Bitwise: compares float bit patterns, so NaN payloads and -0 count.
  bool bitwise_equal(const Checkpoint& o) const {
    if (tensors_.size() != o.tensors_.size()) return false;
    for (std::size_t i = 0; i < tensors_.size(); ++i) {
      const auto &a = tensors_[i], &b = o.tensors_[i];
      if (a.name != b.name || a.shape != b.shape || a.values.size() != b.values.size()) return false;
      if (!a.values.empty() && std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(float)) != 0)
        return false;
    }
    return true;
  }

 private:
  std::vector<Tensor> tensors_;
  std::unordered_set<std::string> names_;
};

inline constexpr char kMagic[8] = {'C', 'U', 'R', 'C', 'K', 'P', 'T', '1'};
inline constexpr std::uint32_t kFormatVersion = 1;

namespace detail {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

template <class T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out += static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF);
}

class Reader {
 public:
  Reader(const std::string& data, std::string what) : d_(data), what_(std::move(what)) {}
  template <class T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(d_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = d_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return d_.size() - pos_; }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::malformed_record, what_ + ": " + why + " at byte " + std::to_string(pos_));
  }

 private:
  void need(std::size_t n) const {
    if (d_.size() - pos_ < n) fail("truncated");
  }
  const std::string& d_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Layout (all integers little-endian):
///   magic "CURCKPT1", u32 version, u32 tensor count,
///   per tensor: u32 name length, name bytes, u32 rank, rank x u64 dims,
///   then every tensor's float32 values in index order.
inline std::string serialize_checkpoint(const Checkpoint& c) {
  std::string out(kMagic, sizeof kMagic);
  detail::put_le<std::uint32_t>(out, kFormatVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(c.size()));
  for (const auto& t : c.tensors()) {
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) detail::put_le<std::uint64_t>(out, d);
  }
  for (const auto& t : c.tensors())
    for (float f : t.values) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

inline Checkpoint parse_checkpoint(const std::string& data, const std::string& what = "checkpoint") {
  detail::Reader r(data, what);
  if (r.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) r.fail("bad magic");
  if (auto v = r.get<std::uint32_t>(); v != kFormatVersion) r.fail("unsupported version " + std::to_string(v));
  auto count = r.get<std::uint32_t>();
  std::vector<Tensor> index;
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor t;
    t.name = r.bytes(r.get<std::uint32_t>());
    auto rank = r.get<std::uint32_t>();
    for (std::uint32_t k = 0; k < rank; ++k) t.shape.push_back(r.get<std::uint64_t>());
    index.push_back(std::move(t));
  }
  Checkpoint c;
  for (auto& t : index) {
    std::uint64_t n = element_count(t.shape);
    if (n > r.remaining() / 4) r.fail("tensor '" + t.name + "' payload truncated");
    t.values.resize(n);
    for (auto& f : t.values) f = std::bit_cast<float>(r.get<std::uint32_t>());
    c.add(std::move(t));
  }
  if (r.remaining() != 0) r.fail("trailing bytes");
  return c;
}

inline Checkpoint load_checkpoint(const std::filesystem::path& p) { return parse_checkpoint(read_file(p), "'" + p.string() + "'"); }
inline void save_checkpoint(const Checkpoint& c, const std::filesystem::path& p) { write_file(p, serialize_checkpoint(c)); }

/// Debug form: one {"name", "shape", "values"} record per tensor.
inline std::vector<Record> checkpoint_to_records(const Checkpoint& c) {
  std::vector<Record> out;
  for (const auto& t : c.tensors()) out.push_back({{"name", t.name}, {"shape", t.shape}, {"values", t.values}});
  return out;
}

inline Checkpoint checkpoint_from_records(const std::vector<Record>& recs) {
  Checkpoint c;
  for (const auto& r : recs) {
    if (!r.is_object() || !r.contains("name") || !r.contains("shape") || !r.contains("values"))
      throw Error(ErrorCode::malformed_record, "tensor record needs name, shape and values");
    c.add({r["name"].get<std::string>(), r["shape"].get<std::vector<std::uint64_t>>(),
           r["values"].get<std::vector<float>>()});
  }
  return c;
}

}  // namespace curate::merge
