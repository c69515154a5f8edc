#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artgraph/util/error.hpp"

namespace artgraph::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Append-only little-endian encoder.
class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    buffer_.append(p, sizeof(T));
  }

  void put_bytes(std::string_view bytes) { buffer_.append(bytes); }

  void put_string(std::string_view s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    buffer_.append(s);
  }

  void put_floats(std::span<const float> values) {
    buffer_.append(reinterpret_cast<const char*>(values.data()),
                   values.size_bytes());
  }

  // Length-prefixed (u64) nested section.
  void put_section(const Writer& section) {
    put<std::uint64_t>(section.buffer_.size());
    buffer_.append(section.buffer_);
  }

  const std::string& bytes() const { return buffer_; }

 private:
  std::string buffer_;
};

// Bounds-checked decoder over an in-memory buffer; throws kFormat on truncation.
class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    require(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view get_bytes(std::size_t n) {
    require(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::string get_string() {
    const auto n = get<std::uint32_t>();
    return std::string(get_bytes(n));
  }

  void get_floats(std::span<float> out) {
    require(out.size_bytes());
    std::memcpy(out.data(), data_.data() + pos_, out.size_bytes());
    pos_ += out.size_bytes();
  }

  Reader get_section() {
    const auto n = get<std::uint64_t>();
    return Reader(get_bytes(static_cast<std::size_t>(n)));
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  void require(std::size_t n) const {
    if (data_.size() - pos_ < n) fail(ErrorKind::kFormat, "truncated binary data");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace artgraph::io
