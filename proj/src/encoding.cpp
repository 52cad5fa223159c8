#include "gacomb/encoding.hpp"

#include <charconv>
#include <stdexcept>

#include "gacomb/error.hpp"

namespace gacomb::encoding {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xffu));
}

void put_i64(std::string& out, std::int64_t v) {
  auto u = static_cast<std::uint64_t>(v) ^ (std::uint64_t{1} << 63);
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((u >> shift) & 0xffu));
}

void put_chunk(std::string& out, std::string_view chunk) {
  put_u32(out, static_cast<std::uint32_t>(chunk.size()));
  out.append(chunk);
}

namespace {

void put_magnitude(std::string& out, BigInt magnitude) {
  std::string digits;
  while (magnitude > 0) {
    digits.push_back(static_cast<char>(static_cast<unsigned>(magnitude & 0xff)));
    magnitude >>= 8;
  }
  put_u32(out, static_cast<std::uint32_t>(digits.size()));
  out.append(digits.rbegin(), digits.rend());
}

}  // namespace

void put_rational(std::string& out, const Rational& r) {
  BigInt num = numerator(r);
  put_u8(out, num < 0 ? 0 : 1);
  put_magnitude(out, num < 0 ? BigInt(-num) : num);
  put_magnitude(out, denominator(r));
}

void Reader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw InvalidArgument("truncated encoding");
}

std::uint8_t Reader::u8() {
  need(1);
  return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
  return v;
}

std::int64_t Reader::i64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
  return static_cast<std::int64_t>(v ^ (std::uint64_t{1} << 63));
}

std::string_view Reader::chunk() {
  std::uint32_t n = u32();
  need(n);
  auto out = bytes_.substr(pos_, n);
  pos_ += n;
  return out;
}

Rational Reader::rational() {
  auto magnitude = [this] {
    std::uint32_t n = u32();
    need(n);
    BigInt v = 0;
    for (std::uint32_t i = 0; i < n; ++i) v = (v << 8) | static_cast<std::uint8_t>(bytes_[pos_++]);
    return v;
  };
  bool positive = u8() != 0;
  BigInt num = magnitude();
  BigInt den = magnitude();
  if (den == 0) throw InvalidArgument("zero denominator in encoding");
  return Rational(positive ? num : BigInt(-num), den);
}

void Reader::expect_done() const {
  if (!done()) throw InvalidArgument("trailing bytes in encoding");
}

}  // namespace gacomb::encoding

namespace gacomb::text {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_top_level(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '}' || c == '>') --depth;
    if (depth < 0) throw InvalidArgument("unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InvalidArgument("unbalanced brackets in '" + std::string(s) + "'");
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::string_view unwrap(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close) {
    throw InvalidArgument("expected " + std::string(1, open) + "..." + std::string(1, close) + " in '" +
                          std::string(s) + "'");
  }
  return s.substr(1, s.size() - 2);
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidArgument("malformed integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace gacomb::text
