#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gacomb/rational.hpp"

namespace gacomb::encoding {

// Fixed-width big-endian integers so that byte order agrees with numeric order.

void put_u8(std::string& out, std::uint8_t v);
void put_u32(std::string& out, std::uint32_t v);
/// Sign-biased so that negative values sort before positive ones.
void put_i64(std::string& out, std::int64_t v);
/// Length-prefixed opaque chunk (used for nested encodings).
void put_chunk(std::string& out, std::string_view chunk);
void put_rational(std::string& out, const Rational& r);

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::int64_t i64();
  std::string_view chunk();
  Rational rational();
  bool done() const noexcept { return pos_ == bytes_.size(); }
  /// Throws unless every byte was consumed.
  void expect_done() const;

 private:
  void need(std::size_t n) const;
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace gacomb::encoding

namespace gacomb::text {

std::string_view trim(std::string_view s);
/// Splits on `sep` at bracket depth zero; brackets are ()[]{}<>.
std::vector<std::string_view> split_top_level(std::string_view s, char sep);
/// Strips one pair of enclosing brackets `open`/`close`; throws if absent.
std::string_view unwrap(std::string_view s, char open, char close);
std::int64_t parse_int(std::string_view s);

}  // namespace gacomb::text
