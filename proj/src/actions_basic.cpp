#include <algorithm>
#include <numeric>

#include "gacomb/actions.hpp"
#include "gacomb/encoding.hpp"
#include "gacomb/error.hpp"

namespace gacomb {

namespace {

std::string int_bytes(std::int64_t v) {
  std::string out;
  encoding::put_i64(out, v);
  return out;
}

std::int64_t int_of(const std::string& bytes) {
  encoding::Reader r(bytes);
  auto v = r.i64();
  r.expect_done();
  return v;
}

}  // namespace

// ---- CyclicAction -----------------------------------------------------------

CyclicAction::CyclicAction(std::int64_t n) : n_(n) {
  if (n < 1) throw InvalidArgument("cyclic: modulus must be positive");
}

nlohmann::json CyclicAction::descriptor() const { return {{"kind", "cyclic"}, {"n", n_}}; }
GroupElement CyclicAction::element(std::int64_t v) const { return GroupElement(int_bytes(mod_norm(v, n_))); }
Point CyclicAction::point(std::int64_t v) const { return Point(int_bytes(mod_norm(v, n_))); }
std::int64_t CyclicAction::value(const GroupElement& g) const { return int_of(g.bytes()); }
std::int64_t CyclicAction::value(const Point& x) const { return int_of(x.bytes()); }

GroupElement CyclicAction::identity() const { return element(0); }
GroupElement CyclicAction::mul(const GroupElement& g, const GroupElement& h) const {
  return element(value(g) + value(h));
}
GroupElement CyclicAction::inv(const GroupElement& g) const { return element(-value(g)); }
Point CyclicAction::act(const GroupElement& g, const Point& x) const { return point(value(g) + value(x)); }

std::optional<ElementSet> CyclicAction::elements() const {
  std::vector<GroupElement> out;
  for (std::int64_t i = 0; i < n_; ++i) out.push_back(element(i));
  return ElementSet::from_sorted_unique(std::move(out));
}

std::optional<PointSet> CyclicAction::points() const {
  std::vector<Point> out;
  for (std::int64_t i = 0; i < n_; ++i) out.push_back(point(i));
  return PointSet::from_sorted_unique(std::move(out));
}

ElementSet CyclicAction::transporter(const Point& x, const Point& y) const {
  return ElementSet{element(value(y) - value(x))};
}

std::string CyclicAction::format_element(const GroupElement& g) const { return std::to_string(value(g)); }
GroupElement CyclicAction::parse_element(std::string_view text) const { return element(text::parse_int(text)); }
std::string CyclicAction::format_point(const Point& x) const { return std::to_string(value(x)); }
Point CyclicAction::parse_point(std::string_view text) const { return point(text::parse_int(text)); }
std::optional<Point> CyclicAction::point_from_int(std::int64_t v) const { return point(v); }
std::optional<GroupElement> CyclicAction::element_from_int(std::int64_t v) const { return element(v); }

// ---- IntegerAction ----------------------------------------------------------

nlohmann::json IntegerAction::descriptor() const { return {{"kind", "integer"}}; }
GroupElement IntegerAction::element(std::int64_t v) { return GroupElement(int_bytes(v)); }
Point IntegerAction::point(std::int64_t v) { return Point(int_bytes(v)); }
std::int64_t IntegerAction::value(const GroupElement& g) { return int_of(g.bytes()); }
std::int64_t IntegerAction::value(const Point& x) { return int_of(x.bytes()); }

GroupElement IntegerAction::identity() const { return element(0); }
GroupElement IntegerAction::mul(const GroupElement& g, const GroupElement& h) const {
  std::int64_t out;
  if (__builtin_add_overflow(value(g), value(h), &out)) throw std::overflow_error("integer action overflow");
  return element(out);
}
GroupElement IntegerAction::inv(const GroupElement& g) const { return element(-value(g)); }
Point IntegerAction::act(const GroupElement& g, const Point& x) const {
  std::int64_t out;
  if (__builtin_add_overflow(value(g), value(x), &out)) throw std::overflow_error("integer action overflow");
  return point(out);
}
ElementSet IntegerAction::transporter(const Point& x, const Point& y) const {
  return ElementSet{element(value(y) - value(x))};
}
std::string IntegerAction::format_element(const GroupElement& g) const { return std::to_string(value(g)); }
GroupElement IntegerAction::parse_element(std::string_view text) const { return element(text::parse_int(text)); }
std::string IntegerAction::format_point(const Point& x) const { return std::to_string(value(x)); }
Point IntegerAction::parse_point(std::string_view text) const { return point(text::parse_int(text)); }
std::optional<Point> IntegerAction::point_from_int(std::int64_t v) const { return point(v); }
std::optional<GroupElement> IntegerAction::element_from_int(std::int64_t v) const { return element(v); }

// ---- TableAction ------------------------------------------------------------

TableAction::TableAction(std::vector<std::vector<std::int64_t>> table) : table_(std::move(table)) {
  const auto n = static_cast<std::int64_t>(table_.size());
  if (n == 0) throw InvalidArgument("table: empty group table");
  for (const auto& row : table_) {
    if (static_cast<std::int64_t>(row.size()) != n) throw InvalidArgument("table: rows must have length n");
    for (auto v : row)
      if (v < 0 || v >= n) throw InvalidArgument("table: entry out of range");
  }
  identity_ = -1;
  for (std::int64_t e = 0; e < n && identity_ < 0; ++e) {
    bool ok = true;
    for (std::int64_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) identity_ = e;
  }
  if (identity_ < 0) throw InvalidArgument("table: no identity element");
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) throw InvalidArgument("table: not associative");
  inverse_.assign(n, -1);
  for (std::int64_t a = 0; a < n; ++a) {
    for (std::int64_t b = 0; b < n; ++b)
      if (table_[a][b] == identity_) inverse_[a] = b;
    if (inverse_[a] < 0) throw InvalidArgument("table: element without inverse");
  }
}

nlohmann::json TableAction::descriptor() const { return {{"kind", "table"}, {"table", table_}}; }

std::size_t TableAction::index(const std::string& bytes) const {
  auto v = int_of(bytes);
  if (v < 0 || v >= static_cast<std::int64_t>(table_.size())) throw InvalidArgument("table: element out of range");
  return static_cast<std::size_t>(v);
}

GroupElement TableAction::identity() const { return GroupElement(int_bytes(identity_)); }
GroupElement TableAction::mul(const GroupElement& g, const GroupElement& h) const {
  return GroupElement(int_bytes(table_[index(g.bytes())][index(h.bytes())]));
}
GroupElement TableAction::inv(const GroupElement& g) const { return GroupElement(int_bytes(inverse_[index(g.bytes())])); }
Point TableAction::act(const GroupElement& g, const Point& x) const {
  return Point(int_bytes(table_[index(g.bytes())][index(x.bytes())]));
}
std::optional<ElementSet> TableAction::elements() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < table_.size(); ++i) out.emplace_back(int_bytes(static_cast<std::int64_t>(i)));
  return ElementSet::from_sorted_unique(std::move(out));
}
std::optional<PointSet> TableAction::points() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < table_.size(); ++i) out.emplace_back(int_bytes(static_cast<std::int64_t>(i)));
  return PointSet::from_sorted_unique(std::move(out));
}
ElementSet TableAction::transporter(const Point& x, const Point& y) const {
  return ElementSet{GroupElement(int_bytes(table_[index(y.bytes())][inverse_[index(x.bytes())]]))};
}
std::string TableAction::format_element(const GroupElement& g) const {
  return std::to_string(index(g.bytes()));
}
GroupElement TableAction::parse_element(std::string_view text) const {
  auto bytes = int_bytes(text::parse_int(text));
  index(bytes);
  return GroupElement(bytes);
}
std::string TableAction::format_point(const Point& x) const { return std::to_string(index(x.bytes())); }
Point TableAction::parse_point(std::string_view text) const {
  auto bytes = int_bytes(text::parse_int(text));
  index(bytes);
  return Point(bytes);
}
std::optional<GroupElement> TableAction::element_from_int(std::int64_t v) const {
  return GroupElement(int_bytes(mod_norm(v, static_cast<std::int64_t>(table_.size()))));
}
std::optional<Point> TableAction::point_from_int(std::int64_t v) const {
  return Point(int_bytes(mod_norm(v, static_cast<std::int64_t>(table_.size()))));
}

// ---- PermutationAction ------------------------------------------------------

PermutationAction::PermutationAction(int n) : n_(n) {
  if (n < 1 || n > 200) throw InvalidArgument("permutation: degree must be in [1, 200]");
}

nlohmann::json PermutationAction::descriptor() const { return {{"kind", "permutation"}, {"n", n_}}; }

GroupElement PermutationAction::from_images(const std::vector<int>& images) const {
  if (static_cast<int>(images.size()) != n_) throw InvalidArgument("permutation: wrong length");
  std::vector<bool> seen(n_ + 1, false);
  std::string bytes;
  for (int v : images) {
    if (v < 1 || v > n_ || seen[v]) throw InvalidArgument("permutation: not a permutation of 1..n");
    seen[v] = true;
    bytes.push_back(static_cast<char>(v));
  }
  return GroupElement(bytes);
}

GroupElement PermutationAction::identity() const {
  std::vector<int> id(n_);
  std::iota(id.begin(), id.end(), 1);
  return from_images(id);
}

GroupElement PermutationAction::mul(const GroupElement& g, const GroupElement& h) const {
  const auto& gb = g.bytes();
  const auto& hb = h.bytes();
  std::string out(n_, '\0');
  for (int i = 0; i < n_; ++i) out[i] = gb[static_cast<unsigned char>(hb[i]) - 1];
  return GroupElement(out);
}

GroupElement PermutationAction::inv(const GroupElement& g) const {
  const auto& gb = g.bytes();
  std::string out(n_, '\0');
  for (int i = 0; i < n_; ++i) out[static_cast<unsigned char>(gb[i]) - 1] = static_cast<char>(i + 1);
  return GroupElement(out);
}

Point PermutationAction::act(const GroupElement& g, const Point& x) const {
  auto i = int_of(x.bytes());
  return Point(int_bytes(static_cast<unsigned char>(g.bytes()[i - 1])));
}

std::optional<ElementSet> PermutationAction::elements() const {
  if (n_ > 9) return std::nullopt;
  std::vector<int> perm(n_);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<GroupElement> out;
  do {
    out.push_back(from_images(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ElementSet::from_sorted_unique(std::move(out));
}

std::optional<PointSet> PermutationAction::points() const {
  std::vector<Point> out;
  for (int i = 1; i <= n_; ++i) out.emplace_back(int_bytes(i));
  return PointSet::from_sorted_unique(std::move(out));
}

std::string PermutationAction::format_element(const GroupElement& g) const {
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) out += ",";
    out += std::to_string(static_cast<unsigned char>(g.bytes()[i]));
  }
  return out + "]";
}

GroupElement PermutationAction::parse_element(std::string_view text) const {
  auto t = text::trim(text);
  if (!t.empty() && t.front() == '[') {
    std::vector<int> images;
    auto inner = text::unwrap(t, '[', ']');
    if (!text::trim(inner).empty())
      for (auto part : text::split_top_level(inner, ',')) images.push_back(static_cast<int>(text::parse_int(part)));
    return from_images(images);
  }
  std::vector<int> images(n_);
  std::iota(images.begin(), images.end(), 1);
  auto result = identity();
  while (!t.empty()) {
    if (t.front() != '(') throw InvalidArgument("permutation: malformed cycle notation '" + std::string(text) + "'");
    auto close = t.find(')');
    if (close == std::string_view::npos) throw InvalidArgument("permutation: unclosed cycle");
    auto body = t.substr(1, close - 1);
    std::vector<int> cycle;
    std::size_t pos = 0;
    while (pos < body.size()) {
      while (pos < body.size() && (body[pos] == ' ' || body[pos] == ',')) ++pos;
      std::size_t end = pos;
      while (end < body.size() && body[end] != ' ' && body[end] != ',') ++end;
      if (end > pos) cycle.push_back(static_cast<int>(text::parse_int(body.substr(pos, end - pos))));
      pos = end;
    }
    std::vector<int> map(n_);
    std::iota(map.begin(), map.end(), 1);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (cycle[i] < 1 || cycle[i] > n_) throw InvalidArgument("permutation: point out of range in cycle");
      map[cycle[i] - 1] = cycle[(i + 1) % cycle.size()];
    }
    result = mul(result, from_images(map));
    t = text::trim(t.substr(close + 1));
  }
  return result;
}

std::string PermutationAction::format_point(const Point& x) const { return std::to_string(int_of(x.bytes())); }
Point PermutationAction::parse_point(std::string_view text) const {
  auto v = text::parse_int(text);
  if (v < 1 || v > n_) throw InvalidArgument("permutation: point out of range");
  return Point(int_bytes(v));
}
std::optional<Point> PermutationAction::point_from_int(std::int64_t v) const {
  return Point(int_bytes(mod_norm(v - 1, n_) + 1));
}

// ---- RegularAction ----------------------------------------------------------

RegularAction::RegularAction(ActionPtr base) : base_(std::move(base)) {
  if (!base_) throw InvalidArgument("regular: missing base action");
}

nlohmann::json RegularAction::descriptor() const { return {{"kind", "regular"}, {"base", base_->descriptor()}}; }

Point RegularAction::act(const GroupElement& g, const Point& x) const {
  return as_point(base_->mul(g, as_element(x)));
}

std::optional<PointSet> RegularAction::points() const {
  auto els = base_->elements();
  if (!els) return std::nullopt;
  std::vector<Point> out;
  for (const auto& g : *els) out.push_back(as_point(g));
  return PointSet::from_sorted_unique(std::move(out));
}

ElementSet RegularAction::transporter(const Point& x, const Point& y) const {
  return ElementSet{base_->mul(as_element(y), base_->inv(as_element(x)))};
}

std::string RegularAction::format_point(const Point& x) const { return base_->format_element(as_element(x)); }
Point RegularAction::parse_point(std::string_view text) const { return as_point(base_->parse_element(text)); }

}  // namespace gacomb
