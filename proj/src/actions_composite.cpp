#include <algorithm>
#include <set>

#include "gacomb/actions.hpp"
#include "gacomb/core.hpp"
#include "gacomb/encoding.hpp"
#include "gacomb/error.hpp"

namespace gacomb {

namespace {

constexpr std::size_t kEnumerationLimit = 2'000'000;

std::vector<std::string> split_chunks(const std::string& bytes, std::size_t count) {
  encoding::Reader r(bytes);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(r.chunk());
  r.expect_done();
  return out;
}

}  // namespace

// ---- CosetAction ------------------------------------------------------------

CosetAction::CosetAction(ActionPtr ambient, const ElementSet& subgroup_generators)
    : ambient_(std::move(ambient)), generators_(subgroup_generators) {
  if (!ambient_) throw InvalidArgument("coset: missing ambient action");
  auto all = ambient_->elements();
  if (!all) throw InvalidArgument("coset: ambient group must be enumerable");
  subgroup_ = generated_subgroup(*ambient_, generators_, all->size());
  std::set<GroupElement> assigned;
  for (const auto& g : *all) {
    if (assigned.count(g)) continue;
    std::vector<GroupElement> coset;
    for (const auto& h : subgroup_) coset.push_back(ambient_->mul(g, h));
    auto rep = *std::min_element(coset.begin(), coset.end());
    for (auto& x : coset) {
      assigned.insert(x);
      rep_of_.emplace_back(std::move(x), rep);
    }
  }
  std::sort(rep_of_.begin(), rep_of_.end());
}

nlohmann::json CosetAction::descriptor() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators_) gens.push_back(ambient_->format_element(g));
  return {{"kind", "coset"}, {"ambient", ambient_->descriptor()}, {"subgroup", gens}};
}

Point CosetAction::coset_of(const GroupElement& g) const {
  auto it = std::lower_bound(rep_of_.begin(), rep_of_.end(), g,
                             [](const auto& entry, const GroupElement& key) { return entry.first < key; });
  if (it == rep_of_.end() || !(it->first == g)) throw InvalidArgument("coset: element outside ambient group");
  return Point(it->second.bytes());
}

GroupElement CosetAction::representative(const Point& x) const { return GroupElement(x.bytes()); }

GroupElement CosetAction::identity() const { return ambient_->identity(); }
GroupElement CosetAction::mul(const GroupElement& g, const GroupElement& h) const { return ambient_->mul(g, h); }
GroupElement CosetAction::inv(const GroupElement& g) const { return ambient_->inv(g); }

Point CosetAction::act(const GroupElement& g, const Point& x) const {
  return coset_of(ambient_->mul(g, representative(x)));
}

std::optional<ElementSet> CosetAction::elements() const { return ambient_->elements(); }

std::optional<PointSet> CosetAction::points() const {
  std::vector<Point> out;
  for (const auto& [g, rep] : rep_of_)
    if (g == rep) out.emplace_back(rep.bytes());
  return PointSet::from_sorted_unique(std::move(out));
}

ElementSet CosetAction::transporter(const Point& x, const Point& y) const {
  auto xinv = ambient_->inv(representative(x));
  auto yr = representative(y);
  std::vector<GroupElement> out;
  for (const auto& h : subgroup_) out.push_back(ambient_->mul(yr, ambient_->mul(h, xinv)));
  return ElementSet(std::move(out));
}

std::string CosetAction::format_element(const GroupElement& g) const { return ambient_->format_element(g); }
GroupElement CosetAction::parse_element(std::string_view s) const { return ambient_->parse_element(s); }

std::string CosetAction::format_point(const Point& x) const {
  return "{" + ambient_->format_element(representative(x)) + "}";
}

Point CosetAction::parse_point(std::string_view s) const {
  auto g = ambient_->parse_element(text::unwrap(s, '{', '}'));
  auto x = coset_of(g);
  if (x.bytes() != g.bytes()) throw InvalidArgument("coset: '" + std::string(s) + "' is not the canonical representative");
  return x;
}

// ---- DiagonalPowerAction ----------------------------------------------------

DiagonalPowerAction::DiagonalPowerAction(ActionPtr base, int n, bool distinct_only)
    : base_(std::move(base)), n_(n), distinct_(distinct_only) {
  if (!base_) throw InvalidArgument("diagonal: missing base action");
  if (n < 1 || n > 16) throw InvalidArgument("diagonal: exponent must be in [1, 16]");
}

nlohmann::json DiagonalPowerAction::descriptor() const {
  return {{"kind", "diagonal"}, {"base", base_->descriptor()}, {"n", n_}, {"distinct", distinct_}};
}

Point DiagonalPowerAction::tuple(const std::vector<Point>& coords) const {
  if (static_cast<int>(coords.size()) != n_) throw InvalidArgument("diagonal: wrong tuple length");
  if (distinct_) {
    std::set<Point> seen(coords.begin(), coords.end());
    if (seen.size() != coords.size()) throw InvalidArgument("diagonal: tuple coordinates must be distinct");
  }
  std::string bytes;
  for (const auto& c : coords) encoding::put_chunk(bytes, c.bytes());
  return Point(bytes);
}

std::vector<Point> DiagonalPowerAction::coordinates(const Point& x) const {
  std::vector<Point> out;
  for (auto& c : split_chunks(x.bytes(), n_)) out.emplace_back(std::move(c));
  return out;
}

Point DiagonalPowerAction::act(const GroupElement& g, const Point& x) const {
  auto coords = coordinates(x);
  for (auto& c : coords) c = base_->act(g, c);
  std::string bytes;
  for (const auto& c : coords) encoding::put_chunk(bytes, c.bytes());
  return Point(bytes);
}

std::optional<PointSet> DiagonalPowerAction::points() const {
  auto base_points = base_->points();
  if (!base_points) return std::nullopt;
  double total = 1;
  for (int i = 0; i < n_; ++i) total *= static_cast<double>(base_points->size());
  if (total > kEnumerationLimit) return std::nullopt;
  std::vector<Point> out;
  std::vector<std::size_t> idx(n_, 0);
  const std::size_t m = base_points->size();
  if (m == 0) return PointSet{};
  while (true) {
    std::vector<Point> coords;
    for (auto i : idx) coords.push_back((*base_points)[i]);
    bool ok = true;
    if (distinct_) {
      std::set<std::size_t> s(idx.begin(), idx.end());
      ok = s.size() == idx.size();
    }
    if (ok) out.push_back(tuple(coords));
    int k = n_ - 1;
    while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
    if (k < 0) break;
  }
  return PointSet(std::move(out));
}

bool DiagonalPowerAction::has_transporter() const { return base_->has_transporter(); }

ElementSet DiagonalPowerAction::transporter(const Point& x, const Point& y) const {
  auto xs = coordinates(x);
  auto ys = coordinates(y);
  auto out = base_->transporter(xs[0], ys[0]);
  for (int i = 1; i < n_ && !out.empty(); ++i) out = set_intersection(out, base_->transporter(xs[i], ys[i]));
  return out;
}

std::string DiagonalPowerAction::format_point(const Point& x) const {
  std::string out = "<";
  auto coords = coordinates(x);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) out += ";";
    out += base_->format_point(coords[i]);
  }
  return out + ">";
}

Point DiagonalPowerAction::parse_point(std::string_view s) const {
  std::vector<Point> coords;
  for (auto part : text::split_top_level(text::unwrap(s, '<', '>'), ';')) coords.push_back(base_->parse_point(part));
  return tuple(coords);
}

// ---- ProductAction ----------------------------------------------------------

ProductAction::ProductAction(ActionPtr left, ActionPtr right) : left_(std::move(left)), right_(std::move(right)) {
  if (!left_ || !right_) throw InvalidArgument("product: missing factor");
}

nlohmann::json ProductAction::descriptor() const {
  return {{"kind", "product"}, {"left", left_->descriptor()}, {"right", right_->descriptor()}};
}

GroupElement ProductAction::pair(const GroupElement& g1, const GroupElement& g2) const {
  std::string bytes;
  encoding::put_chunk(bytes, g1.bytes());
  encoding::put_chunk(bytes, g2.bytes());
  return GroupElement(bytes);
}

std::pair<GroupElement, GroupElement> ProductAction::split(const GroupElement& g) const {
  auto parts = split_chunks(g.bytes(), 2);
  return {GroupElement(parts[0]), GroupElement(parts[1])};
}

Point ProductAction::pair(const Point& x1, const Point& x2) const {
  std::string bytes;
  encoding::put_chunk(bytes, x1.bytes());
  encoding::put_chunk(bytes, x2.bytes());
  return Point(bytes);
}

std::pair<Point, Point> ProductAction::split(const Point& x) const {
  auto parts = split_chunks(x.bytes(), 2);
  return {Point(parts[0]), Point(parts[1])};
}

GroupElement ProductAction::identity() const { return pair(left_->identity(), right_->identity()); }

GroupElement ProductAction::mul(const GroupElement& g, const GroupElement& h) const {
  auto [g1, g2] = split(g);
  auto [h1, h2] = split(h);
  return pair(left_->mul(g1, h1), right_->mul(g2, h2));
}

GroupElement ProductAction::inv(const GroupElement& g) const {
  auto [g1, g2] = split(g);
  return pair(left_->inv(g1), right_->inv(g2));
}

Point ProductAction::act(const GroupElement& g, const Point& x) const {
  auto [g1, g2] = split(g);
  auto [x1, x2] = split(x);
  return pair(left_->act(g1, x1), right_->act(g2, x2));
}

std::optional<ElementSet> ProductAction::elements() const {
  auto l = left_->elements();
  auto r = right_->elements();
  if (!l || !r || static_cast<double>(l->size()) * static_cast<double>(r->size()) > kEnumerationLimit)
    return std::nullopt;
  std::vector<GroupElement> out;
  for (const auto& a : *l)
    for (const auto& b : *r) out.push_back(pair(a, b));
  return ElementSet(std::move(out));
}

std::optional<PointSet> ProductAction::points() const {
  auto l = left_->points();
  auto r = right_->points();
  if (!l || !r || static_cast<double>(l->size()) * static_cast<double>(r->size()) > kEnumerationLimit)
    return std::nullopt;
  std::vector<Point> out;
  for (const auto& a : *l)
    for (const auto& b : *r) out.push_back(pair(a, b));
  return PointSet(std::move(out));
}

bool ProductAction::has_transporter() const { return left_->has_transporter() && right_->has_transporter(); }

ElementSet ProductAction::transporter(const Point& x, const Point& y) const {
  auto [x1, x2] = split(x);
  auto [y1, y2] = split(y);
  std::vector<GroupElement> out;
  auto l = left_->transporter(x1, y1);
  auto r = right_->transporter(x2, y2);
  for (const auto& a : l)
    for (const auto& b : r) out.push_back(pair(a, b));
  return ElementSet(std::move(out));
}

std::string ProductAction::format_element(const GroupElement& g) const {
  auto [g1, g2] = split(g);
  return "<" + left_->format_element(g1) + ";" + right_->format_element(g2) + ">";
}

GroupElement ProductAction::parse_element(std::string_view s) const {
  auto parts = text::split_top_level(text::unwrap(s, '<', '>'), ';');
  if (parts.size() != 2) throw InvalidArgument("product: expected <g1;g2>, got '" + std::string(s) + "'");
  return pair(left_->parse_element(parts[0]), right_->parse_element(parts[1]));
}

std::string ProductAction::format_point(const Point& x) const {
  auto [x1, x2] = split(x);
  return "<" + left_->format_point(x1) + ";" + right_->format_point(x2) + ">";
}

Point ProductAction::parse_point(std::string_view s) const {
  auto parts = text::split_top_level(text::unwrap(s, '<', '>'), ';');
  if (parts.size() != 2) throw InvalidArgument("product: expected <x1;x2>, got '" + std::string(s) + "'");
  return pair(left_->parse_point(parts[0]), right_->parse_point(parts[1]));
}

}  // namespace gacomb
