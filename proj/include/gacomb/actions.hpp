#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gacomb/action.hpp"
#include "gacomb/modular.hpp"

namespace gacomb {

/// Z/n acting on itself by translation.
class CyclicAction final : public GroupAction {
 public:
  explicit CyclicAction(std::int64_t n);
  std::int64_t modulus() const { return n_; }

  std::string kind() const override { return "cyclic"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;
  std::optional<GroupElement> element_from_int(std::int64_t v) const override;
  std::optional<std::int64_t> point_modulus() const override { return n_; }

  std::int64_t value(const GroupElement& g) const;
  std::int64_t value(const Point& x) const;
  GroupElement element(std::int64_t v) const;
  Point point(std::int64_t v) const;

 private:
  std::int64_t n_;
};

/// Z acting on itself by translation. No enumeration.
class IntegerAction final : public GroupAction {
 public:
  std::string kind() const override { return "integer"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;
  std::optional<GroupElement> element_from_int(std::int64_t v) const override;

  static std::int64_t value(const GroupElement& g);
  static std::int64_t value(const Point& x);
  static GroupElement element(std::int64_t v);
  static Point point(std::int64_t v);
};

/// Finite group given by its Cayley table on {0..n-1}, acting on itself by
/// left multiplication.
class TableAction final : public GroupAction {
 public:
  /// Validates closure, associativity, identity and inverses.
  explicit TableAction(std::vector<std::vector<std::int64_t>> table);

  std::string kind() const override { return "table"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<GroupElement> element_from_int(std::int64_t v) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;

 private:
  std::size_t index(const std::string& bytes) const;
  std::vector<std::vector<std::int64_t>> table_;
  std::vector<std::int64_t> inverse_;
  std::int64_t identity_ = 0;
};

/// S_n acting on {1..n}. Elements in one-line notation.
class PermutationAction final : public GroupAction {
 public:
  explicit PermutationAction(int n);
  int degree() const { return n_; }

  std::string kind() const override { return "permutation"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  std::string format_element(const GroupElement& g) const override;
  /// Accepts one-line "[2,1,3]" or cycle notation "(1 2)(3 4)" / "()".
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;

  GroupElement from_images(const std::vector<int>& images) const;

 private:
  int n_;
};

/// x ↦ a x + b over F_p, elements written (a,b).
class AffineFpAction final : public GroupAction {
 public:
  explicit AffineFpAction(std::int64_t p);
  std::int64_t prime() const { return p_; }

  std::string kind() const override { return "affine"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;
  std::optional<std::int64_t> point_modulus() const override { return p_; }

  GroupElement element(std::int64_t a, std::int64_t b) const;
  std::pair<std::int64_t, std::int64_t> coefficients(const GroupElement& g) const;
  Point point(std::int64_t x) const;
  std::int64_t value(const Point& x) const;

 private:
  std::int64_t p_;
};

/// PSL_2(F_p) acting on the projective line by Möbius transformations.
class ProjectiveSL2Action final : public GroupAction {
 public:
  struct Matrix {
    std::int64_t a, b, c, d;
  };

  explicit ProjectiveSL2Action(std::int64_t p);
  std::int64_t prime() const { return p_; }

  std::string kind() const override { return "psl2"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  /// Affine points as residues, the point at infinity as "inf".
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;
  std::optional<std::int64_t> point_modulus() const override { return p_; }

  /// Normalizes ±M to its canonical representative; rejects det ≠ 1.
  GroupElement element(const Matrix& m) const;
  Matrix matrix(const GroupElement& g) const;
  Point affine_point(std::int64_t x) const;
  Point infinity() const;
  /// nullopt for the point at infinity.
  std::optional<std::int64_t> affine_value(const Point& x) const;

 private:
  std::int64_t p_;
  mutable std::once_flag enum_once_;
  mutable std::optional<ElementSet> enum_;
};

/// GL_n(F_p) (or SL_n with special) acting on column vectors F_p^n.
class LinearFpAction final : public GroupAction {
 public:
  LinearFpAction(std::int64_t p, int n, bool special);
  std::int64_t prime() const { return p_; }
  int dimension() const { return n_; }
  bool special() const { return special_; }

  std::string kind() const override { return "linear_fp"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  GroupElement element(const MatrixFp& m) const;
  MatrixFp matrix(const GroupElement& g) const;
  Point point(const std::vector<std::int64_t>& v) const;
  std::vector<std::int64_t> vector(const Point& x) const;

 private:
  std::int64_t p_;
  int n_;
  bool special_;
  mutable std::once_flag enum_once_;
  mutable std::optional<ElementSet> enum_;
};

/// GL_n(Q) acting on Q^n with exact rational entries. No enumeration.
class LinearQAction final : public GroupAction {
 public:
  explicit LinearQAction(int n);
  int dimension() const { return n_; }

  std::string kind() const override { return "linear_q"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;
  std::optional<Point> point_from_int(std::int64_t v) const override;

  GroupElement element(const MatrixQ& m) const;
  MatrixQ matrix(const GroupElement& g) const;
  Point point(const std::vector<Rational>& v) const;
  std::vector<Rational> vector(const Point& x) const;

 private:
  int n_;
};

/// G acting on the left cosets G/H, each coset named by its least element.
class CosetAction final : public GroupAction {
 public:
  /// Requires an enumerable ambient group.
  CosetAction(ActionPtr ambient, const ElementSet& subgroup_generators);
  const GroupAction& ambient() const { return *ambient_; }
  const ElementSet& subgroup() const { return subgroup_; }

  std::string kind() const override { return "coset"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  /// "{rep}".
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  /// The coset gH.
  Point coset_of(const GroupElement& g) const;
  GroupElement representative(const Point& x) const;

 private:
  ActionPtr ambient_;
  ElementSet generators_;
  ElementSet subgroup_;
  std::vector<std::pair<GroupElement, GroupElement>> rep_of_;  // sorted by element
};

/// Diagonal action on n-tuples, optionally restricted to tuples of distinct points.
class DiagonalPowerAction final : public GroupAction {
 public:
  DiagonalPowerAction(ActionPtr base, int n, bool distinct_only);
  const GroupAction& base() const { return *base_; }
  int arity() const { return n_; }
  bool distinct_only() const { return distinct_; }

  std::string kind() const override { return "diagonal"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override { return base_->identity(); }
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override { return base_->mul(g, h); }
  GroupElement inv(const GroupElement& g) const override { return base_->inv(g); }
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override { return base_->elements(); }
  std::optional<PointSet> points() const override;
  bool has_transporter() const override;
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override { return base_->format_element(g); }
  GroupElement parse_element(std::string_view text) const override { return base_->parse_element(text); }
  /// "<x1;x2;...>".
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  Point tuple(const std::vector<Point>& coords) const;
  std::vector<Point> coordinates(const Point& x) const;

 private:
  ActionPtr base_;
  int n_;
  bool distinct_;
};

/// G1×G2 acting on X1×X2 coordinatewise.
class ProductAction final : public GroupAction {
 public:
  ProductAction(ActionPtr left, ActionPtr right);
  const GroupAction& left() const { return *left_; }
  const GroupAction& right() const { return *right_; }

  std::string kind() const override { return "product"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override;
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override;
  GroupElement inv(const GroupElement& g) const override;
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override;
  std::optional<PointSet> points() const override;
  bool has_transporter() const override;
  ElementSet transporter(const Point& x, const Point& y) const override;
  /// "<g1;g2>".
  std::string format_element(const GroupElement& g) const override;
  GroupElement parse_element(std::string_view text) const override;
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  GroupElement pair(const GroupElement& g1, const GroupElement& g2) const;
  std::pair<GroupElement, GroupElement> split(const GroupElement& g) const;
  Point pair(const Point& x1, const Point& x2) const;
  std::pair<Point, Point> split(const Point& x) const;

 private:
  ActionPtr left_, right_;
};

/// A group acting on itself by left multiplication (points are elements).
class RegularAction final : public GroupAction {
 public:
  explicit RegularAction(ActionPtr base);
  const GroupAction& base() const { return *base_; }

  std::string kind() const override { return "regular"; }
  nlohmann::json descriptor() const override;
  GroupElement identity() const override { return base_->identity(); }
  GroupElement mul(const GroupElement& g, const GroupElement& h) const override { return base_->mul(g, h); }
  GroupElement inv(const GroupElement& g) const override { return base_->inv(g); }
  Point act(const GroupElement& g, const Point& x) const override;
  std::optional<ElementSet> elements() const override { return base_->elements(); }
  std::optional<PointSet> points() const override;
  bool has_transporter() const override { return true; }
  ElementSet transporter(const Point& x, const Point& y) const override;
  std::string format_element(const GroupElement& g) const override { return base_->format_element(g); }
  GroupElement parse_element(std::string_view text) const override { return base_->parse_element(text); }
  std::string format_point(const Point& x) const override;
  Point parse_point(std::string_view text) const override;

  static Point as_point(const GroupElement& g) { return Point(g.bytes()); }
  static GroupElement as_element(const Point& x) { return GroupElement(x.bytes()); }

 private:
  ActionPtr base_;
};

/// Builds an action from its descriptor, e.g. {"kind":"affine","p":101}.
/// Throws InvalidArgument with the reason on a malformed descriptor.
ActionPtr make_action(const nlohmann::json& descriptor);

/// Descriptor kinds understood by make_action, with a one-line summary each.
std::vector<std::pair<std::string, std::string>> action_catalog();

/// Deterministic generators for experiment inputs. `spec` is a JSON object
/// with a "kind" field:
///   explicit {items}, interval {start,length}, arithmetic_progression
///   {start,step,length}, geometric_progression {start,ratio,length},
///   element_progression {start,step,length} (elements start·step^k),
///   subgroup_coset {generators,representative,cap}, random {count,seed},
///   union {sets}.
PointSet generate_points(const GroupAction& action, const nlohmann::json& spec);
ElementSet generate_elements(const GroupAction& action, const nlohmann::json& spec);

/// Seeded choice of `count` distinct members of `universe` (partial
/// Fisher-Yates over a 64-bit Mersenne twister).
template <class T>
OrderedSet<T> sample_subset(const OrderedSet<T>& universe, std::size_t count, std::uint64_t seed);

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed);

template <class T>
OrderedSet<T> sample_subset(const OrderedSet<T>& universe, std::size_t count, std::uint64_t seed) {
  std::vector<T> out;
  for (auto i : sample_indices(universe.size(), count, seed)) out.push_back(universe[i]);
  return OrderedSet<T>(std::move(out));
}

}  // namespace gacomb
