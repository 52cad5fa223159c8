#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "gacomb/types.hpp"

namespace gacomb {

/// A group G acting on the left on a set X.
///
/// Implementations are immutable after construction and every member is safe
/// to call concurrently. Elements and points are exchanged as canonical
/// encodings; `format_*`/`parse_*` give the text form used in reports.
///
/// Optional capabilities:
///  - `elements()`: full enumeration of G (finite, small groups only);
///  - `points()`: full enumeration of X;
///  - `transporter(x, y)`: the set {g : g x = y}, built directly rather than
///    by filtering G.
class GroupAction {
 public:
  virtual ~GroupAction() = default;

  virtual std::string kind() const = 0;
  /// Descriptor that `make_action` accepts to rebuild this action.
  virtual nlohmann::json descriptor() const = 0;

  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& g, const GroupElement& h) const = 0;
  virtual GroupElement inv(const GroupElement& g) const = 0;
  virtual Point act(const GroupElement& g, const Point& x) const = 0;

  virtual std::optional<ElementSet> elements() const { return std::nullopt; }
  virtual std::optional<PointSet> points() const { return std::nullopt; }
  virtual bool has_transporter() const { return false; }
  /// Precondition: has_transporter().
  virtual ElementSet transporter(const Point& x, const Point& y) const;

  virtual std::string format_element(const GroupElement& g) const = 0;
  virtual GroupElement parse_element(std::string_view text) const = 0;
  virtual std::string format_point(const Point& x) const = 0;
  virtual Point parse_point(std::string_view text) const = 0;

  // Hooks for the integer-indexed set generators (intervals, progressions).
  // Spaces that are residues (Z/n, F_p, the affine part of P^1) or the integers
  // override these.
  virtual std::optional<Point> point_from_int(std::int64_t) const { return std::nullopt; }
  virtual std::optional<GroupElement> element_from_int(std::int64_t) const { return std::nullopt; }
  /// Modulus of the ring the points live in, when multiplication of points
  /// (geometric progressions) makes sense.
  virtual std::optional<std::int64_t> point_modulus() const { return std::nullopt; }
};

using ActionPtr = std::shared_ptr<const GroupAction>;

}  // namespace gacomb
