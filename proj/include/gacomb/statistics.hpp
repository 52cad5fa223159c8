#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/error.hpp"
#include "gacomb/rational.hpp"
#include "gacomb/types.hpp"

namespace gacomb {

/// Exact test fraction·size ≤ count.
bool meets_fraction(std::uint64_t count, const Rational& fraction, std::uint64_t size);
/// Throws InvalidArgument unless 0 < alpha ≤ 1.
void require_unit_fraction(const Rational& alpha, const char* name = "alpha");

/// Elements g that can have |Y ∩ gY| ≥ 1: the supplied set, else the union of
/// transporters between points of Y, else the whole group. `source` receives
/// "supplied", "transporter" or "enumeration".
ElementSet candidate_universe(const GroupAction& action, const PointSet& Y,
                              const std::optional<ElementSet>& supplied, std::string* source = nullptr);

struct SymmetryReport {
  Rational alpha;
  std::string universe;
  std::uint64_t universe_size = 0;
  std::uint64_t y_size = 0;
  ElementSet members;
  CountMap<GroupElement> overlaps;  // g ↦ |Y ∩ gY| for every member

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("universe", universe);
    v("universe_size", universe_size);
    v("y_size", y_size);
    v("members", members);
    v("overlaps", overlaps);
  }
};

/// {g : |Y ∩ gY| ≥ alpha·|Y|} within the candidate universe.
SymmetryReport symmetry_set(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                            const std::optional<ElementSet>& candidates = std::nullopt);
std::vector<std::string> check_symmetry_set(const GroupAction& action, const PointSet& Y,
                                            const std::optional<ElementSet>& candidates, const SymmetryReport& report);

struct EnergyReport {
  std::uint64_t value = 0;
  std::uint64_t by_pairs = 0;   // Σ_{a1,a2} |a1Y ∩ a2Y|
  std::uint64_t by_repr = 0;    // Σ_g r_{A⁻¹A}(g) |Y ∩ gY|
  std::uint64_t by_fibers = 0;  // Σ_x r_{A(Y)}(x)²

  template <class V>
  void visit(V& v) {
    v("value", value);
    v("by_pairs", by_pairs);
    v("by_repr", by_repr);
    v("by_fibers", by_fibers);
  }
};

/// #{(a1, a2, y1, y2) : a1 y1 = a2 y2}, evaluated three ways.
EnergyReport action_energy(const GroupAction& action, const ElementSet& A, const PointSet& Y);
std::vector<std::string> check_action_energy(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                             const EnergyReport& report);

/// Lower and upper bounds on the energy in terms of the image set, the
/// symmetry set and the representation function of A⁻¹A.
struct EnergyBoundsReport {
  Rational alpha;
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  std::uint64_t image_size = 0;
  std::uint64_t energy = 0;
  // |A|²|Y|² ≤ |A(Y)|·E
  BigInt image_lhs;
  BigInt image_rhs;
  // |E|² ≤ |A_E(Y)|·E for a supplied relation E
  std::optional<std::uint64_t> relation_size;
  std::optional<std::uint64_t> partial_image_size;
  // α²|A ∩ Sym_α|²|Y| ≤ E
  std::uint64_t sym_in_a = 0;
  Rational sym_lhs;
  // α|Y|·Σ_{Sym} r ≤ E ≤ (⌈α|Y|⌉−1)|A|² + |Y|·Σ_{Sym} r ≤ (⌈α|Y|⌉−1)|A|² + |A||Y|·max_a |a⁻¹A ∩ Sym|
  std::uint64_t sym_repr_sum = 0;
  std::uint64_t max_shifted_sym = 0;
  Rational lower_repr;
  BigInt upper_repr;
  BigInt upper_max;
  BigInt upper_trivial;  // |A|²|Y|
  bool image_holds = false;
  std::optional<bool> relation_holds;
  bool sym_holds = false;
  bool lower_repr_holds = false;
  bool upper_repr_holds = false;
  bool upper_max_holds = false;
  bool upper_trivial_holds = false;

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("a_size", a_size);
    v("y_size", y_size);
    v("image_size", image_size);
    v("energy", energy);
    v("image_lhs", image_lhs);
    v("image_rhs", image_rhs);
    v("relation_size", relation_size);
    v("partial_image_size", partial_image_size);
    v("sym_in_a", sym_in_a);
    v("sym_lhs", sym_lhs);
    v("sym_repr_sum", sym_repr_sum);
    v("max_shifted_sym", max_shifted_sym);
    v("lower_repr", lower_repr);
    v("upper_repr", upper_repr);
    v("upper_max", upper_max);
    v("upper_trivial", upper_trivial);
    v("image_holds", image_holds);
    v("relation_holds", relation_holds);
    v("sym_holds", sym_holds);
    v("lower_repr_holds", lower_repr_holds);
    v("upper_repr_holds", upper_repr_holds);
    v("upper_max_holds", upper_max_holds);
    v("upper_trivial_holds", upper_trivial_holds);
  }
};

EnergyBoundsReport energy_bounds(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                 const Rational& alpha, const std::optional<ImageRelation>& relation = std::nullopt);
std::vector<std::string> check_energy_bounds(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                             const std::optional<ImageRelation>& relation,
                                             const EnergyBoundsReport& report);

struct OrbitStabilizerWitness {
  Point x;
  GroupElement a0;
  std::uint64_t a_size = 0;
  std::uint64_t stab_count = 0;   // |a0⁻¹A ∩ stab(x)|
  std::uint64_t orbit_size = 0;   // |A(x)|
  std::uint64_t shifted_sum = 0;  // Σ_a |a⁻¹A ∩ stab(x)|
  bool holds = false;             // stab_count·orbit_size ≥ |A|

  template <class V>
  void visit(V& v) {
    v("x", x);
    v("a0", a0);
    v("a_size", a_size);
    v("stab_count", stab_count);
    v("orbit_size", orbit_size);
    v("shifted_sum", shifted_sum);
    v("holds", holds);
  }
};

OrbitStabilizerWitness orbit_stabilizer_witness(const GroupAction& action, const ElementSet& A, const Point& x);
std::vector<std::string> check_orbit_stabilizer(const GroupAction& action, const ElementSet& A,
                                                const OrbitStabilizerWitness& w);

/// Large energy ⇒ large partial image relation with small partial image.
struct PartialImageFromEnergy {
  Rational alpha;
  std::uint64_t energy = 0;
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  PointSet popular;  // {x : r_{A(Y)}(x) ≥ α|A|}
  ImageRelation relation;
  std::uint64_t relation_size = 0;
  std::uint64_t partial_image_size = 0;
  bool size_holds = false;   // |E| ≥ α|A||Y|
  bool image_holds = false;  // α²|A_E(Y)| ≤ |Y|

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("energy", energy);
    v("a_size", a_size);
    v("y_size", y_size);
    v("popular", popular);
    v("relation", relation);
    v("relation_size", relation_size);
    v("partial_image_size", partial_image_size);
    v("size_holds", size_holds);
    v("image_holds", image_holds);
  }
};

/// Large energy ⇒ some translate a0⁻¹A meets Sym_α(Y) in ≥ α|A| elements.
struct SymmetryFromEnergy {
  Rational alpha;
  std::uint64_t energy = 0;
  std::uint64_t a_size = 0;
  GroupElement a0;
  ElementSet shifted;  // a0⁻¹A ∩ Sym_α(Y)
  std::uint64_t shifted_size = 0;
  bool holds = false;

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("energy", energy);
    v("a_size", a_size);
    v("a0", a0);
    v("shifted", shifted);
    v("shifted_size", shifted_size);
    v("holds", holds);
  }
};

/// Small partial image ⇒ a dense subset of A lies in a symmetry set of Y ∪ A_E(Y).
struct SymmetryFromPartialImage {
  Rational rho;
  Rational growth;  // K
  Rational alpha;   // ρ / (2(K+1))
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  std::uint64_t relation_size = 0;
  std::uint64_t partial_image_size = 0;
  ElementSet dense;    // elements with ≥ ρ|Y|/2 partners
  PointSet extended;   // Y ∪ A_E(Y)
  CountMap<GroupElement> overlaps;  // |Y' ∩ aY'| for a in dense
  bool dense_holds = false;     // 2|A'| ≥ ρ|A|
  bool extended_holds = false;  // |Y'| ≤ (K+1)|Y|
  bool members_hold = false;    // A' ⊆ Sym_alpha(Y')

  template <class V>
  void visit(V& v) {
    v("rho", rho);
    v("growth", growth);
    v("alpha", alpha);
    v("a_size", a_size);
    v("y_size", y_size);
    v("relation_size", relation_size);
    v("partial_image_size", partial_image_size);
    v("dense", dense);
    v("extended", extended);
    v("overlaps", overlaps);
    v("dense_holds", dense_holds);
    v("extended_holds", extended_holds);
    v("members_hold", members_hold);
  }
};

/// A ⊆ Sym_α(Y) ⇒ E = {(a, y) : a y ∈ Y} is large and A_E(Y) ⊆ Y.
struct PartialImageFromSymmetry {
  Rational alpha;
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  ImageRelation relation;
  std::uint64_t relation_size = 0;
  bool size_holds = false;
  bool inside_holds = false;

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("a_size", a_size);
    v("y_size", y_size);
    v("relation", relation);
    v("relation_size", relation_size);
    v("size_holds", size_holds);
    v("inside_holds", inside_holds);
  }
};

/// Throws HypothesisNotMet unless E(A,Y) ≥ 2α|A|²|Y|.
PartialImageFromEnergy energy_to_partial_image(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                               const Rational& alpha);
SymmetryFromEnergy energy_to_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                      const Rational& alpha);
/// Throws HypothesisNotMet unless |A_E(Y)| ≤ K|Y| and |E| ≥ ρ|A||Y|.
SymmetryFromPartialImage partial_image_to_symmetry(const GroupAction& action, const ElementSet& A,
                                                   const PointSet& Y, const ImageRelation& E, const Rational& growth,
                                                   const Rational& rho);
/// Throws HypothesisNotMet unless A ⊆ Sym_α(Y).
PartialImageFromSymmetry symmetry_to_partial_image(const GroupAction& action, const ElementSet& A,
                                                   const PointSet& Y, const Rational& alpha);

std::vector<std::string> check_partial_image_from_energy(const GroupAction& action, const ElementSet& A,
                                                         const PointSet& Y, const PartialImageFromEnergy& c);
std::vector<std::string> check_symmetry_from_energy(const GroupAction& action, const ElementSet& A,
                                                    const PointSet& Y, const SymmetryFromEnergy& c);
std::vector<std::string> check_symmetry_from_partial_image(const GroupAction& action, const ElementSet& A,
                                                           const PointSet& Y, const ImageRelation& E,
                                                           const SymmetryFromPartialImage& c);
std::vector<std::string> check_partial_image_from_symmetry(const GroupAction& action, const ElementSet& A,
                                                           const PointSet& Y, const PartialImageFromSymmetry& c);

template <class K>
struct PopularReport {
  Rational lambda;
  std::uint64_t total = 0;
  std::uint64_t support = 0;
  OrderedSet<K> popular;  // {x : f(x)·|supp f| ≥ λ·Σf}
  std::uint64_t mass = 0;
  bool holds = false;     // mass ≥ (1−λ)·Σf

  template <class V>
  void visit(V& v) {
    v("lambda", lambda);
    v("total", total);
    v("support", support);
    v("popular", popular);
    v("mass", mass);
    v("holds", holds);
  }
};

/// Keys whose value is at least λ times the mean over the support.
template <class K>
PopularReport<K> popular_subset(const CountMap<K>& f, const Rational& lambda) {
  if (f.empty()) throw InvalidArgument("popular subset: empty function");
  if (lambda <= 0 || lambda >= 1) throw InvalidArgument("lambda out of (0,1)");
  PopularReport<K> out;
  out.lambda = lambda;
  out.total = f.total();
  out.support = f.size();
  std::vector<K> keep;
  for (const auto& [key, value] : f.entries()) {
    if (Rational(BigInt(value) * out.support) >= lambda * BigInt(out.total)) {
      keep.push_back(key);
      out.mass += value;
    }
  }
  out.popular = OrderedSet<K>::from_sorted_unique(std::move(keep));
  out.holds = Rational(BigInt(out.mass)) >= (1 - lambda) * BigInt(out.total);
  return out;
}

/// Pairs (s, t) of a family of subsets of {0..n−1} whose intersection has at
/// least δ²n/2 elements.
struct IntersectionPairs {
  Rational delta;
  std::uint64_t universe_size = 0;
  std::uint64_t family_size = 0;
  std::uint64_t total_size = 0;          // Σ|T_s|
  std::uint64_t intersection_total = 0;  // Σ_{s,t} |T_s ∩ T_t|
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  bool cauchy_schwarz_holds = false;  // (Σ|T_s|)² ≤ n·Σ|T_s ∩ T_t|
  bool count_holds = false;           // 2|P| ≥ δ²|S|²

  template <class V>
  void visit(V& v) {
    v("delta", delta);
    v("universe_size", universe_size);
    v("family_size", family_size);
    v("total_size", total_size);
    v("intersection_total", intersection_total);
    v("pairs", pairs);
    v("cauchy_schwarz_holds", cauchy_schwarz_holds);
    v("count_holds", count_holds);
  }
};

/// Throws HypothesisNotMet unless Σ|T_s| ≥ δ|S|n. Each T_s must be sorted,
/// duplicate-free and inside {0..n−1}.
IntersectionPairs cs_intersection_pairs(const std::vector<std::vector<std::uint32_t>>& family,
                                        std::uint64_t universe_size, const Rational& delta);
std::vector<std::string> check_intersection_pairs(const std::vector<std::vector<std::uint32_t>>& family,
                                                  const IntersectionPairs& c);

/// Σ_{(x,y) ∈ P} |A ∩ trans(x, y)|.
std::uint64_t incidence_count(const GroupAction& action, const std::vector<std::pair<Point, Point>>& pairs,
                              const ElementSet& A);

/// Incidences between Y×Y and A against Σ_{g∈A} |Y ∩ gY|.
struct IncidenceIdentity {
  std::uint64_t incidences = 0;
  std::uint64_t overlap_sum = 0;
  bool holds = false;

  template <class V>
  void visit(V& v) {
    v("incidences", incidences);
    v("overlap_sum", overlap_sum);
    v("holds", holds);
  }
};

IncidenceIdentity incidence_identity(const GroupAction& action, const ElementSet& A, const PointSet& Y);

}  // namespace gacomb
