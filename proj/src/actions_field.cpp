#include <algorithm>
#include <set>

#include "gacomb/actions.hpp"
#include "gacomb/encoding.hpp"
#include "gacomb/error.hpp"

namespace gacomb {

namespace {

constexpr std::uint64_t kEnumerationLimit = 4'000'000;

std::vector<std::string_view> parse_vector_text(std::string_view s) {
  auto inner = text::unwrap(s, '[', ']');
  if (text::trim(inner).empty()) return {};
  return text::split_top_level(inner, ',');
}

std::vector<std::vector<std::string_view>> parse_matrix_text(std::string_view s) {
  std::vector<std::vector<std::string_view>> rows;
  for (auto row : parse_vector_text(s)) rows.push_back(parse_vector_text(row));
  return rows;
}

template <class T, class F>
std::string format_vector(const std::vector<T>& v, F&& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out + "]";
}

std::string format_q(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

void require_prime(std::int64_t p, const char* who) {
  if (!is_prime(p)) throw InvalidArgument(std::string(who) + ": p must be prime, got " + std::to_string(p));
  if (p > 0x7fffffff) throw InvalidArgument(std::string(who) + ": p too large");
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) {
    out = checked_mul(out, base);
  }
  return out;
}

}  // namespace

// ---- AffineFpAction ---------------------------------------------------------

AffineFpAction::AffineFpAction(std::int64_t p) : p_(p) { require_prime(p, "affine"); }

nlohmann::json AffineFpAction::descriptor() const { return {{"kind", "affine"}, {"p", p_}}; }

GroupElement AffineFpAction::element(std::int64_t a, std::int64_t b) const {
  a = mod_norm(a, p_);
  if (a == 0) throw InvalidArgument("affine: leading coefficient must be nonzero");
  std::string bytes;
  encoding::put_u32(bytes, static_cast<std::uint32_t>(a));
  encoding::put_u32(bytes, static_cast<std::uint32_t>(mod_norm(b, p_)));
  return GroupElement(bytes);
}

std::pair<std::int64_t, std::int64_t> AffineFpAction::coefficients(const GroupElement& g) const {
  encoding::Reader r(g.bytes());
  std::int64_t a = r.u32();
  std::int64_t b = r.u32();
  r.expect_done();
  return {a, b};
}

Point AffineFpAction::point(std::int64_t x) const {
  std::string bytes;
  encoding::put_u32(bytes, static_cast<std::uint32_t>(mod_norm(x, p_)));
  return Point(bytes);
}

std::int64_t AffineFpAction::value(const Point& x) const {
  encoding::Reader r(x.bytes());
  std::int64_t v = r.u32();
  r.expect_done();
  return v;
}

GroupElement AffineFpAction::identity() const { return element(1, 0); }

GroupElement AffineFpAction::mul(const GroupElement& g, const GroupElement& h) const {
  auto [a, b] = coefficients(g);
  auto [c, d] = coefficients(h);
  return element(mod_mul(a, c, p_), mod_mul(a, d, p_) + b);
}

GroupElement AffineFpAction::inv(const GroupElement& g) const {
  auto [a, b] = coefficients(g);
  auto ai = mod_inv(a, p_);
  return element(ai, -mod_mul(ai, b, p_));
}

Point AffineFpAction::act(const GroupElement& g, const Point& x) const {
  auto [a, b] = coefficients(g);
  return point(mod_mul(a, value(x), p_) + b);
}

std::optional<ElementSet> AffineFpAction::elements() const {
  if (static_cast<std::uint64_t>(p_) * static_cast<std::uint64_t>(p_ - 1) > kEnumerationLimit) return std::nullopt;
  std::vector<GroupElement> out;
  for (std::int64_t a = 1; a < p_; ++a)
    for (std::int64_t b = 0; b < p_; ++b) out.push_back(element(a, b));
  return ElementSet::from_sorted_unique(std::move(out));
}

std::optional<PointSet> AffineFpAction::points() const {
  std::vector<Point> out;
  for (std::int64_t x = 0; x < p_; ++x) out.push_back(point(x));
  return PointSet::from_sorted_unique(std::move(out));
}

ElementSet AffineFpAction::transporter(const Point& x, const Point& y) const {
  std::vector<GroupElement> out;
  auto xv = value(x);
  auto yv = value(y);
  for (std::int64_t a = 1; a < p_; ++a) out.push_back(element(a, yv - mod_mul(a, xv, p_)));
  return ElementSet::from_sorted_unique(std::move(out));
}

std::string AffineFpAction::format_element(const GroupElement& g) const {
  auto [a, b] = coefficients(g);
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

GroupElement AffineFpAction::parse_element(std::string_view s) const {
  auto parts = text::split_top_level(text::unwrap(s, '(', ')'), ',');
  if (parts.size() != 2) throw InvalidArgument("affine: expected (a,b), got '" + std::string(s) + "'");
  return element(text::parse_int(parts[0]), text::parse_int(parts[1]));
}

std::string AffineFpAction::format_point(const Point& x) const { return std::to_string(value(x)); }
Point AffineFpAction::parse_point(std::string_view s) const { return point(text::parse_int(s)); }
std::optional<Point> AffineFpAction::point_from_int(std::int64_t v) const { return point(v); }

// ---- ProjectiveSL2Action ----------------------------------------------------

ProjectiveSL2Action::ProjectiveSL2Action(std::int64_t p) : p_(p) { require_prime(p, "psl2"); }

nlohmann::json ProjectiveSL2Action::descriptor() const { return {{"kind", "psl2"}, {"p", p_}}; }

GroupElement ProjectiveSL2Action::element(const Matrix& m) const {
  Matrix pos{mod_norm(m.a, p_), mod_norm(m.b, p_), mod_norm(m.c, p_), mod_norm(m.d, p_)};
  if (mod_norm(mod_mul(pos.a, pos.d, p_) - mod_mul(pos.b, pos.c, p_), p_) != 1)
    throw InvalidArgument("psl2: determinant must be 1");
  Matrix neg{mod_norm(-pos.a, p_), mod_norm(-pos.b, p_), mod_norm(-pos.c, p_), mod_norm(-pos.d, p_)};
  auto key = [](const Matrix& x) { return std::tie(x.a, x.b, x.c, x.d); };
  const Matrix& pick = key(neg) < key(pos) ? neg : pos;
  std::string bytes;
  for (auto v : {pick.a, pick.b, pick.c, pick.d}) encoding::put_u32(bytes, static_cast<std::uint32_t>(v));
  return GroupElement(bytes);
}

ProjectiveSL2Action::Matrix ProjectiveSL2Action::matrix(const GroupElement& g) const {
  encoding::Reader r(g.bytes());
  Matrix m{r.u32(), r.u32(), r.u32(), r.u32()};
  r.expect_done();
  return m;
}

Point ProjectiveSL2Action::affine_point(std::int64_t x) const {
  std::string bytes;
  encoding::put_u8(bytes, 0);
  encoding::put_u32(bytes, static_cast<std::uint32_t>(mod_norm(x, p_)));
  return Point(bytes);
}

Point ProjectiveSL2Action::infinity() const {
  std::string bytes;
  encoding::put_u8(bytes, 1);
  return Point(bytes);
}

std::optional<std::int64_t> ProjectiveSL2Action::affine_value(const Point& x) const {
  encoding::Reader r(x.bytes());
  auto tag = r.u8();
  if (tag == 1) {
    r.expect_done();
    return std::nullopt;
  }
  if (tag != 0) throw InvalidArgument("psl2: bad point tag");
  std::int64_t v = r.u32();
  r.expect_done();
  return v;
}

GroupElement ProjectiveSL2Action::identity() const { return element({1, 0, 0, 1}); }

GroupElement ProjectiveSL2Action::mul(const GroupElement& g, const GroupElement& h) const {
  auto x = matrix(g);
  auto y = matrix(h);
  auto f = [this](std::int64_t u, std::int64_t v, std::int64_t s, std::int64_t t) {
    return mod_norm(mod_mul(u, v, p_) + mod_mul(s, t, p_), p_);
  };
  return element({f(x.a, y.a, x.b, y.c), f(x.a, y.b, x.b, y.d), f(x.c, y.a, x.d, y.c), f(x.c, y.b, x.d, y.d)});
}

GroupElement ProjectiveSL2Action::inv(const GroupElement& g) const {
  auto m = matrix(g);
  return element({m.d, -m.b, -m.c, m.a});
}

Point ProjectiveSL2Action::act(const GroupElement& g, const Point& x) const {
  auto m = matrix(g);
  auto xv = affine_value(x);
  if (!xv) {
    if (m.c == 0) return infinity();
    return affine_point(mod_mul(m.a, mod_inv(m.c, p_), p_));
  }
  auto num = mod_norm(mod_mul(m.a, *xv, p_) + m.b, p_);
  auto den = mod_norm(mod_mul(m.c, *xv, p_) + m.d, p_);
  if (den == 0) return infinity();
  return affine_point(mod_mul(num, mod_inv(den, p_), p_));
}

std::optional<ElementSet> ProjectiveSL2Action::elements() const {
  if (static_cast<std::uint64_t>(p_) * p_ * p_ > kEnumerationLimit) return std::nullopt;
  std::call_once(enum_once_, [this] {
    std::vector<GroupElement> out;
    for (std::int64_t a = 0; a < p_; ++a) {
      for (std::int64_t b = 0; b < p_; ++b) {
        for (std::int64_t c = 0; c < p_; ++c) {
          if (a != 0) {
            auto d = mod_mul(mod_norm(1 + mod_mul(b, c, p_), p_), mod_inv(a, p_), p_);
            out.push_back(element({a, b, c, d}));
          } else if (mod_norm(-mod_mul(b, c, p_), p_) == 1) {
            for (std::int64_t d = 0; d < p_; ++d) out.push_back(element({a, b, c, d}));
          }
        }
      }
    }
    enum_ = ElementSet(std::move(out));
  });
  return enum_;
}

std::optional<PointSet> ProjectiveSL2Action::points() const {
  std::vector<Point> out;
  for (std::int64_t x = 0; x < p_; ++x) out.push_back(affine_point(x));
  out.push_back(infinity());
  return PointSet::from_sorted_unique(std::move(out));
}

ElementSet ProjectiveSL2Action::transporter(const Point& x, const Point& y) const {
  // t_v sends ∞ to v; trans(x, y) = t_y · stab(∞) · t_x⁻¹.
  auto to = [this](const Point& v) {
    auto av = affine_value(v);
    return av ? element({*av, -1, 1, 0}) : identity();
  };
  auto left = to(y);
  auto right = inv(to(x));
  std::vector<GroupElement> out;
  for (std::int64_t a = 1; a < p_; ++a) {
    auto ai = mod_inv(a, p_);
    for (std::int64_t b = 0; b < p_; ++b) out.push_back(mul(left, mul(element({a, b, 0, ai}), right)));
  }
  return ElementSet(std::move(out));
}

std::string ProjectiveSL2Action::format_element(const GroupElement& g) const {
  auto m = matrix(g);
  return "[[" + std::to_string(m.a) + "," + std::to_string(m.b) + "],[" + std::to_string(m.c) + "," +
         std::to_string(m.d) + "]]";
}

GroupElement ProjectiveSL2Action::parse_element(std::string_view s) const {
  auto rows = parse_matrix_text(s);
  if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2)
    throw InvalidArgument("psl2: expected [[a,b],[c,d]], got '" + std::string(s) + "'");
  return element({text::parse_int(rows[0][0]), text::parse_int(rows[0][1]), text::parse_int(rows[1][0]),
                  text::parse_int(rows[1][1])});
}

std::string ProjectiveSL2Action::format_point(const Point& x) const {
  auto v = affine_value(x);
  return v ? std::to_string(*v) : "inf";
}

Point ProjectiveSL2Action::parse_point(std::string_view s) const {
  if (text::trim(s) == "inf") return infinity();
  return affine_point(text::parse_int(s));
}

std::optional<Point> ProjectiveSL2Action::point_from_int(std::int64_t v) const { return affine_point(v); }

// ---- LinearFpAction ---------------------------------------------------------

LinearFpAction::LinearFpAction(std::int64_t p, int n, bool special) : p_(p), n_(n), special_(special) {
  require_prime(p, "linear_fp");
  if (n < 1 || n > 8) throw InvalidArgument("linear_fp: dimension must be in [1, 8]");
}

nlohmann::json LinearFpAction::descriptor() const {
  return {{"kind", "linear_fp"}, {"p", p_}, {"n", n_}, {"special", special_}};
}

GroupElement LinearFpAction::element(const MatrixFp& m) const {
  if (static_cast<int>(m.size()) != n_) throw InvalidArgument("linear_fp: wrong matrix size");
  MatrixFp norm = m;
  for (auto& row : norm) {
    if (static_cast<int>(row.size()) != n_) throw InvalidArgument("linear_fp: wrong matrix size");
    for (auto& v : row) v = mod_norm(v, p_);
  }
  auto det = det_fp(norm, p_);
  if (det == 0) throw InvalidArgument("linear_fp: singular matrix");
  if (special_ && det != 1) throw InvalidArgument("linear_fp: determinant must be 1");
  std::string bytes;
  for (const auto& row : norm)
    for (auto v : row) encoding::put_u32(bytes, static_cast<std::uint32_t>(v));
  return GroupElement(bytes);
}

MatrixFp LinearFpAction::matrix(const GroupElement& g) const {
  encoding::Reader r(g.bytes());
  MatrixFp m(n_, std::vector<std::int64_t>(n_));
  for (auto& row : m)
    for (auto& v : row) v = r.u32();
  r.expect_done();
  return m;
}

Point LinearFpAction::point(const std::vector<std::int64_t>& v) const {
  if (static_cast<int>(v.size()) != n_) throw InvalidArgument("linear_fp: wrong vector length");
  std::string bytes;
  for (auto x : v) encoding::put_u32(bytes, static_cast<std::uint32_t>(mod_norm(x, p_)));
  return Point(bytes);
}

std::vector<std::int64_t> LinearFpAction::vector(const Point& x) const {
  encoding::Reader r(x.bytes());
  std::vector<std::int64_t> v(n_);
  for (auto& c : v) c = r.u32();
  r.expect_done();
  return v;
}

GroupElement LinearFpAction::identity() const {
  MatrixFp m(n_, std::vector<std::int64_t>(n_, 0));
  for (int i = 0; i < n_; ++i) m[i][i] = 1;
  return element(m);
}

GroupElement LinearFpAction::mul(const GroupElement& g, const GroupElement& h) const {
  auto x = matrix(g);
  auto y = matrix(h);
  MatrixFp out(n_, std::vector<std::int64_t>(n_, 0));
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j) out[i][j] = mod_norm(out[i][j] + mod_mul(x[i][k], y[k][j], p_), p_);
  return element(out);
}

GroupElement LinearFpAction::inv(const GroupElement& g) const { return element(inverse_fp(matrix(g), p_)); }

Point LinearFpAction::act(const GroupElement& g, const Point& x) const {
  auto m = matrix(g);
  auto v = vector(x);
  std::vector<std::int64_t> out(n_, 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] = mod_norm(out[i] + mod_mul(m[i][j], v[j], p_), p_);
  return point(out);
}

std::optional<ElementSet> LinearFpAction::elements() const {
  if (ipow(static_cast<std::uint64_t>(p_), static_cast<unsigned>(n_ * n_)) > kEnumerationLimit) return std::nullopt;
  std::call_once(enum_once_, [this] {
    const int cells = n_ * n_;
    std::vector<std::int64_t> digits(cells, 0);
    std::vector<GroupElement> out;
    while (true) {
      MatrixFp m(n_, std::vector<std::int64_t>(n_));
      for (int i = 0; i < cells; ++i) m[i / n_][i % n_] = digits[i];
      auto det = det_fp(m, p_);
      if (det != 0 && (!special_ || det == 1)) out.push_back(element(m));
      int k = cells - 1;
      while (k >= 0 && ++digits[k] == p_) digits[k--] = 0;
      if (k < 0) break;
    }
    enum_ = ElementSet(std::move(out));
  });
  return enum_;
}

std::optional<PointSet> LinearFpAction::points() const {
  if (ipow(static_cast<std::uint64_t>(p_), static_cast<unsigned>(n_)) > kEnumerationLimit) return std::nullopt;
  std::vector<std::int64_t> digits(n_, 0);
  std::vector<Point> out;
  while (true) {
    out.push_back(point(digits));
    int k = n_ - 1;
    while (k >= 0 && ++digits[k] == p_) digits[k--] = 0;
    if (k < 0) break;
  }
  return PointSet(std::move(out));
}

std::string LinearFpAction::format_element(const GroupElement& g) const {
  auto m = matrix(g);
  return format_vector(m, [](const std::vector<std::int64_t>& row) {
    return format_vector(row, [](std::int64_t v) { return std::to_string(v); });
  });
}

GroupElement LinearFpAction::parse_element(std::string_view s) const {
  auto rows = parse_matrix_text(s);
  MatrixFp m;
  for (const auto& row : rows) {
    m.emplace_back();
    for (auto cell : row) m.back().push_back(text::parse_int(cell));
  }
  return element(m);
}

std::string LinearFpAction::format_point(const Point& x) const {
  return format_vector(vector(x), [](std::int64_t v) { return std::to_string(v); });
}

Point LinearFpAction::parse_point(std::string_view s) const {
  std::vector<std::int64_t> v;
  for (auto cell : parse_vector_text(s)) v.push_back(text::parse_int(cell));
  return point(v);
}

// ---- LinearQAction ----------------------------------------------------------

LinearQAction::LinearQAction(int n) : n_(n) {
  if (n < 1 || n > 8) throw InvalidArgument("linear_q: dimension must be in [1, 8]");
}

nlohmann::json LinearQAction::descriptor() const { return {{"kind", "linear_q"}, {"n", n_}}; }

GroupElement LinearQAction::element(const MatrixQ& m) const {
  if (static_cast<int>(m.size()) != n_) throw InvalidArgument("linear_q: wrong matrix size");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n_) throw InvalidArgument("linear_q: wrong matrix size");
  if (det_q(m) == 0) throw InvalidArgument("linear_q: singular matrix");
  std::string bytes;
  for (const auto& row : m)
    for (const auto& v : row) encoding::put_rational(bytes, v);
  return GroupElement(bytes);
}

MatrixQ LinearQAction::matrix(const GroupElement& g) const {
  encoding::Reader r(g.bytes());
  MatrixQ m(n_, std::vector<Rational>(n_));
  for (auto& row : m)
    for (auto& v : row) v = r.rational();
  r.expect_done();
  return m;
}

Point LinearQAction::point(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != n_) throw InvalidArgument("linear_q: wrong vector length");
  std::string bytes;
  for (const auto& x : v) encoding::put_rational(bytes, x);
  return Point(bytes);
}

std::vector<Rational> LinearQAction::vector(const Point& x) const {
  encoding::Reader r(x.bytes());
  std::vector<Rational> v(n_);
  for (auto& c : v) c = r.rational();
  r.expect_done();
  return v;
}

GroupElement LinearQAction::identity() const {
  MatrixQ m(n_, std::vector<Rational>(n_, Rational(0)));
  for (int i = 0; i < n_; ++i) m[i][i] = 1;
  return element(m);
}

GroupElement LinearQAction::mul(const GroupElement& g, const GroupElement& h) const {
  auto x = matrix(g);
  auto y = matrix(h);
  MatrixQ out(n_, std::vector<Rational>(n_, Rational(0)));
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      for (int j = 0; j < n_; ++j) out[i][j] += x[i][k] * y[k][j];
  return element(out);
}

GroupElement LinearQAction::inv(const GroupElement& g) const { return element(inverse_q(matrix(g))); }

Point LinearQAction::act(const GroupElement& g, const Point& x) const {
  auto m = matrix(g);
  auto v = vector(x);
  std::vector<Rational> out(n_, Rational(0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] += m[i][j] * v[j];
  return point(out);
}

std::string LinearQAction::format_element(const GroupElement& g) const {
  return format_vector(matrix(g), [](const std::vector<Rational>& row) { return format_vector(row, format_q); });
}

GroupElement LinearQAction::parse_element(std::string_view s) const {
  MatrixQ m;
  for (const auto& row : parse_matrix_text(s)) {
    m.emplace_back();
    for (auto cell : row) m.back().push_back(parse_rational(text::trim(cell)));
  }
  return element(m);
}

std::string LinearQAction::format_point(const Point& x) const { return format_vector(vector(x), format_q); }

Point LinearQAction::parse_point(std::string_view s) const {
  std::vector<Rational> v;
  for (auto cell : parse_vector_text(s)) v.push_back(parse_rational(text::trim(cell)));
  return point(v);
}

std::optional<Point> LinearQAction::point_from_int(std::int64_t v) const {
  if (n_ != 1) return std::nullopt;
  return point({Rational(v)});
}

}  // namespace gacomb
