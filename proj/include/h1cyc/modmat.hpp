#pragma once

// Exact linear algebra over Z/m.
//
// Conventions: vectors are rows and a matrix acts on the right (x -> x * A).
// Callers that think in column vectors transpose at the boundary.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace h1cyc {

using Residue = std::int64_t;
using Vec = std::vector<Residue>;

namespace modarith {

inline Residue reduce(Residue x, Residue m) {
  Residue r = x % m;
  return r < 0 ? r + m : r;
}

inline Residue add(Residue a, Residue b, Residue m) {
  Residue s = a - (m - b);
  return s < 0 ? s + m : s;
}

inline Residue sub(Residue a, Residue b, Residue m) {
  Residue s = a - b;
  return s < 0 ? s + m : s;
}

inline Residue neg(Residue a, Residue m) { return a == 0 ? 0 : m - a; }

// Products of residues below 2^31 fit in 63 bits; larger moduli go through
// 128-bit intermediates.
inline Residue mul(Residue a, Residue b, Residue m) {
  if (m <= (Residue{1} << 31)) return (a * b) % m;
  return static_cast<Residue>((static_cast<__int128>(a) * b) % m);
}

struct ExtGcd {
  Residue g, s, t;  // s*a + t*b = g
};

// Extended gcd on non-negative integers.
inline ExtGcd ext_gcd(Residue a, Residue b) {
  Residue old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Residue q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
    std::tie(old_t, t) = std::pair{t, old_t - q * t};
  }
  return {old_r, old_s, old_t};
}

inline std::optional<Residue> inverse(Residue a, Residue m) {
  if (m == 1) return 0;
  auto [g, s, t] = ext_gcd(reduce(a, m), m);
  (void)t;
  if (g != 1) return std::nullopt;
  return reduce(s, m);
}

inline bool is_unit(Residue a, Residue m) { return std::gcd(reduce(a, m), m) == 1; }

// A unit u with u*a = gcd(a, m) (mod m). Requires a != 0 mod m.
inline Residue unit_normalizer(Residue a, Residue m) {
  const Residue g = std::gcd(a, m);
  const Residue mq = m / g;
  Residue u = *inverse((a / g) % mq, mq);
  if (mq == 1) u = 1;
  while (std::gcd(u, m) != 1) u += mq;
  return u % m;
}

// Row operation coefficients [[s, t], [u, v]] with determinant 1 such that
// s*a + t*b = g and u*a + v*b = 0.
struct Gcdex {
  Residue g, s, t, u, v;
};

inline Gcdex gcdex(Residue a, Residue b, Residue m) {
  auto [g, s, t] = ext_gcd(a, b);
  return {g, reduce(s, m), reduce(t, m), reduce(-(b / g), m), reduce(a / g, m)};
}

}  // namespace modarith

class ZModMatrix {
 public:
  ZModMatrix() = default;

  ZModMatrix(Residue modulus, std::size_t rows, std::size_t cols)
      : modulus_(modulus), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    if (modulus < 2) throw std::invalid_argument("ZModMatrix: modulus must be >= 2");
  }

  // Entries are reduced into [0, modulus); negative literals are allowed.
  static ZModMatrix from_rows(Residue modulus, const std::vector<Vec>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    ZModMatrix a(modulus, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw std::invalid_argument("ZModMatrix: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = modarith::reduce(rows[i][j], modulus);
    }
    return a;
  }

  // Strict variant used for external input: unreduced entries are rejected.
  static ZModMatrix from_reduced_rows(Residue modulus, const std::vector<Vec>& rows, std::size_t cols = 0) {
    for (const auto& r : rows)
      for (Residue e : r)
        if (e < 0 || e >= modulus)
          throw std::invalid_argument("ZModMatrix: entry " + std::to_string(e) + " not reduced mod " +
                                      std::to_string(modulus));
    return from_rows(modulus, rows, cols);
  }

  static ZModMatrix identity(Residue modulus, std::size_t n) {
    ZModMatrix a(modulus, n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 1;
    return a;
  }

  static ZModMatrix diagonal(Residue modulus, const Vec& d) {
    ZModMatrix a(modulus, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = modarith::reduce(d[i], modulus);
    return a;
  }

  Residue modulus() const { return modulus_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Residue> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Vec row_vec(std::size_t i) const { return Vec(row(i).begin(), row(i).end()); }

  std::vector<Vec> to_rows() const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vec(i));
    return out;
  }

  const std::vector<Residue>& data() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Residue e) { return e == 0; });
  }

  friend bool operator==(const ZModMatrix&, const ZModMatrix&) = default;

 private:
  Residue modulus_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

namespace detail {

inline void require_same_modulus(const ZModMatrix& a, const ZModMatrix& b, const char* op) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument(std::string(op) + ": modulus mismatch");
}

inline bool is_zero(std::span<const Residue> v) {
  return std::all_of(v.begin(), v.end(), [](Residue e) { return e == 0; });
}

inline std::size_t leading(std::span<const Residue> v) {
  std::size_t j = 0;
  while (j < v.size() && v[j] == 0) ++j;
  return j;
}

// y <- y - c*x
inline void axpy_neg(Vec& y, Residue c, std::span<const Residue> x, Residue m) {
  if (c == 0) return;
  for (std::size_t j = 0; j < y.size(); ++j)
    if (x[j] != 0) y[j] = modarith::sub(y[j], modarith::mul(c, x[j], m), m);
}

inline Vec scaled(std::span<const Residue> x, Residue c, Residue m) {
  Vec out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = modarith::mul(c, x[j], m);
  return out;
}

// (a, b) <- (s*a + t*b, u*a + v*b)
inline void rotate(Vec& a, Vec& b, const modarith::Gcdex& c, Residue m) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    Residue x = a[j], y = b[j];
    a[j] = modarith::add(modarith::mul(c.s, x, m), modarith::mul(c.t, y, m), m);
    b[j] = modarith::add(modarith::mul(c.u, x, m), modarith::mul(c.v, y, m), m);
  }
}

}  // namespace detail

inline ZModMatrix mat_mul(const ZModMatrix& a, const ZModMatrix& b) {
  detail::require_same_modulus(a, b, "mat_mul");
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
  const Residue m = a.modulus();
  ZModMatrix c(m, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Residue aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) = modarith::add(c(i, j), modarith::mul(aik, b(k, j), m), m);
    }
  return c;
}

inline ZModMatrix operator*(const ZModMatrix& a, const ZModMatrix& b) { return mat_mul(a, b); }

inline ZModMatrix mat_add(const ZModMatrix& a, const ZModMatrix& b) {
  detail::require_same_modulus(a, b, "mat_add");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("mat_add: dimension mismatch");
  ZModMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = modarith::add(a(i, j), b(i, j), a.modulus());
  return c;
}

inline ZModMatrix mat_sub(const ZModMatrix& a, const ZModMatrix& b) {
  detail::require_same_modulus(a, b, "mat_sub");
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("mat_sub: dimension mismatch");
  ZModMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = modarith::sub(a(i, j), b(i, j), a.modulus());
  return c;
}

inline ZModMatrix scalar_mul(Residue c, const ZModMatrix& a) {
  ZModMatrix out = a;
  const Residue m = a.modulus();
  c = modarith::reduce(c, m);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = modarith::mul(c, a(i, j), m);
  return out;
}

inline ZModMatrix transpose(const ZModMatrix& a) {
  ZModMatrix t(a.modulus(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// x * A for a row vector x.
inline Vec vec_mat(std::span<const Residue> x, const ZModMatrix& a) {
  if (x.size() != a.rows()) throw std::invalid_argument("vec_mat: dimension mismatch");
  const Residue m = a.modulus();
  Vec y(a.cols(), 0);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    if (x[k] == 0) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] = modarith::add(y[j], modarith::mul(x[k], a(k, j), m), m);
  }
  return y;
}

// A * x for a column vector x.
inline Vec mat_vec(const ZModMatrix& a, std::span<const Residue> x) {
  if (x.size() != a.cols()) throw std::invalid_argument("mat_vec: dimension mismatch");
  const Residue m = a.modulus();
  Vec y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Residue acc = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc = modarith::add(acc, modarith::mul(a(i, j), x[j], m), m);
    y[i] = acc;
  }
  return y;
}

inline ZModMatrix hstack(const ZModMatrix& a, const ZModMatrix& b) {
  detail::require_same_modulus(a, b, "hstack");
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row count mismatch");
  ZModMatrix c(a.modulus(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), c.row(i).begin());
    std::copy(b.row(i).begin(), b.row(i).end(), c.row(i).begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return c;
}

inline ZModMatrix vstack(const ZModMatrix& a, const ZModMatrix& b) {
  detail::require_same_modulus(a, b, "vstack");
  if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
    throw std::invalid_argument("vstack: column count mismatch");
  const std::size_t cols = a.rows() != 0 ? a.cols() : b.cols();
  ZModMatrix c(a.modulus(), a.rows() + b.rows(), cols);
  for (std::size_t i = 0; i < a.rows(); ++i) std::copy(a.row(i).begin(), a.row(i).end(), c.row(i).begin());
  for (std::size_t i = 0; i < b.rows(); ++i)
    std::copy(b.row(i).begin(), b.row(i).end(), c.row(a.rows() + i).begin());
  return c;
}

inline ZModMatrix from_row_list(Residue modulus, std::size_t cols, const std::vector<Vec>& rows) {
  return ZModMatrix::from_rows(modulus, rows, cols);
}

// Columns [begin, end) of a.
inline ZModMatrix column_slice(const ZModMatrix& a, std::size_t begin, std::size_t end) {
  ZModMatrix out(a.modulus(), a.rows(), end - begin);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = begin; j < end; ++j) out(i, j - begin) = a(i, j);
  return out;
}

/// Incrementally maintained weak Howell basis of a row span over Z/m.
///
/// At most one row per pivot column. Pivots are divisors of m, and for every
/// pivot row P with pivot g, the row (m/g)*P lies in the span of the rows with
/// later pivots. This is enough for greedy membership testing and for reading
/// kernels off augmented systems; `canonical()` additionally reduces entries
/// above pivots, which yields the Howell normal form.
class RowBasis {
 public:
  RowBasis(Residue modulus, std::size_t cols) : modulus_(modulus), pivots_(cols) {
    if (modulus < 2) throw std::invalid_argument("RowBasis: modulus must be >= 2");
  }

  Residue modulus() const { return modulus_; }
  std::size_t cols() const { return pivots_.size(); }

  std::size_t rank() const {
    return static_cast<std::size_t>(
        std::count_if(pivots_.begin(), pivots_.end(), [](const Vec& r) { return !r.empty(); }));
  }

  // Returns true when the span grew.
  bool insert(std::span<const Residue> v) {
    if (v.size() != cols()) throw std::invalid_argument("RowBasis::insert: dimension mismatch");
    const Residue m = modulus_;
    bool changed = false;
    std::vector<Vec> work;
    work.emplace_back(v.begin(), v.end());
    for (auto& e : work.back()) e = modarith::reduce(e, m);
    while (!work.empty()) {
      Vec w = std::move(work.back());
      work.pop_back();
      for (;;) {
        const std::size_t j = detail::leading(w);
        if (j == cols()) break;
        Vec& piv = pivots_[j];
        if (piv.empty()) {
          const Residue u = modarith::unit_normalizer(w[j], m);
          if (u != 1) w = detail::scaled(w, u, m);
          const Residue g = w[j];
          if (g != 1) {
            Vec ann = detail::scaled(w, m / g, m);
            if (!detail::is_zero(ann)) work.push_back(std::move(ann));
          }
          piv = std::move(w);
          changed = true;
          break;
        }
        if (w[j] % piv[j] == 0) {
          detail::axpy_neg(w, w[j] / piv[j], piv, m);
          continue;
        }
        const auto c = modarith::gcdex(piv[j], w[j], m);
        detail::rotate(piv, w, c, m);
        const Residue u = modarith::unit_normalizer(piv[j], m);
        if (u != 1) piv = detail::scaled(piv, u, m);
        const Residue g = piv[j];
        if (g != 1) {
          Vec ann = detail::scaled(piv, m / g, m);
          if (!detail::is_zero(ann)) work.push_back(std::move(ann));
        }
        changed = true;
      }
    }
    return changed;
  }

  void insert_rows(const ZModMatrix& a) {
    for (std::size_t i = 0; i < a.rows(); ++i) insert(a.row(i));
  }

  // Greedy reduction; the residue is zero iff v lies in the span.
  Vec reduce(std::span<const Residue> v) const {
    const Residue m = modulus_;
    Vec w(v.begin(), v.end());
    for (auto& e : w) e = modarith::reduce(e, m);
    for (std::size_t j = detail::leading(w); j < cols(); j = detail::leading(w)) {
      const Vec& piv = pivots_[j];
      if (piv.empty() || w[j] % piv[j] != 0) break;
      detail::axpy_neg(w, w[j] / piv[j], piv, m);
    }
    return w;
  }

  bool contains(std::span<const Residue> v) const { return detail::is_zero(reduce(v)); }

  const Vec* pivot_row(std::size_t col) const { return pivots_[col].empty() ? nullptr : &pivots_[col]; }

  // Howell normal form: rows in pivot order with entries above each pivot
  // reduced into [0, pivot).
  ZModMatrix canonical() const {
    const Residue m = modulus_;
    std::vector<Vec> rows;
    std::vector<std::size_t> piv_cols;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (pivots_[j].empty()) continue;
      rows.push_back(pivots_[j]);
      piv_cols.push_back(j);
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const std::size_t j = piv_cols[k];
      const Residue g = rows[k][j];
      for (std::size_t i = 0; i < k; ++i) detail::axpy_neg(rows[i], rows[i][j] / g, rows[k], m);
    }
    return ZModMatrix::from_rows(m, rows, cols());
  }

 private:
  Residue modulus_;
  std::vector<Vec> pivots_;
};

/// Howell normal form of the row span of a.
inline ZModMatrix howell_form(const ZModMatrix& a) {
  RowBasis basis(a.modulus(), a.cols());
  basis.insert_rows(a);
  return basis.canonical();
}

namespace detail {

// Weak Howell basis of [a | I].
inline RowBasis augmented_basis(const ZModMatrix& a) {
  RowBasis basis(a.modulus(), a.cols() + a.rows());
  Vec row(a.cols() + a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(row.begin(), row.end(), 0);
    std::copy(a.row(i).begin(), a.row(i).end(), row.begin());
    row[a.cols() + i] = 1;
    basis.insert(row);
  }
  return basis;
}

}  // namespace detail

/// Generators (Howell form) of the left kernel {x : x * a = 0}.
inline ZModMatrix kernel(const ZModMatrix& a) {
  const std::size_t c = a.cols(), r = a.rows();
  if (r == 0) return ZModMatrix(a.modulus(), 0, 0);
  const RowBasis basis = detail::augmented_basis(a);
  RowBasis ker(a.modulus(), r);
  for (std::size_t j = c; j < c + r; ++j)
    if (const Vec* p = basis.pivot_row(j)) ker.insert(std::span<const Residue>(*p).subspan(c));
  return ker.canonical();
}

/// Some x with x * a = b, or nullopt when b is outside the row span of a.
inline std::optional<Vec> solve(const ZModMatrix& a, std::span<const Residue> b) {
  if (b.size() != a.cols()) throw std::invalid_argument("solve: dimension mismatch");
  const Residue m = a.modulus();
  const std::size_t c = a.cols(), r = a.rows();
  const RowBasis basis = detail::augmented_basis(a);
  Vec w(c + r, 0);
  for (std::size_t j = 0; j < c; ++j) w[j] = modarith::reduce(b[j], m);
  for (std::size_t j = detail::leading(w); j < c; j = detail::leading(w)) {
    const Vec* piv = basis.pivot_row(j);
    if (piv == nullptr || w[j] % (*piv)[j] != 0) return std::nullopt;
    detail::axpy_neg(w, w[j] / (*piv)[j], *piv, m);
  }
  Vec x(r);
  for (std::size_t i = 0; i < r; ++i) x[i] = modarith::neg(w[c + i], m);
  return x;
}

inline bool is_invertible(const ZModMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("is_invertible: matrix is not square");
  return howell_form(a) == ZModMatrix::identity(a.modulus(), a.rows());
}

inline std::optional<ZModMatrix> inverse(const ZModMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  const std::size_t n = a.rows();
  const ZModMatrix h = howell_form(hstack(a, ZModMatrix::identity(a.modulus(), n)));
  if (h.rows() != n || !(column_slice(h, 0, n) == ZModMatrix::identity(a.modulus(), n))) return std::nullopt;
  return column_slice(h, n, 2 * n);
}

/// Number of elements in the row span, as a multiset of cyclic orders
/// (one entry m/pivot per Howell row).
inline std::vector<Residue> span_cyclic_orders(const ZModMatrix& howell) {
  std::vector<Residue> out;
  for (std::size_t i = 0; i < howell.rows(); ++i) {
    const std::size_t j = detail::leading(howell.row(i));
    out.push_back(howell.modulus() / howell(i, j));
  }
  return out;
}

struct SmithForm {
  ZModMatrix d;  // diagonal, entries are divisors of the modulus (0 = the zero ideal)
  ZModMatrix u;  // invertible, u * a * v = d
  ZModMatrix v;  // invertible
  Vec diagonal() const {
    Vec out;
    for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
    return out;
  }
};

/// Smith normal form over Z/m with unimodular transforms.
inline SmithForm smith_normal_form(const ZModMatrix& a) {
  using namespace modarith;
  const Residue m = a.modulus();
  const std::size_t r = a.rows(), c = a.cols();
  ZModMatrix d = a;
  ZModMatrix u = ZModMatrix::identity(m, r);
  ZModMatrix v = ZModMatrix::identity(m, c);

  auto swap_rows = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < c; ++j) std::swap(d(i, j), d(k, j));
    for (std::size_t j = 0; j < r; ++j) std::swap(u(i, j), u(k, j));
  };
  auto swap_cols = [&](std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < r; ++j) std::swap(d(j, i), d(j, k));
    for (std::size_t j = 0; j < c; ++j) std::swap(v(j, i), v(j, k));
  };
  // row_i <- row_i - q * row_k
  auto row_axpy = [&](std::size_t i, std::size_t k, Residue q) {
    for (std::size_t j = 0; j < c; ++j) d(i, j) = sub(d(i, j), mul(q, d(k, j), m), m);
    for (std::size_t j = 0; j < r; ++j) u(i, j) = sub(u(i, j), mul(q, u(k, j), m), m);
  };
  auto col_axpy = [&](std::size_t i, std::size_t k, Residue q) {
    for (std::size_t j = 0; j < r; ++j) d(j, i) = sub(d(j, i), mul(q, d(j, k), m), m);
    for (std::size_t j = 0; j < c; ++j) v(j, i) = sub(v(j, i), mul(q, v(j, k), m), m);
  };
  auto row_rotate = [&](std::size_t t, std::size_t i, const Gcdex& g) {
    for (std::size_t j = 0; j < c; ++j) {
      Residue x = d(t, j), y = d(i, j);
      d(t, j) = add(mul(g.s, x, m), mul(g.t, y, m), m);
      d(i, j) = add(mul(g.u, x, m), mul(g.v, y, m), m);
    }
    for (std::size_t j = 0; j < r; ++j) {
      Residue x = u(t, j), y = u(i, j);
      u(t, j) = add(mul(g.s, x, m), mul(g.t, y, m), m);
      u(i, j) = add(mul(g.u, x, m), mul(g.v, y, m), m);
    }
  };
  auto col_rotate = [&](std::size_t t, std::size_t i, const Gcdex& g) {
    for (std::size_t j = 0; j < r; ++j) {
      Residue x = d(j, t), y = d(j, i);
      d(j, t) = add(mul(g.s, x, m), mul(g.t, y, m), m);
      d(j, i) = add(mul(g.u, x, m), mul(g.v, y, m), m);
    }
    for (std::size_t j = 0; j < c; ++j) {
      Residue x = v(j, t), y = v(j, i);
      v(j, t) = add(mul(g.s, x, m), mul(g.t, y, m), m);
      v(j, i) = add(mul(g.u, x, m), mul(g.v, y, m), m);
    }
  };
  auto normalize_pivot = [&](std::size_t t) {
    const Residue w = unit_normalizer(d(t, t), m);
    if (w == 1) return;
    for (std::size_t j = 0; j < c; ++j) d(t, j) = mul(w, d(t, j), m);
    for (std::size_t j = 0; j < r; ++j) u(t, j) = mul(w, u(t, j), m);
  };

  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    // Pivot: the entry generating the largest ideal.
    std::size_t pi = r, pj = c;
    Residue best = m;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j)
        if (d(i, j) != 0 && std::gcd(d(i, j), m) < best) {
          best = std::gcd(d(i, j), m);
          pi = i;
          pj = j;
        }
    if (pi == r) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      normalize_pivot(t);
      bool dirty = false;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (d(i, t) == 0) continue;
        if (d(i, t) % d(t, t) == 0) {
          row_axpy(i, t, d(i, t) / d(t, t));
        } else {
          row_rotate(t, i, gcdex(d(t, t), d(i, t), m));
          normalize_pivot(t);
          dirty = true;
        }
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (d(t, j) == 0) continue;
        if (d(t, j) % d(t, t) == 0) {
          col_axpy(j, t, d(t, j) / d(t, t));
        } else {
          col_rotate(t, j, gcdex(d(t, t), d(t, j), m));
          normalize_pivot(t);
          dirty = true;
        }
      }
      if (dirty) continue;
      // The pivot must divide the remaining block; otherwise fold in an offending row.
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (d(i, j) % d(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == r) break;
      row_axpy(t, bad, m - 1);
    }
  }
  return {d, u, v};
}

}  // namespace h1cyc
