#pragma once

// Concrete group elements: permutations on {1..n} and invertible k x k
// matrices over GF(p), behind one value type.
//
// Composition convention: a * b means "apply a, then b". Permutations act on
// the right, (a * b)(i) = b(a(i)); matrices act on row vectors, so a * b is
// the ordinary matrix product. Conjugation is a^b = b^-1 a b and the
// commutator is [a, b] = a^-1 b^-1 a b.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpcert/bigint.hpp"
#include "grpcert/error.hpp"

namespace grpcert {

enum class Backend : std::uint8_t { permutation, matrix };

inline constexpr std::uint32_t kMaxPrime = 1u << 16;
inline constexpr std::uint64_t kDefaultOrderCap = 1'000'000;

/// Backend parameters shared by all elements of one group.
/// For permutations `degree` is n and `prime` is 0; for matrices `degree`
/// is the dimension k and `prime` is p.
struct BackendSpec {
  Backend kind = Backend::permutation;
  std::uint32_t degree = 0;
  std::uint32_t prime = 0;

  static BackendSpec permutations(std::uint32_t n) { return {Backend::permutation, n, 0}; }
  static BackendSpec matrices(std::uint32_t k, std::uint32_t p) { return {Backend::matrix, k, p}; }

  friend bool operator==(const BackendSpec&, const BackendSpec&) = default;

  std::string describe() const {
    if (kind == Backend::permutation) {
      return "permutations of degree " + std::to_string(degree);
    }
    return std::to_string(degree) + "x" + std::to_string(degree) + " matrices over GF(" +
           std::to_string(prime) + ")";
  }
};

namespace detail {

inline bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint32_t pow_mod(std::uint32_t base, std::uint32_t exp, std::uint32_t p) {
  std::uint64_t result = 1 % p;
  std::uint64_t b = base % p;
  while (exp > 0) {
    if (exp & 1u) result = result * b % p;
    b = b * b % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) { return pow_mod(a, p - 2, p); }

// Determinant of a k x k row-major matrix over GF(p).
inline std::uint32_t det_mod(std::vector<std::uint32_t> m, std::uint32_t k, std::uint32_t p) {
  std::uint64_t det = 1;
  for (std::uint32_t col = 0; col < k; ++col) {
    std::uint32_t pivot = col;
    while (pivot < k && m[pivot * k + col] == 0) ++pivot;
    if (pivot == k) return 0;
    if (pivot != col) {
      for (std::uint32_t j = 0; j < k; ++j) std::swap(m[pivot * k + j], m[col * k + j]);
      det = (p - det % p) % p;
    }
    const std::uint32_t pv = m[col * k + col];
    det = det * pv % p;
    const std::uint32_t pinv = inv_mod(pv, p);
    for (std::uint32_t r = col + 1; r < k; ++r) {
      const std::uint64_t factor = static_cast<std::uint64_t>(m[r * k + col]) * pinv % p;
      if (factor == 0) continue;
      for (std::uint32_t j = col; j < k; ++j) {
        const std::uint64_t sub = factor * m[col * k + j] % p;
        m[r * k + j] = static_cast<std::uint32_t>((m[r * k + j] + p - sub) % p);
      }
    }
  }
  return static_cast<std::uint32_t>(det);
}

inline std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(a, b);
  const std::uint64_t q = b / g;
  if (q != 0 && a > std::numeric_limits<std::uint64_t>::max() / q) {
    throw OrderOverflowError("permutation order does not fit in 64 bits");
  }
  return a * q;
}

}  // namespace detail

class Element {
 public:
  Element() = default;

  static Element identity(const BackendSpec& spec) {
    Element e;
    e.spec_ = spec;
    if (spec.kind == Backend::permutation) {
      e.data_.resize(spec.degree);
      std::iota(e.data_.begin(), e.data_.end(), 0u);
    } else {
      e.data_.assign(static_cast<std::size_t>(spec.degree) * spec.degree, 0u);
      for (std::uint32_t i = 0; i < spec.degree; ++i) e.data_[i * spec.degree + i] = 1 % spec.prime;
    }
    return e;
  }

  /// Permutation from 0-based images: point i is mapped to images[i].
  static Element from_images(std::vector<std::uint32_t> images) {
    const auto n = static_cast<std::uint32_t>(images.size());
    std::vector<bool> seen(n, false);
    for (std::uint32_t v : images) {
      if (v >= n || seen[v]) {
        throw Error("permutation images are not a bijection on " + std::to_string(n) + " points");
      }
      seen[v] = true;
    }
    Element e;
    e.spec_ = BackendSpec::permutations(n);
    e.data_ = std::move(images);
    return e;
  }

  /// Matrix from row-major entries; entries are reduced mod p.
  static Element from_matrix(std::uint32_t k, std::uint32_t p, std::span<const std::int64_t> entries) {
    if (!detail::is_prime_u32(p) || p >= kMaxPrime) {
      throw Error("matrix field size " + std::to_string(p) + " is not a prime below 65536");
    }
    if (entries.size() != static_cast<std::size_t>(k) * k) {
      throw Error("matrix needs " + std::to_string(k * k) + " entries, got " +
                  std::to_string(entries.size()));
    }
    Element e;
    e.spec_ = BackendSpec::matrices(k, p);
    e.data_.reserve(entries.size());
    const auto pp = static_cast<std::int64_t>(p);
    for (std::int64_t v : entries) {
      e.data_.push_back(static_cast<std::uint32_t>(((v % pp) + pp) % pp));
    }
    if (detail::det_mod(e.data_, k, p) == 0) {
      throw Error("matrix is singular over GF(" + std::to_string(p) + ")");
    }
    return e;
  }

  const BackendSpec& spec() const noexcept { return spec_; }
  Backend kind() const noexcept { return spec_.kind; }
  std::span<const std::uint32_t> data() const noexcept { return data_; }

  bool is_identity() const {
    if (spec_.kind == Backend::permutation) {
      for (std::uint32_t i = 0; i < data_.size(); ++i) {
        if (data_[i] != i) return false;
      }
      return true;
    }
    const std::uint32_t k = spec_.degree;
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) {
        if (data_[i * k + j] != (i == j ? 1u : 0u)) return false;
      }
    }
    return true;
  }

  /// Image of a 0-based point under a permutation.
  std::uint32_t operator[](std::uint32_t point) const { return data_[point]; }

  friend bool operator==(const Element&, const Element&) = default;

  friend Element operator*(const Element& a, const Element& b) {
    if (!(a.spec_ == b.spec_)) {
      throw CompositionError("cannot compose " + a.spec_.describe() + " with " + b.spec_.describe());
    }
    Element r;
    r.spec_ = a.spec_;
    if (a.spec_.kind == Backend::permutation) {
      r.data_.resize(a.data_.size());
      for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = b.data_[a.data_[i]];
      return r;
    }
    const std::uint32_t k = a.spec_.degree;
    const std::uint64_t p = a.spec_.prime;
    r.data_.assign(static_cast<std::size_t>(k) * k, 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) {
        std::uint64_t acc = 0;
        for (std::uint32_t l = 0; l < k; ++l) {
          acc += static_cast<std::uint64_t>(a.data_[i * k + l]) * b.data_[l * k + j];
          if ((l & 15u) == 15u) acc %= p;
        }
        r.data_[i * k + j] = static_cast<std::uint32_t>(acc % p);
      }
    }
    return r;
  }

  Element inverse() const {
    Element r;
    r.spec_ = spec_;
    if (spec_.kind == Backend::permutation) {
      r.data_.resize(data_.size());
      for (std::uint32_t i = 0; i < data_.size(); ++i) r.data_[data_[i]] = i;
      return r;
    }
    // Gauss-Jordan on [A | I].
    const std::uint32_t k = spec_.degree;
    const std::uint32_t p = spec_.prime;
    std::vector<std::uint32_t> a = data_;
    Element inv = identity(spec_);
    auto& b = inv.data_;
    for (std::uint32_t col = 0; col < k; ++col) {
      std::uint32_t pivot = col;
      while (pivot < k && a[pivot * k + col] == 0) ++pivot;
      for (std::uint32_t j = 0; j < k; ++j) {
        std::swap(a[pivot * k + j], a[col * k + j]);
        std::swap(b[pivot * k + j], b[col * k + j]);
      }
      const std::uint64_t pinv = detail::inv_mod(a[col * k + col], p);
      for (std::uint32_t j = 0; j < k; ++j) {
        a[col * k + j] = static_cast<std::uint32_t>(a[col * k + j] * pinv % p);
        b[col * k + j] = static_cast<std::uint32_t>(b[col * k + j] * pinv % p);
      }
      for (std::uint32_t r2 = 0; r2 < k; ++r2) {
        if (r2 == col) continue;
        const std::uint64_t f = a[r2 * k + col];
        if (f == 0) continue;
        for (std::uint32_t j = 0; j < k; ++j) {
          a[r2 * k + j] = static_cast<std::uint32_t>((a[r2 * k + j] + p - f * a[col * k + j] % p) % p);
          b[r2 * k + j] = static_cast<std::uint32_t>((b[r2 * k + j] + p - f * b[col * k + j] % p) % p);
        }
      }
    }
    return inv;
  }

  std::size_t hash() const noexcept {
    std::size_t h = static_cast<std::size_t>(spec_.kind) * 0x9e3779b97f4a7c15ull ^ spec_.degree ^
                    (static_cast<std::size_t>(spec_.prime) << 32);
    for (std::uint32_t v : data_) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  BackendSpec spec_;
  std::vector<std::uint32_t> data_;
};

}  // namespace grpcert

template <>
struct std::hash<grpcert::Element> {
  std::size_t operator()(const grpcert::Element& e) const noexcept { return e.hash(); }
};

namespace grpcert {

inline Element multiply(const Element& a, const Element& b) { return a * b; }
inline Element inverse(const Element& a) { return a.inverse(); }

/// a^b = b^-1 a b
inline Element conjugate(const Element& a, const Element& b) { return b.inverse() * a * b; }

/// [a, b] = a^-1 b^-1 a b
inline Element commutator(const Element& a, const Element& b) {
  return a.inverse() * b.inverse() * a * b;
}

inline bool commute(const Element& a, const Element& b) { return a * b == b * a; }

inline Element power(const Element& a, const BigInt& exponent) {
  Element base = exponent < 0 ? a.inverse() : a;
  BigInt e = boost::multiprecision::abs(exponent);
  Element result = Element::identity(a.spec());
  while (e > 0) {
    if (boost::multiprecision::bit_test(e, 0)) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

inline Element power(const Element& a, std::int64_t exponent) { return power(a, BigInt(exponent)); }

/// Cycle lengths of a permutation, including fixed points, sorted ascending.
inline std::vector<std::uint32_t> cycle_type(const Element& a) {
  std::vector<std::uint32_t> lengths;
  const auto n = a.spec().degree;
  std::vector<bool> seen(n, false);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::uint32_t len = 0;
    for (std::uint32_t j = i; !seen[j]; j = a[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

/// Smallest m >= 1 with a^m = 1. Matrices use explicit power iteration and
/// throw OrderOverflowError after `cap` multiplications.
inline std::uint64_t element_order(const Element& a, std::uint64_t cap = kDefaultOrderCap) {
  if (a.kind() == Backend::permutation) {
    std::uint64_t order = 1;
    for (std::uint32_t len : cycle_type(a)) order = detail::checked_lcm(order, len);
    return order;
  }
  Element x = a;
  for (std::uint64_t m = 1; m <= cap; ++m) {
    if (x.is_identity()) return m;
    x = x * a;
  }
  throw OrderOverflowError("matrix order exceeds the iteration cap of " + std::to_string(cap));
}

/// Coefficients c_0..c_{k-1} of the monic characteristic polynomial
/// x^k + c_{k-1} x^{k-1} + ... + c_0 over GF(p), via Hessenberg reduction.
inline std::vector<std::uint32_t> characteristic_polynomial(const Element& a) {
  const std::uint32_t k = a.spec().degree;
  const std::uint64_t p = a.spec().prime;
  std::vector<std::uint64_t> h(a.data().begin(), a.data().end());
  auto at = [&](std::uint32_t i, std::uint32_t j) -> std::uint64_t& { return h[i * k + j]; };
  for (std::uint32_t j = 0; j + 2 <= k; ++j) {
    std::uint32_t pivot = j + 1;
    while (pivot < k && at(pivot, j) == 0) ++pivot;
    if (pivot == k) continue;
    if (pivot != j + 1) {
      for (std::uint32_t c = 0; c < k; ++c) std::swap(at(pivot, c), at(j + 1, c));
      for (std::uint32_t r = 0; r < k; ++r) std::swap(at(r, pivot), at(r, j + 1));
    }
    const std::uint64_t inv = detail::inv_mod(static_cast<std::uint32_t>(at(j + 1, j)), static_cast<std::uint32_t>(p));
    for (std::uint32_t i = j + 2; i < k; ++i) {
      const std::uint64_t u = at(i, j) * inv % p;
      if (u == 0) continue;
      for (std::uint32_t c = 0; c < k; ++c) at(i, c) = (at(i, c) + p - u * at(j + 1, c) % p) % p;
      for (std::uint32_t r = 0; r < k; ++r) at(r, j + 1) = (at(r, j + 1) + u * at(r, i)) % p;
    }
  }
  // polys[m] is the characteristic polynomial of the leading m x m block,
  // stored low degree first.
  std::vector<std::vector<std::uint64_t>> polys(k + 1);
  polys[0] = {1};
  for (std::uint32_t m = 1; m <= k; ++m) {
    const std::uint32_t mm = m - 1;  // 0-based index of the new row/column
    std::vector<std::uint64_t> next(m + 1, 0);
    const auto& prev = polys[m - 1];
    for (std::size_t d = 0; d < prev.size(); ++d) {
      next[d + 1] = (next[d + 1] + prev[d]) % p;
      next[d] = (next[d] + (p - at(mm, mm)) % p * prev[d]) % p;
    }
    std::uint64_t sub_product = 1;
    for (std::uint32_t i = 1; i <= mm; ++i) {
      sub_product = sub_product * at(mm - i + 1, mm - i) % p;
      const std::uint64_t coeff = at(mm - i, mm) * sub_product % p;
      if (coeff == 0) continue;
      const auto& lower = polys[mm - i];
      for (std::size_t d = 0; d < lower.size(); ++d) {
        next[d] = (next[d] + p - coeff * lower[d] % p) % p;
      }
    }
    polys[m] = std::move(next);
  }
  std::vector<std::uint32_t> coeffs(k);
  for (std::uint32_t d = 0; d < k; ++d) coeffs[d] = static_cast<std::uint32_t>(polys[k][d]);
  return coeffs;
}

/// Conjugation-invariant summary of an element. Equal fingerprints are
/// necessary, not sufficient, for conjugacy.
struct ClassFingerprint {
  std::uint64_t order = 1;
  std::vector<std::uint32_t> invariant;

  friend bool operator==(const ClassFingerprint&, const ClassFingerprint&) = default;
  friend auto operator<=>(const ClassFingerprint&, const ClassFingerprint&) = default;

  std::string to_string() const {
    std::string s = "order " + std::to_string(order) + " [";
    for (std::size_t i = 0; i < invariant.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(invariant[i]);
    }
    return s + "]";
  }
};

inline ClassFingerprint fingerprint(const Element& a, std::uint64_t cap = kDefaultOrderCap) {
  ClassFingerprint f;
  f.order = element_order(a, cap);
  f.invariant = a.kind() == Backend::permutation ? cycle_type(a) : characteristic_polynomial(a);
  return f;
}

// ---------------------------------------------------------------------------
// Text formats

namespace detail {

class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::int64_t integer() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected an integer");
    }
    if (pos_ - digits > 12) {
      pos_ = start;
      fail("integer literal too large");
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  std::size_t pos() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses cycle notation such as "(1 2 3)(4 5)"; "()" is the identity.
/// Points are 1-based; commas are accepted as separators.
inline Element parse_permutation(std::string_view text, std::uint32_t degree) {
  detail::TextCursor cur(text);
  std::vector<std::uint32_t> images(degree);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<bool> used(degree, false);
  if (cur.done()) cur.fail("empty permutation text");
  while (!cur.done()) {
    cur.expect('(');
    std::vector<std::uint32_t> cycle;
    while (!cur.accept(')')) {
      if (cur.done()) cur.fail("unterminated cycle");
      const std::size_t at = cur.pos();
      const std::int64_t point = cur.integer();
      if (point < 1 || point > static_cast<std::int64_t>(degree)) {
        throw ParseError("point " + std::to_string(point) + " outside 1.." + std::to_string(degree), at);
      }
      const auto idx = static_cast<std::uint32_t>(point - 1);
      if (used[idx]) throw ParseError("point " + std::to_string(point) + " repeated", at);
      used[idx] = true;
      cycle.push_back(idx);
      cur.accept(',');
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) images[cycle[i]] = cycle[(i + 1) % cycle.size()];
  }
  return Element::from_images(std::move(images));
}

/// Parses a row-major bracketed matrix such as "[[0,4],[1,0]]".
inline Element parse_matrix(std::string_view text, std::uint32_t dimension, std::uint32_t prime) {
  detail::TextCursor cur(text);
  std::vector<std::int64_t> entries;
  cur.expect('[');
  for (std::uint32_t r = 0; r < dimension; ++r) {
    if (r) cur.expect(',');
    cur.expect('[');
    for (std::uint32_t c = 0; c < dimension; ++c) {
      if (c) cur.expect(',');
      entries.push_back(cur.integer());
    }
    if (cur.peek() == ',') cur.fail("row has more than " + std::to_string(dimension) + " entries");
    cur.expect(']');
  }
  if (cur.peek() == ',') cur.fail("matrix has more than " + std::to_string(dimension) + " rows");
  cur.expect(']');
  if (!cur.done()) cur.fail("trailing characters after matrix");
  try {
    return Element::from_matrix(dimension, prime, entries);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what(), 0);
  }
}

inline Element parse_element(std::string_view text, const BackendSpec& spec) {
  return spec.kind == Backend::permutation ? parse_permutation(text, spec.degree)
                                           : parse_matrix(text, spec.degree, spec.prime);
}

inline std::string format_element(const Element& a) {
  std::ostringstream out;
  if (a.kind() == Backend::permutation) {
    const auto n = a.spec().degree;
    std::vector<bool> seen(n, false);
    bool any = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (seen[i] || a[i] == i) continue;
      out << '(';
      for (std::uint32_t j = i; !seen[j]; j = a[j]) {
        seen[j] = true;
        if (j != i) out << ' ';
        out << j + 1;
      }
      out << ')';
      any = true;
    }
    if (!any) out << "()";
    return out.str();
  }
  const std::uint32_t k = a.spec().degree;
  out << '[';
  for (std::uint32_t r = 0; r < k; ++r) {
    if (r) out << ',';
    out << '[';
    for (std::uint32_t c = 0; c < k; ++c) {
      if (c) out << ',';
      out << a.data()[r * k + c];
    }
    out << ']';
  }
  out << ']';
  return out.str();
}

inline std::ostream& operator<<(std::ostream& os, const Element& a) { return os << format_element(a); }

}  // namespace grpcert
