#pragma once

// Group shapes such as "3^{3+2+6+6}:(L3(3) x SD16)" and their orders.
//
//   product := extension ( ('x' | '×') extension )*
//   extension := power ( ('.' | ':' | '·') power )*      left-associative
//   power := primary [ '^' ( integer | '{' integer ('+' integer)* '}' ) ]
//   primary := integer | name | '(' product ')'
//
// An integer is a cyclic group. A prime raised to an exponent block is a
// stack of elementary abelian layers; any other power is a direct power.
// Extension binds tighter than direct product; an unbracketed extension
// operand of a direct product is accepted with a warning.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpcert/bigint.hpp"
#include "grpcert/element.hpp"
#include "grpcert/error.hpp"

namespace grpcert {

/// Exact orders of named groups, loaded from "name<TAB>order" records.
class OrderCatalog {
 public:
  OrderCatalog() = default;

  static OrderCatalog from_text(std::string_view text) {
    OrderCatalog cat;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      ++line_no;
      start = end + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      const std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw ParseError("catalog line " + std::to_string(line_no) + " has no tab separator", start - 1);
      }
      const std::string name(line.substr(0, tab));
      try {
        cat.add(name, parse_bigint(line.substr(tab + 1)));
      } catch (const std::invalid_argument& e) {
        throw Error("catalog line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    return cat;
  }

  static OrderCatalog load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open catalog file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_text(text);
  }

#ifdef GRPCERT_DATA_DIR
  /// The catalog shipped in the source tree's data directory.
  static const OrderCatalog& builtin() {
    static const OrderCatalog cat = load(std::string(GRPCERT_DATA_DIR) + "/catalog.tsv");
    return cat;
  }
#endif

  void add(const std::string& name, BigInt order) {
    if (order <= 0) throw Error("catalog order for '" + name + "' must be positive");
    auto [it, inserted] = orders_.emplace(name, order);
    if (!inserted && it->second != order) throw Error("conflicting catalog orders for '" + name + "'");
  }

  bool contains(const std::string& name) const { return orders_.contains(name); }
  std::size_t size() const noexcept { return orders_.size(); }
  const std::map<std::string, BigInt>& entries() const noexcept { return orders_; }

  const BigInt& order(const std::string& name) const {
    auto it = orders_.find(name);
    if (it == orders_.end()) {
      std::string msg = "unknown group name '" + name + "'";
      const auto near = nearest(name, 3);
      if (!near.empty()) {
        msg += "; nearest catalog names:";
        for (const auto& n : near) msg += " " + n;
      }
      throw Error(msg);
    }
    return it->second;
  }

  /// Catalog keys closest to `name` by edit distance.
  std::vector<std::string> nearest(const std::string& name, std::size_t count) const {
    std::vector<std::pair<std::size_t, std::string>> scored;
    for (const auto& [key, _] : orders_) scored.emplace_back(edit_distance(name, key), key);
    std::sort(scored.begin(), scored.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < count; ++i) out.push_back(scored[i].second);
    return out;
  }

 private:
  static std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                          std::tolower(static_cast<unsigned char>(b[j - 1]));
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (same ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  }

  std::map<std::string, BigInt> orders_;
};

class ShapeExpr {
 public:
  enum class Kind { cyclic, prime_power, named, direct_product, extension, power };

  static ShapeExpr cyclic(BigInt n) {
    ShapeExpr s(Kind::cyclic);
    s.number_ = std::move(n);
    return s;
  }
  /// p^{a1+a2+...}: one elementary abelian layer per exponent.
  static ShapeExpr prime_power(BigInt p, std::vector<unsigned> layers) {
    ShapeExpr s(Kind::prime_power);
    s.number_ = std::move(p);
    s.layers_ = std::move(layers);
    return s;
  }
  static ShapeExpr named(std::string name) {
    ShapeExpr s(Kind::named);
    s.name_ = std::move(name);
    return s;
  }
  static ShapeExpr direct_product(std::vector<ShapeExpr> factors) {
    ShapeExpr s(Kind::direct_product);
    s.children_ = std::move(factors);
    return s;
  }
  /// `op` is one of '.', ':' or '*' (the last standing for the centred dot).
  static ShapeExpr extension(ShapeExpr lower, ShapeExpr upper, char op) {
    ShapeExpr s(Kind::extension);
    s.children_ = {std::move(lower), std::move(upper)};
    s.op_ = op;
    return s;
  }
  static ShapeExpr power(ShapeExpr base, unsigned exponent) {
    ShapeExpr s(Kind::power);
    s.children_ = {std::move(base)};
    s.layers_ = {exponent};
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  const BigInt& number() const noexcept { return number_; }
  const std::vector<unsigned>& layers() const noexcept { return layers_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<ShapeExpr>& children() const noexcept { return children_; }
  char op() const noexcept { return op_; }
  unsigned exponent() const { return layers_.front(); }

  friend bool operator==(const ShapeExpr&, const ShapeExpr&) = default;

 private:
  explicit ShapeExpr(Kind kind) : kind_(kind) {}

  Kind kind_ = Kind::cyclic;
  BigInt number_ = 1;
  std::vector<unsigned> layers_;
  std::string name_;
  std::vector<ShapeExpr> children_;
  char op_ = '.';
};

struct ParsedShape {
  ShapeExpr expr;
  std::vector<std::string> warnings;
};

namespace detail {

// Rewrites the Unicode spellings (×, ·, ′, −, Ω, subscripts, superscripts)
// into the ASCII grammar. The centred dot becomes '*'.
inline std::string normalize_shape_text(std::string_view in) {
  struct Map {
    const char* utf8;
    const char* ascii;
    bool superscript;
  };
  static const Map table[] = {
      {"\xC3\x97", " x ", false},      // ×
      {"\xC2\xB7", "*", false},        // ·
      {"\xE2\x8B\x85", "*", false},    // ⋅
      {"\xE2\x80\xB2", "'", false},    // ′
      {"\xE2\x88\x92", "-", false},    // −
      {"\xCE\xA9", "O", false},        // Ω
      {"\xE2\x82\x80", "0", false}, {"\xE2\x82\x81", "1", false}, {"\xE2\x82\x82", "2", false},
      {"\xE2\x82\x83", "3", false}, {"\xE2\x82\x84", "4", false}, {"\xE2\x82\x85", "5", false},
      {"\xE2\x82\x86", "6", false}, {"\xE2\x82\x87", "7", false}, {"\xE2\x82\x88", "8", false},
      {"\xE2\x82\x89", "9", false},
      {"\xE2\x81\xB0", "0", true},  {"\xC2\xB9", "1", true},     {"\xC2\xB2", "2", true},
      {"\xC2\xB3", "3", true},      {"\xE2\x81\xB4", "4", true}, {"\xE2\x81\xB5", "5", true},
      {"\xE2\x81\xB6", "6", true},  {"\xE2\x81\xB7", "7", true}, {"\xE2\x81\xB8", "8", true},
      {"\xE2\x81\xB9", "9", true},  {"\xE2\x81\xBA", "+", true}, {"\xE2\x81\xBB", "-", true},
  };
  auto match = [&](std::size_t pos) -> const Map* {
    for (const Map& m : table) {
      const std::string_view key(m.utf8);
      if (in.substr(pos, key.size()) == key) return &m;
    }
    return nullptr;
  };
  std::string out;
  std::size_t i = 0;
  while (i < in.size()) {
    const Map* m = match(i);
    if (!m) {
      out += in[i++];
      continue;
    }
    if (!m->superscript) {
      out += m->ascii;
      i += std::string_view(m->utf8).size();
      continue;
    }
    // Collect a run of superscript characters.
    std::string run;
    bool has_digit = false;
    while (i < in.size()) {
      const Map* s = match(i);
      if (!s || !s->superscript) break;
      run += s->ascii;
      has_digit |= std::isdigit(static_cast<unsigned char>(s->ascii[0])) != 0;
      i += std::string_view(s->utf8).size();
    }
    const bool leading = out.empty() || !std::isalnum(static_cast<unsigned char>(out.back()));
    if (!has_digit || (leading && i < in.size() && std::isalpha(static_cast<unsigned char>(in[i])))) {
      out += run;  // a name suffix (Ω⁺) or prefix (²E₆)
    } else {
      out += "^{" + run + "}";
    }
  }
  return out;
}

class ShapeParser {
 public:
  explicit ShapeParser(std::string_view text) : text_(text) {}

  ParsedShape parse() {
    skip();
    if (pos_ >= text_.size()) fail("empty shape");
    ParsedShape out{product(), std::move(warnings_)};
    skip();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // 'x' is the product operator when it stands alone.
  bool at_times() {
    if (peek() != 'x') return false;
    const std::size_t next = pos_ + 1;
    return next >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[next])) || text_[next] == '_');
  }

  ShapeExpr product() {
    std::vector<ShapeExpr> factors;
    std::vector<std::string> loose;  // text of unbracketed extension factors
    while (true) {
      skip();
      const std::size_t start = pos_;
      factors.push_back(extension());
      if (factors.back().kind() == ShapeExpr::Kind::extension && !last_bracketed_) {
        loose.push_back(trim(text_.substr(start, pos_ - start)));
      }
      if (!at_times()) break;
      ++pos_;
    }
    if (factors.size() == 1) return std::move(factors.front());
    for (const std::string& f : loose) {
      warnings_.push_back("unbracketed extension '" + f + "' inside a direct product read as one factor");
    }
    return ShapeExpr::direct_product(std::move(factors));
  }

  static std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    return std::string(s);
  }

  ShapeExpr extension() {
    ShapeExpr acc = power();
    bool bracketed = last_bracketed_;
    while (true) {
      const char c = peek();
      if (c != '.' && c != ':' && c != '*') break;
      ++pos_;
      if (peek() == '\0') fail("missing group after extension operator");
      ShapeExpr upper = power();
      acc = ShapeExpr::extension(std::move(acc), std::move(upper), c);
      bracketed = false;
    }
    last_bracketed_ = bracketed;
    return acc;
  }

  unsigned small_integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("malformed exponent block: expected an integer");
    if (pos_ - start > 6) fail("exponent too large");
    return static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
  }

  ShapeExpr power() {
    const std::size_t base_pos = pos_;
    ShapeExpr base = primary();
    if (peek() != '^') return base;
    ++pos_;
    std::vector<unsigned> layers;
    if (peek() == '{') {
      ++pos_;
      layers.push_back(small_integer());
      while (peek() == '+') {
        ++pos_;
        layers.push_back(small_integer());
      }
      if (peek() != '}') fail("malformed exponent block: expected '+' or '}'");
      ++pos_;
    } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
      layers.push_back(small_integer());
    } else {
      fail("malformed exponent block: expected an integer or '{'");
    }
    last_bracketed_ = false;
    if (base.kind() == ShapeExpr::Kind::cyclic && base.number() < BigInt(1u << 31) &&
        is_prime_u32(static_cast<std::uint32_t>(base.number()))) {
      return ShapeExpr::prime_power(base.number(), std::move(layers));
    }
    if (layers.size() != 1) {
      throw ParseError("layered exponent block needs a prime base", base_pos);
    }
    return ShapeExpr::power(std::move(base), layers.front());
  }

  ShapeExpr primary() {
    const char c = peek();
    last_bracketed_ = false;
    if (c == '(') {
      ++pos_;
      ShapeExpr inner = product();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      last_bracketed_ = true;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      // A leading digit glued to an upper-case letter starts a name, as in 2E6(2).
      if (pos_ < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_]))) {
        pos_ = start;
        return ShapeExpr::named(name());
      }
      const BigInt n(std::string(text_.substr(start, pos_ - start)));
      if (n == 0) throw ParseError("cyclic group of order 0", start);
      return ShapeExpr::cyclic(n);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return ShapeExpr::named(name());
    if (c == '\0') fail("unexpected end of shape");
    fail(std::string("unexpected '") + c + "'");
  }

  // [digits] letters/digits ['+' | '-' | '\'']* [ '(' digits ')' ]
  std::string name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    while (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-' || text_[pos_] == '\'')) {
      // '+' belongs to the name only when a field size follows, as in O10+(2).
      if (text_[pos_] == '+' && (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '(')) break;
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '(') {
      std::size_t j = pos_ + 1;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      if (j > pos_ + 1 && j < text_.size() && text_[j] == ')') pos_ = j + 1;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> warnings_;
  bool last_bracketed_ = false;
};

}  // namespace detail

/// Parses a shape. Error offsets refer to the ASCII-normalized text.
inline ParsedShape parse_shape(std::string_view text) {
  const std::string ascii = detail::normalize_shape_text(text);
  return detail::ShapeParser(ascii).parse();
}

inline BigInt shape_order(const ShapeExpr& e, const OrderCatalog& cat) {
  switch (e.kind()) {
    case ShapeExpr::Kind::cyclic:
      return e.number();
    case ShapeExpr::Kind::prime_power: {
      unsigned total = 0;
      for (unsigned a : e.layers()) total += a;
      return big_pow(e.number(), total);
    }
    case ShapeExpr::Kind::named:
      return cat.order(e.name());
    case ShapeExpr::Kind::direct_product:
    case ShapeExpr::Kind::extension: {
      BigInt order = 1;
      for (const ShapeExpr& c : e.children()) order *= shape_order(c, cat);
      return order;
    }
    case ShapeExpr::Kind::power:
      return big_pow(shape_order(e.children().front(), cat), e.exponent());
  }
  return 1;
}

inline BigInt shape_order(std::string_view text, const OrderCatalog& cat) {
  return shape_order(parse_shape(text).expr, cat);
}

namespace detail {

inline void print_shape(const ShapeExpr& e, std::string& out, bool nested) {
  switch (e.kind()) {
    case ShapeExpr::Kind::cyclic:
      out += e.number().str();
      break;
    case ShapeExpr::Kind::prime_power:
      out += e.number().str();
      out += "^";
      if (e.layers().size() == 1) {
        out += std::to_string(e.layers().front());
      } else {
        out += "{";
        for (std::size_t i = 0; i < e.layers().size(); ++i) {
          if (i) out += "+";
          out += std::to_string(e.layers()[i]);
        }
        out += "}";
      }
      break;
    case ShapeExpr::Kind::named:
      out += e.name();
      break;
    case ShapeExpr::Kind::direct_product:
      if (nested) out += "(";
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i) out += " x ";
        const bool wrap = e.children()[i].kind() == ShapeExpr::Kind::extension;
        print_shape(e.children()[i], out, wrap);
      }
      if (nested) out += ")";
      break;
    case ShapeExpr::Kind::extension: {
      if (nested) out += "(";
      print_shape(e.children()[0], out, e.children()[0].kind() == ShapeExpr::Kind::direct_product);
      out += e.op() == '*' ? '.' : e.op();
      const ShapeExpr& up = e.children()[1];
      print_shape(up, out, up.kind() == ShapeExpr::Kind::direct_product || up.kind() == ShapeExpr::Kind::extension);
      if (nested) out += ")";
      break;
    }
    case ShapeExpr::Kind::power: {
      const ShapeExpr& base = e.children().front();
      const bool wrap = base.kind() != ShapeExpr::Kind::named && base.kind() != ShapeExpr::Kind::cyclic;
      print_shape(base, out, wrap);
      out += "^" + std::to_string(e.exponent());
      break;
    }
  }
}

}  // namespace detail

/// ASCII text for a shape; parsing it gives back the same tree except that
/// the centred-dot extension prints as '.'.
inline std::string to_string(const ShapeExpr& e) {
  std::string out;
  detail::print_shape(e, out, false);
  return out;
}

/// Indented factor tree with the order of every node.
inline std::string factor_tree(const ShapeExpr& e, const OrderCatalog& cat) {
  std::string out;
  auto walk = [&](auto&& self, const ShapeExpr& node, std::size_t depth) -> void {
    out.append(depth * 2, ' ');
    switch (node.kind()) {
      case ShapeExpr::Kind::direct_product:
        out += "direct product";
        break;
      case ShapeExpr::Kind::extension:
        out += std::string("extension '") + (node.op() == '*' ? "\xC2\xB7" : std::string(1, node.op())) + "'";
        break;
      case ShapeExpr::Kind::power:
        out += "direct power " + std::to_string(node.exponent());
        break;
      default:
        out += to_string(node);
        break;
    }
    out += "  " + shape_order(node, cat).str() + "\n";
    if (node.kind() == ShapeExpr::Kind::prime_power && node.layers().size() > 1) {
      for (unsigned a : node.layers()) {
        out.append((depth + 1) * 2, ' ');
        out += node.number().str() + "^" + std::to_string(a) + "  " + big_pow(node.number(), a).str() + "\n";
      }
    }
    for (const ShapeExpr& c : node.children()) self(self, c, depth + 1);
  };
  walk(walk, e, 0);
  return out;
}

}  // namespace grpcert
