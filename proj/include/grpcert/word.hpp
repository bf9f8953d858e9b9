#pragma once

// Words over named generators.
//
// Grammar (whitespace and '*' both separate product factors):
//
//   product  := factor ( ['*'] factor )*
//   factor   := atom ( '^' exponent )*
//   exponent := ['-'] integer | '(' ['-'] integer ')' | atom
//   atom     := name | '1' | '(' product ')' | '[' product ',' product ']'
//
// An integer exponent is a power (w^-1 is the inverse); an atom exponent is
// conjugation, w^u = u^-1 w u. '[u,w]' is the commutator u^-1 w^-1 u w.
// Power and conjugation bind tighter than product and chain left to right.

#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpcert/bigint.hpp"
#include "grpcert/context.hpp"
#include "grpcert/element.hpp"
#include "grpcert/error.hpp"

namespace grpcert {

class Word {
 public:
  enum class Kind { identity, generator, product, power, conjugate, commutator };

  Word() = default;

  static Word identity() { return Word(Kind::identity); }
  static Word generator(std::string name) {
    Word w(Kind::generator);
    w.name_ = std::move(name);
    return w;
  }
  static Word product(std::vector<Word> factors) {
    Word w(Kind::product);
    w.children_ = std::move(factors);
    return w;
  }
  static Word power(Word base, BigInt exponent) {
    Word w(Kind::power);
    w.children_.push_back(std::move(base));
    w.exponent_ = std::move(exponent);
    return w;
  }
  static Word conjugate(Word base, Word by) {
    Word w(Kind::conjugate);
    w.children_.push_back(std::move(base));
    w.children_.push_back(std::move(by));
    return w;
  }
  static Word commutator(Word a, Word b) {
    Word w(Kind::commutator);
    w.children_.push_back(std::move(a));
    w.children_.push_back(std::move(b));
    return w;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Word>& children() const noexcept { return children_; }
  const BigInt& exponent() const noexcept { return exponent_; }

  friend bool operator==(const Word& a, const Word& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.exponent_ == b.exponent_ && a.children_ == b.children_;
  }

  /// Generator names referenced anywhere in the word.
  std::set<std::string> names() const {
    std::set<std::string> out;
    collect_names(out);
    return out;
  }

 private:
  explicit Word(Kind kind) : kind_(kind) {}

  void collect_names(std::set<std::string>& out) const {
    if (kind_ == Kind::generator) out.insert(name_);
    for (const Word& c : children_) c.collect_names(out);
  }

  Kind kind_ = Kind::identity;
  std::string name_;
  std::vector<Word> children_;
  BigInt exponent_ = 0;
};

namespace detail {

inline bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  Word parse() {
    skip();
    if (pos_ >= text_.size()) fail("empty word");
    Word w = product();
    skip();
    if (pos_ < text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return w;
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

  bool starts_atom() {
    const char c = peek();
    return is_name_start(c) || c == '(' || c == '[' || c == '1';
  }

  Word product() {
    std::vector<Word> factors;
    factors.push_back(factor());
    while (true) {
      if (peek() == '*') {
        ++pos_;
        if (!starts_atom()) fail("expected a factor after '*'");
        factors.push_back(factor());
      } else if (starts_atom()) {
        factors.push_back(factor());
      } else {
        break;
      }
    }
    if (factors.size() == 1) return std::move(factors.front());
    return Word::product(std::move(factors));
  }

  Word factor() {
    Word w = atom();
    while (peek() == '^') {
      ++pos_;
      w = exponent(std::move(w));
    }
    return w;
  }

  BigInt integer() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    skip();
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("ambiguous exponent: expected an integer or an atom");
    }
    BigInt value(std::string(text_.substr(digits, pos_ - digits)));
    return text_[start] == '-' ? BigInt(-value) : value;
  }

  // True when the parenthesised group at pos_ holds only a signed integer.
  bool parenthesised_integer_ahead() {
    std::size_t i = pos_ + 1;
    auto sp = [&] {
      while (i < text_.size() && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
    };
    sp();
    if (i < text_.size() && (text_[i] == '-' || text_[i] == '+')) ++i;
    sp();
    const std::size_t digits = i;
    while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) ++i;
    if (i == digits) return false;
    sp();
    return i < text_.size() && text_[i] == ')';
  }

  Word exponent(Word base) {
    const char c = peek();
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      // A digit after '^' always starts an integer, so "w^1" is a power.
      return Word::power(std::move(base), integer());
    }
    if (c == '(' && parenthesised_integer_ahead()) {
      ++pos_;
      BigInt e = integer();
      skip();
      ++pos_;  // ')'
      return Word::power(std::move(base), std::move(e));
    }
    if (is_name_start(c) || c == '(' || c == '[') {
      return Word::conjugate(std::move(base), atom());
    }
    fail("ambiguous exponent: expected an integer or an atom");
  }

  Word atom() {
    const char c = peek();
    if (is_name_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
      return Word::generator(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '1') {
      ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("integer literal where a factor was expected");
      }
      return Word::identity();
    }
    if (c == '(') {
      ++pos_;
      if (peek() == ')') fail("empty parentheses");
      Word inner = product();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == '[') {
      ++pos_;
      Word a = product();
      if (peek() != ',') fail("expected ',' in commutator");
      ++pos_;
      Word b = product();
      if (peek() != ']') fail("expected ']' closing commutator");
      ++pos_;
      return Word::commutator(std::move(a), std::move(b));
    }
    if (c == '\0') fail("unexpected end of word");
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Word parse_word(std::string_view text) { return detail::WordParser(text).parse(); }

namespace detail {

inline bool is_atomic_for_print(const Word& w) {
  return w.kind() == Word::Kind::generator || w.kind() == Word::Kind::identity ||
         w.kind() == Word::Kind::commutator;
}

inline void print_word(const Word& w, std::string& out);

inline void print_operand(const Word& w, std::string& out, bool allow_postfix) {
  const bool bare = is_atomic_for_print(w) ||
                    (allow_postfix && (w.kind() == Word::Kind::power || w.kind() == Word::Kind::conjugate));
  if (bare) {
    print_word(w, out);
  } else {
    out += '(';
    print_word(w, out);
    out += ')';
  }
}

inline void print_word(const Word& w, std::string& out) {
  switch (w.kind()) {
    case Word::Kind::identity:
      out += '1';
      break;
    case Word::Kind::generator:
      out += w.name();
      break;
    case Word::Kind::product:
      for (std::size_t i = 0; i < w.children().size(); ++i) {
        if (i) out += ' ';
        // A nested product keeps its parentheses so structure survives.
        print_operand(w.children()[i], out, true);
      }
      break;
    case Word::Kind::power:
      print_operand(w.children()[0], out, true);
      out += '^';
      out += w.exponent().str();
      break;
    case Word::Kind::conjugate:
      print_operand(w.children()[0], out, true);
      out += '^';
      print_operand(w.children()[1], out, false);
      break;
    case Word::Kind::commutator:
      out += '[';
      print_word(w.children()[0], out);
      out += ',';
      print_word(w.children()[1], out);
      out += ']';
      break;
  }
}

}  // namespace detail

/// Text form that parses back to the same tree.
inline std::string to_string(const Word& w) {
  std::string out;
  detail::print_word(w, out);
  return out;
}

/// Homomorphic evaluation; names resolve in `binding`.
inline Element evaluate_word(const Word& w, const GroupContext& binding) {
  switch (w.kind()) {
    case Word::Kind::identity:
      return binding.identity();
    case Word::Kind::generator:
      return binding.at(w.name());
    case Word::Kind::product: {
      Element acc = evaluate_word(w.children()[0], binding);
      for (std::size_t i = 1; i < w.children().size(); ++i) acc = acc * evaluate_word(w.children()[i], binding);
      return acc;
    }
    case Word::Kind::power:
      return power(evaluate_word(w.children()[0], binding), w.exponent());
    case Word::Kind::conjugate:
      return conjugate(evaluate_word(w.children()[0], binding), evaluate_word(w.children()[1], binding));
    case Word::Kind::commutator:
      return commutator(evaluate_word(w.children()[0], binding), evaluate_word(w.children()[1], binding));
  }
  return binding.identity();
}

inline Element evaluate_word(std::string_view text, const GroupContext& binding) {
  return evaluate_word(parse_word(text), binding);
}

namespace detail {

// Splits a reduced word into (base, exponent) so adjacent syllables with the
// same base can merge.
inline std::pair<Word, BigInt> syllable(const Word& w) {
  if (w.kind() == Word::Kind::power) return {w.children()[0], w.exponent()};
  return {w, 1};
}

inline Word make_syllable(Word base, BigInt exponent) {
  if (exponent == 0) return Word::identity();
  if (exponent == 1) return base;
  return Word::power(std::move(base), std::move(exponent));
}

inline Word reduce_step(const Word& w) {
  switch (w.kind()) {
    case Word::Kind::identity:
    case Word::Kind::generator:
      return w;
    case Word::Kind::power: {
      Word base = reduce_step(w.children()[0]);
      if (base.kind() == Word::Kind::identity || w.exponent() == 0) return Word::identity();
      if (base.kind() == Word::Kind::power) {
        return make_syllable(base.children()[0], base.exponent() * w.exponent());
      }
      return make_syllable(std::move(base), w.exponent());
    }
    case Word::Kind::conjugate: {
      Word base = reduce_step(w.children()[0]);
      Word by = reduce_step(w.children()[1]);
      if (base.kind() == Word::Kind::identity) return base;
      if (by.kind() == Word::Kind::identity) return base;
      return Word::conjugate(std::move(base), std::move(by));
    }
    case Word::Kind::commutator: {
      Word a = reduce_step(w.children()[0]);
      Word b = reduce_step(w.children()[1]);
      if (a.kind() == Word::Kind::identity || b.kind() == Word::Kind::identity || a == b) {
        return Word::identity();
      }
      return Word::commutator(std::move(a), std::move(b));
    }
    case Word::Kind::product: {
      std::vector<Word> flat;
      for (const Word& c : w.children()) {
        Word r = reduce_step(c);
        if (r.kind() == Word::Kind::product) {
          for (const Word& rc : r.children()) flat.push_back(rc);
        } else if (r.kind() != Word::Kind::identity) {
          flat.push_back(std::move(r));
        }
      }
      std::vector<std::pair<Word, BigInt>> stack;
      for (const Word& f : flat) {
        auto [base, e] = syllable(f);
        if (!stack.empty() && stack.back().first == base) {
          stack.back().second += e;
          if (stack.back().second == 0) stack.pop_back();
        } else {
          stack.emplace_back(std::move(base), std::move(e));
        }
      }
      std::vector<Word> out;
      for (auto& [base, e] : stack) {
        Word syl = make_syllable(std::move(base), std::move(e));
        if (syl.kind() == Word::Kind::product) {
          for (const Word& c : syl.children()) out.push_back(c);
        } else if (syl.kind() != Word::Kind::identity) {
          out.push_back(std::move(syl));
        }
      }
      if (out.empty()) return Word::identity();
      if (out.size() == 1) return std::move(out.front());
      return Word::product(std::move(out));
    }
  }
  return w;
}

}  // namespace detail

/// Free reduction: flattens products and nested integer powers, merges
/// adjacent powers of the same base and drops identities. Idempotent and
/// evaluation-preserving.
inline Word free_reduce(const Word& w) {
  Word current = detail::reduce_step(w);
  while (true) {
    Word next = detail::reduce_step(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

}  // namespace grpcert
