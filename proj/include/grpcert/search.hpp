#pragma once

// Seeded random search by product replacement. Every element drawn is
// recorded as a straight-line program over the generator names, so a found
// element can be written back into a certificate as a chain of definitions.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grpcert/context.hpp"
#include "grpcert/element.hpp"
#include "grpcert/error.hpp"
#include "grpcert/oracle.hpp"

namespace grpcert {

struct SearchOptions {
  std::uint64_t seed = 1;
  std::size_t slots = 10;
  std::size_t warmup = 50;
  std::size_t max_draws = 10000;
};

/// name = left right^(-1 if invert)
struct SlpStep {
  std::string name;
  std::string left;
  std::string right;
  bool invert = false;

  std::string definition() const { return left + " " + right + (invert ? "^-1" : ""); }
};

/// Product replacement with an accumulator. The draw sequence depends only
/// on the generators and the seed. Random indices come from raw
/// mt19937_64 output reduced modulo the range, which is identical on every
/// platform.
class ProductReplacement {
 public:
  ProductReplacement(const GroupContext& context, std::vector<std::string> generator_names, SearchOptions options)
      : rng_(options.seed) {
    if (generator_names.empty()) {
      for (const auto& [name, _] : context.bindings()) generator_names.push_back(name);
    }
    if (generator_names.size() < 2) throw Error("random search needs at least two generators");
    const std::size_t n = std::max(options.slots, generator_names.size());
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& g = generator_names[i % generator_names.size()];
      slots_.push_back(context.at(g));
      slot_names_.push_back(g);
    }
    accumulator_ = context.identity();
    for (std::size_t i = 0; i < options.warmup; ++i) step();
  }

  /// Advances the state and returns the new accumulator.
  const Element& next() {
    step();
    return accumulator_;
  }

  const Element& current() const noexcept { return accumulator_; }
  const std::string& current_name() const noexcept { return accumulator_name_; }
  const std::vector<SlpStep>& program() const noexcept { return program_; }

  /// The steps needed to define `name`, in dependency order.
  std::vector<SlpStep> program_for(const std::string& name) const {
    std::vector<bool> needed(program_.size(), false);
    std::vector<std::string> stack{name};
    while (!stack.empty()) {
      const std::string n = stack.back();
      stack.pop_back();
      const auto idx = step_index(n);
      if (!idx || needed[*idx]) continue;
      needed[*idx] = true;
      stack.push_back(program_[*idx].left);
      stack.push_back(program_[*idx].right);
    }
    std::vector<SlpStep> out;
    for (std::size_t i = 0; i < program_.size(); ++i) {
      if (needed[i]) out.push_back(program_[i]);
    }
    return out;
  }

 private:
  std::optional<std::size_t> step_index(const std::string& name) const {
    if (name.size() < 2 || name[0] != '_' || name[1] != 'r') return std::nullopt;
    const std::size_t i = std::stoul(name.substr(2));
    return i < program_.size() ? std::optional<std::size_t>(i) : std::nullopt;
  }

  std::string record(const std::string& left, const std::string& right, bool invert) {
    std::string name = "_r" + std::to_string(program_.size());
    program_.push_back(SlpStep{name, left, right, invert});
    return name;
  }

  void step() {
    const std::size_t n = slots_.size();
    const std::size_t i = rng_() % n;
    std::size_t j = rng_() % (n - 1);
    if (j >= i) ++j;
    const bool invert = rng_() % 2 == 1;
    const bool left = rng_() % 2 == 1;
    const Element other = invert ? slots_[j].inverse() : slots_[j];
    if (left) {
      slots_[i] = other * slots_[i];
      const std::string inv = invert ? record("1", slot_names_[j], true) : slot_names_[j];
      slot_names_[i] = record(inv, slot_names_[i], false);
    } else {
      slots_[i] = slots_[i] * other;
      slot_names_[i] = record(slot_names_[i], slot_names_[j], invert);
    }
    accumulator_ = accumulator_ * slots_[i];
    accumulator_name_ = accumulator_name_.empty() ? slot_names_[i] : record(accumulator_name_, slot_names_[i], false);
  }

  std::mt19937_64 rng_;
  std::vector<Element> slots_;
  std::vector<std::string> slot_names_;
  Element accumulator_;
  std::string accumulator_name_;
  std::vector<SlpStep> program_;
};

/// Renders a program as "name = definition" lines.
inline std::string format_program(const std::vector<SlpStep>& steps) {
  std::string s;
  for (const SlpStep& st : steps) s += st.name + " = " + st.definition() + "\n";
  return s;
}

/// Binds every step of `steps` into `context`, evaluating in order.
inline void bind_program(GroupContext& context, const std::vector<SlpStep>& steps) {
  for (const SlpStep& st : steps) {
    const Element l = st.left == "1" ? context.identity() : context.at(st.left);
    const Element& r = context.at(st.right);
    context.rebind(st.name, l * (st.invert ? r.inverse() : r));
  }
}

enum class SearchStatus { found, inconclusive };

struct SearchResult {
  SearchStatus status = SearchStatus::inconclusive;
  std::optional<Element> element;
  std::string name;               // final program name, empty for the identity
  std::vector<SlpStep> program;   // definitions needed for `name`
  std::size_t draws = 0;
  std::string note;
};

/// Draws until an element of exactly the given order appears.
inline SearchResult find_element_of_order(const GroupContext& context, const std::vector<std::string>& generators,
                                          std::uint64_t order, const SearchOptions& options = {}) {
  SearchResult r;
  if (order == 1) {
    r.status = SearchStatus::found;
    r.element = context.identity();
    r.note = "the identity";
    return r;
  }
  ProductReplacement pr(context, generators, options);
  for (std::size_t d = 1; d <= options.max_draws; ++d) {
    const Element& e = pr.next();
    if (element_order(e) == order) {
      r.status = SearchStatus::found;
      r.element = e;
      r.name = pr.current_name();
      r.program = pr.program_for(r.name);
      r.draws = d;
      return r;
    }
  }
  r.draws = options.max_draws;
  r.note = "no element of order " + std::to_string(order) + " in " + std::to_string(options.max_draws) + " draws";
  return r;
}

/// Draws c until x^c = y. A found conjugator is re-verified before it is
/// returned; running out of draws is inconclusive, never a proof of
/// non-conjugacy.
inline SearchResult find_conjugator(const GroupContext& context, const std::vector<std::string>& generators,
                                    const Element& x, const Element& y, const SearchOptions& options = {}) {
  SearchResult r;
  if (x == y) {
    r.status = SearchStatus::found;
    r.element = context.identity();
    r.note = "x = y";
    return r;
  }
  if (fingerprint(x) != fingerprint(y)) {
    r.note = "fingerprints differ, so the elements are not conjugate in any group";
    return r;
  }
  ProductReplacement pr(context, generators, options);
  for (std::size_t d = 1; d <= options.max_draws; ++d) {
    const Element& c = pr.next();
    if (conjugate(x, c) == y) {
      GroupContext check = context;
      r.program = pr.program_for(pr.current_name());
      bind_program(check, r.program);
      if (!(conjugate(x, check.at(pr.current_name())) == y)) {
        throw Error("internal error: recorded conjugator does not reproduce the search element");
      }
      r.status = SearchStatus::found;
      r.element = c;
      r.name = pr.current_name();
      r.draws = d;
      return r;
    }
  }
  r.draws = options.max_draws;
  r.note = "no conjugator in " + std::to_string(options.max_draws) + " draws";
  return r;
}

/// For an inconclusive search in an enumerable group, settles the question
/// with the oracle. Returns the note to attach.
inline std::string oracle_cross_check(const SearchResult& r, const GroupContext& context, const Element& x,
                                      const Element& y, std::size_t cap = kDefaultClosureCap) {
  const auto g = enumerate_closure(context.elements(), context.spec(), cap);
  const auto c = is_conjugate(g, x, y);
  if (r.status == SearchStatus::found) {
    return c ? "oracle agrees" : "oracle disagrees";
  }
  return c ? "oracle finds a conjugator " + format_element(*c) : "oracle confirms the elements are not conjugate";
}

}  // namespace grpcert
