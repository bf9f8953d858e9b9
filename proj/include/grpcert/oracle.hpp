#pragma once

// Brute-force ground truth on small groups: breadth-first closure, then
// normalizers, centralizers, conjugacy and class partitions by filtering the
// enumerated element list. Nothing here is clever on purpose.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "grpcert/element.hpp"
#include "grpcert/error.hpp"

namespace grpcert {

inline constexpr std::size_t kDefaultClosureCap = 1'000'000;

template <class E>
concept ClosureElement = std::equality_comparable<E> && requires(const E& a, const E& b) {
  { a * b } -> std::convertible_to<E>;
  { std::hash<E>{}(a) } -> std::convertible_to<std::size_t>;
};

/// A finite set of elements closed under the generators' right action,
/// in deterministic discovery order (identity first, then breadth-first by
/// generator order).
template <ClosureElement E>
class Enumerated {
 public:
  Enumerated() = default;

  /// `index` maps each element to its position; the first element must be
  /// the identity.
  Enumerated(std::vector<E> elements, std::vector<E> generators, std::unordered_map<E, std::size_t> index)
      : elements_(std::move(elements)), generators_(std::move(generators)), index_(std::move(index)) {}

  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<E>& elements() const noexcept { return elements_; }
  const std::vector<E>& generators() const noexcept { return generators_; }
  const E& identity() const { return elements_.front(); }

  bool contains(const E& e) const { return index_.contains(e); }

  std::optional<std::size_t> index_of(const E& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<E> elements_;
  std::vector<E> generators_;
  std::unordered_map<E, std::size_t> index_;
};

template <ClosureElement E>
Enumerated<E> enumerate_closure(std::span<const E> gens, const E& identity,
                                std::size_t cap = kDefaultClosureCap) {
  std::vector<E> elements{identity};
  std::unordered_map<E, std::size_t> index{{identity, 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const E& s : gens) {
      E next = elements[head] * s;
      if (index.contains(next)) continue;
      if (elements.size() >= cap) {
        throw CapExceededError("closure exceeds cap of " + std::to_string(cap), elements.size());
      }
      index.emplace(next, elements.size());
      elements.push_back(std::move(next));
    }
  }
  return Enumerated<E>(std::move(elements), std::vector<E>(gens.begin(), gens.end()), std::move(index));
}

/// Wraps an element list already known to form a group. The first element
/// must be the identity.
template <ClosureElement E>
Enumerated<E> subgroup_from_elements(std::vector<E> elements, std::vector<E> generators) {
  std::unordered_map<E, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
  return Enumerated<E>(std::move(elements), std::move(generators), std::move(index));
}

using EnumeratedGroup = Enumerated<Element>;

inline EnumeratedGroup enumerate_closure(std::span<const Element> gens, const BackendSpec& spec,
                                         std::size_t cap = kDefaultClosureCap) {
  for (const Element& g : gens) {
    if (!(g.spec() == spec)) throw CompositionError("generator is not one of " + spec.describe());
  }
  return enumerate_closure<Element>(gens, Element::identity(spec), cap);
}

/// Closure of a nonempty generator list.
inline EnumeratedGroup enumerate_closure(std::span<const Element> gens,
                                         std::size_t cap = kDefaultClosureCap) {
  if (gens.empty()) throw Error("closure of an empty generator list needs a backend");
  return enumerate_closure(gens, gens.front().spec(), cap);
}

namespace detail {

// Greedy generating set for a subgroup given by its elements.
inline std::vector<Element> greedy_generators(const std::vector<Element>& elements, const BackendSpec& spec) {
  std::vector<Element> gens;
  EnumeratedGroup current = enumerate_closure<Element>(gens, Element::identity(spec), elements.size() + 1);
  for (const Element& e : elements) {
    if (current.contains(e)) continue;
    gens.push_back(e);
    current = enumerate_closure<Element>(gens, Element::identity(spec), elements.size() + 1);
    if (current.order() == elements.size()) break;
  }
  return gens;
}

inline EnumeratedGroup filtered_subgroup(const EnumeratedGroup& g, const std::vector<Element>& kept) {
  return subgroup_from_elements<Element>(kept, greedy_generators(kept, g.identity().spec()));
}

inline void require_inside(const EnumeratedGroup& g, std::span<const Element> elems, const char* what) {
  for (const Element& e : elems) {
    if (!g.contains(e)) throw CheckError(std::string(what) + " " + format_element(e) + " is not in the group");
  }
}

}  // namespace detail

/// N_G(<E_gens>), computed by testing every element of G.
inline EnumeratedGroup normalizer(const EnumeratedGroup& g, std::span<const Element> e_gens,
                                  std::size_t cap = kDefaultClosureCap) {
  detail::require_inside(g, e_gens, "subgroup generator");
  const EnumeratedGroup e = enumerate_closure<Element>(e_gens, g.identity(), cap);
  std::vector<Element> kept;
  for (const Element& x : g.elements()) {
    const Element xi = x.inverse();
    bool ok = true;
    for (const Element& s : e_gens) {
      if (!e.contains(xi * s * x)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(x);
  }
  return detail::filtered_subgroup(g, kept);
}

/// C_G(targets).
inline EnumeratedGroup centralizer(const EnumeratedGroup& g, std::span<const Element> targets) {
  detail::require_inside(g, targets, "target");
  std::vector<Element> kept;
  for (const Element& x : g.elements()) {
    bool ok = true;
    for (const Element& t : targets) {
      if (!commute(x, t)) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(x);
  }
  return detail::filtered_subgroup(g, kept);
}

/// Some c in G with x^c = y (the first in enumeration order), or nullopt.
inline std::optional<Element> is_conjugate(const EnumeratedGroup& g, const Element& x, const Element& y) {
  const Element pair[] = {x, y};
  detail::require_inside(g, pair, "element");
  for (const Element& c : g.elements()) {
    if (conjugate(x, c) == y) return c;
  }
  return std::nullopt;
}

/// Conjugation orbit of `seed` under <actors>, closed under the actors alone.
inline std::vector<Element> conjugation_orbit(std::span<const Element> actors, const Element& seed,
                                              std::size_t cap = kDefaultClosureCap) {
  std::vector<Element> orbit{seed};
  std::unordered_map<Element, std::size_t> seen{{seed, 0}};
  std::vector<Element> inverses;
  for (const Element& a : actors) inverses.push_back(a.inverse());
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (std::size_t i = 0; i < actors.size(); ++i) {
      Element next = inverses[i] * orbit[head] * actors[i];
      if (seen.contains(next)) continue;
      if (orbit.size() >= cap) throw CapExceededError("orbit exceeds cap of " + std::to_string(cap), orbit.size());
      seen.emplace(next, orbit.size());
      orbit.push_back(std::move(next));
    }
  }
  return orbit;
}

/// Class partition as lists of element indices into g.elements(), ordered
/// by the smallest index in each class.
inline std::vector<std::vector<std::size_t>> conjugacy_classes(const EnumeratedGroup& g) {
  std::vector<Element> actors = g.generators();
  if (actors.empty()) actors = detail::greedy_generators(g.elements(), g.identity().spec());
  std::vector<bool> assigned(g.order(), false);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (assigned[i]) continue;
    std::vector<std::size_t> cls;
    for (const Element& e : conjugation_orbit(actors, g.elements()[i], g.order() + 1)) {
      const std::size_t idx = *g.index_of(e);
      assigned[idx] = true;
      cls.push_back(idx);
    }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

}  // namespace grpcert
