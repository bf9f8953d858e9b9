#pragma once

// Exact checks for the recurring steps of subgroup-construction proofs.
// Every subgroup membership question is answered by enumerating a closure
// under an explicit cap.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grpcert/bigint.hpp"
#include "grpcert/context.hpp"
#include "grpcert/element.hpp"
#include "grpcert/error.hpp"
#include "grpcert/oracle.hpp"
#include "grpcert/verdict.hpp"
#include "grpcert/word.hpp"

namespace grpcert {

/// Element orders of PSL2(q) for an odd prime q >= 5: the divisors of q,
/// (q-1)/2 and (q+1)/2.
inline std::set<std::uint64_t> psl2_element_orders(std::uint64_t q) {
  if (q < 5 || q % 2 == 0) throw Error("PSL2(q) element orders need an odd prime q >= 5");
  for (std::uint64_t d = 3; d * d <= q; d += 2) {
    if (q % d == 0) throw Error("PSL2(q) element orders need an odd prime q >= 5");
  }
  std::set<std::uint64_t> orders;
  for (std::uint64_t n : {q, (q - 1) / 2, (q + 1) / 2}) {
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) orders.insert(d);
    }
  }
  return orders;
}

namespace detail {

inline std::string join_elements(std::span<const Element> elems) {
  std::string s;
  for (const Element& e : elems) s += (s.empty() ? "" : ", ") + format_element(e);
  return s;
}

inline EnumeratedGroup closure_of(std::span<const Element> gens, const BackendSpec& spec, std::size_t cap) {
  return enumerate_closure(gens, spec, cap);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementary abelian subgroups and purity

inline Verdict check_elementary_abelian(std::span<const Element> gens, std::uint32_t p, const BigInt& expected_order,
                                        std::size_t cap = kDefaultClosureCap) {
  if (gens.empty()) throw CheckError("elementary abelian check needs at least one generator");
  if (!detail::is_prime_u32(p)) return Verdict::fail(std::to_string(p) + " is not prime");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (!power(gens[i], static_cast<std::int64_t>(p)).is_identity()) {
      return Verdict::fail("generator " + std::to_string(i + 1) + " " + format_element(gens[i]) + " has order " +
                           std::to_string(element_order(gens[i])) + ", not dividing " + std::to_string(p));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!commute(gens[i], gens[j])) {
        return Verdict::fail("generators " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                             " do not commute");
      }
    }
  }
  const auto e = detail::closure_of(gens, gens.front().spec(), cap);
  if (BigInt(e.order()) != expected_order) {
    return Verdict::fail("closure has order " + std::to_string(e.order()) + ", expected " + expected_order.str());
  }
  return Verdict::pass("elementary abelian of order " + expected_order.str());
}

/// One conjugating witness: base^conjugator = element.
struct PurityWitness {
  std::string label;  // how the certificate names the element
  Element element;
  Element conjugator;
};

/// Every non-identity element of <gens> must be shown conjugate to `base`.
/// Fingerprints are compared first; then each non-identity element other
/// than `base` needs a witness whose conjugation equation holds.
inline Verdict check_purity(std::span<const Element> gens, const Element& base,
                            const std::vector<PurityWitness>& witnesses, std::size_t cap = kDefaultClosureCap) {
  if (gens.empty()) throw CheckError("purity check needs at least one generator");
  const auto e = detail::closure_of(gens, gens.front().spec(), cap);
  const ClassFingerprint target = fingerprint(base);
  for (const Element& x : e.elements()) {
    if (x.is_identity()) continue;
    const ClassFingerprint f = fingerprint(x);
    if (f != target) {
      return Verdict::fail("fingerprint mismatch: " + format_element(x) + " has " + f.to_string() + ", base has " +
                           target.to_string());
    }
  }
  std::vector<bool> covered(e.order(), false);
  if (auto i = e.index_of(base)) covered[*i] = true;
  for (const PurityWitness& w : witnesses) {
    if (conjugate(base, w.conjugator) != w.element) {
      return Verdict::fail("witness for " + w.label + " fails: base^" + format_element(w.conjugator) + " = " +
                           format_element(conjugate(base, w.conjugator)) + ", not " + format_element(w.element));
    }
    const auto idx = e.index_of(w.element);
    if (!idx) return Verdict::fail("witnessed element " + w.label + " is not in the subgroup");
    covered[*idx] = true;
  }
  for (std::size_t i = 0; i < e.order(); ++i) {
    if (!covered[i] && !e.elements()[i].is_identity()) {
      return Verdict::fail("missing witness for " + format_element(e.elements()[i]));
    }
  }
  return Verdict::pass("all " + std::to_string(e.order() - 1) + " non-identity elements conjugate to the base");
}

// ---------------------------------------------------------------------------
// Normalizing, centralizing, induced automorphisms, orbits

inline Verdict check_normalizes(std::span<const Element> actors, std::span<const Element> e_gens,
                                std::size_t cap = kDefaultClosureCap) {
  if (e_gens.empty()) return Verdict::pass("trivial subgroup is normalized by everything");
  const auto e = detail::closure_of(e_gens, e_gens.front().spec(), cap);
  for (std::size_t a = 0; a < actors.size(); ++a) {
    for (std::size_t i = 0; i < e_gens.size(); ++i) {
      const Element img = conjugate(e_gens[i], actors[a]);
      if (!e.contains(img)) {
        return Verdict::fail("actor " + std::to_string(a + 1) + " maps generator " + std::to_string(i + 1) + " to " +
                             format_element(img) + ", outside the subgroup");
      }
    }
  }
  return Verdict::pass(std::to_string(actors.size()) + " actors normalize a subgroup of order " +
                       std::to_string(e.order()));
}

inline Verdict check_centralizes(std::span<const Element> actors, std::span<const Element> targets) {
  for (std::size_t a = 0; a < actors.size(); ++a) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!commute(actors[a], targets[t])) {
        return Verdict::fail("actor " + std::to_string(a + 1) + " does not commute with target " +
                             std::to_string(t + 1));
      }
    }
  }
  return Verdict::pass("every actor commutes with every target");
}

namespace detail {

// The permutation of E's element list induced by conjugation with `actor`.
inline Element induced_permutation(const EnumeratedGroup& e, const Element& actor) {
  const Element inv = actor.inverse();
  std::vector<std::uint32_t> images(e.order());
  for (std::size_t i = 0; i < e.order(); ++i) {
    const auto j = e.index_of(inv * e.elements()[i] * actor);
    if (!j) throw CheckError("actor " + format_element(actor) + " does not normalize the subgroup");
    images[i] = static_cast<std::uint32_t>(*j);
  }
  return Element::from_images(std::move(images));
}

}  // namespace detail

/// Size of the group of automorphisms of <e_gens> induced by conjugation
/// with <actors>. Throws CheckError when an actor fails to normalize.
inline BigInt count_induced_automorphisms(std::span<const Element> actors, std::span<const Element> e_gens,
                                          std::size_t cap = kDefaultClosureCap) {
  if (e_gens.empty()) return 1;
  const auto e = detail::closure_of(e_gens, e_gens.front().spec(), cap);
  std::vector<Element> perms;
  for (const Element& a : actors) perms.push_back(detail::induced_permutation(e, a));
  const auto spec = BackendSpec::permutations(static_cast<std::uint32_t>(e.order()));
  return BigInt(enumerate_closure(perms, spec, cap).order());
}

struct OrbitResult {
  Verdict verdict;
  std::size_t orbit_size = 0;
};

/// Conjugation orbit of `seed` under <actors>; by orbit-stabiliser its size
/// divides |<actors>|.
inline OrbitResult check_orbit_divisibility(std::span<const Element> actors, const Element& seed,
                                            const BigInt& claimed_orbit, std::size_t cap = kDefaultClosureCap) {
  const auto orbit = conjugation_orbit(actors, seed, cap);
  OrbitResult r;
  r.orbit_size = orbit.size();
  if (BigInt(orbit.size()) != claimed_orbit) {
    r.verdict = Verdict::fail("orbit has size " + std::to_string(orbit.size()) + ", claimed " + claimed_orbit.str());
  } else {
    r.verdict = Verdict::pass("orbit of size " + claimed_orbit.str() + ", which divides the order of the actors' group");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Order-bound lemmas

struct ExtLemmaResult {
  std::size_t subgroup_order = 0;
  BigInt factor = 1;
  BigInt bound = 0;
  bool prime_power_branch = false;
  std::string detail;
};

/// |<H, g>| >= factor * |H| with factor 2 when g is outside H, and factor
/// p^n when g has order p^n and g^(p^(n-1)) is outside H. Throws CheckError
/// when g lies in H or the claimed prime power is not the order of g.
inline ExtLemmaResult check_ext_lemma(std::span<const Element> h_gens, const Element& g,
                                      std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power,
                                      std::size_t cap = kDefaultClosureCap) {
  const auto h = enumerate_closure<Element>(h_gens, Element::identity(g.spec()), cap);
  if (h.contains(g)) throw CheckError("no bound: the element lies in the subgroup");
  ExtLemmaResult r;
  r.subgroup_order = h.order();
  r.factor = 2;
  r.detail = "element outside a subgroup of order " + std::to_string(h.order());
  if (prime_power) {
    const auto [p, n] = *prime_power;
    if (!detail::is_prime_u32(p) || n == 0) throw CheckError("claimed prime power has a non-prime base or zero exponent");
    const BigInt pn = big_pow(BigInt(p), n);
    if (BigInt(element_order(g)) != pn) {
      throw CheckError("element has order " + std::to_string(element_order(g)) + ", not " + std::to_string(p) + "^" +
                       std::to_string(n));
    }
    const Element top = power(g, big_pow(BigInt(p), n - 1));
    if (!h.contains(top)) {
      r.factor = pn;
      r.prime_power_branch = true;
      r.detail += "; its " + std::to_string(p) + "^" + std::to_string(n - 1) + " power is outside too";
    }
  }
  r.bound = r.factor * BigInt(h.order());
  return r;
}

struct OddExtData {
  std::uint32_t p = 0;
  Element x, y, ell, sigma;
  std::vector<Element> g, h;
  /// Subsets of the designated list (indices) whose bounds are requested.
  std::vector<std::vector<std::size_t>> subsets;
  /// Generators of the ambient group in which the normality claim is tested.
  std::vector<Element> ambient;
};

struct OddExtResult {
  Verdict verdict;
  /// x, y, g_1..g_k, h_1..h_k, h_1^s..h_k^s
  std::vector<Element> designated;
  std::vector<std::string> designated_names;
  std::vector<std::pair<std::vector<std::size_t>, BigInt>> subset_bounds;
  BigInt generation_bound = 0;       // for <x, y, g, h, l>
  std::size_t normal_subgroup_order = 0;  // |<A, A^s>|
};

namespace detail {

// a and b commute modulo <x> iff [a, b] lies in <x>.
inline bool commute_mod(const Element& a, const Element& b, const EnumeratedGroup& xs) {
  return xs.contains(commutator(a, b));
}

inline bool is_power_of(std::size_t n, std::uint32_t p) {
  if (n == 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace detail

/// Checks every hypothesis of the odd-prime extension lemma, then reports
/// p^|S| for each requested subset S of the designated list, the bound
/// p^(2k+3) for <x, y, g, h, l>, and confirms by enumeration that
/// <A, A^s> with A = <x, y, g, h> is a normal p-subgroup of C(<x, y>)
/// inside the ambient group.
inline OddExtResult check_odd_ext(const OddExtData& d, std::size_t cap = kDefaultClosureCap) {
  OddExtResult r;
  const std::size_t k = d.g.size();
  auto fail = [&](std::string why) {
    r.verdict = Verdict::fail(std::move(why));
    return r;
  };
  if (d.h.size() != k) return fail("g and h lists differ in length");
  if (!detail::is_prime_u32(d.p)) return fail(std::to_string(d.p) + " is not prime");

  const auto order_is_p = [&](const Element& e) { return element_order(e) == d.p; };
  if (!order_is_p(d.x)) return fail("x does not have order p");
  if (!order_is_p(d.y)) return fail("y does not have order p");
  if (!order_is_p(d.ell)) return fail("l does not have order p");
  for (std::size_t i = 0; i < k; ++i) {
    if (!order_is_p(d.g[i])) return fail("g" + std::to_string(i + 1) + " does not have order p");
    if (!order_is_p(d.h[i])) return fail("h" + std::to_string(i + 1) + " does not have order p");
  }
  const Element xs_gen[] = {d.x};
  const auto xs = enumerate_closure(xs_gen, d.x.spec(), cap);
  if (xs.contains(d.y)) return fail("y lies in <x>");
  if (!commute(d.y, d.x)) return fail("y does not commute with x");
  if (!commute(d.ell, d.x)) return fail("l does not commute with x");
  if (commute(d.ell, d.y)) return fail("l commutes with y");
  for (std::size_t i = 0; i < k; ++i) {
    const std::string gi = "g" + std::to_string(i + 1), hi = "h" + std::to_string(i + 1);
    if (!commute(d.g[i], d.x)) return fail(gi + " does not commute with x");
    if (!commute(d.h[i], d.x)) return fail(hi + " does not commute with x");
    if (!commute(d.g[i], d.y)) return fail(gi + " does not commute with y");
    if (!commute(d.h[i], d.y)) return fail(hi + " does not commute with y");
  }
  const Element xy_gens[] = {d.x, d.y};
  const auto xy = enumerate_closure(xy_gens, d.x.spec(), cap);
  for (const Element& e : xy_gens) {
    if (!xy.contains(conjugate(e, d.sigma))) return fail("sigma does not normalize <x, y>");
  }
  std::vector<Element> gs, hs;
  for (std::size_t i = 0; i < k; ++i) {
    gs.push_back(conjugate(d.g[i], d.sigma));
    hs.push_back(conjugate(d.h[i], d.sigma));
  }
  for (std::size_t j = 0; j < k; ++j) {
    const std::string gj = "g" + std::to_string(j + 1);
    for (std::size_t i = 0; i < k; ++i) {
      const std::string si = std::to_string(i + 1);
      if (!detail::commute_mod(d.g[j], d.g[i], xs)) return fail(gj + " and g" + si + " do not commute modulo <x>");
      if (!detail::commute_mod(d.g[j], gs[i], xs)) return fail(gj + " and g" + si + "^s do not commute modulo <x>");
      if (!detail::commute_mod(d.g[j], d.h[i], xs)) return fail(gj + " and h" + si + " do not commute modulo <x>");
      const bool c = detail::commute_mod(d.g[j], hs[i], xs);
      if (i < j && !c) return fail(gj + " and h" + si + "^s do not commute modulo <x> (i < j)");
      if (i == j && c) return fail(gj + " and h" + si + "^s commute modulo <x> (i = j)");
    }
  }

  r.designated = {d.x, d.y};
  r.designated_names = {"x", "y"};
  for (std::size_t i = 0; i < k; ++i) {
    r.designated.push_back(d.g[i]);
    r.designated_names.push_back("g" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < k; ++i) {
    r.designated.push_back(d.h[i]);
    r.designated_names.push_back("h" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < k; ++i) {
    r.designated.push_back(hs[i]);
    r.designated_names.push_back("h" + std::to_string(i + 1) + "^s");
  }
  for (const auto& s : d.subsets) {
    std::set<std::size_t> distinct(s.begin(), s.end());
    for (std::size_t idx : distinct) {
      if (idx >= r.designated.size()) return fail("subset index " + std::to_string(idx) + " out of range");
    }
    r.subset_bounds.emplace_back(std::vector<std::size_t>(distinct.begin(), distinct.end()),
                                 big_pow(BigInt(d.p), static_cast<unsigned>(distinct.size())));
  }
  r.generation_bound = big_pow(BigInt(d.p), static_cast<unsigned>(2 * k + 3));

  // Normality of <A, A^s> in C(<x, y>), inside the ambient group.
  std::vector<Element> b_gens{d.x, d.y};
  for (std::size_t i = 0; i < k; ++i) {
    b_gens.push_back(d.g[i]);
    b_gens.push_back(d.h[i]);
    b_gens.push_back(gs[i]);
    b_gens.push_back(hs[i]);
  }
  const auto b = enumerate_closure(b_gens, d.x.spec(), cap);
  r.normal_subgroup_order = b.order();
  if (!detail::is_power_of(b.order(), d.p)) {
    return fail("<A, A^s> has order " + std::to_string(b.order()) + ", not a power of p");
  }
  std::vector<Element> ambient_gens = d.ambient;
  if (ambient_gens.empty()) ambient_gens = b_gens;
  const auto ambient = enumerate_closure(ambient_gens, d.x.spec(), cap);
  const auto c = centralizer(ambient, xy_gens);
  for (const Element& e : b_gens) {
    if (!c.contains(e)) return fail("<A, A^s> is not inside C(<x, y>)");
  }
  for (const Element& t : c.generators()) {
    for (const Element& e : b_gens) {
      if (!b.contains(conjugate(e, t))) return fail("<A, A^s> is not normal in C(<x, y>)");
    }
  }
  r.verdict = Verdict::pass("hypotheses hold; <x, y, g, h, l> has order at least " + r.generation_bound.str() +
                            "; <A, A^s> of order " + std::to_string(b.order()) + " is normal in C(<x, y>) of order " +
                            std::to_string(c.order()));
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphism chains

/// One level of a chain. Level i contributes generators F_i; K_i is generated
/// by F_i together with the generators of all later levels. Every level but
/// the last carries a homomorphism on K_i whose kernel must contain K_{i+1}.
struct HomLevel {
  enum class Kind { conjugation, map, terminal };

  std::vector<Element> generators;
  Kind kind = Kind::terminal;
  /// conjugation: generators of the subgroup acted on.
  std::vector<Element> action_on;
  /// map: target backend and the images of this level's generators; later
  /// levels' generators map to the identity.
  BackendSpec target;
  std::vector<Element> images;
  std::optional<BigInt> claimed_image;
  std::string label;
};

struct HomChainResult {
  Verdict verdict;
  std::vector<BigInt> image_sizes;
  BigInt terminal_order = 0;
  BigInt bound = 0;
};

namespace detail {

struct PairElement {
  Element first, second;
  friend bool operator==(const PairElement&, const PairElement&) = default;
  friend PairElement operator*(const PairElement& a, const PairElement& b) {
    return {a.first * b.first, a.second * b.second};
  }
};

}  // namespace detail
}  // namespace grpcert

template <>
struct std::hash<grpcert::detail::PairElement> {
  std::size_t operator()(const grpcert::detail::PairElement& p) const noexcept {
    return p.first.hash() * 0x100000001b3ull ^ p.second.hash();
  }
};

namespace grpcert {

/// Certifies |K_1| >= |K_m| * prod |im phi_i| by the isomorphism theorem,
/// after checking kernel containment and computing each image exactly.
inline HomChainResult check_hom_chain(const std::vector<HomLevel>& levels, std::optional<BigInt> claimed_terminal,
                                      std::size_t cap = kDefaultClosureCap) {
  HomChainResult r;
  auto fail = [&](std::string why) {
    r.verdict = Verdict::fail(std::move(why));
    return r;
  };
  if (levels.empty()) return fail("chain has no levels");
  const std::size_t m = levels.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (levels[i].kind == HomLevel::Kind::terminal) {
      return fail("level " + std::to_string(i + 1) + " has no homomorphism");
    }
  }
  if (levels.back().kind != HomLevel::Kind::terminal) return fail("last level must be terminal");

  std::optional<BackendSpec> spec;
  for (const HomLevel& l : levels) {
    if (!l.generators.empty()) {
      spec = l.generators.front().spec();
      break;
    }
  }
  if (!spec) return fail("chain has no generators");

  BigInt bound = 1;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const HomLevel& level = levels[i];
    const std::string name = "level " + std::to_string(i + 1) + (level.label.empty() ? "" : " (" + level.label + ")");
    std::vector<Element> later;
    for (std::size_t j = i + 1; j < m; ++j) later.insert(later.end(), levels[j].generators.begin(), levels[j].generators.end());
    std::vector<Element> k_gens = level.generators;
    k_gens.insert(k_gens.end(), later.begin(), later.end());

    BigInt image;
    if (level.kind == HomLevel::Kind::conjugation) {
      if (level.action_on.empty()) return fail(name + ": conjugation action on an empty generator list");
      const auto e = enumerate_closure(level.action_on, level.action_on.front().spec(), cap);
      for (const Element& g : k_gens) {
        for (const Element& s : level.action_on) {
          if (!e.contains(conjugate(s, g))) {
            return fail(name + ": generator " + format_element(g) + " does not normalize the acted-on subgroup");
          }
        }
      }
      for (const Element& g : later) {
        for (const Element& s : level.action_on) {
          if (!commute(g, s)) {
            return fail(name + ": kernel containment violated, " + format_element(g) + " acts nontrivially");
          }
        }
      }
      image = count_induced_automorphisms(k_gens, level.action_on, cap);
    } else {
      if (level.images.size() != level.generators.size()) {
        return fail(name + ": " + std::to_string(level.images.size()) + " images for " +
                    std::to_string(level.generators.size()) + " generators");
      }
      std::vector<detail::PairElement> graph;
      for (std::size_t j = 0; j < level.generators.size(); ++j) {
        if (!(level.images[j].spec() == level.target)) return fail(name + ": image outside the target group");
        graph.push_back({level.generators[j], level.images[j]});
      }
      for (const Element& g : later) graph.push_back({g, Element::identity(level.target)});
      const auto k = enumerate_closure(k_gens, *spec, cap);
      const detail::PairElement one{Element::identity(*spec), Element::identity(level.target)};
      std::size_t graph_order = 0;
      try {
        graph_order = enumerate_closure<detail::PairElement>(graph, one, k.order() + 1).order();
      } catch (const CapExceededError&) {
        graph_order = k.order() + 1;
      }
      if (graph_order != k.order()) {
        return fail(name + ": generator images do not define a homomorphism with the later levels in its kernel");
      }
      std::vector<Element> imgs = level.images;
      image = BigInt(enumerate_closure<Element>(imgs, Element::identity(level.target), cap).order());
    }
    if (level.claimed_image && *level.claimed_image != image) {
      return fail(name + ": image has order " + image.str() + ", claimed " + level.claimed_image->str());
    }
    r.image_sizes.push_back(image);
    bound *= image;
  }
  const auto terminal = enumerate_closure<Element>(levels.back().generators, Element::identity(*spec), cap);
  r.terminal_order = BigInt(terminal.order());
  if (claimed_terminal && *claimed_terminal != r.terminal_order) {
    return fail("terminal subgroup has order " + r.terminal_order.str() + ", claimed " + claimed_terminal->str());
  }
  r.bound = bound * r.terminal_order;
  r.verdict = Verdict::pass("order at least " + r.bound.str());
  return r;
}

// ---------------------------------------------------------------------------
// Exclusion search

struct ExclusionResult {
  std::vector<std::size_t> survivors;  // indices into the candidate list
  std::vector<std::string> notes;      // why each rejected candidate failed
};

/// Keeps the candidates x for which every probe, evaluated with `free_name`
/// bound to x, has an order in `order_set`. An empty `order_set` optional
/// accepts every order.
inline ExclusionResult exclusion_search(std::span<const Element> candidates, const std::vector<Word>& probes,
                                        const GroupContext& context, const std::string& free_name,
                                        const std::optional<std::set<std::uint64_t>>& order_set) {
  for (const Word& w : probes) {
    for (const std::string& n : w.names()) {
      if (n != free_name && !context.contains(n)) throw UnboundNameError(n);
    }
  }
  ExclusionResult r;
  GroupContext ctx = context;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    ctx.rebind(free_name, candidates[c]);
    bool keep = true;
    for (std::size_t i = 0; i < probes.size() && keep; ++i) {
      const std::uint64_t o = element_order(evaluate_word(probes[i], ctx));
      if (order_set && !order_set->contains(o)) {
        keep = false;
        r.notes.push_back("candidate " + std::to_string(c + 1) + ": probe " + std::to_string(i + 1) + " has order " +
                          std::to_string(o));
      }
    }
    if (keep) r.survivors.push_back(c);
  }
  return r;
}

}  // namespace grpcert
