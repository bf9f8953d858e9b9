#pragma once

// Finite presentations, a record-based catalog file, relator checking and
// image certification by Von Dyck's theorem.
//
// Catalog records look like
//
//   [A5]
//   generators = a b
//   relator = a^2            # provenance of this relator
//   relator = (a b)^5
//   target = A5
//   order = 60
//   simple = yes
//   source = where the relators come from
//   binding.backend = permutation
//   binding.degree = 5
//   binding.a = (1 2)(3 4)
//
// Keys prefixed with "binding." describe a concrete test binding.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grpcert/bigint.hpp"
#include "grpcert/context.hpp"
#include "grpcert/oracle.hpp"
#include "grpcert/shape.hpp"
#include "grpcert/verdict.hpp"
#include "grpcert/word.hpp"

namespace grpcert {

struct Relator {
  Word word;
  std::string text;
  std::string provenance;
};

struct Presentation {
  std::string name;
  std::vector<std::string> generators;
  std::vector<Relator> relators;
  std::string target;
  BigInt order = 0;
  bool simple = false;
  std::string source;
  std::optional<GroupContext> test_binding;

  /// Throws Error unless every relator is a nonempty word over the declared
  /// generators and, when a catalog is given, the target order matches it.
  void validate(const OrderCatalog* catalog = nullptr) const {
    if (generators.empty()) throw Error("presentation '" + name + "' declares no generators");
    if (relators.empty()) throw Error("presentation '" + name + "' has no relators");
    for (const Relator& r : relators) {
      if (r.word.kind() == Word::Kind::identity) {
        throw Error("presentation '" + name + "' has an empty relator");
      }
      for (const std::string& n : r.word.names()) {
        if (std::find(generators.begin(), generators.end(), n) == generators.end()) {
          throw Error("relator '" + r.text + "' of '" + name + "' uses undeclared generator '" + n + "'");
        }
      }
    }
    if (order <= 0) throw Error("presentation '" + name + "' has no target order");
    if (catalog && catalog->order(target) != order) {
      throw Error("presentation '" + name + "': target " + target + " has catalog order " +
                  catalog->order(target).str() + ", record says " + order.str());
    }
  }
};

class PresentationLibrary {
 public:
  static PresentationLibrary from_text(std::string_view text, const OrderCatalog* catalog = nullptr) {
    PresentationLibrary lib;
    std::map<std::string, std::string> binding_keys;
    std::vector<std::pair<std::string, std::string>> binding_elements;
    Presentation* current = nullptr;
    std::size_t offset = 0;
    std::size_t line_no = 0;

    auto finish = [&] {
      if (!current) return;
      if (!binding_keys.empty() || !binding_elements.empty()) {
        current->test_binding = make_binding(*current, binding_keys, binding_elements);
      }
      current->validate(catalog);
      binding_keys.clear();
      binding_elements.clear();
    };

    while (offset <= text.size()) {
      std::size_t end = text.find('\n', offset);
      if (end == std::string_view::npos) end = text.size();
      std::string_view raw = text.substr(offset, end - offset);
      const std::size_t line_start = offset;
      offset = end + 1;
      ++line_no;
      auto fail = [&](const std::string& what) -> void {
        throw ParseError("presentation catalog line " + std::to_string(line_no) + ": " + what, line_start);
      };

      std::string comment;
      if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos) {
        comment = trim(raw.substr(hash + 1));
        raw = raw.substr(0, hash);
      }
      const std::string line = trim(raw);
      if (line.empty()) continue;

      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) fail("malformed record header");
        finish();
        const std::string name = line.substr(1, line.size() - 2);
        if (lib.index_.contains(name)) fail("duplicate presentation '" + name + "'");
        lib.index_.emplace(name, lib.items_.size());
        lib.items_.push_back(Presentation{});
        current = &lib.items_.back();
        current->name = name;
        continue;
      }
      if (!current) fail("entry outside a record");
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) fail("expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      try {
        if (key == "generators") {
          std::istringstream in(value);
          for (std::string g; in >> g;) current->generators.push_back(g);
        } else if (key == "relator") {
          current->relators.push_back(Relator{parse_word(value), value, comment});
        } else if (key == "target") {
          current->target = value;
        } else if (key == "order") {
          current->order = parse_bigint(value);
        } else if (key == "simple") {
          if (value != "yes" && value != "no") fail("simple must be yes or no");
          current->simple = value == "yes";
        } else if (key == "source") {
          current->source = value;
        } else if (key.rfind("binding.", 0) == 0) {
          const std::string sub = key.substr(8);
          if (sub == "backend" || sub == "degree" || sub == "dimension" || sub == "prime") {
            binding_keys[sub] = value;
          } else {
            binding_elements.emplace_back(sub, value);
          }
        } else {
          fail("unknown key '" + key + "'");
        }
      } catch (const ParseError& e) {
        if (std::string_view(e.what()).rfind("presentation catalog", 0) == 0) throw;
        fail(e.what());
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    finish();
    return lib;
  }

  static PresentationLibrary load(const std::string& path, const OrderCatalog* catalog = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open presentation catalog '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_text(text, catalog);
  }

#ifdef GRPCERT_DATA_DIR
  static const PresentationLibrary& builtin() {
    static const PresentationLibrary lib =
        load(std::string(GRPCERT_DATA_DIR) + "/presentations.txt", &OrderCatalog::builtin());
    return lib;
  }
#endif

  const std::vector<Presentation>& all() const noexcept { return items_; }

  const Presentation* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &items_[it->second];
  }

  const Presentation& at(const std::string& name) const {
    if (const Presentation* p = find(name)) return *p;
    throw Error("no presentation named '" + name + "'");
  }

 private:
  static std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
  }

  static GroupContext make_binding(const Presentation& p, const std::map<std::string, std::string>& keys,
                                   const std::vector<std::pair<std::string, std::string>>& elements) {
    auto get = [&](const char* k) -> std::uint32_t {
      auto it = keys.find(k);
      if (it == keys.end()) throw Error("binding of '" + p.name + "' lacks '" + k + "'");
      return static_cast<std::uint32_t>(std::stoul(it->second));
    };
    auto backend = keys.find("backend");
    if (backend == keys.end()) throw Error("binding of '" + p.name + "' lacks 'backend'");
    BackendSpec spec;
    if (backend->second == "permutation") {
      spec = BackendSpec::permutations(get("degree"));
    } else if (backend->second == "matrix") {
      spec = BackendSpec::matrices(get("dimension"), get("prime"));
    } else {
      throw Error("binding of '" + p.name + "' has unknown backend '" + backend->second + "'");
    }
    GroupContext ctx(spec);
    for (const auto& [name, text] : elements) ctx.bind_text(name, text);
    return ctx;
  }

  std::vector<Presentation> items_;
  std::map<std::string, std::size_t> index_;
};

struct RelatorRow {
  std::string text;
  Element value;
  bool identity = false;
};

struct RelatorReport {
  std::vector<RelatorRow> rows;
  bool nontrivial_generator = false;
  bool passed = false;

  std::string summary() const {
    std::size_t bad = 0;
    for (const RelatorRow& r : rows) bad += r.identity ? 0 : 1;
    if (passed) return "all " + std::to_string(rows.size()) + " relators hold";
    if (!nontrivial_generator) return "every generator is bound to the identity";
    std::string s = std::to_string(bad) + " of " + std::to_string(rows.size()) + " relators fail:";
    for (const RelatorRow& r : rows) {
      if (!r.identity) s += " " + r.text + " = " + format_element(r.value) + ";";
    }
    s.pop_back();
    return s;
  }
};

/// Evaluates every relator under `binding`. Passes iff all relators are the
/// identity and at least one generator is not.
inline RelatorReport check_relators(const Presentation& p, const GroupContext& binding) {
  RelatorReport report;
  for (const std::string& g : p.generators) {
    if (!binding.at(g).is_identity()) report.nontrivial_generator = true;
  }
  bool all_identity = true;
  for (const Relator& r : p.relators) {
    Element v = evaluate_word(r.word, binding);
    const bool id = v.is_identity();
    all_identity &= id;
    report.rows.push_back(RelatorRow{r.text, std::move(v), id});
  }
  report.passed = all_identity && report.nontrivial_generator;
  return report;
}

/// Certifies that the bound generators generate a copy of the target.
///
/// The relators give a surjection from the presented group onto the image.
/// For a simple target, a non-trivial image is therefore the whole target;
/// the closure is still enumerated when it fits under `cap` and must have
/// the target order. Past the cap a simple target needs `order_witness`
/// equal to the target order to be accepted. A non-simple target is only
/// certified by enumeration.
inline Verdict certify_simple_image(const Presentation& p, const GroupContext& binding,
                                    std::size_t cap = kDefaultClosureCap,
                                    const std::optional<BigInt>& order_witness = std::nullopt) {
  const RelatorReport rel = check_relators(p, binding);
  if (!rel.passed) return Verdict::fail(rel.summary());
  std::vector<Element> gens;
  for (const std::string& g : p.generators) gens.push_back(binding.at(g));
  const std::string cite = p.source.empty() ? "" : " [" + p.source + "]";
  if (BigInt(cap) >= p.order) {
    const auto closure = enumerate_closure(gens, binding.spec(), cap);
    if (BigInt(closure.order()) != p.order) {
      return Verdict::fail("relators hold but the image has order " + std::to_string(closure.order()) +
                           ", target " + p.target + " has order " + p.order.str());
    }
    return Verdict::pass("image isomorphic to " + p.target + ", order " + p.order.str() + " enumerated" + cite);
  }
  if (!p.simple) {
    return Verdict::fail("target " + p.target + " is not simple and its order " + p.order.str() +
                         " exceeds the closure cap " + std::to_string(cap));
  }
  if (!order_witness) {
    return Verdict::fail("target order " + p.order.str() + " exceeds the closure cap " + std::to_string(cap) +
                         " and no order witness was supplied");
  }
  if (*order_witness != p.order) {
    return Verdict::fail("order witness " + order_witness->str() + " differs from target order " + p.order.str());
  }
  return Verdict::pass("non-trivial image of a presentation of the simple group " + p.target +
                       ", order " + p.order.str() + " by witness" + cite);
}

}  // namespace grpcert
