#pragma once

// Certificate files: a group, named element definitions, a list of typed
// checks, and the rule for composing their bounds into an order bound.
//
//   {
//     "version": 1,
//     "meta": {"shape": "2^2:S3", "tag": "...", "description": "...", "tight": true},
//     "group": {"backend": "permutation", "degree": 4, "generators": {"a": "(1 2)", "b": "(1 2 3 4)"}},
//     "targets": {"S2": {"backend": "permutation", "degree": 2, "generators": {}}},
//     "define": {"v1": "(b^2)", "v2": "[a, b]^2"},
//     "checks": [{"id": "E", "type": "check_elementary_abelian", "gens": ["v1", "v2"], "p": 2, "order": 4}],
//     "bound": {"product": ["E"], "subgroup": ["a", "b"]}
//   }
//
// A group may instead be given as {"file": "path"}, resolved against the
// certificate's directory and then the shipped data directory.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grpcert/bigint.hpp"
#include "grpcert/checks.hpp"
#include "grpcert/context.hpp"
#include "grpcert/error.hpp"
#include "grpcert/oracle.hpp"
#include "grpcert/presentation.hpp"
#include "grpcert/shape.hpp"
#include "grpcert/word.hpp"

namespace grpcert {

using Json = nlohmann::ordered_json;

inline constexpr int kCertificateVersion = 1;

enum class CheckStatus { pass, fail, error, cap };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::error: return "error";
    case CheckStatus::cap: return "cap";
  }
  return "?";
}

namespace detail {

// "L2(q)" for an odd prime q >= 5, naming the element orders of PSL2(q).
inline std::optional<std::uint64_t> psl2_order_spec(const std::string& s) {
  if (s.size() < 5 || s.rfind("L2(", 0) != 0 || s.back() != ')') return std::nullopt;
  const std::string digits = s.substr(3, s.size() - 4);
  if (digits.empty() || digits.size() > 9 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) return std::nullopt;
  const std::uint64_t q = std::stoull(digits);
  try {
    psl2_element_orders(q);
  } catch (const Error&) {
    return std::nullopt;
  }
  return q;
}

inline bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

enum class FieldKind { string, integer, count, strings, object, array, any };

inline const char* describe(FieldKind k) {
  switch (k) {
    case FieldKind::string: return "a string";
    case FieldKind::integer: return "an integer";
    case FieldKind::count: return "a positive integer or a decimal string";
    case FieldKind::strings: return "an array of strings";
    case FieldKind::object: return "an object";
    case FieldKind::array: return "an array";
    case FieldKind::any: return "a value";
  }
  return "?";
}

inline bool has_kind(const Json& j, FieldKind k) {
  switch (k) {
    case FieldKind::string: return j.is_string();
    case FieldKind::integer: return j.is_number_integer();
    case FieldKind::count:
      if (j.is_number_unsigned()) return j.get<std::uint64_t>() > 0;
      if (j.is_number_integer()) return j.get<std::int64_t>() > 0;
      if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        return !s.empty() && s.size() < 400 && std::all_of(s.begin(), s.end(), ::isdigit) && s != "0" && s[0] != '0';
      }
      return false;
    case FieldKind::strings:
      return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_string(); });
    case FieldKind::object: return j.is_object();
    case FieldKind::array: return j.is_array();
    case FieldKind::any: return true;
  }
  return false;
}

/// Typed access to one JSON object; unknown keys are rejected by done().
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw SchemaError(path_ + ": expected an object");
  }

  const Json& req(const std::string& key, FieldKind kind) {
    const Json* v = opt(key, kind);
    if (!v) throw SchemaError(path_ + ": missing field '" + key + "'");
    return *v;
  }

  const Json* opt(const std::string& key, FieldKind kind) {
    used_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    if (!has_kind(*it, kind)) throw SchemaError(path_ + "/" + key + ": expected " + describe(kind));
    return &*it;
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.contains(it.key())) throw SchemaError(path_ + ": unknown field '" + it.key() + "'");
    }
  }

  const std::string& path() const noexcept { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline BigInt to_count(const Json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  return BigInt(j.get<std::int64_t>());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": malformed JSON", e.byte == 0 ? 0 : e.byte - 1);
  }
}

}  // namespace detail

/// Reads a group spec object: backend parameters plus named generators.
inline GroupContext parse_group_spec(const Json& j, const std::string& path) {
  detail::Fields f(j, path);
  if (const Json* v = f.opt("version", detail::FieldKind::integer); v && v->get<int>() != kCertificateVersion) {
    throw SchemaError(path + ": unsupported version " + std::to_string(v->get<int>()));
  }
  f.opt("description", detail::FieldKind::string);
  const std::string backend = f.req("backend", detail::FieldKind::string).get<std::string>();
  BackendSpec spec;
  auto positive = [&](const char* key, std::int64_t max) {
    const auto v = f.req(key, detail::FieldKind::integer).get<std::int64_t>();
    if (v < 1 || v > max) throw SchemaError(path + "/" + key + ": out of range");
    return static_cast<std::uint32_t>(v);
  };
  if (backend == "permutation") {
    spec = BackendSpec::permutations(positive("degree", 1 << 20));
  } else if (backend == "matrix") {
    const auto k = positive("dimension", 64);
    const auto p = positive("prime", kMaxPrime - 1);
    if (!detail::is_prime_u32(p)) throw SchemaError(path + "/prime: " + std::to_string(p) + " is not prime");
    spec = BackendSpec::matrices(k, p);
  } else {
    throw SchemaError(path + "/backend: expected \"permutation\" or \"matrix\"");
  }
  GroupContext ctx(spec);
  const Json& gens = f.req("generators", detail::FieldKind::object);
  for (auto it = gens.begin(); it != gens.end(); ++it) {
    const std::string where = path + "/generators/" + it.key();
    if (!detail::valid_name(it.key())) throw SchemaError(where + ": invalid name");
    if (!it->is_string()) throw SchemaError(where + ": expected element text");
    try {
      ctx.bind_text(it.key(), it->get<std::string>());
    } catch (const Error& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  f.done();
  return ctx;
}

inline GroupContext load_group_file(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  return parse_group_spec(detail::parse_json_text(text, path.string()), path.string());
}

struct CheckSpec {
  std::size_t index = 0;
  std::string id;
  std::string type;
  Json params;
};

struct CertificateMeta {
  std::optional<std::string> shape;
  std::string tag;
  std::string description;
  bool tight = false;
};

struct Certificate {
  std::string source;
  CertificateMeta meta;
  GroupContext group;
  std::map<std::string, GroupContext> targets;
  std::vector<std::pair<std::string, std::string>> definitions;
  std::vector<CheckSpec> checks;
  std::vector<std::string> bound_product;
  std::vector<std::string> bound_subgroup;

  static Certificate from_json(const Json& j, const std::string& source,
                               const std::filesystem::path& base_dir = {});
  static Certificate from_text(const std::string& text, const std::string& source,
                               const std::filesystem::path& base_dir = {}) {
    return from_json(detail::parse_json_text(text, source), source, base_dir);
  }
  static Certificate load(const std::filesystem::path& path) {
    return from_text(detail::read_file(path), path.string(), path.parent_path());
  }
};

namespace detail {

inline bool is_bound_producing(const std::string& type) {
  static const std::set<std::string> types{
      "check_elementary_abelian", "check_ext_lemma",       "check_odd_ext",       "count_induced_automorphisms",
      "check_orbit_divisibility", "check_hom_chain",       "certify_simple_image", "check_element_order",
      "check_closure_order"};
  return types.contains(type);
}

// Validates the parameters of one check against its type's schema.
inline void validate_check(const Json& j, const std::string& path, const std::map<std::string, GroupContext>& targets) {
  Fields f(j, path);
  f.req("type", FieldKind::string);
  f.opt("id", FieldKind::string);
  f.opt("note", FieldKind::string);
  const std::string type = j.at("type").get<std::string>();
  using K = FieldKind;
  if (type == "check_elementary_abelian") {
    f.req("gens", K::strings);
    f.req("p", K::integer);
    f.req("order", K::count);
  } else if (type == "check_purity") {
    f.req("gens", K::strings);
    f.req("base", K::string);
    const Json& w = f.req("witnesses", K::array);
    for (std::size_t i = 0; i < w.size(); ++i) {
      Fields wf(w[i], path + "/witnesses/" + std::to_string(i));
      wf.req("element", K::string);
      wf.req("conjugator", K::string);
      wf.done();
    }
  } else if (type == "check_normalizes") {
    f.req("actors", K::strings);
    f.req("subgroup", K::strings);
  } else if (type == "check_centralizes") {
    f.req("actors", K::strings);
    f.req("targets", K::strings);
  } else if (type == "check_ext_lemma") {
    f.req("subgroup", K::strings);
    f.req("element", K::string);
    if (const Json* pp = f.opt("prime_power", K::object)) {
      Fields pf(*pp, path + "/prime_power");
      pf.req("p", K::integer);
      pf.req("n", K::integer);
      pf.done();
    }
    f.opt("factor", K::count);
    f.opt("bound", K::count);
  } else if (type == "check_odd_ext") {
    f.req("p", K::integer);
    for (const char* k : {"x", "y", "l"}) f.req(k, K::string);
    f.opt("sigma", K::string);
    f.req("g", K::strings);
    f.req("h", K::strings);
    if (const Json* s = f.opt("subsets", K::any)) {
      const bool ok = (s->is_string() && s->get<std::string>() == "all") ||
                      (s->is_array() && std::all_of(s->begin(), s->end(), [](const Json& e) { return has_kind(e, K::strings); }));
      if (!ok) throw SchemaError(path + "/subsets: expected \"all\" or an array of name arrays");
    }
    f.opt("ambient", K::strings);
  } else if (type == "count_induced_automorphisms") {
    f.req("actors", K::strings);
    f.req("subgroup", K::strings);
    f.req("count", K::count);
  } else if (type == "check_orbit_divisibility") {
    f.req("actors", K::strings);
    f.req("seed", K::string);
    f.req("orbit", K::count);
  } else if (type == "check_hom_chain") {
    const Json& levels = f.req("levels", K::array);
    if (levels.empty()) throw SchemaError(path + "/levels: empty chain");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::string lp = path + "/levels/" + std::to_string(i);
      Fields lf(levels[i], lp);
      lf.req("generators", K::strings);
      lf.opt("label", K::string);
      const Json* conj = lf.opt("conjugation", K::strings);
      const Json* map = lf.opt("map", K::object);
      if (conj && map) throw SchemaError(lp + ": both 'conjugation' and 'map'");
      if (map) {
        Fields mf(*map, lp + "/map");
        const std::string target = mf.req("target", K::string).get<std::string>();
        if (!targets.contains(target)) throw SchemaError(lp + "/map/target: unknown target '" + target + "'");
        mf.req("images", K::strings);
        mf.done();
      }
      if (lf.opt("image", K::count) && !conj && !map) throw SchemaError(lp + ": terminal level has no image");
      lf.done();
    }
    f.opt("terminal_order", K::count);
  } else if (type == "exclusion_search") {
    const Json& c = f.req("candidates", K::any);
    if (c.is_object()) {
      Fields cf(c, path + "/candidates");
      cf.req("order", K::count);
      cf.opt("centralizing", K::strings);
      cf.done();
    } else if (!has_kind(c, K::strings)) {
      throw SchemaError(path + "/candidates: expected an array of words or {\"order\": n}");
    }
    if (const Json* fr = f.opt("free", K::string); fr && !valid_name(fr->get<std::string>())) {
      throw SchemaError(path + "/free: invalid name");
    }
    f.req("probes", K::strings);
    const Json& o = f.req("orders", K::any);
    const bool named = o.is_string() && (o.get<std::string>() == "all" || psl2_order_spec(o.get<std::string>()));
    const bool listed = o.is_array() && std::all_of(o.begin(), o.end(), [](const Json& e) { return has_kind(e, K::count); });
    if (!named && !listed) throw SchemaError(path + "/orders: expected \"all\", \"L2(q)\" or an array of integers");
    const Json& e = f.req("expect", K::any);
    const bool expect_ok = (e.is_string() && (e.get<std::string>() == "empty" || e.get<std::string>() == "nonempty")) ||
                           e.is_number_unsigned();
    if (!expect_ok) throw SchemaError(path + "/expect: expected \"empty\", \"nonempty\" or a count");
  } else if (type == "check_relators" || type == "certify_simple_image") {
    f.req("presentation", K::string);
    const Json& b = f.req("binding", K::object);
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (!it->is_string()) throw SchemaError(path + "/binding/" + it.key() + ": expected a word");
    }
    if (type == "certify_simple_image") f.opt("order_witness", K::count);
  } else if (type == "check_element_order") {
    f.req("element", K::string);
    f.req("order", K::count);
  } else if (type == "check_closure_order") {
    f.req("gens", K::strings);
    f.req("order", K::count);
  } else {
    throw SchemaError(path + "/type: unknown check type '" + type + "'");
  }
  f.done();
}

}  // namespace detail

inline Certificate Certificate::from_json(const Json& j, const std::string& source,
                                          const std::filesystem::path& base_dir) {
  using K = detail::FieldKind;
  Certificate c;
  c.source = source;
  detail::Fields top(j, "");
  const int version = top.req("version", K::integer).get<int>();
  if (version != kCertificateVersion) throw SchemaError("/version: unsupported version " + std::to_string(version));

  if (const Json* m = top.opt("meta", K::object)) {
    detail::Fields mf(*m, "/meta");
    if (const Json* s = mf.opt("shape", K::string)) c.meta.shape = s->get<std::string>();
    if (const Json* s = mf.opt("tag", K::string)) c.meta.tag = s->get<std::string>();
    if (const Json* s = mf.opt("description", K::string)) c.meta.description = s->get<std::string>();
    if (const Json* s = mf.opt("tight", K::any)) {
      if (!s->is_boolean()) throw SchemaError("/meta/tight: expected a boolean");
      c.meta.tight = s->get<bool>();
    }
    mf.done();
  }

  auto group_from = [&](const Json& g, const std::string& path) {
    if (g.is_object() && g.contains("file")) {
      detail::Fields gf(g, path);
      const std::string file = gf.req("file", K::string).get<std::string>();
      gf.done();
      std::filesystem::path p = base_dir / file;
#ifdef GRPCERT_DATA_DIR
      if (!std::filesystem::exists(p)) p = std::filesystem::path(GRPCERT_DATA_DIR) / "groups" / file;
#endif
      if (!std::filesystem::exists(p)) throw SchemaError(path + "/file: no group file '" + file + "'");
      return load_group_file(p);
    }
    return parse_group_spec(g, path);
  };
  c.group = group_from(top.req("group", K::object), "/group");

  if (const Json* t = top.opt("targets", K::object)) {
    for (auto it = t->begin(); it != t->end(); ++it) c.targets.emplace(it.key(), group_from(*it, "/targets/" + it.key()));
  }

  std::set<std::string> names;
  for (const auto& [n, _] : c.group.bindings()) names.insert(n);
  if (const Json* d = top.opt("define", K::object)) {
    for (auto it = d->begin(); it != d->end(); ++it) {
      const std::string where = "/define/" + it.key();
      if (!detail::valid_name(it.key())) throw SchemaError(where + ": invalid name");
      if (!it->is_string()) throw SchemaError(where + ": expected a word");
      if (!names.insert(it.key()).second) throw SchemaError(where + ": name already defined");
      c.definitions.emplace_back(it.key(), it->get<std::string>());
    }
  }

  const Json& checks = top.req("checks", K::array);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string path = "/checks/" + std::to_string(i);
    detail::validate_check(checks[i], path, c.targets);
    CheckSpec spec;
    spec.index = i;
    spec.type = checks[i].at("type").get<std::string>();
    spec.id = checks[i].contains("id") ? checks[i].at("id").get<std::string>() : "#" + std::to_string(i + 1);
    if (!ids.insert(spec.id).second) throw SchemaError(path + "/id: duplicate id '" + spec.id + "'");
    spec.params = checks[i];
    c.checks.push_back(std::move(spec));
  }

  if (const Json* b = top.opt("bound", K::object)) {
    detail::Fields bf(*b, "/bound");
    for (const Json& id : bf.req("product", K::strings)) {
      const std::string s = id.get<std::string>();
      auto it = std::find_if(c.checks.begin(), c.checks.end(), [&](const CheckSpec& cs) { return cs.id == s; });
      if (it == c.checks.end()) throw SchemaError("/bound/product: unknown check '" + s + "'");
      if (!detail::is_bound_producing(it->type)) {
        throw SchemaError("/bound/product: check '" + s + "' of type " + it->type + " produces no bound");
      }
      c.bound_product.push_back(s);
    }
    if (const Json* s = bf.opt("subgroup", K::strings)) {
      for (const Json& w : *s) c.bound_subgroup.push_back(w.get<std::string>());
    }
    bf.done();
  }
  top.done();
  return c;
}

struct CheckRecord {
  std::size_t index = 0;
  std::string id;
  std::string type;
  CheckStatus status = CheckStatus::error;
  std::string detail;
  std::optional<BigInt> bound;
  Json data = Json::object();
};

struct CertificateReport {
  std::string source;
  std::vector<std::string> definition_failures;
  std::vector<CheckRecord> checks;
  std::optional<BigInt> bound;
  std::optional<std::string> shape;
  std::optional<BigInt> shape_order;
  std::string relation;  // "equal", "below", "above" or empty
  std::vector<std::string> warnings;
  bool passed = false;

  /// 0 pass, 3 when the only problems are checks that hit the closure cap,
  /// 1 otherwise.
  int exit_code() const {
    if (passed) return 0;
    const bool only_cap = definition_failures.empty() && relation != "above" &&
                          std::all_of(checks.begin(), checks.end(), [](const CheckRecord& r) {
                            return r.status == CheckStatus::pass || r.status == CheckStatus::cap;
                          });
    return only_cap ? 3 : 1;
  }

  /// One record per check and a closing summary record.
  std::vector<Json> records() const {
    std::vector<Json> out;
    for (const CheckRecord& r : checks) {
      Json j;
      j["record"] = "check";
      j["file"] = source;
      j["index"] = r.index;
      j["id"] = r.id;
      j["type"] = r.type;
      j["status"] = to_string(r.status);
      j["detail"] = r.detail;
      j["bound"] = r.bound ? Json(r.bound->str()) : Json(nullptr);
      if (!r.data.empty()) j["data"] = r.data;
      out.push_back(std::move(j));
    }
    Json s;
    s["record"] = "certificate";
    s["file"] = source;
    s["status"] = passed ? "pass" : "fail";
    s["checks"] = checks.size();
    s["failed"] = std::count_if(checks.begin(), checks.end(), [](const CheckRecord& r) { return r.status != CheckStatus::pass; });
    s["definition_failures"] = definition_failures;
    s["bound"] = bound ? Json(bound->str()) : Json(nullptr);
    s["shape"] = shape ? Json(*shape) : Json(nullptr);
    s["shape_order"] = shape_order ? Json(shape_order->str()) : Json(nullptr);
    s["relation"] = relation.empty() ? Json(nullptr) : Json(relation);
    s["warnings"] = warnings;
    out.push_back(std::move(s));
    return out;
  }

  std::string ndjson() const {
    std::string out;
    for (const Json& j : records()) out += j.dump() + "\n";
    return out;
  }

  /// First failing check, as "id (type): detail".
  std::string first_failure() const {
    for (const CheckRecord& r : checks) {
      if (r.status != CheckStatus::pass) return r.id + " (" + r.type + "): " + r.detail;
    }
    if (!definition_failures.empty()) return definition_failures.front();
    if (relation == "above") return "bound exceeds the order of the claimed shape";
    return {};
  }
};

struct VerifyOptions {
  std::size_t cap = kDefaultClosureCap;
  const OrderCatalog* catalog = nullptr;
  const PresentationLibrary* presentations = nullptr;
};

namespace detail {

class DependencyError : public Error {
 public:
  using Error::Error;
};

// Evaluates words against a certificate's resolved names.
class Resolver {
 public:
  Resolver(GroupContext context, std::map<std::string, std::string> failed)
      : context_(std::move(context)), failed_(std::move(failed)) {}

  const GroupContext& context() const noexcept { return context_; }

  Word parse(const std::string& text, const std::set<std::string>& free = {}) const {
    Word w = parse_word(text);
    for (const std::string& n : w.names()) {
      if (free.contains(n)) continue;
      if (auto it = failed_.find(n); it != failed_.end()) {
        throw DependencyError("depends on failed definition '" + n + "': " + it->second);
      }
    }
    return w;
  }

  Element eval(const std::string& text) const { return evaluate_word(parse(text), context_); }

  std::vector<Element> eval_all(const Json& arr) const {
    std::vector<Element> out;
    for (const Json& w : arr) out.push_back(eval(w.get<std::string>()));
    return out;
  }

 private:
  GroupContext context_;
  std::map<std::string, std::string> failed_;
};

struct CheckOutput {
  Verdict verdict;
  std::optional<BigInt> bound;
  Json data = Json::object();
};

inline Verdict compare_claim(const char* what, const BigInt& actual, const Json* claim) {
  if (claim && to_count(*claim) != actual) {
    return Verdict::fail(std::string(what) + " is " + actual.str() + ", claimed " + to_count(*claim).str());
  }
  return Verdict::pass("");
}

inline std::string join_names(const std::vector<std::string>& names, const std::vector<std::size_t>& idx) {
  std::string s = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + names[idx[i]];
  return s + "}";
}

class CheckRunner {
 public:
  CheckRunner(const Certificate& cert, const Resolver& res, const VerifyOptions& opts)
      : cert_(cert), res_(res), opts_(opts) {}

  CheckOutput run(const CheckSpec& spec) {
    const Json& j = spec.params;
    const std::string& t = spec.type;
    if (t == "check_elementary_abelian") return elementary_abelian(j);
    if (t == "check_purity") return purity(j);
    if (t == "check_normalizes") return {check_normalizes(res_.eval_all(j["actors"]), res_.eval_all(j["subgroup"]), opts_.cap)};
    if (t == "check_centralizes") return {check_centralizes(res_.eval_all(j["actors"]), res_.eval_all(j["targets"]))};
    if (t == "check_ext_lemma") return ext_lemma(j);
    if (t == "check_odd_ext") return odd_ext(j);
    if (t == "count_induced_automorphisms") return induced(j);
    if (t == "check_orbit_divisibility") return orbit(j);
    if (t == "check_hom_chain") return hom_chain(j);
    if (t == "exclusion_search") return exclusion(j);
    if (t == "check_relators") return relators(j);
    if (t == "certify_simple_image") return simple_image(j);
    if (t == "check_element_order") return element_order_check(j);
    if (t == "check_closure_order") return closure_order(j);
    throw CheckError("unknown check type " + t);
  }

 private:
  const EnumeratedGroup& ambient() {
    if (!ambient_) ambient_ = enumerate_closure(res_.context().elements(), res_.context().spec(), opts_.cap);
    return *ambient_;
  }

  CheckOutput elementary_abelian(const Json& j) {
    const auto p = j["p"].get<std::int64_t>();
    if (p < 2 || p > std::numeric_limits<std::uint32_t>::max()) return {Verdict::fail("p out of range")};
    const BigInt order = to_count(j["order"]);
    CheckOutput out{check_elementary_abelian(res_.eval_all(j["gens"]), static_cast<std::uint32_t>(p), order, opts_.cap)};
    if (out.verdict.passed) out.bound = order;
    return out;
  }

  CheckOutput purity(const Json& j) {
    const auto gens = res_.eval_all(j["gens"]);
    const Element base = res_.eval(j["base"].get<std::string>());
    std::vector<PurityWitness> ws;
    for (const Json& w : j["witnesses"]) {
      const std::string label = w["element"].get<std::string>();
      ws.push_back({label, res_.eval(label), res_.eval(w["conjugator"].get<std::string>())});
    }
    CheckOutput out{check_purity(gens, base, ws, opts_.cap)};
    out.data["witnesses"] = ws.size();
    return out;
  }

  CheckOutput ext_lemma(const Json& j) {
    std::optional<std::pair<std::uint32_t, std::uint32_t>> pp;
    if (j.contains("prime_power")) {
      const auto p = j["prime_power"]["p"].get<std::int64_t>();
      const auto n = j["prime_power"]["n"].get<std::int64_t>();
      if (p < 2 || n < 1 || p > (1 << 30) || n > 64) return {Verdict::fail("prime power out of range")};
      pp = std::pair{static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n)};
    }
    const auto r = check_ext_lemma(res_.eval_all(j["subgroup"]), res_.eval(j["element"].get<std::string>()), pp, opts_.cap);
    CheckOutput out;
    out.data["subgroup_order"] = r.subgroup_order;
    out.data["factor"] = r.factor.str();
    out.data["prime_power_branch"] = r.prime_power_branch;
    const auto* factor = j.contains("factor") ? &j["factor"] : nullptr;
    const auto* bound = j.contains("bound") ? &j["bound"] : nullptr;
    if (auto v = compare_claim("factor", r.factor, factor); !v.passed) return {v, std::nullopt, out.data};
    if (auto v = compare_claim("bound", r.bound, bound); !v.passed) return {v, std::nullopt, out.data};
    out.verdict = Verdict::pass(r.detail + "; order at least " + r.bound.str());
    out.bound = r.bound;
    return out;
  }

  CheckOutput odd_ext(const Json& j) {
    OddExtData d;
    const auto p = j["p"].get<std::int64_t>();
    if (p < 2 || p > (1 << 30)) return {Verdict::fail("p out of range")};
    d.p = static_cast<std::uint32_t>(p);
    d.x = res_.eval(j["x"].get<std::string>());
    d.y = res_.eval(j["y"].get<std::string>());
    d.ell = res_.eval(j["l"].get<std::string>());
    d.sigma = j.contains("sigma") ? res_.eval(j["sigma"].get<std::string>()) : res_.context().identity();
    d.g = res_.eval_all(j["g"]);
    d.h = res_.eval_all(j["h"]);
    d.ambient = j.contains("ambient") ? res_.eval_all(j["ambient"]) : res_.context().elements();

    const std::size_t list_size = 2 + 3 * d.g.size();
    std::vector<std::string> names{"x", "y"};
    for (std::size_t i = 0; i < d.g.size(); ++i) names.push_back("g" + std::to_string(i + 1));
    for (std::size_t i = 0; i < d.h.size(); ++i) names.push_back("h" + std::to_string(i + 1));
    for (std::size_t i = 0; i < d.h.size(); ++i) names.push_back("h" + std::to_string(i + 1) + "^s");
    if (j.contains("subsets")) {
      const Json& s = j["subsets"];
      if (s.is_string()) {
        if (list_size > 16) return {Verdict::fail("too many designated generators to take all subsets")};
        for (std::size_t mask = 0; mask < (std::size_t{1} << list_size); ++mask) {
          std::vector<std::size_t> sub;
          for (std::size_t i = 0; i < list_size; ++i) {
            if (mask >> i & 1) sub.push_back(i);
          }
          d.subsets.push_back(sub);
        }
      } else {
        for (const Json& sub : s) {
          std::vector<std::size_t> idx;
          for (const Json& n : sub) {
            auto it = std::find(names.begin(), names.end(), n.get<std::string>());
            if (it == names.end() || names.size() != list_size) {
              return {Verdict::fail("subset names '" + n.get<std::string>() + "', not in the designated list")};
            }
            idx.push_back(static_cast<std::size_t>(it - names.begin()));
          }
          d.subsets.push_back(idx);
        }
      }
    }
    const auto r = check_odd_ext(d, opts_.cap);
    if (!r.verdict.passed) return {r.verdict};
    CheckOutput out;
    Json subsets = Json::array();
    for (const auto& [sub, bound] : r.subset_bounds) {
      std::vector<Element> gens;
      for (std::size_t i : sub) gens.push_back(r.designated[i]);
      const std::size_t actual = enumerate_closure(gens, d.x.spec(), opts_.cap).order();
      if (BigInt(actual) < bound) {
        return {Verdict::fail("subset " + join_names(r.designated_names, sub) + " generates only " +
                              std::to_string(actual) + " elements, below " + bound.str())};
      }
      subsets.push_back(Json{{"subset", join_names(r.designated_names, sub)}, {"bound", bound.str()}, {"closure", actual}});
    }
    out.data["designated"] = r.designated_names;
    out.data["subsets"] = subsets;
    out.data["normal_subgroup_order"] = r.normal_subgroup_order;
    out.verdict = r.verdict;
    out.bound = r.generation_bound;
    return out;
  }

  CheckOutput induced(const Json& j) {
    const BigInt n = count_induced_automorphisms(res_.eval_all(j["actors"]), res_.eval_all(j["subgroup"]), opts_.cap);
    if (auto v = compare_claim("induced automorphism count", n, &j["count"]); !v.passed) return {v};
    return {Verdict::pass(n.str() + " induced automorphisms"), n};
  }

  CheckOutput orbit(const Json& j) {
    const BigInt claimed = to_count(j["orbit"]);
    const auto r = check_orbit_divisibility(res_.eval_all(j["actors"]), res_.eval(j["seed"].get<std::string>()), claimed, opts_.cap);
    CheckOutput out{r.verdict};
    if (r.verdict.passed) out.bound = claimed;
    return out;
  }

  CheckOutput hom_chain(const Json& j) {
    std::vector<HomLevel> levels;
    for (const Json& l : j["levels"]) {
      HomLevel level;
      level.generators = res_.eval_all(l["generators"]);
      if (l.contains("label")) level.label = l["label"].get<std::string>();
      if (l.contains("conjugation")) {
        level.kind = HomLevel::Kind::conjugation;
        level.action_on = res_.eval_all(l["conjugation"]);
      } else if (l.contains("map")) {
        level.kind = HomLevel::Kind::map;
        const GroupContext& target = cert_.targets.at(l["map"]["target"].get<std::string>());
        level.target = target.spec();
        for (const Json& w : l["map"]["images"]) level.images.push_back(evaluate_word(parse_word(w.get<std::string>()), target));
      }
      if (l.contains("image")) level.claimed_image = to_count(l["image"]);
      levels.push_back(std::move(level));
    }
    std::optional<BigInt> terminal;
    if (j.contains("terminal_order")) terminal = to_count(j["terminal_order"]);
    const auto r = check_hom_chain(levels, terminal, opts_.cap);
    CheckOutput out{r.verdict};
    Json images = Json::array();
    for (const BigInt& b : r.image_sizes) images.push_back(b.str());
    out.data["images"] = images;
    if (r.verdict.passed) {
      out.data["terminal_order"] = r.terminal_order.str();
      out.bound = r.bound;
    }
    return out;
  }

  CheckOutput exclusion(const Json& j) {
    const std::string free = j.contains("free") ? j["free"].get<std::string>() : "x";
    if (res_.context().contains(free)) return {Verdict::fail("free name '" + free + "' is already bound")};
    std::vector<Element> candidates;
    const Json& c = j["candidates"];
    if (c.is_array()) {
      candidates = res_.eval_all(c);
    } else {
      const BigInt want = to_count(c["order"]);
      std::vector<Element> cent;
      if (c.contains("centralizing")) cent = res_.eval_all(c["centralizing"]);
      for (const Element& e : ambient().elements()) {
        if (BigInt(element_order(e)) != want) continue;
        if (std::all_of(cent.begin(), cent.end(), [&](const Element& z) { return commute(e, z); })) candidates.push_back(e);
      }
    }
    std::vector<Word> probes;
    for (const Json& p : j["probes"]) probes.push_back(res_.parse(p.get<std::string>(), {free}));
    std::optional<std::set<std::uint64_t>> orders;
    const Json& o = j["orders"];
    if (o.is_string()) {
      if (const auto q = psl2_order_spec(o.get<std::string>())) orders = psl2_element_orders(*q);
    } else {
      orders.emplace();
      for (const Json& v : o) {
        const BigInt b = to_count(v);
        if (fits_u64(b)) orders->insert(static_cast<std::uint64_t>(b));
      }
    }
    const auto r = exclusion_search(candidates, probes, res_.context(), free, orders);
    CheckOutput out;
    out.data["candidates"] = candidates.size();
    out.data["survivors"] = r.survivors.size();
    const Json& e = j["expect"];
    const std::string summary = std::to_string(r.survivors.size()) + " of " + std::to_string(candidates.size()) + " candidates survive";
    bool ok;
    if (e.is_string()) {
      ok = e.get<std::string>() == "empty" ? r.survivors.empty() : !r.survivors.empty();
    } else {
      ok = r.survivors.size() == e.get<std::uint64_t>();
    }
    if (ok && e.is_string() && e.get<std::string>() == "empty" && candidates.empty()) {
      out.verdict = Verdict::pass(summary + " (vacuous: no candidates)");
    } else {
      out.verdict = ok ? Verdict::pass(summary) : Verdict::fail(summary + ", expected " + e.dump());
    }
    return out;
  }

  GroupContext binding_for(const Presentation& p, const Json& b) {
    GroupContext ctx(res_.context().spec());
    for (const std::string& g : p.generators) {
      if (!b.contains(g)) throw CheckError("binding lacks generator '" + g + "' of " + p.name);
      ctx.bind(g, res_.eval(b[g].get<std::string>()));
    }
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (std::find(p.generators.begin(), p.generators.end(), it.key()) == p.generators.end()) {
        throw CheckError("binding names '" + it.key() + "', not a generator of " + p.name);
      }
    }
    return ctx;
  }

  const Presentation& presentation(const Json& j) {
    const PresentationLibrary& lib = opts_.presentations ? *opts_.presentations : PresentationLibrary::builtin();
    return lib.at(j["presentation"].get<std::string>());
  }

  CheckOutput relators(const Json& j) {
    const Presentation& p = presentation(j);
    const auto r = check_relators(p, binding_for(p, j["binding"]));
    return {r.passed ? Verdict::pass(r.summary()) : Verdict::fail(r.summary())};
  }

  CheckOutput simple_image(const Json& j) {
    const Presentation& p = presentation(j);
    std::optional<BigInt> witness;
    if (j.contains("order_witness")) witness = to_count(j["order_witness"]);
    const Verdict v = certify_simple_image(p, binding_for(p, j["binding"]), opts_.cap, witness);
    CheckOutput out{v};
    if (v.passed) out.bound = p.order;
    return out;
  }

  CheckOutput element_order_check(const Json& j) {
    const std::uint64_t o = element_order(res_.eval(j["element"].get<std::string>()));
    if (auto v = compare_claim("element order", BigInt(o), &j["order"]); !v.passed) return {v};
    return {Verdict::pass("order " + std::to_string(o)), BigInt(o)};
  }

  CheckOutput closure_order(const Json& j) {
    const auto gens = res_.eval_all(j["gens"]);
    const std::size_t n = enumerate_closure(gens, res_.context().spec(), opts_.cap).order();
    if (auto v = compare_claim("closure order", BigInt(n), &j["order"]); !v.passed) return {v};
    return {Verdict::pass("closure of order " + std::to_string(n)), BigInt(n)};
  }

  const Certificate& cert_;
  const Resolver& res_;
  const VerifyOptions& opts_;
  std::optional<EnumeratedGroup> ambient_;
};

}  // namespace detail

/// Resolves definitions in order, runs every check in declaration order and
/// composes the bound named by the certificate.
inline CertificateReport verify_certificate(const Certificate& cert, const VerifyOptions& opts = {}) {
  CertificateReport report;
  report.source = cert.source;
  report.shape = cert.meta.shape;

  GroupContext ctx = cert.group;
  std::map<std::string, std::string> failed;
  for (const auto& [name, text] : cert.definitions) {
    try {
      Word w = parse_word(text);
      for (const std::string& n : w.names()) {
        if (auto it = failed.find(n); it != failed.end()) throw detail::DependencyError("depends on failed '" + n + "'");
      }
      ctx.bind(name, evaluate_word(w, ctx));
    } catch (const Error& e) {
      failed.emplace(name, e.what());
      report.definition_failures.push_back("definition '" + name + "': " + e.what());
    }
  }

  const detail::Resolver resolver(ctx, failed);
  detail::CheckRunner runner(cert, resolver, opts);
  for (const CheckSpec& spec : cert.checks) {
    CheckRecord rec;
    rec.index = spec.index;
    rec.id = spec.id;
    rec.type = spec.type;
    try {
      detail::CheckOutput out = runner.run(spec);
      rec.status = out.verdict.passed ? CheckStatus::pass : CheckStatus::fail;
      rec.detail = out.verdict.detail;
      rec.bound = out.verdict.passed ? out.bound : std::nullopt;
      rec.data = std::move(out.data);
    } catch (const detail::DependencyError& e) {
      rec.status = CheckStatus::error;
      rec.detail = e.what();
    } catch (const CapExceededError& e) {
      rec.status = CheckStatus::cap;
      rec.detail = e.what();
    } catch (const Error& e) {
      rec.status = CheckStatus::fail;
      rec.detail = e.what();
    }
    report.checks.push_back(std::move(rec));
  }

  const bool all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                    [](const CheckRecord& r) { return r.status == CheckStatus::pass; });
  if (cert.checks.empty()) report.warnings.push_back("no checks: passes vacuously with bound 1");
  if (cert.bound_product.empty() && !cert.checks.empty()) report.warnings.push_back("no bound composition given");
  if (all_pass) {
    BigInt bound = 1;
    for (const std::string& id : cert.bound_product) {
      for (const CheckRecord& r : report.checks) {
        if (r.id == id) bound *= *r.bound;
      }
    }
    report.bound = bound;
  }
  report.passed = all_pass && report.definition_failures.empty();

  if (cert.meta.shape) {
    try {
      const OrderCatalog& cat = opts.catalog ? *opts.catalog : OrderCatalog::builtin();
      report.shape_order = shape_order(*cert.meta.shape, cat);
      if (report.bound) {
        report.relation = *report.bound == *report.shape_order ? "equal" : *report.bound < *report.shape_order ? "below" : "above";
        if (report.relation == "above") report.passed = false;
      }
    } catch (const Error& e) {
      report.warnings.push_back(std::string("shape not evaluated: ") + e.what());
    }
  }
  return report;
}

struct SoundnessResult {
  bool checked = false;
  bool passed = true;
  std::size_t true_order = 0;
  std::string detail;
};

/// Enumerates the bound's subgroup and compares: bound <= true order, with
/// equality when the certificate claims tightness.
inline SoundnessResult oracle_soundness(const Certificate& cert, const CertificateReport& report,
                                        std::size_t cap = kDefaultClosureCap) {
  SoundnessResult s;
  if (cert.bound_subgroup.empty() || !report.bound) return s;
  GroupContext ctx = cert.group;
  for (const auto& [name, text] : cert.definitions) ctx.bind(name, evaluate_word(text, ctx));
  std::vector<Element> gens;
  for (const std::string& w : cert.bound_subgroup) gens.push_back(evaluate_word(w, ctx));
  s.checked = true;
  s.true_order = enumerate_closure(gens, ctx.spec(), cap).order();
  const BigInt t(s.true_order);
  if (*report.bound > t) {
    s.passed = false;
    s.detail = "bound " + report.bound->str() + " exceeds the true order " + t.str();
  } else if (cert.meta.tight && *report.bound != t) {
    s.passed = false;
    s.detail = "bound " + report.bound->str() + " is not tight; true order " + t.str();
  } else {
    s.detail = "bound " + report.bound->str() + (*report.bound == t ? " equals" : " is below") + " the true order " + t.str();
  }
  return s;
}

}  // namespace grpcert
