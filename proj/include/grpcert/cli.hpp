#pragma once

// Command-line front end.
//
//   grpcert verify PATH...            certificates or directories of *.json
//   grpcert order SHAPE [--tree]
//   grpcert oracle GROUP QUERY [ARG...]  order | classes | normalizer | centralizer | conjugate
//   grpcert search GROUP order N | conjugate X Y
//   grpcert corpus [--dir DIR]        verify the shipped corpus and check every bound by enumeration
//
// Exit codes: 0 pass, 1 a check failed, 2 parse or schema error, 3 closure cap exceeded.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "grpcert/certificate.hpp"
#include "grpcert/search.hpp"

namespace grpcert::cli {

enum ExitCode { kPass = 0, kCheckFailed = 1, kParseError = 2, kCapExceeded = 3 };

struct Options {
  std::size_t cap = kDefaultClosureCap;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string report;
  std::string catalog;
  bool tree = false;
  std::size_t max_draws = 10000;
  std::size_t slots = 10;
};

namespace detail {

inline std::vector<std::filesystem::path> expand_paths(const std::vector<std::string>& inputs) {
  std::vector<std::filesystem::path> out;
  for (const std::string& in : inputs) {
    const std::filesystem::path p(in);
    if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

inline OrderCatalog catalog_for(const Options& o) {
  OrderCatalog cat = OrderCatalog::builtin();
  if (!o.catalog.empty()) {
    for (const auto& [name, order] : OrderCatalog::load(o.catalog).entries()) cat.add(name, order);
  }
  return cat;
}

// Bare names such as "m11" resolve against the shipped group files.
inline GroupContext group_arg(const std::string& name) {
  std::filesystem::path p(name);
#ifdef GRPCERT_DATA_DIR
  if (!std::filesystem::exists(p)) {
    const std::filesystem::path dir = std::filesystem::path(GRPCERT_DATA_DIR) / "groups";
    p = std::filesystem::exists(dir / name) ? dir / name : dir / (name + ".json");
  }
#endif
  return load_group_file(p);
}

// Element arguments: element text first, then a word over the group's names.
inline Element element_arg(const std::string& text, const GroupContext& ctx) {
  try {
    return parse_element(text, ctx.spec());
  } catch (const Error&) {
    return evaluate_word(text, ctx);
  }
}

struct FileResult {
  std::string path;
  std::optional<Certificate> cert;
  std::optional<CertificateReport> report;
  std::string error;
  int exit_code = kPass;
  double seconds = 0;
};

inline FileResult verify_one(const std::filesystem::path& path, const VerifyOptions& vo) {
  FileResult r;
  r.path = path.string();
  const auto start = std::chrono::steady_clock::now();
  try {
    r.cert = Certificate::load(path);
    r.report = verify_certificate(*r.cert, vo);
    r.exit_code = r.report->exit_code();
  } catch (const CapExceededError& e) {
    r.error = e.what();
    r.exit_code = kCapExceeded;
  } catch (const Error& e) {
    r.error = e.what();
    r.exit_code = kParseError;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<FileResult> verify_all(const std::vector<std::filesystem::path>& paths, const VerifyOptions& vo,
                                          unsigned jobs) {
  std::vector<FileResult> results(paths.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, paths.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < paths.size();) results[i] = verify_one(paths[i], vo);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

// Schema errors dominate, then failed checks, then cap exhaustion.
inline int combine(const std::vector<int>& codes) {
  for (int c : {kParseError, kCheckFailed, kCapExceeded}) {
    if (std::find(codes.begin(), codes.end(), c) != codes.end()) return c;
  }
  return kPass;
}

inline std::string error_record(const FileResult& r) {
  Json j;
  j["record"] = "error";
  j["file"] = r.path;
  j["status"] = r.exit_code == kCapExceeded ? "cap" : "error";
  j["detail"] = r.error;
  return j.dump() + "\n";
}

inline void write_report(const std::string& text, const Options& o, std::ostream& out) {
  if (o.report.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.report, std::ios::binary);
  if (!f) throw Error("cannot write report '" + o.report + "'");
  f << text;
}

inline std::string summary_line(const FileResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
  if (!r.report) return "ERROR " + r.path + ": " + r.error;
  const CertificateReport& rep = *r.report;
  std::string s = (rep.passed ? "PASS  " : "FAIL  ") + r.path;
  if (rep.bound) s += "  bound " + rep.bound->str();
  if (rep.shape_order) {
    s += "  shape " + *rep.shape + " = " + rep.shape_order->str();
    if (!rep.relation.empty()) s += " (" + rep.relation + ")";
  }
  if (!rep.passed) s += "\n      " + rep.first_failure();
  for (const std::string& w : rep.warnings) s += "\n      warning: " + w;
  return s + "  [" + secs + "]";
}

inline int cmd_verify(const std::vector<std::string>& inputs, const Options& o, std::ostream& out, std::ostream& err) {
  const OrderCatalog cat = catalog_for(o);
  VerifyOptions vo{o.cap, &cat, nullptr};
  const auto paths = expand_paths(inputs);
  if (paths.empty()) {
    err << "no certificates given\n";
    return kParseError;
  }
  const auto results = verify_all(paths, vo, o.jobs);
  std::string ndjson;
  std::vector<int> codes;
  std::size_t passed = 0;
  for (const FileResult& r : results) {
    ndjson += r.report ? r.report->ndjson() : error_record(r);
    codes.push_back(r.exit_code);
    passed += r.exit_code == kPass;
    err << summary_line(r) << "\n";
  }
  write_report(ndjson, o, out);
  err << passed << " of " << results.size() << " certificates passed\n";
  return combine(codes);
}

inline int cmd_corpus(const std::string& dir, const Options& o, std::ostream& out, std::ostream& err) {
  const OrderCatalog cat = catalog_for(o);
  VerifyOptions vo{o.cap, &cat, nullptr};
  const auto paths = expand_paths({dir});
  if (paths.empty()) {
    err << "no certificates in " << dir << "\n";
    return kParseError;
  }
  const auto results = verify_all(paths, vo, o.jobs);
  std::string ndjson;
  std::vector<int> codes;
  std::set<std::string> types;
  for (const FileResult& r : results) {
    ndjson += r.report ? r.report->ndjson() : error_record(r);
    err << summary_line(r) << "\n";
    int code = r.exit_code;
    if (r.report && r.report->passed) {
      for (const CheckRecord& c : r.report->checks) types.insert(c.type);
      try {
        const auto s = oracle_soundness(*r.cert, *r.report, o.cap);
        Json j;
        j["record"] = "soundness";
        j["file"] = r.path;
        j["checked"] = s.checked;
        j["status"] = s.passed ? "pass" : "fail";
        j["detail"] = s.detail;
        ndjson += j.dump() + "\n";
        if (s.checked) err << "      oracle: " << s.detail << "\n";
        if (!s.passed) code = kCheckFailed;
      } catch (const CapExceededError& e) {
        err << "      oracle: " << e.what() << "\n";
        code = kCapExceeded;
      }
    }
    codes.push_back(code);
  }
  write_report(ndjson, o, out);
  err << results.size() << " certificates, " << types.size() << " check types exercised\n";
  return combine(codes);
}

inline int cmd_order(const std::string& shape, const Options& o, std::ostream& out, std::ostream& err) {
  const OrderCatalog cat = catalog_for(o);
  const ParsedShape parsed = parse_shape(shape);
  for (const std::string& w : parsed.warnings) err << "warning: " << w << "\n";
  out << shape_order(parsed.expr, cat).str() << "\n";
  if (o.tree) out << factor_tree(parsed.expr, cat);
  return kPass;
}

inline int cmd_oracle(const std::string& group_file, const std::string& query, const std::vector<std::string>& args,
                      const Options& o, std::ostream& out) {
  const GroupContext ctx = group_arg(group_file);
  const auto g = enumerate_closure(ctx.elements(), ctx.spec(), o.cap);
  std::vector<Element> elems;
  for (const std::string& a : args) elems.push_back(detail::element_arg(a, ctx));
  if (query == "order") {
    out << g.order() << "\n";
  } else if (query == "classes") {
    const auto classes = conjugacy_classes(g);
    out << classes.size() << "\n";
    for (const auto& c : classes) {
      out << c.size() << "\t" << fingerprint(g.elements()[c.front()]).to_string() << "\t"
          << format_element(g.elements()[c.front()]) << "\n";
    }
  } else if (query == "normalizer" || query == "centralizer") {
    if (elems.empty()) throw Error(query + " needs at least one element");
    const auto sub = query == "normalizer" ? normalizer(g, elems) : centralizer(g, elems);
    out << sub.order() << "\n";
    for (const Element& e : sub.generators()) out << format_element(e) << "\n";
  } else if (query == "conjugate") {
    if (elems.size() != 2) throw Error("conjugate needs two elements");
    const auto c = is_conjugate(g, elems[0], elems[1]);
    out << (c ? "conjugate by " + format_element(*c) : std::string("not conjugate")) << "\n";
  } else {
    throw Error("unknown oracle query '" + query + "'");
  }
  return kPass;
}

inline int cmd_search(const std::string& group_file, const std::string& what, const std::vector<std::string>& args,
                      const Options& o, std::ostream& out, std::ostream& err) {
  const GroupContext ctx = group_arg(group_file);
  const SearchOptions so{o.seed, o.slots, 50, o.max_draws};
  SearchResult r;
  std::optional<std::pair<Element, Element>> pair;
  if (what == "order") {
    if (args.size() != 1) throw Error("search order needs one integer");
    r = find_element_of_order(ctx, {}, std::stoull(args[0]), so);
  } else if (what == "conjugate") {
    if (args.size() != 2) throw Error("search conjugate needs two elements");
    pair.emplace(detail::element_arg(args[0], ctx), detail::element_arg(args[1], ctx));
    r = find_conjugator(ctx, {}, pair->first, pair->second, so);
  } else {
    throw Error("unknown search '" + what + "'");
  }
  if (r.status == SearchStatus::found) {
    out << "found after " << r.draws << " draws\n";
    out << "# element " << format_element(*r.element) << "\n";
    out << format_program(r.program);
    if (!r.name.empty()) out << "result = " << r.name << "\n";
  } else {
    out << "inconclusive: " << r.note << "\n";
  }
  if (pair && r.status == SearchStatus::inconclusive) {
    try {
      err << oracle_cross_check(r, ctx, pair->first, pair->second, o.cap) << "\n";
    } catch (const CapExceededError&) {
      err << "group too large for an oracle cross-check\n";
    }
  }
  return r.status == SearchStatus::found ? kPass : kCheckFailed;
}

}  // namespace detail

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact verification of subgroup-order certificates for finite groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--cap", o.cap, "closure cap in elements")->capture_default_str();
  app.add_option("--seed", o.seed, "random search seed")->capture_default_str();
  app.add_option("--jobs,-j", o.jobs, "certificates verified concurrently (0 = one per CPU)");
  app.add_option("--report", o.report, "write the NDJSON report here instead of standard output");
  app.add_option("--catalog", o.catalog, "extra name<TAB>order catalog");
  app.add_option("--max-draws", o.max_draws, "random search budget")->capture_default_str();
  app.add_option("--slots", o.slots, "product replacement slots")->capture_default_str();

  std::vector<std::string> verify_paths;
  auto* verify = app.add_subcommand("verify", "verify certificate files");
  verify->add_option("paths", verify_paths, "certificate files or directories")->required();

  std::string shape;
  auto* order = app.add_subcommand("order", "exact order of a shape");
  order->add_option("shape", shape)->required();
  order->add_flag("--tree", o.tree, "print the factor tree");

  std::string group_file, query;
  std::vector<std::string> args;
  auto* oracle = app.add_subcommand("oracle", "brute-force queries on an enumerated group");
  oracle->add_option("group", group_file)->required();
  oracle->add_option("query", query, "order | classes | normalizer | centralizer | conjugate")->required();
  oracle->add_option("args", args);

  auto* search = app.add_subcommand("search", "seeded random search");
  search->add_option("group", group_file)->required();
  search->add_option("what", query, "order | conjugate")->required();
  search->add_option("args", args);

#ifdef GRPCERT_DATA_DIR
  std::string corpus_dir = (std::filesystem::path(GRPCERT_DATA_DIR).parent_path() / "corpus").string();
#else
  std::string corpus_dir = "corpus";
#endif
  auto* corpus = app.add_subcommand("corpus", "verify the shipped corpus against the oracle");
  corpus->add_option("--dir", corpus_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kParseError;
  }
  try {
    if (*verify) return detail::cmd_verify(verify_paths, o, out, err);
    if (*order) return detail::cmd_order(shape, o, out, err);
    if (*oracle) return detail::cmd_oracle(group_file, query, args, o, out);
    if (*search) return detail::cmd_search(group_file, query, args, o, out, err);
    if (*corpus) return detail::cmd_corpus(corpus_dir, o, out, err);
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  return kParseError;
}

}  // namespace grpcert::cli
