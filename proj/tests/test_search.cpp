#include <catch_amalgamated.hpp>

#include "grpcert/search.hpp"
#include "grpcert/word.hpp"

using namespace grpcert;

namespace {

GroupContext a5() {
  GroupContext ctx(BackendSpec::permutations(5));
  ctx.bind_text("a", "(1 2)(3 4)");
  ctx.bind_text("b", "(1 3 5)");
  return ctx;
}

GroupContext s5() {
  GroupContext ctx(BackendSpec::permutations(5));
  ctx.bind_text("s", "(1 2)");
  ctx.bind_text("t", "(1 2 3 4 5)");
  return ctx;
}

// Re-evaluates a program through the word parser.
Element replay(GroupContext ctx, const SearchResult& r) {
  for (const SlpStep& st : r.program) ctx.rebind(st.name, evaluate_word(st.definition(), ctx));
  return ctx.at(r.name);
}

}  // namespace

TEST_CASE("product replacement is deterministic", "[search]") {
  const GroupContext ctx = a5();
  ProductReplacement x(ctx, {}, SearchOptions{.seed = 7});
  ProductReplacement y(ctx, {}, SearchOptions{.seed = 7});
  ProductReplacement z(ctx, {}, SearchOptions{.seed = 8});
  bool differs = false;
  for (int i = 0; i < 200; ++i) {
    const Element e = x.next();
    CHECK(e == y.next());
    differs |= !(e == z.next());
  }
  CHECK(differs);
}

TEST_CASE("random stream setup", "[search]") {
  GroupContext one(BackendSpec::permutations(4));
  one.bind_text("a", "(1 2 3 4)");
  CHECK_THROWS_AS(ProductReplacement(one, {}, SearchOptions{}), Error);

  GroupContext s4(BackendSpec::permutations(4));
  s4.bind_text("a", "(1 2)");
  s4.bind_text("b", "(1 2 3 4)");
  const auto g = enumerate_closure(s4.elements(), s4.spec());
  ProductReplacement pr(s4, {}, SearchOptions{.seed = 1});
  for (int i = 0; i < 100; ++i) CHECK(g.contains(pr.next()));

  GroupContext sym5 = s5();
  CHECK(find_element_of_order(sym5, {}, 6).status == SearchStatus::found);
  const auto seven = find_element_of_order(sym5, {}, 7, SearchOptions{.max_draws = 1000});
  CHECK(seven.status == SearchStatus::inconclusive);
  CHECK(seven.note.find("1000 draws") != std::string::npos);
}

TEST_CASE("draws stay in the group and cover it", "[search]") {
  const GroupContext ctx = a5();
  const auto g = enumerate_closure(ctx.elements(), ctx.spec());
  ProductReplacement pr(ctx, {}, SearchOptions{.seed = 3});
  std::set<std::size_t> seen;
  for (int i = 0; i < 3000; ++i) {
    const auto idx = g.index_of(pr.next());
    REQUIRE(idx);
    seen.insert(*idx);
  }
  CHECK(seen.size() == 60);
}

TEST_CASE("element of a given order", "[search]") {
  const GroupContext ctx = a5();
  for (std::uint64_t order : {1u, 2u, 3u, 5u}) {
    const auto r = find_element_of_order(ctx, {}, order, SearchOptions{.seed = order});
    REQUIRE(r.status == SearchStatus::found);
    CHECK(element_order(*r.element) == order);
    if (order > 1) CHECK(replay(ctx, r) == *r.element);
  }
  const auto none = find_element_of_order(ctx, {}, 4, SearchOptions{.seed = 1, .max_draws = 500});
  CHECK(none.status == SearchStatus::inconclusive);
  CHECK(none.draws == 500);
}

TEST_CASE("conjugator search", "[search]") {
  const GroupContext ctx = s5();
  const Element x = parse_permutation("(1 2 3)", 5);
  const Element y = parse_permutation("(2 5 4)", 5);
  const auto r = find_conjugator(ctx, {}, x, y, SearchOptions{.seed = 2});
  REQUIRE(r.status == SearchStatus::found);
  CHECK(conjugate(x, *r.element) == y);
  CHECK(conjugate(x, replay(ctx, r)) == y);
  CHECK(oracle_cross_check(r, ctx, x, y) == "oracle agrees");

  CHECK(find_conjugator(ctx, {}, x, x).status == SearchStatus::found);
  const auto diff = find_conjugator(ctx, {}, x, parse_permutation("(1 2)", 5));
  CHECK(diff.status == SearchStatus::inconclusive);

  // Same cycle type, but the two 5-cycle classes of A5 are distinct.
  const GroupContext alt = a5();
  const Element c1 = parse_permutation("(1 2 3 4 5)", 5);
  const Element c2 = parse_permutation("(1 2 3 5 4)", 5);
  const auto split = find_conjugator(alt, {}, c1, c2, SearchOptions{.seed = 4, .max_draws = 2000});
  CHECK(split.status == SearchStatus::inconclusive);
  CHECK(oracle_cross_check(split, alt, c1, c2) == "oracle confirms the elements are not conjugate");
}

TEST_CASE("conjugator search in a matrix group", "[search]") {
  GroupContext ctx(BackendSpec::matrices(3, 5));
  ctx.bind_text("a", "[[1,1,1],[0,1,2],[0,0,1]]");
  ctx.bind_text("b", "[[0,0,1],[0,4,0],[1,0,0]]");
  const Element x = ctx.at("a");
  const Element y = conjugate(x, evaluate_word("b a b a^2", ctx));
  const auto r = find_conjugator(ctx, {}, x, y, SearchOptions{.seed = 9});
  REQUIRE(r.status == SearchStatus::found);
  CHECK(conjugate(x, replay(ctx, r)) == y);
}
