#include <doctest.h>

#include <map>
#include <set>

#include "structlaws/checks.hpp"
#include "structlaws/examples.hpp"

using namespace structlaws;

namespace {

// Separately coded count of closed basic terms of exact size.
class Counter {
 public:
  explicit Counter(const Signature& sig) : sig_(sig) {}

  std::uint64_t count(const Sort& sort, const Context& ctx, std::size_t n) {
    if (n == 0) return 0;
    auto key = std::make_tuple(sort, std::vector<Index>(ctx.counts.begin(), ctx.counts.end()), n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    if (n == 1)
      for (KindId k = 0; k < sig_.kinds.size(); ++k)
        if (!sig_.kinds[k].generic && sig_.var_sort[k] == sort) total += ctx[k];
    for (const auto& op : sig_.ops) {
      std::vector<Nat> nats(op.nat_params, 0);
      auto each = [&](auto&& self, std::size_t i) -> void {
        if (i == nats.size()) {
          if (instantiate(op.result, nats) == sort) total += children(op, nats, ctx, 0, n - 1);
          return;
        }
        for (Nat v = 0; v <= 2; ++v) {
          nats[i] = v;
          self(self, i + 1);
        }
      };
      each(each, 0);
    }
    memo_[key] = total;
    return total;
  }

 private:
  std::uint64_t children(const OpSchema& op, const std::vector<Nat>& nats, const Context& ctx, std::size_t i,
                         std::size_t budget) {
    if (i == op.args.size()) return budget == 0 ? 1 : 0;
    if (const auto* r = std::get_if<RefArgSpec>(&op.args[i])) {
      if (budget == 0) return 0;
      return ctx[r->kind] * children(op, nats, ctx, i + 1, budget - 1);
    }
    const auto& sub = std::get<SubArgSpec>(op.args[i]);
    Context inner = ctx;
    for (const auto& b : sub.binders) inner.counts[b.kind] += b.count.eval(nats);
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= budget; ++k) {
      std::uint64_t here = count(instantiate(sub.sort, nats), inner, k);
      if (here) total += here * children(op, nats, ctx, i + 1, budget - k);
    }
    return total;
  }

  const Signature& sig_;
  std::map<std::tuple<Sort, std::vector<Index>, std::size_t>, std::uint64_t> memo_;
};

std::string show(const ExampleBundle& b, const TermPtr& t) { return print_term(b.signature(), &b.stack.aux(), *t); }

}  // namespace

TEST_CASE("size-ordered enumeration") {
  ExampleBundle p = build("peano");
  Sort nat{0, std::nullopt};
  auto ts = enum_terms(p.stack, EnumSpec{nat, Context{{0}}, 3, true, false});
  REQUIRE(ts.size() == 3);
  CHECK(show(p, ts[0]) == "(op z)");
  CHECK(show(p, ts[1]) == "(op s (op z))");
  CHECK(show(p, ts[2]) == "(op s (op s (op z)))");

  ExampleBundle db = build("lambda-debruijn");
  Sort ps{0, std::nullopt};
  auto one = enum_terms(db.stack, EnumSpec{ps, Context{{1}}, 1, true, false});
  REQUIRE(one.size() == 1);
  CHECK(show(db, one[0]) == "(var v 0)");
  auto closed = enum_terms(db.stack, EnumSpec{ps, Context{{0}}, 2, true, false});
  REQUIRE(closed.size() == 1);
  CHECK(show(db, closed[0]) == "(op lam (var v 0))");
}

TEST_CASE("enumeration agrees with an independent counter") {
  for (const auto& name : bundle_names()) {
    CAPTURE(name);
    ExampleBundle b = build(name);
    Counter counter(b.signature());
    for (const Sort& sort : all_sorts(b.signature(), 2))
      for (const Context& ctx : contexts_upto(b.signature(), 1)) {
        Enumerator en(b.stack);
        for (std::size_t n = 1; n <= 7; ++n) {
          CAPTURE(n);
          CHECK(en.exact(sort, ctx, n).size() == counter.count(sort, ctx, n));
        }
      }
  }
}

TEST_CASE("enumeration is strictly increasing") {
  for (const auto& name : bundle_names()) {
    CAPTURE(name);
    ExampleBundle b = build(name);
    for (const Sort& sort : all_sorts(b.signature(), 2)) {
      auto ts = enum_terms(b.stack, EnumSpec{sort, contexts_upto(b.signature(), 1).back(), 6, true, false});
      for (std::size_t i = 1; i < ts.size(); ++i) CHECK(compare(*ts[i - 1], *ts[i]) < 0);
    }
  }
}

TEST_CASE("enumeration with aux nodes scope-checks") {
  ExampleBundle b = build("lambda-presheaf");
  Sort p{0, std::nullopt};
  Context c{{1}};
  auto ts = enum_terms(b.stack, EnumSpec{p, c, 4, true, true});
  std::size_t with_aux = 0;
  for (const auto& t : ts) {
    CHECK(check_scope(b.signature(), &b.stack.aux(), c, p, *t));
    if (!t->aux_free()) ++with_aux;
  }
  CHECK(with_aux > 0);
}

TEST_CASE("environments") {
  CHECK(enum_envs(0, 0, {}).size() == 1);
  ExampleBundle b = build("lambda-presheaf");
  Sort p{0, std::nullopt};
  auto entries = enum_terms(b.stack, EnumSpec{p, Context{{1}}, 2, true, false});
  CHECK(entries.size() == 3);
  CHECK(enum_envs(0, 1, entries).size() == entries.size());
  CHECK(enum_envs(0, 2, entries).size() == entries.size() * entries.size());

  auto senvs = enum_shift_envs(2, 1, entries);
  REQUIRE(!senvs.empty());
  CHECK(senvs[0].prefix.empty());
  CHECK(senvs[0].shift == 0);
  CHECK(senvs.size() == 2 * (1 + 3 + 9));
  auto rens = enum_shift_rens(1, 2, 2);
  CHECK(rens.size() == 3 * (1 + 2));
  CHECK(rens[0].prefix.empty());
  CHECK(rens[0].shift == 0);
}

TEST_CASE("seeded sampling") {
  ExampleBundle p = build("peano");
  Sort nat{0, std::nullopt};
  EnumSpec spec{nat, Context{{0}}, 3, true, false};
  auto all = enum_terms(p.stack, spec);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TermPtr t = rand_term(p.stack, spec, seed);
    CHECK(term_eq(t, rand_term(p.stack, spec, seed)));
    bool found = false;
    for (const auto& u : all) found = found || term_eq(t, u);
    CHECK(found);
  }
  EnumSpec empty{nat, Context{{0}}, 0, true, false};
  CHECK_THROWS_AS(rand_term(p.stack, empty, 1), EmptyClass);
}

TEST_CASE("sampling covers small lambda terms") {
  ExampleBundle b = build("lambda-presheaf");
  Sort p{0, std::nullopt};
  EnumSpec spec{p, Context{{0}}, 6, true, false};
  auto all = enum_terms(b.stack, spec);
  std::set<TermPtr, TermLess> seen;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) seen.insert(rand_term(b.stack, spec, seed));
  CHECK(seen.size() == all.size());
}

TEST_CASE("uniform_index stays in range") {
  std::mt19937_64 gen(7);
  for (std::uint64_t n : {1ull, 2ull, 3ull, 1000ull, 1ull << 40})
    for (int i = 0; i < 200; ++i) CHECK(uniform_index(gen, n) < n);
}

TEST_CASE("instance spaces") {
  ExampleBundle p = build("peano");
  Enumerator en(p.stack);
  Bounds b;
  b.size = 3;
  b.param_size = 2;
  InstanceSpace space(en, p.stack.aux().at(*p.stack.aux().find("add")), b);
  CHECK(space.size() == 3 * 2);
  InstanceValue v = space.at(0);
  CHECK(v.main->size() == 1);
  CHECK(v.params.size() == 1);
}

TEST_CASE("reports") {
  Report r = run_indexed("evens", 100, 4, [](std::uint64_t i) -> std::optional<Counterexample> {
    if (i % 2) return std::nullopt;
    return Counterexample{std::to_string(i), "a", "b"};
  });
  CHECK(r.instances == 100);
  CHECK(r.failures == 50);
  REQUIRE(r.counterexamples.size() == kMaxCounterexamples);
  CHECK(r.counterexamples[0].inputs == "0");
  CHECK(r.counterexamples[1].inputs == "2");
  Report serial = run_indexed("evens", 100, 1, [](std::uint64_t i) -> std::optional<Counterexample> {
    if (i % 2) return std::nullopt;
    return Counterexample{std::to_string(i), "a", "b"};
  });
  CHECK(report_json(serial, false) == report_json(r, false));
  CHECK(report_json(r, false).find("\"elapsed_ms\": null") != std::string::npos);

  Report a, b;
  a.name = "a";
  a.instances = 2;
  b.name = "b";
  b.instances = 3;
  b.failures = 1;
  b.counterexamples.push_back({"x", "1", "2"});
  Report m = merge_reports("all", {a, b});
  CHECK(m.instances == 5);
  CHECK(m.failures == 1);
  CHECK(m.counterexamples[0].inputs == "b: x");
  CHECK_FALSE(m.passed());
}
