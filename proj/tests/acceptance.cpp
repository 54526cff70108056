// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "structlaws/checks.hpp"
#include "structlaws/cli.hpp"
#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

using namespace structlaws;

namespace {

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1fs", s);
  std::cout << "[" << (o.pass ? "PASS" : "FAIL") << "] " << n << ". " << title << ": " << o.detail << " (" << secs
            << ")" << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string summary(const Report& r) {
  std::string s = std::to_string(r.instances) + " instances, " + std::to_string(r.failures) + " counterexamples";
  if (!r.counterexamples.empty()) s += "; first: " + r.counterexamples.front().inputs;
  return s;
}

Bounds bounds(std::size_t size, std::size_t param_size, Index ctx, Index prefix = 2, Index shift = 1) {
  Bounds b;
  b.size = size;
  b.param_size = param_size;
  b.ctx = ctx;
  b.prefix = prefix;
  b.shift = shift;
  return b;
}

// Reports for one aux operator only.
Report crosscheck_one(const ExampleBundle& b, const std::string& aux, const Bounds& bd) {
  ExampleBundle only = b;
  only.oracles.clear();
  for (const auto& o : b.oracles)
    if (o.aux == aux) only.oracles.push_back(o);
  return crosscheck(only, bd, jobs());
}

Outcome peano_arithmetic() {
  auto t0 = std::chrono::steady_clock::now();
  ExampleBundle p = build("peano");
  EnumOptions o;
  o.aux_allowed = true;
  Enumerator en(p.stack, o);
  auto terms = en.upto(Sort{0, std::nullopt}, Context{{0}}, 8);
  Report r = run_indexed("peano", terms.size(), jobs(), [&](std::uint64_t i) -> std::optional<Counterexample> {
    const TermPtr& t = terms[i];
    TermPtr n = normalize(p.stack, t, Context{{0}});
    std::uint64_t want = peano_value(p.stack, *t);
    if (term_eq(n, peano_numeral(p.signature(), want))) return std::nullopt;
    return Counterexample{print_term(p.signature(), &p.stack.aux(), *t), std::to_string(want),
                          print_term(p.signature(), &p.stack.aux(), *n)};
  });
  double s = seconds_since(t0);
  return {r.passed() && s < 10, summary(r) + ", runtime limit 10s"};
}

Outcome admissibility() {
  bool ok = true;
  std::string detail;
  for (const auto& name : bundle_names()) {
    auto t0 = std::chrono::steady_clock::now();
    ExampleBundle b = build(name);
    Report r = check_admissible(b.stack, bounds(6, 6, 1, 1, 1), jobs());
    double s = seconds_since(t0);
    ok = ok && r.passed() && s < 60;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1fs", s);
    detail += name + " " + std::to_string(r.instances) + "/" + std::to_string(r.failures) + " " + secs + "; ";
  }
  return {ok, detail + "instances/counterexamples, main and params size <= 6, limit 60s each"};
}

Outcome presheaf_oracle() {
  ExampleBundle b = build("lambda-presheaf");
  Report r = crosscheck_one(b, "subst", bounds(5, 3, 2));
  return {r.passed() && r.instances > 0, summary(r) + " (terms <= 5, contexts <= 2, entries <= 3)"};
}

Outcome debruijn_oracles() {
  ExampleBundle b = build("lambda-debruijn");
  Bounds bd = bounds(5, 3, 2, 3, 2);
  Report ren = crosscheck_one(b, "ren", bd);
  Report sub = crosscheck_one(b, "subst", bd);
  return {ren.passed() && sub.passed() && ren.instances > 0 && sub.instances > 0,
          "ren " + summary(ren) + "; subst " + summary(sub) + " (terms <= 5, free indices < 2, prefix <= 3, shift <= 2)"};
}

// Exhaustive benign plus coherence for both sides on one system.
struct SystemResult {
  bool ok = true;
  std::string detail;
};

SystemResult system_checks(const ExampleBundle& b, const EquationSystem& eq, const Bounds& benign_bounds,
                           const Bounds& coherence_bounds) {
  SystemResult out;
  Report l = check_coherence(b.stack, eq, Side::Left, coherence_bounds, jobs());
  Report r = check_coherence(b.stack, eq, Side::Right, coherence_bounds, jobs());
  CoherenceStatus cs{l.passed(), r.passed()};
  Report bn = check_benign(b.stack, eq, benign_bounds, jobs(), &cs);
  out.ok = l.passed() && r.passed() && bn.passed() && bn.instances > 0;
  out.detail = b.name + " " + eq.name + ": benign " + std::to_string(bn.instances) + "/" + std::to_string(bn.failures) +
               ", coherence " + std::to_string(l.instances + r.instances) + "/" +
               std::to_string(l.failures + r.failures) + "; ";
  return out;
}

const EquationSystem& system_named(const ExampleBundle& b, const std::string& name) {
  for (const auto& e : b.systems)
    if (e.name == name) return e;
  throw Error("bundle " + b.name + " has no system " + name);
}

// Uniform samples over the full instance space in addition to an exhaustive
// run at reduced bounds.
Report sampled_benign(const ExampleBundle& b, const EquationSystem& eq, const Bounds& bd, std::uint64_t samples,
                      std::uint64_t seed, std::uint64_t* space_size) {
  Enumerator en(b.stack);
  InstanceSpace space(en, eq.schema(), bd);
  *space_size = space.size();
  std::mt19937_64 gen(seed);
  std::vector<std::uint64_t> picks(samples);
  for (auto& p : picks) p = uniform_index(gen, space.size());
  const auto& st = b.stack;
  return run_indexed("sampled benign " + eq.name, samples, jobs(), [&](std::uint64_t i) -> std::optional<Counterexample> {
    InstanceValue v = space.at(picks[i]);
    TermPtr lhs = interp_eval(st, eq, Side::Left, v.nats, v.main, v.params, v.ctx);
    TermPtr rhs = interp_eval(st, eq, Side::Right, v.nats, v.main, v.params, v.ctx);
    if (term_eq(lhs, rhs)) return std::nullopt;
    return Counterexample{describe_instance(st, eq.schema(), v), print_term(st.sig(), &st.aux(), *lhs),
                          print_term(st.sig(), &st.aux(), *rhs)};
  });
}

Outcome equational_systems() {
  bool ok = true;
  std::string detail;
  auto add = [&](const SystemResult& r) {
    ok = ok && r.ok;
    detail += r.detail;
  };

  // Closed Peano instances are numerals; sizes 7/7/7 include every triple of total size <= 9.
  ExampleBundle p = build("peano");
  add(system_checks(p, system_named(p, "add-assoc"), bounds(7, 7, 0), bounds(7, 7, 0)));

  ExampleBundle ps = build("lambda-presheaf");
  Bounds coh = bounds(4, 2, 2);
  add(system_checks(ps, system_named(ps, "subst-assoc"), bounds(5, 3, 2), coh));
  add(system_checks(ps, system_named(ps, "subst-unit"), bounds(5, 3, 2), coh));

  ExampleBundle db = build("lambda-debruijn");
  Bounds dcoh = bounds(4, 2, 2, 2, 2);
  add(system_checks(db, system_named(db, "subst-assoc"), bounds(5, 2, 2, 2, 2), dcoh));
  add(system_checks(db, system_named(db, "subst-unit"), bounds(5, 3, 2, 3, 2), dcoh));
  std::uint64_t full = 0;
  Report sampled = sampled_benign(db, system_named(db, "subst-assoc"), bounds(5, 3, 2, 3, 2), 100000, 20261014, &full);
  ok = ok && sampled.passed();
  detail += "lambda-debruijn subst-assoc at full bounds: " + std::to_string(sampled.instances) +
            " uniform samples of " + std::to_string(full) + ", " + std::to_string(sampled.failures) +
            " counterexamples (exhaustive only at entries <= 2, prefix <= 2)";
  return {ok, detail};
}

Outcome difflambda_table_lines() {
  ExampleBundle b = build("difflambda");
  auto reports = check_difflambda_table(b, 3, 2, jobs());
  bool ok = !reports.empty();
  std::uint64_t n = 0;
  std::string bad;
  for (const auto& r : reports) {
    n += r.instances;
    if (!r.passed() || r.instances == 0) {
      ok = false;
      bad += " [" + r.name + "]";
    }
  }
  return {ok, std::to_string(reports.size()) + " lines, " + std::to_string(n) + " instances" +
                  (bad.empty() ? "" : ", failing:" + bad)};
}

Outcome sharing_capture() {
  ExampleBundle b = build("sharing");
  const auto& sig = b.signature();
  TermPtr f = parse_term(sig, nullptr, "(op k)");
  TermPtr ctx = Term::con(*sig.find_op("ext"), {0}, {parse_term(sig, nullptr, "(op hole)"), f});
  TermPtr x = Term::var(0, 0);
  TermPtr plugged = normalize(b.stack, Term::aux(*b.stack.aux().find("plug"), {1}, ctx, {TermArg{x}}), Context{{0}});
  TermPtr want = Term::con(*sig.find_op("esub"), {x, f});
  bool capture = term_eq(plugged, want);
  Report r = crosscheck(b, bounds(5, 5, 1), jobs());
  return {capture && r.passed(), std::string("capture ") + (capture ? "holds" : "missing") + ": " +
                                     print_term(sig, nullptr, *plugged) + "; crosscheck " + summary(r)};
}

Outcome monad_laws() {
  bool ok = true;
  std::string detail;
  for (const auto& name : bundle_names()) {
    ExampleBundle b = build(name);
    MonadBounds mb;
    mb.size = 5;
    mb.ctx = 2;
    Report r = check_monad_laws(b.stack, mb, jobs());
    ok = ok && r.passed() && r.instances > 0;
    detail += name + " " + std::to_string(r.instances) + "/" + std::to_string(r.failures) + "; ";
  }
  return {ok, detail + "terms/counterexamples at size <= 5"};
}

Outcome negative_controls() {
  ExampleBundle p = build("peano");
  Report max = check_algebra(p.stack, peano_max_algebra(), bounds(3, 3, 0));
  EquationSystem wrong = peano_wrong_assoc(p.stack);
  Report coh = check_coherence(p.stack, wrong, Side::Right, bounds(3, 3, 0));
  bool zero_clause = false;
  for (const auto& c : coh.counterexamples)
    zero_clause = zero_clause || c.inputs.find("a=(op z) b=(op z) c=(op z)") != std::string::npos;
  bool ok = max.failures >= 1 && coh.failures >= 1 && zero_clause;
  return {ok, "max-algebra " + std::to_string(max.failures) + " counterexamples; wrong right side " +
                  std::to_string(coh.failures) + " counterexamples, zero clause at (0,0) " +
                  (zero_clause ? "found" : "missing")};
}

Outcome json_stability() {
  bool ok = true;
  std::string detail;
  for (const auto& name : bundle_names()) {
    std::string outs[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
      std::istringstream in;
      std::ostringstream out, err;
      codes[i] = run_cli({"check", "all", "--bundle", name, "--json", "--jobs", "1"}, in, out, err);
      outs[i] = out.str();
    }
    bool same = outs[0] == outs[1] && !outs[0].empty();
    ok = ok && same && codes[0] == kExitOk;
    detail += name + (same ? " identical" : " DIFFERS") + (codes[0] == kExitOk ? "" : " (exit " + std::to_string(codes[0]) + ")") + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  criterion(1, "Peano normalize agrees with machine arithmetic (closed terms <= 8, < 10s)", peano_arithmetic);
  criterion(2, "Admissibility: closed instances normalize Aux-free on every bundle", admissibility);
  criterion(3, "Presheaf substitution equals the textbook oracle", presheaf_oracle);
  criterion(4, "De Bruijn renaming and substitution equal the textbook oracles", debruijn_oracles);
  criterion(5, "Equational systems are coherent on both sides and benign", equational_systems);
  criterion(6, "Differential lambda table lines A/B/C hold (closed terms <= 3)", difflambda_table_lines);
  criterion(7, "Sharing plug captures and agrees with its oracle (size <= 5)", sharing_capture);
  criterion(8, "Idempotence and order independence on every bundle (size <= 5)", monad_laws);
  criterion(9, "Negative controls produce counterexamples", negative_controls);
  criterion(10, "check all --json --jobs 1 is byte-identical across runs", json_stability);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << std::endl;
  return failures == 0 ? 0 : 1;
}
