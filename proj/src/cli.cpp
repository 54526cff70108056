#include "structlaws/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "structlaws/checks.hpp"
#include "structlaws/examples.hpp"
#include "structlaws/syntax.hpp"

namespace structlaws {

namespace {

struct Options {
  std::string bundle;
  std::string sig_file, laws_file, eqs_file;
  std::string term;
  std::string ctx;
  std::string sort;
  std::string suite;
  std::string algebra = "nat";
  std::size_t size = 0;
  bool size_given = false;
  bool json = false;
  bool timing = false;
  bool aux = false;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  unsigned jobs = 1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

ExampleBundle load(const Options& o) {
  if (!o.bundle.empty()) {
    if (!o.sig_file.empty() || !o.laws_file.empty() || !o.eqs_file.empty())
      throw UsageError("--bundle cannot be combined with --sig/--laws/--eqs");
    auto names = bundle_names();
    if (std::find(names.begin(), names.end(), o.bundle) == names.end())
      throw UsageError("unknown bundle: " + o.bundle);
    return build(o.bundle);
  }
  if (o.sig_file.empty() || o.laws_file.empty()) throw UsageError("give --bundle NAME or --sig FILE --laws FILE");
  std::string sig = slurp(o.sig_file), laws = slurp(o.laws_file);
  std::string eqs = o.eqs_file.empty() ? "" : slurp(o.eqs_file);
  return load_bundle("files", sig, laws, eqs);
}

Context parse_context(const Signature& sig, const std::string& text) {
  if (text.empty()) return default_context(sig);
  if (text == "omega") return Context::omega();
  Context c;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      c.counts.push_back(static_cast<Index>(v));
    } catch (const std::logic_error&) {
      throw UsageError("bad --ctx: " + text);
    }
  }
  std::size_t want = sig.scoped() ? sig.kinds.size() : 1;
  if (c.counts.size() != want) throw UsageError("--ctx needs " + std::to_string(want) + " entries");
  return c;
}

std::string read_term_text(const Options& o, std::istream& in) {
  if (o.term.empty()) throw UsageError("--term is required");
  if (o.term != "-") return o.term;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

TermPtr read_term(const ExampleBundle& b, const Options& o, std::istream& in, const Context& ctx) {
  const auto& sig = b.signature();
  TermPtr t = parse_term(sig, &b.stack.aux(), read_term_text(o, in), o.term == "-" ? "<stdin>" : "--term");
  std::string last;
  for (const auto& s : all_sorts(sig, 8)) {
    auto err = scope_error(sig, &b.stack.aux(), ctx, s, *t);
    if (!err) return t;
    last = *err;
  }
  throw ScopeError(last);
}

Sort parse_sort(const Signature& sig, const std::string& text) {
  if (text.empty()) {
    if (sig.sorts.size() == 1 && !sig.sorts[0].parameterized) return Sort{0, std::nullopt};
    throw UsageError("--sort is required for this signature");
  }
  return instantiate(parse_sort_expr(sig, parse_sexp(text, "--sort"), "--sort"), {});
}

Bounds check_bounds(const ExampleBundle& b, const Options& o) {
  if (!o.size_given) return b.bounds;
  Bounds r;
  r.size = o.size;
  r.param_size = std::min<std::size_t>(o.size, 2);
  r.ctx = 1;
  r.prefix = 1;
  r.shift = 1;
  return r;
}

MonadBounds monad_bounds(const Options& o) {
  MonadBounds m;
  if (o.size_given) m.size = o.size;
  return m;
}

Report coherence_suite(const ExampleBundle& b, const Bounds& bd, unsigned jobs) {
  std::vector<Report> parts;
  for (const auto& eq : b.systems)
    for (Side s : {Side::Left, Side::Right}) parts.push_back(check_coherence(b.stack, eq, s, bd, jobs));
  Report r = merge_reports("coherence", parts);
  if (b.systems.empty()) r.notes.push_back("no equation systems");
  for (const auto& p : parts)
    if (!p.passed()) r.notes.push_back("failing: " + p.name);
  return r;
}

Report benign_suite(const ExampleBundle& b, const Bounds& bd, unsigned jobs) {
  BundleReport br = check_benign(b.stack, combine(b.systems), bd, jobs);
  Report r = br.total;
  if (b.systems.empty()) r.notes.push_back("no equation systems");
  return r;
}

Report oracle_suite(const ExampleBundle& b, const Bounds& bd, unsigned jobs) {
  Report r = crosscheck(b, bd, jobs);
  if (b.oracles.empty()) r.notes.push_back("no oracles");
  return r;
}

Report run_suite(const ExampleBundle& b, const std::string& suite, const Options& o) {
  Bounds bd = check_bounds(b, o);
  if (suite == "admissible") return check_admissible(b.stack, bd, o.jobs);
  if (suite == "monad") return check_monad_laws(b.stack, monad_bounds(o), o.jobs);
  if (suite == "oracle") return oracle_suite(b, bd, o.jobs);
  if (suite == "coherence") return coherence_suite(b, bd, o.jobs);
  return benign_suite(b, bd, o.jobs);
}

int cmd_check(const Options& o, std::ostream& out) {
  ExampleBundle b = load(o);
  std::vector<std::string> suites;
  if (o.suite == "all") suites = {"admissible", "monad", "oracle", "coherence", "benign"};
  else suites = {o.suite};
  std::vector<Report> rs;
  for (const auto& s : suites) rs.push_back(run_suite(b, s, o));
  bool ok = std::all_of(rs.begin(), rs.end(), [](const Report& r) { return r.passed(); });
  if (o.json) {
    out << (o.suite == "all" ? reports_json(b.name, rs, o.timing) : report_json(rs.front(), o.timing)) << "\n";
  } else {
    for (const auto& r : rs) {
      out << report_text(r);
      if (o.timing) out << "  elapsed_ms: " << static_cast<std::int64_t>(r.elapsed_ms) << "\n";
    }
  }
  return ok ? kExitOk : kExitCounterexamples;
}

int cmd_normalize(const Options& o, std::istream& in, std::ostream& out, std::ostream& err, bool require_free) {
  ExampleBundle b = load(o);
  Context ctx = parse_context(b.signature(), o.ctx);
  TermPtr t = read_term(b, o, in, ctx);
  TermPtr n = normalize(b.stack, t, ctx);
  out << print_term(b.signature(), &b.stack.aux(), *n) << "\n";
  if (require_free && !n->aux_free()) {
    err << "stuck: " << n->aux_count() << " auxiliary node(s) remain\n";
    return kExitCounterexamples;
  }
  return kExitOk;
}

int cmd_enum(const Options& o, std::ostream& out) {
  ExampleBundle b = load(o);
  const auto& sig = b.signature();
  EnumSpec spec{parse_sort(sig, o.sort), parse_context(sig, o.ctx), o.size, true, o.aux};
  std::vector<TermPtr> ts;
  if (o.samples > 0) {
    for (std::size_t i = 0; i < o.samples; ++i) ts.push_back(rand_term(b.stack, spec, o.seed + i));
  } else {
    ts = enum_terms(b.stack, spec);
  }
  if (o.json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : ts) arr.push_back(print_term(sig, &b.stack.aux(), *t));
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& t : ts) out << print_term(sig, &b.stack.aux(), *t) << "\n";
  }
  return kExitOk;
}

int cmd_fold(const Options& o, std::istream& in, std::ostream& out) {
  ExampleBundle b = load(o);
  if (b.signature().name != "peano") throw UsageError("fold: algebras are provided for the peano bundle only");
  if (o.algebra != "nat" && o.algebra != "max") throw UsageError("--algebra must be nat or max");
  auto alg = o.algebra == "nat" ? peano_nat_algebra() : peano_max_algebra();
  Context ctx = parse_context(b.signature(), o.ctx);
  TermPtr t = read_term(b, o, in, ctx);
  out << alg.show(fold(b.stack, alg, *t)) << "\n";
  return kExitOk;
}

int cmd_examples(const std::string& action, const Options& o, std::ostream& out) {
  if (action == "list") {
    for (const auto& e : embedded_bundles()) {
      ExampleBundle b = build(e.name);
      out << e.name << "  (" << b.stack.layers().size() << " layers, " << b.systems.size()
          << " equation systems, " << b.oracles.size() << " oracles)\n";
    }
    return kExitOk;
  }
  ExampleBundle b = load(o);
  out << to_string(signature_to_sexp(b.signature())) << "\n";
  for (const auto& layer : b.stack.layers())
    for (const auto& law : layer) out << to_string(law_to_sexp(b.signature(), law)) << "\n";
  for (const auto& eq : b.systems) out << to_string(eqsys_to_sexp(b.stack, eq)) << "\n";
  return kExitOk;
}

void add_source(CLI::App* c, Options& o) {
  c->add_option("--bundle", o.bundle, "Built-in bundle");
  c->add_option("--sig", o.sig_file, "Signature file");
  c->add_option("--laws", o.laws_file, "Law file");
  c->add_option("--eqs", o.eqs_file, "Equation system file");
}

void add_term(CLI::App* c, Options& o) {
  c->add_option("--term", o.term, "Term as an s-expression, or - for standard input")->required();
  c->add_option("--ctx", o.ctx, "Context, e.g. 2 or 1,0 (one count per kind)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural laws: derive, normalize and check auxiliary operations", "struct-laws"};
  app.require_subcommand(1);
  Options o;

  auto* examples = app.add_subcommand("examples", "Built-in bundles");
  examples->require_subcommand(1);
  auto* ex_list = examples->add_subcommand("list", "List the built-in bundles");
  auto* ex_show = examples->add_subcommand("show", "Print a bundle in canonical form");
  add_source(ex_show, o);

  auto* eval = app.add_subcommand("eval", "Normalize a term and require an Aux-free result");
  add_source(eval, o);
  add_term(eval, o);

  auto* norm = app.add_subcommand("normalize", "Print the normal form of a term");
  add_source(norm, o);
  add_term(norm, o);

  auto* en = app.add_subcommand("enum", "Enumerate or sample terms up to a size");
  add_source(en, o);
  en->add_option("--sort", o.sort, "Sort, e.g. p or (c 1)");
  en->add_option("--ctx", o.ctx, "Context");
  en->add_option("--size", o.size, "Largest term size")->required();
  en->add_flag("--aux", o.aux, "Allow Aux nodes");
  en->add_option("--sample", o.samples, "Draw this many random terms instead");
  en->add_option("--seed", o.seed, "Seed for --sample");
  en->add_flag("--json", o.json, "JSON array output");

  auto* check = app.add_subcommand("check", "Run check suites");
  check->add_option("suite", o.suite, "admissible|monad|benign|coherence|oracle|all")
      ->required()
      ->check(CLI::IsMember({"admissible", "monad", "benign", "coherence", "oracle", "all"}));
  add_source(check, o);
  auto* size_opt = check->add_option("--size", o.size, "Bound on the main argument");
  check->add_flag("--json", o.json, "JSON report");
  check->add_flag("--timing", o.timing, "Include elapsed times");
  check->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  check->add_option("--seed", o.seed, "Seed (the exhaustive suites do not sample)");

  auto* fold_cmd = app.add_subcommand("fold", "Fold a term into an algebra");
  add_source(fold_cmd, o);
  add_term(fold_cmd, o);
  fold_cmd->add_option("--algebra", o.algebra, "nat (default) or max");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.size_given = size_opt->count() > 0;

  try {
    if (examples->parsed()) return cmd_examples(ex_list->parsed() ? "list" : "show", o, out);
    if (eval->parsed()) return cmd_normalize(o, in, out, err, true);
    if (norm->parsed()) return cmd_normalize(o, in, out, err, false);
    if (en->parsed()) return cmd_enum(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (fold_cmd->parsed()) return cmd_fold(o, in, out);
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace structlaws
