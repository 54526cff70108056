#include "structlaws/equations.hpp"

#include "structlaws/syntax.hpp"

namespace structlaws {

namespace {

[[noreturn]] void fail(const std::string& source, const Sexp& at, const std::string& what) {
  throw ParseError(source, at.line, what);
}

BodyPtr parse_template(const LawStack& stack, EquationSystem& eq, const Sexp& s, const std::string& head) {
  if (!s.has_head(head) || s.size() != 2) fail(eq.source, s, "expected (" + head + " TEMPLATE)");
  BodyScope sc;
  sc.sig = &stack.sig();
  sc.components = &eq.law.components;
  sc.schema = &eq.law.components.front();
  sc.template_mode = true;
  sc.issues = &eq.law.issues;
  sc.subject = eq.name + " " + head;
  return link_body(stack.aux(), parse_body(sc, s[1], eq.source));
}

BodyScope template_scope(const LawStack& stack, const EquationSystem& eq) {
  BodyScope sc;
  sc.sig = &stack.sig();
  sc.components = &eq.law.components;
  sc.schema = &eq.schema();
  sc.template_mode = true;
  return sc;
}

std::vector<const Clause*> clauses_for(const EquationSystem& eq, const Term& main) {
  std::vector<const Clause*> out;
  for (const auto& c : eq.law.clauses) {
    if (main.is_var() ? (c.on_var && c.var_kind == main.kind()) : (!c.on_var && c.op == main.op()))
      out.push_back(&c);
  }
  return out;
}

void scope_check_args(const LawStack& stack, const AuxSchema& schema, const std::vector<Nat>& nats,
                      const TermPtr& main, const std::vector<AuxArg>& params, const Context& ctx) {
  if (nats.size() != schema.nat_names.size()) throw ScopeError(schema.name + ": wrong number of nat arguments");
  AuxContexts cs = aux_contexts(schema, nats, params, ctx);
  const Signature& sig = stack.sig();
  const AuxTable* aux = &stack.aux();
  if (auto err = scope_error(sig, aux, cs.main, instantiate(schema.main_sort, nats), *main))
    throw ScopeError(schema.main_name + ": " + *err);
  for (std::size_t j = 0; j < schema.params.size(); ++j) {
    const auto& p = schema.params[j];
    const auto& a = params[j];
    Sort sort = instantiate(p.sort, nats);
    auto check = [&](const TermPtr& t) {
      if (auto err = scope_error(sig, aux, cs.params[j], sort, *t)) throw ScopeError(p.name + ": " + *err);
    };
    switch (p.kind) {
      case ParamKind::Term:
        if (!std::holds_alternative<TermArg>(a)) throw ScopeError(p.name + ": expected a term");
        check(std::get<TermArg>(a).term);
        break;
      case ParamKind::Env:
        for (const auto& e : std::get<EnvArg>(a).entries) check(e);
        break;
      case ParamKind::ShiftEnv:
        if (!std::holds_alternative<ShiftEnvArg>(a)) throw ScopeError(p.name + ": expected a shift-env");
        for (const auto& e : std::get<ShiftEnvArg>(a).prefix) check(e);
        break;
      case ParamKind::ShiftRen:
        if (!std::holds_alternative<ShiftRenArg>(a)) throw ScopeError(p.name + ": expected a renaming");
        break;
      case ParamKind::VarRef: {
        const auto* v = std::get_if<VarRefArg>(&a);
        if (!v || v->kind != p.var_kind) throw ScopeError(p.name + ": expected a variable reference");
        Index bound = cs.params[j][p.var_kind];
        if (bound != kOmega && v->index >= bound) throw ScopeError(p.name + ": reference out of range");
        break;
      }
    }
  }
}

TermPtr eval_side(const LawStack& stack, const EquationSystem& eq, Side side, const std::vector<Nat>& nats,
                  const TermPtr& main, const std::vector<AuxArg>& params, const Context& ctx) {
  Instance inst{0, nats, main, params, ctx};
  const BodyPtr& k = side == Side::Left ? eq.left : eq.right;
  return normalize(stack, instantiate_body(stack, inst, nullptr, k, true, nullptr, &eq.law.components), ctx);
}

}  // namespace

std::string_view side_name(Side s) { return s == Side::Left ? "left" : "right"; }

EquationSystem parse_eqsys(const LawStack& stack, const Sexp& form, const std::string& source) {
  if (!form.has_head("eqsys") || form.size() != 6)
    fail(source, form, "expected (eqsys NAME (schema ...) (clauses ...) (left T) (right T))");
  EquationSystem eq;
  eq.source = source;
  eq.line = form.line;
  if (!form[1].is_atom()) fail(source, form[1], "expected an equation system name");
  eq.name = form[1].atom;
  if (!form[2].has_head("schema")) fail(source, form[2], "expected (schema ...)");
  if (!form[3].has_head("clauses")) fail(source, form[3], "expected (clauses ...)");
  // The clause set is parsed as a law one layer above the stack.
  std::vector<Sexp> law{Sexp::make_atom("law", form.line), Sexp::make_atom(eq.name, form.line),
                        Sexp::make_list({Sexp::make_atom("layer"), Sexp::make_atom(std::to_string(stack.depth()))}),
                        form[2]};
  for (std::size_t i = 1; i < form[3].size(); ++i) law.push_back(form[3][i]);
  eq.law = parse_law(stack.sig(), Sexp::make_list(std::move(law), form.line), source);
  if (eq.law.components.size() != 1) fail(source, form[2], "an equation system has exactly one schema");
  for (auto& c : eq.law.clauses) c.body = link_body(stack.aux(), c.body);
  eq.left = parse_template(stack, eq, form[4], "left");
  eq.right = parse_template(stack, eq, form[5], "right");
  return eq;
}

std::vector<EquationSystem> parse_eqsystems(const LawStack& stack, std::string_view text, const std::string& source) {
  std::vector<EquationSystem> out;
  for (const auto& f : parse_sexps(text, source)) out.push_back(parse_eqsys(stack, f, source));
  return out;
}

Sexp eqsys_to_sexp(const LawStack& stack, const EquationSystem& eq) {
  Sexp law = law_to_sexp(stack.sig(), eq.law);
  std::vector<Sexp> clauses{Sexp::make_atom("clauses")};
  for (std::size_t i = 4; i < law.size(); ++i) clauses.push_back(law[i]);
  BodyScope sc = template_scope(stack, eq);
  return Sexp::make_list({Sexp::make_atom("eqsys"), Sexp::make_atom(eq.name), law[3], Sexp::make_list(std::move(clauses)),
                          Sexp::make_list({Sexp::make_atom("left"), body_to_sexp(sc, *eq.left)}),
                          Sexp::make_list({Sexp::make_atom("right"), body_to_sexp(sc, *eq.right)})});
}

Diagnostics validate_eqsys(const LawStack& stack, const EquationSystem& eq) {
  Diagnostics out = validate_law(stack, eq.law);
  for (auto* t : {&eq.left, &eq.right}) {
    for (auto& d : validate_template(stack, eq.schema(), **t, eq.name + (t == &eq.left ? " left" : " right")))
      out.push_back(std::move(d));
  }
  return out;
}

TermPtr interp_eval(const LawStack& stack, const EquationSystem& eq, Side side, const std::vector<Nat>& nats,
                    const TermPtr& main, const std::vector<AuxArg>& params, const Context& ctx) {
  scope_check_args(stack, eq.schema(), nats, main, params, ctx);
  return eval_side(stack, eq, side, nats, main, params, ctx);
}

Report check_coherence(const LawStack& stack, const EquationSystem& eq, Side side, const Bounds& b, unsigned jobs) {
  Enumerator en(stack);
  InstanceSpace space(en, eq.schema(), b);
  RecHook hook = [&](std::uint32_t, std::vector<Nat> nats, TermPtr child, std::vector<AuxArg> args,
                     const Context& ctx) { return eval_side(stack, eq, side, nats, child, args, ctx); };
  std::string name = "coherence-" + std::string(side_name(side)) + " " + eq.name;
  return run_indexed(name, space.size(), jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
    InstanceValue v = space.at(i);
    auto cs = clauses_for(eq, *v.main);
    const Clause* c = select_among(cs, *v.main, v.params);
    if (!c) return Counterexample{describe_instance(stack, eq.schema(), v), "no clause matches", ""};
    Instance inst{0, v.nats, v.main, v.params, v.ctx};
    TermPtr lhs = eval_side(stack, eq, side, v.nats, v.main, v.params, v.ctx);
    TermPtr rhs = normalize(stack, instantiate_body(stack, inst, c, c->body, true, &hook, &eq.law.components), v.ctx);
    if (term_eq(lhs, rhs)) return std::nullopt;
    return Counterexample{describe_instance(stack, eq.schema(), v), print_term(stack.sig(), &stack.aux(), *lhs),
                          print_term(stack.sig(), &stack.aux(), *rhs)};
  });
}

Report check_benign(const LawStack& stack, const EquationSystem& eq, const Bounds& b, unsigned jobs,
                    const CoherenceStatus* coherence) {
  Enumerator en(stack);
  InstanceSpace space(en, eq.schema(), b);
  Report r = run_indexed("benign " + eq.name, space.size(), jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
    InstanceValue v = space.at(i);
    TermPtr lhs = eval_side(stack, eq, Side::Left, v.nats, v.main, v.params, v.ctx);
    TermPtr rhs = eval_side(stack, eq, Side::Right, v.nats, v.main, v.params, v.ctx);
    if (term_eq(lhs, rhs)) return std::nullopt;
    return Counterexample{describe_instance(stack, eq.schema(), v), print_term(stack.sig(), &stack.aux(), *lhs),
                          print_term(stack.sig(), &stack.aux(), *rhs)};
  });
  if (coherence) {
    bool both = coherence->left && coherence->right;
    if (!both) r.notes.push_back("warning: coherence failed; result is empirical");
    if (r.passed()) r.notes.push_back(both ? "benign-by-theorem" : "benign-empirically");
    else if (both) r.notes.push_back("soundness violation: coherence passed but the equation fails");
  }
  return r;
}

EquationBundle combine(std::vector<EquationSystem> systems) { return EquationBundle{std::move(systems)}; }

BundleReport check_benign(const LawStack& stack, const EquationBundle& bundle, const Bounds& b, unsigned jobs) {
  BundleReport out;
  for (const auto& eq : bundle.systems) {
    CoherenceStatus cs;
    cs.left = check_coherence(stack, eq, Side::Left, b, jobs).passed();
    cs.right = check_coherence(stack, eq, Side::Right, b, jobs).passed();
    out.components.push_back(check_benign(stack, eq, b, jobs, &cs));
  }
  out.total = merge_reports("benign", out.components);
  for (const auto& c : out.components)
    if (!c.passed()) out.total.notes.push_back("failing system: " + c.name.substr(c.name.find(' ') + 1));
  return out;
}

}  // namespace structlaws
