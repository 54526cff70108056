#include "structlaws/checks.hpp"

namespace structlaws {

namespace {

// Unscoped renamings and substitutions may raise free indices past the bound
// the input was enumerated at.
Context result_context(const Signature& sig, const Context& ctx) { return sig.scoped() ? ctx : Context::omega(); }

}  // namespace

std::vector<Sort> all_sorts(const Signature& sig, Nat nat_bound) {
  std::vector<Sort> out;
  for (FamilyId f = 0; f < sig.sorts.size(); ++f) {
    if (!sig.sorts[f].parameterized) {
      out.push_back(Sort{f, std::nullopt});
      continue;
    }
    for (Nat m = 0; m <= nat_bound; ++m) out.push_back(Sort{f, m});
  }
  return out;
}

Report check_admissible(const LawStack& stack, const Bounds& b, unsigned jobs) {
  Enumerator en(stack);
  std::vector<Report> parts;
  for (AuxId id = 0; id < stack.aux().size(); ++id) {
    const AuxSchema& schema = stack.aux().at(id);
    InstanceSpace space(en, schema, b);
    parts.push_back(run_indexed(schema.name, space.size(), jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
      InstanceValue v = space.at(i);
      TermPtr t = Term::aux(id, v.nats, v.main, v.params);
      TermPtr n = normalize(stack, t, v.ctx);
      Sort sort = instantiate(schema.result, v.nats);
      std::string why;
      if (!n->aux_free()) why = std::to_string(n->aux_count()) + " Aux nodes remain";
      else if (auto err = scope_error(stack.sig(), &stack.aux(), result_context(stack.sig(), v.ctx), sort, *n)) why = "result ill-scoped: " + *err;
      if (why.empty()) return std::nullopt;
      return Counterexample{describe_instance(stack, schema, v), print_term(stack.sig(), &stack.aux(), *n), why};
    }));
  }
  if (b.size == 0) {
    Report r;
    r.name = "admissible";
    return r;
  }
  return merge_reports("admissible", parts);
}

namespace {

std::vector<Context> all_contexts(const Signature& sig, Index bound) {
  if (!sig.scoped()) return {Context{{bound}}};
  std::vector<Context> out;
  Context cur = Context::zeros(sig.kinds.size());
  auto rec = [&](auto&& self, KindId k) -> void {
    if (k == sig.kinds.size()) {
      out.push_back(cur);
      return;
    }
    for (Index v = 0; v <= bound; ++v) {
      cur.counts[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

struct Subject {
  Sort sort;
  Context ctx;
  TermPtr term;
};

// First failing law for one term, or empty.
std::string monad_violation(const LawStack& stack, const Subject& s, TermPtr& witness_l, TermPtr& witness_r) {
  const Signature& sig = stack.sig();
  TermPtr n = normalize(stack, s.term, s.ctx);
  if (auto err = scope_error(sig, &stack.aux(), result_context(sig, s.ctx), s.sort, *n)) {
    witness_l = n;
    return "scope: " + *err;
  }
  TermPtr nn = normalize(stack, n, s.ctx);
  if (!term_eq(n, nn)) {
    witness_l = n;
    witness_r = nn;
    return "idempotence";
  }
  TermPtr o = normalize_outermost(stack, s.term, s.ctx);
  if (!term_eq(n, o)) {
    witness_l = n;
    witness_r = o;
    return "order independence";
  }
  const Term& t = *s.term;
  if (t.is_con()) {
    const OpSchema& op = sig.op(t.op());
    std::vector<TermPtr> kids;
    for (std::size_t i = 0; i < op.args.size(); ++i) {
      const auto& c = t.children()[i];
      if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i]))
        kids.push_back(normalize(stack, c, s.ctx.extended(sub->binders, t.nats())));
      else
        kids.push_back(c);
    }
    TermPtr u = normalize(stack, Term::con(t.op(), t.nats(), std::move(kids)), s.ctx);
    if (!term_eq(n, u)) {
      witness_l = n;
      witness_r = u;
      return "unit-S";
    }
  }
  if (t.is_aux()) {
    if (auto st = step(stack, s.term, s.ctx)) {
      TermPtr u = normalize(stack, *st, s.ctx);
      if (!term_eq(n, u)) {
        witness_l = n;
        witness_r = u;
        return t.main()->is_var() ? "unit-T" : "triangle";
      }
    } else if (!is_stuck(stack, t) && !t.main()->is_aux()) {
      witness_l = n;
      return "no rewrite step for a constructor-headed Aux node";
    }
  }
  return {};
}

}  // namespace

Report check_monad_laws(const LawStack& stack, const MonadBounds& b, unsigned jobs) {
  EnumOptions o;
  o.closed = false;
  o.aux_allowed = true;
  o.env_bound = b.prefix;
  o.shift_bound = b.shift;
  o.nat_bound = b.nats;
  Enumerator en(stack, o);
  std::vector<Subject> subjects;
  if (b.size > 0) {
    for (const auto& sort : all_sorts(stack.sig(), b.nats))
      for (const auto& ctx : all_contexts(stack.sig(), b.ctx))
        for (const auto& t : en.upto(sort, ctx, b.size)) subjects.push_back({sort, ctx, t});
  }
  return run_indexed("monad", subjects.size(), jobs, [&](std::uint64_t i) -> std::optional<Counterexample> {
    const Subject& s = subjects[i];
    TermPtr l, r;
    std::string why = monad_violation(stack, s, l, r);
    if (why.empty()) return std::nullopt;
    const auto& sig = stack.sig();
    return Counterexample{why + ": " + print_term(sig, &stack.aux(), *s.term),
                          l ? print_term(sig, &stack.aux(), *l) : "", r ? print_term(sig, &stack.aux(), *r) : ""};
  });
}

}  // namespace structlaws
