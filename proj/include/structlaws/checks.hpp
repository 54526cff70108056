#pragma once

// Property suites over a validated stack: admissibility, the monad-law
// operationalization, and algebra checks for folds.

#include <string>
#include <vector>

#include "structlaws/law.hpp"
#include "structlaws/syntax.hpp"
#include "structlaws/testkit.hpp"

namespace structlaws {

// Every closed instance of every auxiliary operator normalizes to an
// Aux-free term that scope-checks at the result sort.
Report check_admissible(const LawStack& stack, const Bounds& b, unsigned jobs = 1);

struct MonadBounds {
  std::size_t size = 4;  // terms, Aux nodes included
  Index ctx = 1;         // every context coordinate, generic kinds included
  Nat nats = 1;          // arguments of parameterized sorts
  Index prefix = 1;      // shift-envs and renamings inside Aux nodes
  Index shift = 1;
};

// Sorts enumerated by the suites: every family, parameterized ones at
// arguments <= nat_bound.
std::vector<Sort> all_sorts(const Signature& sig, Nat nat_bound);

// On enumerated terms with Aux nodes: idempotence, order independence
// (innermost vs outermost), scope preservation, unit-S and the one-step
// triangle for Aux nodes headed by a constructor or variable.
Report check_monad_laws(const LawStack& stack, const MonadBounds& b, unsigned jobs = 1);

// Triangle check against an algebra: for every closed clause instance,
// alg(A)(fold(c(ts)), fold(ps)) equals the fold of the one-step rewrite.
template <typename V>
Report check_algebra(const LawStack& stack, const AugmentedAlgebra<V>& alg, const Bounds& b) {
  Report total;
  total.name = "algebra";
  if (b.size == 0) return total;
  Enumerator en(stack);
  std::vector<Report> parts;
  for (AuxId id = 0; id < stack.aux().size(); ++id) {
    const AuxSchema& schema = stack.aux().at(id);
    InstanceSpace space(en, schema, b);
    parts.push_back(run_indexed(schema.name, space.size(), 1, [&](std::uint64_t i) -> std::optional<Counterexample> {
      InstanceValue v = space.at(i);
      TermPtr t = Term::aux(id, v.nats, v.main, v.params);
      auto s = step(stack, t, v.ctx);
      if (!s) return std::nullopt;
      V lhs = fold(stack, alg, *t);
      V rhs = fold(stack, alg, **s);
      if (alg.equal(lhs, rhs)) return std::nullopt;
      return Counterexample{print_term(stack.sig(), &stack.aux(), *t), alg.show(lhs),
                            alg.show(rhs) + " via " + print_term(stack.sig(), &stack.aux(), **s)};
    }));
  }
  total = merge_reports("algebra", parts);
  return total;
}

// fold(t) = fold(normalize(t)) on closed terms with Aux nodes of the given sort.
template <typename V>
Report check_fold(const LawStack& stack, const AugmentedAlgebra<V>& alg, const Sort& sort, const Context& ctx,
                  std::size_t size) {
  EnumOptions o;
  o.aux_allowed = true;
  Enumerator en(stack, o);
  auto terms = en.upto(sort, ctx, size);
  return run_indexed("fold", terms.size(), 1, [&](std::uint64_t i) -> std::optional<Counterexample> {
    const TermPtr& t = terms[i];
    V a = fold(stack, alg, *t);
    V n = fold(stack, alg, *normalize(stack, t, ctx));
    if (alg.equal(a, n)) return std::nullopt;
    return Counterexample{print_term(stack.sig(), &stack.aux(), *t), alg.show(a), alg.show(n)};
  });
}

}  // namespace structlaws
