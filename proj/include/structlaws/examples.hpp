#pragma once

// The seven example calculi as ready-made bundles, their reference
// implementations and the bundle-specific checks.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "structlaws/equations.hpp"
#include "structlaws/law.hpp"
#include "structlaws/testkit.hpp"

namespace structlaws {

struct EmbeddedBundle {
  std::string_view name;
  std::string_view signature;
  std::string_view laws;
  std::string_view eqs;  // empty when the bundle has no equation systems
};

// Shipped bundle files, in the order of bundle_names().
const std::vector<EmbeddedBundle>& embedded_bundles();
std::vector<std::string> bundle_names();

// Reference implementation of one auxiliary operator on closed basic inputs.
// `ctx` is the context of the result.
using OracleFn = std::function<TermPtr(const std::vector<Nat>& nats, const TermPtr& main,
                                       const std::vector<AuxArg>& params, const Context& ctx)>;

struct Oracle {
  std::string aux;
  OracleFn eval;
};

struct ExampleBundle {
  std::string name;
  LawStack stack;
  std::vector<EquationSystem> systems;
  std::vector<Oracle> oracles;
  Bounds bounds;  // documented bounds for the bundle's suites

  const Signature& signature() const { return stack.sig(); }
};

// Throws Error for an unknown name.
ExampleBundle build(std::string_view name);

// A bundle from user files: no oracles, default bounds. Throws ParseError,
// ValidationError.
ExampleBundle load_bundle(std::string name, std::string_view signature, std::string_view laws,
                          std::string_view eqs, const std::string& source_prefix = "");

// Throws UnknownLaw when the bundle has no oracle for `aux`, OpenTermError
// on inputs with Aux nodes or generic variables.
TermPtr oracle_eval(const ExampleBundle& b, std::string_view aux, const std::vector<Nat>& nats,
                    const TermPtr& main, const std::vector<AuxArg>& params, const Context& ctx);

// normalize(aux(inputs)) against the oracle on every closed instance.
Report crosscheck(const ExampleBundle& b, const Bounds& bounds, unsigned jobs = 1);

// Oracles, one set per bundle; they depend on the signature only.
std::vector<Oracle> make_oracles(const Signature& sig);

// ---------------------------------------------------------------------------
// Peano

// Machine arithmetic over z, s, add and mul. Throws OpenTermError on
// variables, UnknownOp on anything else.
std::uint64_t peano_value(const LawStack& stack, const Term& t);
TermPtr peano_numeral(const Signature& sig, std::uint64_t n);

// z, s, add and mul read in the machine naturals.
AugmentedAlgebra<std::uint64_t> peano_nat_algebra();
// The same with add read as max: not compatible with the add clauses.
AugmentedAlgebra<std::uint64_t> peano_max_algebra();

// Associativity system whose right side is the wrong R'(x,y,z) = x+(y+s(z)).
EquationSystem peano_wrong_assoc(const LawStack& stack);

// ---------------------------------------------------------------------------
// Differential lambda calculus

// One equation line of the extended operations, substitution and partial
// differentiation tables, over metavariables of the given sorts.
struct TableLine {
  std::string table;  // "A", "B" or "C"
  std::string text;
  std::vector<FamilyId> metavars;
  // Both sides at context `ctx`, metavariables bound in order.
  std::function<std::pair<TermPtr, TermPtr>(const std::vector<TermPtr>&, const Context& ctx)> sides;
};

std::vector<TableLine> difflambda_table(const ExampleBundle& b);

// Every line with metavariables ranging over closed basic terms of size
// <= size at context `ctx`.
std::vector<Report> check_difflambda_table(const ExampleBundle& b, std::size_t size, Index ctx, unsigned jobs = 1);

}  // namespace structlaws
