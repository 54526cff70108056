#pragma once

// Structural equational systems: a schema with its own clause set and two
// interpretations, checked for coherence and benignness on enumerated
// instances.

#include <string>
#include <string_view>
#include <vector>

#include "structlaws/law.hpp"
#include "structlaws/testkit.hpp"

namespace structlaws {

struct EquationSystem {
  std::string name;
  StructuralLaw law;  // one component: the schema and its clauses
  BodyPtr left;
  BodyPtr right;
  std::string source;
  int line = 0;

  const AuxSchema& schema() const { return law.components.front(); }
};

enum class Side { Left, Right };

std::string_view side_name(Side s);

// `(eqsys NAME (schema ...) (clauses (clause ...) ...) (left T) (right T))`.
// Parse errors throw ParseError; semantic problems surface in validate_eqsys.
EquationSystem parse_eqsys(const LawStack& stack, const Sexp& form, const std::string& source = "<input>");
std::vector<EquationSystem> parse_eqsystems(const LawStack& stack, std::string_view text,
                                            const std::string& source = "<input>");
Sexp eqsys_to_sexp(const LawStack& stack, const EquationSystem& eq);

Diagnostics validate_eqsys(const LawStack& stack, const EquationSystem& eq);

// The interpretation at concrete arguments, normalized. Throws ScopeError.
TermPtr interp_eval(const LawStack& stack, const EquationSystem& eq, Side side, const std::vector<Nat>& nats,
                    const TermPtr& main, const std::vector<AuxArg>& params, const Context& ctx);

// Per clause instance: interp(c(ts), ps) against the clause body with each
// recursive call evaluated by interp.
Report check_coherence(const LawStack& stack, const EquationSystem& eq, Side side, const Bounds& b,
                       unsigned jobs = 1);

struct CoherenceStatus {
  bool left = false;
  bool right = false;
};

// L = R on every enumerated instance. With `coherence`, the report notes
// whether benignness follows from coherence or only holds empirically.
Report check_benign(const LawStack& stack, const EquationSystem& eq, const Bounds& b, unsigned jobs = 1,
                    const CoherenceStatus* coherence = nullptr);

struct EquationBundle {
  std::vector<EquationSystem> systems;
};

EquationBundle combine(std::vector<EquationSystem> systems);

struct BundleReport {
  Report total;
  std::vector<Report> components;
  bool passed() const { return total.passed(); }
};

BundleReport check_benign(const LawStack& stack, const EquationBundle& bundle, const Bounds& b, unsigned jobs = 1);

}  // namespace structlaws
