#pragma once

// Structural laws: clause bodies, validation, layer stacks, the normalizer
// and folds into augmented algebras.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "structlaws/kernel.hpp"
#include "structlaws/sexp.hpp"

namespace structlaws {

// Where a variable index comes from inside a clause or template.
enum class IndexSource : std::uint8_t { Literal, VarIndex, RefChild, VarRefParam };

struct IndexExpr {
  IndexSource source = IndexSource::Literal;
  std::uint32_t slot = 0;  // RefChild: child position; VarRefParam: parameter position
  Index literal = 0;
  std::string name;
};

struct Body;
struct ArgExpr;
using BodyPtr = std::shared_ptr<const Body>;
using ArgPtr = std::shared_ptr<const ArgExpr>;

struct Body {
  enum class Kind : std::uint8_t {
    Child,    // a subterm of the matched constructor
    Param,    // a term parameter
    Main,     // the whole main argument (interpretation templates only)
    VarOf,    // a variable built from an index
    Fresh,    // the variable bound by a lift, written @
    Op,       // basic constructor
    Aux,      // earlier-layer auxiliary operator
    Rec,      // recursive call on a child
    Lookup,   // environment entry
    Unknown,  // unresolved symbol, reported by the validator
  };
  Kind kind = Kind::Unknown;
  std::uint32_t slot = 0;  // Child/Rec: child position; Param/Lookup: parameter position
  KindId var_kind = 0;     // VarOf, Fresh
  IndexExpr index;         // VarOf, Lookup
  std::uint32_t id = 0;    // Op: OpId; Aux: AuxId once linked; Rec: component position
  std::string name;        // symbol, operator or auxiliary name as written
  std::vector<NatExpr> nats;
  std::vector<BodyPtr> children;  // Op children; Aux: {main}
  std::vector<ArgPtr> args;       // Aux / Rec parameters
  bool linked = false;            // Aux: id resolved against a stack
  int line = 0;
};

struct ArgExpr {
  enum class Kind : std::uint8_t {
    Term,         // a body, for term parameters
    Index,        // a variable index, for reference parameters
    Param,        // pass a parameter through unchanged
    Lift,         // env extended by the fresh variable (template optional)
    Weaken,       // renaming by inclusion of one fresh variable
    Cons,         // cons an entry onto an env
    IdEnv,        // identity env
    ShiftRenLit,  // literal De Bruijn renaming
    ShiftEnvLit,  // literal shift-env
    LiftRen,      // 1 + rho
    Compose,      // rho then rho'
    Map,          // post-compose an env with an auxiliary operator
  };
  Kind kind = Kind::Param;
  BodyPtr body;            // Term, Cons head, Lift template
  IndexExpr index;         // Index
  std::uint32_t slot = 0;  // Param
  KindId var_kind = 0;     // Weaken, IdEnv
  std::vector<ArgPtr> args;  // Lift/Weaken/Cons/LiftRen/Map: {inner, aux args...}; Compose: {r1, r2}
  std::vector<Index> prefix;  // ShiftRenLit
  std::vector<BodyPtr> entries;  // ShiftEnvLit
  Index shift = 0;
  std::string name;          // Param symbol, Map operator
  std::uint32_t id = 0;      // Map: AuxId once linked
  bool linked = false;
  std::vector<NatExpr> nats;  // Map
  int line = 0;
};

struct Guard {
  bool equal = true;  // (eq a b) or (neq a b)
  IndexExpr a, b;
  int line = 0;
};

struct Clause {
  std::uint32_t component = 0;
  bool on_var = false;
  OpId op = 0;          // when !on_var
  KindId var_kind = 0;  // when on_var
  std::vector<Guard> guards;
  std::vector<std::string> binds;
  BodyPtr body;
  int line = 0;
};

// One law may define several mutually recursive components, one per main
// sort family (e.g. substitution on simple terms and on multiterms).
struct StructuralLaw {
  std::string name;
  Nat layer = 0;
  std::vector<AuxSchema> components;
  std::vector<Clause> clauses;
  std::string source;
  int line = 0;
  Diagnostics issues;  // structural problems found while parsing
};

// Nat symbol numbering inside clause bodies: schema nats first, then the
// matched constructor's nats.
std::vector<std::string> clause_nat_names(const AuxSchema& schema, const Clause& c,
                                          const Signature& sig);

class LawStack {
 public:
  LawStack() = default;
  explicit LawStack(Signature sig);

  const Signature& sig() const { return data_->sig; }
  const AuxTable& aux() const { return data_->aux; }
  std::size_t depth() const { return data_->layers.size(); }
  const std::vector<std::vector<StructuralLaw>>& layers() const { return data_->layers; }

  const StructuralLaw* find_law(std::string_view name) const;
  // Law owning an auxiliary operator, with the component position.
  std::pair<const StructuralLaw*, std::uint32_t> owner(AuxId id) const;
  std::optional<std::size_t> layer_of(AuxId id) const;

  // Clauses applicable to an Aux node whose main head is `op` or a variable of `kind`.
  const std::vector<const Clause*>& clauses_for_op(AuxId id, OpId op) const;
  const std::vector<const Clause*>& clauses_for_var(AuxId id, KindId kind) const;
  // Ids of the components of the law owning `id`, by component position.
  const std::vector<AuxId>& sibling_ids(AuxId id) const;

  LawStack with_layer(std::vector<StructuralLaw> laws) const;

 private:
  struct Entry {
    std::size_t layer = 0;
    std::size_t law = 0;
    std::uint32_t component = 0;
    std::vector<std::vector<const Clause*>> by_op;
    std::vector<std::vector<const Clause*>> by_kind;
    std::vector<AuxId> siblings;
  };
  struct Data {
    Signature sig;
    AuxTable aux;
    std::vector<std::vector<StructuralLaw>> layers;
    std::vector<Entry> entries;  // per AuxId
  };
  std::shared_ptr<Data> data_;
};

Diagnostics validate_law(const LawStack& stack, const StructuralLaw& law);
// Checks a template body living at the result context of `schema`, where
// `main` names the main argument. Every law on the stack may be used.
Diagnostics validate_template(const LawStack& stack, const AuxSchema& schema, const Body& body,
                              const std::string& subject);

// Validates every law against `stack` at layer depth(), then appends them as
// one layer. Laws in one layer must not reference each other.
// Throws ValidationError.
LawStack push_layer(const LawStack& stack, std::vector<StructuralLaw> laws);

// Parsing and printing of `(law ...)` forms. Auxiliary names in bodies stay
// unresolved until push_layer.
StructuralLaw parse_law(const Signature& sig, const Sexp& form, const std::string& source = "<input>");
std::vector<StructuralLaw> parse_laws(const Signature& sig, std::string_view text,
                                      const std::string& source = "<input>");
Sexp law_to_sexp(const Signature& sig, const StructuralLaw& law);
// Builds a stack from laws grouped by their declared layer.
LawStack build_stack(Signature sig, std::vector<StructuralLaw> laws);

// Pieces shared with the equation parser.
AuxSchema parse_schema(const Signature& sig, const Sexp& form, Nat layer, const std::string& source);
Sexp schema_to_sexp(const Signature& sig, const AuxSchema& schema);

struct BodyScope {
  const Signature* sig = nullptr;
  const std::vector<AuxSchema>* components = nullptr;  // for rc targets
  const AuxSchema* schema = nullptr;                   // params, nats
  // Clause-level symbols.
  const OpSchema* op = nullptr;  // matched constructor
  bool on_var = false;
  KindId var_kind = 0;
  std::vector<std::string> binds;
  bool template_mode = false;  // main symbol allowed, rc forbidden
  bool fresh_allowed = false;
  KindId fresh_kind = 0;
  Diagnostics* issues = nullptr;
  std::string subject;
};

BodyPtr parse_body(const BodyScope& scope, const Sexp& s, const std::string& source);
// Copy of `b` with auxiliary names resolved against `aux`.
BodyPtr link_body(const AuxTable& aux, const BodyPtr& b);
Sexp body_to_sexp(const BodyScope& scope, const Body& b);

// ---------------------------------------------------------------------------
// Normalization

struct NormalizeStats {
  std::uint64_t steps = 0;
};

// Innermost-first normal form of `t` living at `ctx` (zeros if omitted).
TermPtr normalize(const LawStack& stack, const TermPtr& t, const Context& ctx);
TermPtr normalize(const LawStack& stack, const TermPtr& t);
// Alternative strategy rewriting outermost redexes first.
TermPtr normalize_outermost(const LawStack& stack, const TermPtr& t, const Context& ctx);
AuxArg normalize_arg(const LawStack& stack, const AuxArg& a, const Context& ctx);

// One head rewrite: the matching clause body instantiated literally, with
// recursive calls as formal Aux nodes. Returns nullopt when `t` is not an
// Aux node with a constructor or non-generic variable at the head.
std::optional<TermPtr> step(const LawStack& stack, const TermPtr& t, const Context& ctx);

// The result context is inferred as zeros unless given.
TermPtr apply_aux(const LawStack& stack, std::string_view name, std::vector<Nat> nats,
                  TermPtr main, std::vector<AuxArg> params);
TermPtr apply_aux(const LawStack& stack, std::string_view name, std::vector<Nat> nats,
                  TermPtr main, std::vector<AuxArg> params, const Context& ctx);

bool is_stuck(const LawStack& stack, const Term& t);
Context default_context(const Signature& sig);

// Instantiates a body in the frame of an Aux node. Used by the equation
// checker to hook recursive calls.
struct Instance {
  AuxId aux = 0;
  std::vector<Nat> nats;
  TermPtr main;
  std::vector<AuxArg> params;
  Context ctx;  // result context
};

using RecHook = std::function<TermPtr(std::uint32_t component, std::vector<Nat> nats, TermPtr child,
                                      std::vector<AuxArg> args, const Context& ctx)>;

// Evaluates `body` for the given instance. With no hook, recursive calls are
// normalized (normalize=true) or left formal. Template bodies (Kind::Main)
// are evaluated with `clause` == nullptr. With `components`, the schema is
// taken from them instead of the stack.
TermPtr instantiate_body(const LawStack& stack, const Instance& inst, const Clause* clause,
                         const BodyPtr& body, bool normalize, const RecHook* hook = nullptr,
                         const std::vector<AuxSchema>* components = nullptr);

// Clause chosen for an instance whose main is a constructor or variable.
const Clause* select_clause(const LawStack& stack, const Instance& inst);
// First clause of `cs` whose guards hold, or nullptr.
const Clause* select_among(const std::vector<const Clause*>& cs, const Term& main, const std::vector<AuxArg>& params);

// ---------------------------------------------------------------------------
// Augmented algebras

template <typename V>
struct AlgArg {
  enum class Kind { Value, Values, Shift, Ren, Index } kind = Kind::Value;
  V value{};
  std::vector<V> values;
  std::vector<Index> prefix;
  Index index = 0;  // Shift/Ren: shift; Index: variable index
  KindId var_kind = 0;
};

template <typename V>
struct AugmentedAlgebra {
  using OpFn = std::function<V(const std::vector<Nat>&, const std::vector<V>&)>;
  using AuxFn = std::function<V(const std::vector<Nat>&, const V&, const std::vector<AlgArg<V>>&)>;
  using VarFn = std::function<V(KindId, Index)>;
  std::function<bool(const V&, const V&)> equal;
  std::function<std::string(const V&)> show;
  std::map<std::string, OpFn> ops;
  std::map<std::string, AuxFn> aux;
  VarFn var;
};

template <typename V>
V fold(const LawStack& stack, const AugmentedAlgebra<V>& alg, const Term& t);

template <typename V>
AlgArg<V> fold_arg(const LawStack& stack, const AugmentedAlgebra<V>& alg, const AuxArg& a) {
  AlgArg<V> out;
  if (const auto* x = std::get_if<TermArg>(&a)) {
    out.value = fold(stack, alg, *x->term);
  } else if (const auto* x = std::get_if<EnvArg>(&a)) {
    out.kind = AlgArg<V>::Kind::Values;
    out.var_kind = x->kind;
    for (const auto& e : x->entries) out.values.push_back(fold(stack, alg, *e));
  } else if (const auto* x = std::get_if<ShiftEnvArg>(&a)) {
    out.kind = AlgArg<V>::Kind::Shift;
    for (const auto& e : x->prefix) out.values.push_back(fold(stack, alg, *e));
    out.index = x->shift;
  } else if (const auto* x = std::get_if<ShiftRenArg>(&a)) {
    out.kind = AlgArg<V>::Kind::Ren;
    out.prefix = x->prefix;
    out.index = x->shift;
  } else {
    const auto& v = std::get<VarRefArg>(a);
    out.kind = AlgArg<V>::Kind::Index;
    out.var_kind = v.kind;
    out.index = v.index;
  }
  return out;
}

// Structural evaluation. Binders are not interpreted: a child under a binder
// is folded like any other child, and variables go to `alg.var`.
template <typename V>
V fold(const LawStack& stack, const AugmentedAlgebra<V>& alg, const Term& t) {
  switch (t.tag()) {
    case Term::Tag::Var:
      if (!alg.var) throw AlgebraIncomplete("algebra has no variable evaluator");
      return alg.var(t.kind(), t.index());
    case Term::Tag::Con: {
      const auto& name = stack.sig().op(t.op()).name;
      auto it = alg.ops.find(name);
      if (it == alg.ops.end()) throw AlgebraIncomplete("algebra has no evaluator for operator " + name);
      std::vector<V> kids;
      kids.reserve(t.children().size());
      for (const auto& c : t.children()) kids.push_back(fold(stack, alg, *c));
      return it->second(t.nats(), kids);
    }
    case Term::Tag::Aux: {
      const auto& name = stack.aux().at(t.op()).name;
      auto it = alg.aux.find(name);
      if (it == alg.aux.end()) throw AlgebraIncomplete("algebra has no evaluator for auxiliary operator " + name);
      std::vector<AlgArg<V>> ps;
      for (const auto& p : t.params()) ps.push_back(fold_arg(stack, alg, p));
      return it->second(t.nats(), fold(stack, alg, *t.main()), ps);
    }
  }
  throw AlgebraIncomplete("unreachable");
}

}  // namespace structlaws
