#pragma once

// Representation layer: binding signatures, scoping contexts, well-scoped
// terms with formal auxiliary-operator nodes, structural order and the
// functorial renaming action.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "structlaws/error.hpp"

namespace structlaws {

using KindId = std::uint32_t;
using OpId = std::uint32_t;
using AuxId = std::uint32_t;
using FamilyId = std::uint32_t;
using Index = std::uint64_t;
using Nat = std::uint32_t;

// Context count of the single kind of an unscoped signature.
inline constexpr Index kOmega = std::numeric_limits<Index>::max();

enum class AmbientMode { Scoped, Unscoped };

// Natural-number expression over schema parameters: `n`, `$i` or `$i + n`.
struct NatExpr {
  static constexpr std::uint32_t kNoParam = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t param = kNoParam;
  Nat offset = 0;

  static NatExpr lit(Nat n) { return NatExpr{kNoParam, n}; }
  static NatExpr var(std::uint32_t p, Nat off = 0) { return NatExpr{p, off}; }
  bool is_literal() const { return param == kNoParam; }
  Nat eval(std::span<const Nat> nats) const;
  auto operator<=>(const NatExpr&) const = default;
};

struct SortExpr {
  FamilyId family = 0;
  std::optional<NatExpr> arg;
  auto operator<=>(const SortExpr&) const = default;
};

// A concrete sort: family plus evaluated natural argument.
struct Sort {
  FamilyId family = 0;
  std::optional<Nat> arg;
  auto operator<=>(const Sort&) const = default;
};

Sort instantiate(const SortExpr& e, std::span<const Nat> nats);

struct Binder {
  KindId kind = 0;
  NatExpr count;
  auto operator<=>(const Binder&) const = default;
};

struct SubArgSpec {
  SortExpr sort;
  std::vector<Binder> binders;
};

// A position holding a bare variable name of some kind, e.g. the α of [α]e.
struct RefArgSpec {
  KindId kind = 0;
};

using ArgSpec = std::variant<SubArgSpec, RefArgSpec>;

struct OpSchema {
  std::string name;
  Nat nat_params = 0;
  SortExpr result;
  std::vector<ArgSpec> args;
};

struct VarKind {
  KindId id = 0;
  std::string name;
  // Generic kinds stand for free generators of the term monad: auxiliary
  // operators never inspect them, so formal applications get stuck on them.
  bool generic = false;
};

struct SortFamily {
  std::string name;
  bool parameterized = false;
};

struct Signature {
  std::string name;
  AmbientMode mode = AmbientMode::Scoped;
  std::vector<VarKind> kinds;
  std::vector<SortFamily> sorts;
  // Sort inhabited by a bare variable of each kind; empty for kinds that only
  // occur in reference positions.
  std::vector<std::optional<Sort>> var_sort;
  std::vector<OpSchema> ops;

  std::optional<OpId> find_op(std::string_view name) const;
  std::optional<KindId> find_kind(std::string_view name) const;
  std::optional<FamilyId> find_sort(std::string_view name) const;
  const OpSchema& op(OpId id) const;
  bool scoped() const { return mode == AmbientMode::Scoped; }
};

Diagnostics validate_signature(const Signature& sig);

struct Context {
  using Counts = boost::container::small_vector<Index, 4>;
  Counts counts;

  static Context zeros(std::size_t kinds) { return Context{Counts(kinds, 0)}; }
  static Context omega() { return Context{{kOmega}}; }
  Index operator[](KindId k) const { return counts[k]; }
  Context extended(KindId k, Index by) const;
  Context extended(std::span<const Binder> binders, std::span<const Nat> nats) const;
  Context with(KindId k, Index value) const;
  bool operator==(const Context& o) const { return counts == o.counts; }
  std::strong_ordering operator<=>(const Context& o) const {
    return std::lexicographical_compare_three_way(counts.begin(), counts.end(), o.counts.begin(), o.counts.end());
  }
};

// ---------------------------------------------------------------------------
// Auxiliary operator schemas. They live here because scope checking and
// renaming of Aux nodes depend on them.

enum class ParamKind { Term, Env, ShiftEnv, ShiftRen, VarRef };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Term;
  SortExpr sort;                // Term, Env (entry sort), ShiftEnv (entry sort)
  std::vector<Binder> binders;  // Term: context extension relative to the result
  KindId var_kind = 0;          // Env, VarRef
};

// Contexts of an Aux node are derived from its result context. Env
// parameters of one kind form a chain in declaration order: the last env's
// entries live at the result context, every earlier env's entries live where
// the next env's domain is, and the main argument's coordinate is the first
// env's length.
struct AuxSchema {
  std::string name;
  Nat layer = 0;
  std::vector<std::string> nat_names;
  SortExpr result;
  std::string main_name = "main";
  SortExpr main_sort;
  std::vector<Binder> main_binders;
  std::vector<ParamSpec> params;

  std::optional<std::size_t> find_param(std::string_view n) const;
};

class AuxTable {
 public:
  AuxId add(AuxSchema schema);
  const AuxSchema& at(AuxId id) const;
  std::optional<AuxId> find(std::string_view name) const;
  std::size_t size() const { return schemas_.size(); }
  const std::vector<AuxSchema>& schemas() const { return schemas_; }

 private:
  std::vector<AuxSchema> schemas_;
  std::unordered_map<std::string, AuxId> by_name_;
};

// ---------------------------------------------------------------------------
// Terms

class Term;
using TermPtr = std::shared_ptr<const Term>;

struct TermArg {
  TermPtr term;
};
struct EnvArg {
  KindId kind = 0;
  std::vector<TermPtr> entries;
};
// i < |prefix| maps to prefix[i]; the tail maps i to Var(i - |prefix| + shift).
struct ShiftEnvArg {
  std::vector<TermPtr> prefix;
  Index shift = 0;
};
struct ShiftRenArg {
  std::vector<Index> prefix;
  Index shift = 0;
  Index operator()(Index i) const {
    return i < prefix.size() ? prefix[i] : i - prefix.size() + shift;
  }
};
struct VarRefArg {
  KindId kind = 0;
  Index index = 0;
};

using AuxArg = std::variant<TermArg, EnvArg, ShiftEnvArg, ShiftRenArg, VarRefArg>;

std::size_t arg_size(const AuxArg& a);
std::size_t arg_aux_count(const AuxArg& a);

class Term {
 public:
  enum class Tag : std::uint8_t { Var, Con, Aux };

  static TermPtr var(KindId kind, Index index);
  static TermPtr con(OpId op, std::vector<Nat> nats, std::vector<TermPtr> children);
  static TermPtr con(OpId op, std::vector<TermPtr> children) { return con(op, {}, std::move(children)); }
  static TermPtr aux(AuxId op, std::vector<Nat> nats, TermPtr main, std::vector<AuxArg> params);

  Tag tag() const { return tag_; }
  bool is_var() const { return tag_ == Tag::Var; }
  bool is_con() const { return tag_ == Tag::Con; }
  bool is_aux() const { return tag_ == Tag::Aux; }

  KindId kind() const { return kind_; }
  Index index() const { return index_; }
  // OpId for Con nodes, AuxId for Aux nodes.
  std::uint32_t op() const { return op_; }
  const std::vector<Nat>& nats() const { return nats_; }
  const std::vector<TermPtr>& children() const { return children_; }
  const TermPtr& main() const { return children_.front(); }
  const std::vector<AuxArg>& params() const { return params_; }

  // Total node count; Var, Con and Aux nodes count one each, nat args zero.
  std::size_t size() const { return size_; }
  std::size_t aux_count() const { return aux_count_; }
  bool aux_free() const { return aux_count_ == 0; }

  struct Private {};
  Term(Private, Tag tag) : tag_(tag) {}

 private:
  Tag tag_;
  KindId kind_ = 0;
  Index index_ = 0;
  std::uint32_t op_ = 0;
  std::vector<Nat> nats_;
  std::vector<TermPtr> children_;
  std::vector<AuxArg> params_;
  std::size_t size_ = 1;
  std::size_t aux_count_ = 0;
};

// Canonical total order: size, then head (Var < Con < Aux, then kind/op id),
// then nat args and children lexicographically.
int compare(const Term& a, const Term& b);
int compare(const AuxArg& a, const AuxArg& b);
inline bool term_eq(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool term_eq(const TermPtr& a, const TermPtr& b) { return compare(*a, *b) == 0; }

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return compare(*a, *b) < 0; }
};

void sort_canonical(std::vector<TermPtr>& ts);

// ---------------------------------------------------------------------------
// Scope checking

struct AuxContexts {
  Context main;
  // Context of each parameter: where a term lives, where env entries live,
  // or the context a variable reference indexes into.
  std::vector<Context> params;
};

// Throws ScopeError when parameter shapes do not fit the schema.
AuxContexts aux_contexts(const AuxSchema& schema, std::span<const Nat> nats,
                         std::span<const AuxArg> params, const Context& result);

// Returns an explanation when `t` is not derivable at (ctx, sort).
// Throws UnknownOp / UnknownLaw for ids that do not resolve.
std::optional<std::string> scope_error(const Signature& sig, const AuxTable* aux,
                                       const Context& ctx, const Sort& sort,
                                       const Term& t);

inline bool check_scope(const Signature& sig, const AuxTable* aux, const Context& ctx,
                        const Sort& sort, const Term& t) {
  return !scope_error(sig, aux, ctx, sort, t).has_value();
}

// ---------------------------------------------------------------------------
// Renaming

// A map from one context coordinate of size |image| into a coordinate of size
// `target`. Indices bound below the renamed term (i >= |image|) are sent to
// target + (i - |image|), which extends the map by the identity on the newly
// bound top indices.
struct KindRenaming {
  std::vector<Index> image;
  Index target = 0;
  Index operator()(Index i) const {
    return i < image.size() ? image[i] : target + (i - image.size());
  }
  static KindRenaming identity() { return {}; }
};

struct Renaming {
  std::vector<KindRenaming> kinds;

  static Renaming identity(const Context& ctx);
  // Inclusion ctx -> ctx + e_kind (weakening by one variable of `kind`).
  static Renaming inclusion(const Context& ctx, KindId kind, Index by = 1);
  Context codomain() const;
  // Composite "then g": (this ; g).
  Renaming then(const Renaming& g) const;
};

// Scoped-mode functorial action. `ctx` is the context `t` lives in; every
// kind map must be total on it. Throws ScopeError for partial maps.
TermPtr rename(const Signature& sig, const AuxTable* aux, const TermPtr& t,
               const Context& ctx, const Renaming& maps);

// Same action without the totality check (internal use by the engine).
TermPtr rename_unchecked(const Signature& sig, const AuxTable* aux, const TermPtr& t,
                         const Context& ctx, const Renaming& maps);

// Weakening by inclusion of one fresh variable of `kind` at the top.
TermPtr weaken(const Signature& sig, const AuxTable* aux, const TermPtr& t,
               const Context& ctx, KindId kind);

// Unscoped-mode (De Bruijn) renaming: binders lift the map to 1 + rho.
// Aux-free terms only.
TermPtr rename_unscoped(const Signature& sig, const TermPtr& t, const ShiftRenArg& rho);

}  // namespace structlaws
