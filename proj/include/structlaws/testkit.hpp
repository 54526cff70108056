#pragma once

// Deterministic enumeration of terms, environments and instance tuples,
// seeded sampling, and check reports.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "structlaws/law.hpp"

namespace structlaws {

struct EnumOptions {
  bool closed = true;        // no variables of generic kinds
  bool aux_allowed = false;  // include formal Aux nodes of the stack
  Index env_bound = 2;       // env lengths and shift-env / renaming prefixes inside Aux nodes
  Index shift_bound = 1;     // shifts of shift-envs and renamings inside Aux nodes
  Nat nat_bound = 2;         // nat arguments not fixed by the sort
};

// Memoized enumeration by exact size. In unscoped signatures the context
// count bounds the free indices.
class Enumerator {
 public:
  explicit Enumerator(const LawStack& stack, EnumOptions opts = {});

  const std::vector<TermPtr>& exact(const Sort& sort, const Context& ctx, std::size_t size);
  std::vector<TermPtr> upto(const Sort& sort, const Context& ctx, std::size_t size);

  const LawStack& stack() const { return stack_; }
  const EnumOptions& options() const { return opts_; }

 private:
  using Key = std::tuple<FamilyId, std::int64_t, std::vector<Index>, std::size_t>;
  void fill(const Sort& sort, const Context& ctx, std::size_t size, std::vector<TermPtr>& out);

  LawStack stack_;
  EnumOptions opts_;
  std::map<Key, std::vector<TermPtr>> memo_;
};

struct EnumSpec {
  Sort sort;
  Context ctx;
  std::size_t size = 0;
  bool closed = true;
  bool aux_allowed = false;
};

std::vector<TermPtr> enum_terms(const LawStack& stack, const EnumSpec& spec);

// All scoped envs of exactly `length` entries drawn from `entries`, in
// lexicographic order of entry positions.
std::vector<EnvArg> enum_envs(KindId kind, Index length, const std::vector<TermPtr>& entries);
// Shift-envs with prefix length <= max_prefix and shift <= max_shift, ordered
// by prefix length, then shift, then entries. The identity (no prefix, shift
// 0) comes first.
std::vector<ShiftEnvArg> enum_shift_envs(Index max_prefix, Index max_shift, const std::vector<TermPtr>& entries);
// Renamings with prefix entries < index_bound, same order.
std::vector<ShiftRenArg> enum_shift_rens(Index max_prefix, Index max_shift, Index index_bound);

// Uniform over enum_terms(spec). Throws EmptyClass.
TermPtr rand_term(const LawStack& stack, const EnumSpec& spec, std::uint64_t seed);
// Uniform index in [0, n) by rejection, independent of the standard library's
// distribution implementations.
std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n);

// ---------------------------------------------------------------------------
// Instance spaces: the mixed-radix product of argument lists of one schema.

struct Bounds {
  std::size_t size = 4;        // main argument
  std::size_t param_size = 2;  // term parameters and env entries
  Index ctx = 1;               // result contexts and env lengths; free indices in unscoped mode
  Index prefix = 2;            // shift-env and renaming prefixes
  Index shift = 1;             // shift-env and renaming shifts
  std::optional<Nat> nats;     // nat arguments; defaults to `size`
};

struct InstanceValue {
  std::vector<Nat> nats;
  Context ctx;
  TermPtr main;
  std::vector<AuxArg> params;
};

class InstanceSpace {
 public:
  InstanceSpace(Enumerator& en, const AuxSchema& schema, const Bounds& b);
  std::uint64_t size() const { return total_; }
  InstanceValue at(std::uint64_t i) const;

 private:
  struct Block {
    std::vector<Nat> nats;
    Context ctx;
    std::vector<std::vector<AuxArg>> axes;  // axis 0: main (TermArg)
    std::uint64_t count = 0;
  };
  std::vector<Block> blocks_;
  std::vector<std::uint64_t> starts_;
  std::uint64_t total_ = 0;
};

// One-line rendering of an instance for counterexample listings.
std::string describe_instance(const LawStack& stack, const AuxSchema& schema, const InstanceValue& v);

// Context tuples with every non-generic coordinate <= bound.
std::vector<Context> contexts_upto(const Signature& sig, Index bound);

// ---------------------------------------------------------------------------
// Reports

struct Counterexample {
  std::string inputs;
  std::string lhs;
  std::string rhs;
};

struct Report {
  std::string name;
  std::uint64_t instances = 0;
  std::uint64_t failures = 0;
  std::vector<Counterexample> counterexamples;  // first failures in enumeration order
  double elapsed_ms = 0;
  std::vector<std::string> notes;
  bool passed() const { return failures == 0; }
};

inline constexpr std::size_t kMaxCounterexamples = 10;

// Runs `check` on every index of [0, n), split into `jobs` contiguous chunks.
// `check` returns a counterexample on failure. The merged report does not
// depend on `jobs`.
Report run_indexed(const std::string& name, std::uint64_t n, unsigned jobs,
                   const std::function<std::optional<Counterexample>(std::uint64_t)>& check);

// Sums the parts; their counterexamples and notes are tagged with the part name.
Report merge_reports(const std::string& name, const std::vector<Report>& parts);

// elapsed_ms is null unless `timing`, so that output is reproducible.
std::string report_json(const Report& r, bool timing);
std::string reports_json(const std::string& bundle, const std::vector<Report>& rs, bool timing);
std::string report_text(const Report& r);

}  // namespace structlaws
