#include "structlaws/testkit.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <thread>

#include <json.hpp>

#include "structlaws/syntax.hpp"

namespace structlaws {

namespace {

// Solves nats so that `result` instantiates to `sort`. Unconstrained nats
// range over [0, cap]. Returns every solution in lexicographic order.
std::vector<std::vector<Nat>> solve_nats(const SortExpr& result, std::size_t nparams, const Sort& sort,
                                         std::size_t cap) {
  if (result.family != sort.family) return {};
  std::optional<Nat> fixed_value;
  std::uint32_t fixed_param = NatExpr::kNoParam;
  if (result.arg.has_value() != sort.arg.has_value()) return {};
  if (result.arg) {
    const NatExpr& e = *result.arg;
    if (e.is_literal()) {
      if (e.offset != *sort.arg) return {};
    } else {
      if (*sort.arg < e.offset) return {};
      fixed_param = e.param;
      fixed_value = *sort.arg - e.offset;
    }
  }
  std::vector<std::vector<Nat>> out;
  std::vector<Nat> cur(nparams, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == nparams) {
      out.push_back(cur);
      return;
    }
    if (i == fixed_param) {
      cur[i] = *fixed_value;
      self(self, i + 1);
      return;
    }
    for (Nat v = 0; v <= cap; ++v) {
      cur[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

struct Slot {
  Sort sort;
  Context ctx;
};

// Calls `fn` with one term per slot for every way of splitting `budget`
// nodes over the slots, each slot taking at least one.
template <typename Fn>
void for_each_split(Enumerator& en, const std::vector<Slot>& slots, std::size_t budget, Fn&& fn) {
  if (slots.empty()) {
    if (budget == 0) {
      std::vector<TermPtr> none;
      fn(none);
    }
    return;
  }
  if (budget < slots.size()) return;
  std::vector<TermPtr> picked(slots.size());
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i + 1 == slots.size()) {
      for (const auto& t : en.exact(slots[i].sort, slots[i].ctx, left)) {
        picked[i] = t;
        fn(picked);
      }
      return;
    }
    std::size_t rest = slots.size() - i - 1;
    for (std::size_t k = 1; k + rest <= left; ++k) {
      const auto& opts = en.exact(slots[i].sort, slots[i].ctx, k);
      for (const auto& t : opts) {
        picked[i] = t;
        self(self, i + 1, left - k);
      }
    }
  };
  rec(rec, 0, budget);
}

template <typename T, typename Fn>
void for_each_tuple(const std::vector<T>& items, std::size_t length, Fn&& fn) {
  std::vector<T> cur(length);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == length) {
      fn(cur);
      return;
    }
    for (const auto& x : items) {
      cur[i] = x;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace

Enumerator::Enumerator(const LawStack& stack, EnumOptions opts) : stack_(stack), opts_(opts) {}

const std::vector<TermPtr>& Enumerator::exact(const Sort& sort, const Context& ctx, std::size_t size) {
  Key key{sort.family, sort.arg ? static_cast<std::int64_t>(*sort.arg) : -1, std::vector<Index>(ctx.counts.begin(), ctx.counts.end()), size};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  std::vector<TermPtr> out;
  fill(sort, ctx, size, out);
  sort_canonical(out);
  return memo_.emplace(std::move(key), std::move(out)).first->second;
}

std::vector<TermPtr> Enumerator::upto(const Sort& sort, const Context& ctx, std::size_t size) {
  std::vector<TermPtr> out;
  for (std::size_t k = 1; k <= size; ++k) {
    const auto& v = exact(sort, ctx, k);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

void Enumerator::fill(const Sort& sort, const Context& ctx, std::size_t size, std::vector<TermPtr>& out) {
  if (size == 0) return;
  const Signature& sig = stack_.sig();
  std::size_t cap = opts_.nat_bound;

  if (size == 1) {
    for (KindId k = 0; k < sig.kinds.size(); ++k) {
      if (!sig.var_sort[k] || *sig.var_sort[k] != sort) continue;
      if (sig.kinds[k].generic && opts_.closed) continue;
      if (ctx[k] == kOmega) throw Error("enumeration needs a finite context");
      for (Index i = 0; i < ctx[k]; ++i) out.push_back(Term::var(k, i));
    }
  }

  for (OpId id = 0; id < sig.ops.size(); ++id) {
    const OpSchema& op = sig.ops[id];
    for (const auto& nats : solve_nats(op.result, op.nat_params, sort, cap)) {
      std::vector<Slot> slots;
      std::vector<std::size_t> slot_of(op.args.size(), 0);
      std::vector<KindId> refs;
      std::vector<std::size_t> ref_pos;
      for (std::size_t i = 0; i < op.args.size(); ++i) {
        if (const auto* sub = std::get_if<SubArgSpec>(&op.args[i])) {
          slot_of[i] = slots.size();
          slots.push_back({instantiate(sub->sort, nats), ctx.extended(sub->binders, nats)});
        } else {
          ref_pos.push_back(i);
          refs.push_back(std::get<RefArgSpec>(op.args[i]).kind);
        }
      }
      if (size < 1 + refs.size()) continue;
      std::size_t budget = size - 1 - refs.size();
      std::vector<std::vector<Index>> ref_choices;
      for (KindId k : refs) {
        std::vector<Index> v;
        for (Index i = 0; i < ctx[k]; ++i) v.push_back(i);
        ref_choices.push_back(std::move(v));
      }
      for_each_split(*this, slots, budget, [&](const std::vector<TermPtr>& picked) {
        std::vector<Index> cur(refs.size());
        auto rec = [&](auto&& self, std::size_t r) -> void {
          if (r == refs.size()) {
            std::vector<TermPtr> kids(op.args.size());
            std::size_t ri = 0;
            for (std::size_t i = 0; i < op.args.size(); ++i) {
              if (std::holds_alternative<SubArgSpec>(op.args[i])) kids[i] = picked[slot_of[i]];
              else { kids[i] = Term::var(refs[ri], cur[ri]); ++ri; }
            }
            out.push_back(Term::con(id, nats, std::move(kids)));
            return;
          }
          for (Index i : ref_choices[r]) {
            cur[r] = i;
            self(self, r + 1);
          }
        };
        rec(rec, 0);
      });
    }
  }

  if (!opts_.aux_allowed) return;
  const auto& schemas = stack_.aux().schemas();
  for (AuxId aid = 0; aid < schemas.size(); ++aid) {
    const AuxSchema& sc = schemas[aid];
    for (const auto& nats : solve_nats(sc.result, sc.nat_names.size(), sort, cap)) {
      // Shape choices for each parameter: env lengths, prefix lengths, shifts.
      struct Shape {
        Index length = 0;
        Index shift = 0;
      };
      std::vector<std::vector<Shape>> shapes;
      for (const auto& p : sc.params) {
        std::vector<Shape> v;
        switch (p.kind) {
          case ParamKind::Env:
            for (Index l = 0; l <= opts_.env_bound; ++l) v.push_back({l, 0});
            break;
          case ParamKind::ShiftEnv:
          case ParamKind::ShiftRen:
            for (Index l = 0; l <= opts_.env_bound; ++l)
              for (Index s = 0; s <= opts_.shift_bound; ++s) v.push_back({l, s});
            break;
          default:
            v.push_back({});
        }
        shapes.push_back(std::move(v));
      }
      std::vector<Shape> chosen(sc.params.size());
      auto per_shape = [&]() {
        std::vector<AuxArg> dummy;
        for (std::size_t j = 0; j < sc.params.size(); ++j) {
          if (sc.params[j].kind == ParamKind::Env)
            dummy.push_back(EnvArg{sc.params[j].var_kind, std::vector<TermPtr>(chosen[j].length)});
          else dummy.push_back(TermArg{});
        }
        AuxContexts cs = aux_contexts(sc, nats, dummy, ctx);
        std::vector<Slot> slots;
        slots.push_back({instantiate(sc.main_sort, nats), cs.main});
        std::size_t fixed = 0;
        std::vector<std::size_t> first(sc.params.size(), 0);
        for (std::size_t j = 0; j < sc.params.size(); ++j) {
          const auto& p = sc.params[j];
          first[j] = slots.size();
          switch (p.kind) {
            case ParamKind::Term:
              slots.push_back({instantiate(p.sort, nats), cs.params[j]});
              break;
            case ParamKind::Env:
            case ParamKind::ShiftEnv:
              for (Index e = 0; e < chosen[j].length; ++e)
                slots.push_back({instantiate(p.sort, nats), cs.params[j]});
              break;
            case ParamKind::ShiftRen:
              fixed += chosen[j].length;
              break;
            case ParamKind::VarRef:
              fixed += 1;
              break;
          }
        }
        if (size < 1 + fixed) return;
        // Fixed-size choices: renaming prefixes and variable references.
        std::vector<std::vector<AuxArg>> fixed_opts(sc.params.size());
        for (std::size_t j = 0; j < sc.params.size(); ++j) {
          const auto& p = sc.params[j];
          if (p.kind == ParamKind::VarRef) {
            Index bound = cs.params[j][p.var_kind];
            for (Index i = 0; i < bound; ++i) fixed_opts[j].push_back(VarRefArg{p.var_kind, i});
          } else if (p.kind == ParamKind::ShiftRen) {
            std::vector<Index> idx;
            for (Index i = 0; i < ctx[0] + opts_.shift_bound; ++i) idx.push_back(i);
            for_each_tuple(idx, chosen[j].length, [&](const std::vector<Index>& pre) {
              fixed_opts[j].push_back(ShiftRenArg{pre, chosen[j].shift});
            });
          }
        }
        for_each_split(*this, slots, size - 1 - fixed, [&](const std::vector<TermPtr>& picked) {
          std::vector<AuxArg> params(sc.params.size());
          for (std::size_t j = 0; j < sc.params.size(); ++j) {
            const auto& p = sc.params[j];
            if (p.kind == ParamKind::Term) params[j] = TermArg{picked[first[j]]};
            else if (p.kind == ParamKind::Env)
              params[j] = EnvArg{p.var_kind, {picked.begin() + first[j], picked.begin() + first[j] + chosen[j].length}};
            else if (p.kind == ParamKind::ShiftEnv)
              params[j] = ShiftEnvArg{{picked.begin() + first[j], picked.begin() + first[j] + chosen[j].length},
                                      chosen[j].shift};
          }
          auto rec = [&](auto&& self, std::size_t j) -> void {
            if (j == sc.params.size()) {
              out.push_back(Term::aux(aid, nats, picked[0], params));
              return;
            }
            const auto k = sc.params[j].kind;
            if (k != ParamKind::VarRef && k != ParamKind::ShiftRen) {
              self(self, j + 1);
              return;
            }
            for (const auto& a : fixed_opts[j]) {
              params[j] = a;
              self(self, j + 1);
            }
          };
          rec(rec, 0);
        });
      };
      auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == sc.params.size()) {
          per_shape();
          return;
        }
        for (const auto& s : shapes[j]) {
          chosen[j] = s;
          self(self, j + 1);
        }
      };
      rec(rec, 0);
    }
  }
}

std::vector<TermPtr> enum_terms(const LawStack& stack, const EnumSpec& spec) {
  EnumOptions o;
  o.closed = spec.closed;
  o.aux_allowed = spec.aux_allowed;
  Enumerator en(stack, o);
  return en.upto(spec.sort, spec.ctx, spec.size);
}

std::vector<EnvArg> enum_envs(KindId kind, Index length, const std::vector<TermPtr>& entries) {
  std::vector<EnvArg> out;
  for_each_tuple(entries, length, [&](const std::vector<TermPtr>& t) { out.push_back(EnvArg{kind, t}); });
  return out;
}

std::vector<ShiftEnvArg> enum_shift_envs(Index max_prefix, Index max_shift, const std::vector<TermPtr>& entries) {
  std::vector<ShiftEnvArg> out;
  for (Index p = 0; p <= max_prefix; ++p)
    for (Index s = 0; s <= max_shift; ++s)
      for_each_tuple(entries, p, [&](const std::vector<TermPtr>& t) { out.push_back(ShiftEnvArg{t, s}); });
  return out;
}

std::vector<ShiftRenArg> enum_shift_rens(Index max_prefix, Index max_shift, Index index_bound) {
  std::vector<Index> idx;
  for (Index i = 0; i < index_bound; ++i) idx.push_back(i);
  std::vector<ShiftRenArg> out;
  for (Index p = 0; p <= max_prefix; ++p)
    for (Index s = 0; s <= max_shift; ++s)
      for_each_tuple(idx, p, [&](const std::vector<Index>& t) { out.push_back(ShiftRenArg{t, s}); });
  return out;
}

std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t n) {
  if (n == 0) throw EmptyClass("cannot sample from an empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    std::uint64_t x = gen();
    if (x < limit) return x % n;
  }
}

TermPtr rand_term(const LawStack& stack, const EnumSpec& spec, std::uint64_t seed) {
  auto all = enum_terms(stack, spec);
  if (all.empty()) throw EmptyClass("no terms of sort " + sort_name(stack.sig(), spec.sort) + " up to size " +
                                    std::to_string(spec.size));
  std::mt19937_64 gen(seed);
  return all[uniform_index(gen, all.size())];
}

// ---------------------------------------------------------------------------

std::vector<Context> contexts_upto(const Signature& sig, Index bound) {
  if (!sig.scoped()) return {Context{{bound}}};
  std::vector<Context> out;
  Context cur = Context::zeros(sig.kinds.size());
  auto rec = [&](auto&& self, KindId k) -> void {
    if (k == sig.kinds.size()) {
      out.push_back(cur);
      return;
    }
    Index top = sig.kinds[k].generic ? 0 : bound;
    for (Index v = 0; v <= top; ++v) {
      cur.counts[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

InstanceSpace::InstanceSpace(Enumerator& en, const AuxSchema& schema, const Bounds& b) {
  const Signature& sig = en.stack().sig();
  Nat nat_top = b.nats ? *b.nats : static_cast<Nat>(b.size);
  std::vector<std::vector<Nat>> nat_choices;
  {
    std::vector<Nat> cur(schema.nat_names.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == cur.size()) {
        nat_choices.push_back(cur);
        return;
      }
      for (Nat v = 0; v <= nat_top; ++v) {
        cur[i] = v;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  std::vector<std::size_t> envs;
  for (std::size_t j = 0; j < schema.params.size(); ++j)
    if (schema.params[j].kind == ParamKind::Env) envs.push_back(j);

  for (const auto& nats : nat_choices) {
    for (const auto& ctx : contexts_upto(sig, b.ctx)) {
      std::vector<Index> lengths(envs.size(), 0);
      auto rec = [&](auto&& self, std::size_t e) -> void {
        if (e < envs.size()) {
          for (Index l = 0; l <= b.ctx; ++l) {
            lengths[e] = l;
            self(self, e + 1);
          }
          return;
        }
        std::vector<AuxArg> dummy;
        for (std::size_t j = 0, ei = 0; j < schema.params.size(); ++j) {
          if (schema.params[j].kind == ParamKind::Env)
            dummy.push_back(EnvArg{schema.params[j].var_kind, std::vector<TermPtr>(lengths[ei++])});
          else dummy.push_back(TermArg{});
        }
        AuxContexts cs = aux_contexts(schema, nats, dummy, ctx);
        Block blk;
        blk.nats = nats;
        blk.ctx = ctx;
        std::vector<AuxArg> mains;
        for (const auto& t : en.upto(instantiate(schema.main_sort, nats), cs.main, b.size))
          mains.push_back(TermArg{t});
        blk.axes.push_back(std::move(mains));
        for (std::size_t j = 0, ei = 0; j < schema.params.size(); ++j) {
          const auto& p = schema.params[j];
          std::vector<AuxArg> axis;
          switch (p.kind) {
            case ParamKind::Term:
              for (const auto& t : en.upto(instantiate(p.sort, nats), cs.params[j], b.param_size))
                axis.push_back(TermArg{t});
              break;
            case ParamKind::Env: {
              auto entries = en.upto(instantiate(p.sort, nats), cs.params[j], b.param_size);
              for (auto& env : enum_envs(p.var_kind, lengths[ei++], entries)) axis.push_back(std::move(env));
              break;
            }
            case ParamKind::ShiftEnv: {
              auto entries = en.upto(instantiate(p.sort, nats), cs.params[j], b.param_size);
              for (auto& s : enum_shift_envs(b.prefix, b.shift, entries)) axis.push_back(std::move(s));
              break;
            }
            case ParamKind::ShiftRen:
              for (auto& r : enum_shift_rens(b.prefix, b.shift, b.ctx + b.shift)) axis.push_back(std::move(r));
              break;
            case ParamKind::VarRef:
              for (Index i = 0; i < cs.params[j][p.var_kind]; ++i) axis.push_back(VarRefArg{p.var_kind, i});
              break;
          }
          blk.axes.push_back(std::move(axis));
        }
        std::uint64_t n = 1;
        for (const auto& a : blk.axes) n *= a.size();
        if (n == 0) return;
        blk.count = n;
        starts_.push_back(total_);
        total_ += n;
        blocks_.push_back(std::move(blk));
      };
      rec(rec, 0);
    }
  }
}

std::string describe_instance(const LawStack& stack, const AuxSchema& schema, const InstanceValue& v) {
  const Signature& sig = stack.sig();
  std::string s;
  if (sig.scoped()) {
    s += "ctx (";
    for (std::size_t k = 0; k < v.ctx.counts.size(); ++k) s += (k ? " " : "") + std::to_string(v.ctx.counts[k]);
    s += ") ";
  }
  for (std::size_t i = 0; i < v.nats.size(); ++i) s += schema.nat_names[i] + "=" + std::to_string(v.nats[i]) + " ";
  s += schema.main_name + "=" + print_term(sig, &stack.aux(), *v.main);
  for (std::size_t j = 0; j < v.params.size(); ++j)
    s += " " + schema.params[j].name + "=" + print_arg(sig, &stack.aux(), v.params[j]);
  return s;
}

InstanceValue InstanceSpace::at(std::uint64_t i) const {
  if (i >= total_) throw Error("instance index out of range");
  std::size_t bi = std::upper_bound(starts_.begin(), starts_.end(), i) - starts_.begin() - 1;
  const Block& blk = blocks_[bi];
  std::uint64_t local = i - starts_[bi];
  std::vector<std::size_t> digits(blk.axes.size());
  for (std::size_t a = blk.axes.size(); a-- > 0;) {
    digits[a] = local % blk.axes[a].size();
    local /= blk.axes[a].size();
  }
  InstanceValue v;
  v.nats = blk.nats;
  v.ctx = blk.ctx;
  v.main = std::get<TermArg>(blk.axes[0][digits[0]]).term;
  for (std::size_t a = 1; a < blk.axes.size(); ++a) v.params.push_back(blk.axes[a][digits[a]]);
  return v;
}

// ---------------------------------------------------------------------------

Report run_indexed(const std::string& name, std::uint64_t n, unsigned jobs,
                   const std::function<std::optional<Counterexample>(std::uint64_t)>& check) {
  auto t0 = std::chrono::steady_clock::now();
  unsigned workers = std::max(1u, jobs);
  if (n < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, n));
  std::vector<Report> parts(workers);
  auto run = [&](unsigned w) {
    std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
    Report& r = parts[w];
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::optional<Counterexample> cx;
      try {
        cx = check(i);
      } catch (const std::exception& e) {
        cx = Counterexample{"instance " + std::to_string(i), std::string("error: ") + e.what(), ""};
      }
      ++r.instances;
      if (cx) {
        ++r.failures;
        if (r.counterexamples.size() < kMaxCounterexamples) r.counterexamples.push_back(std::move(*cx));
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> ts;
    for (unsigned w = 0; w < workers; ++w) ts.emplace_back(run, w);
    for (auto& t : ts) t.join();
  }
  Report out = merge_reports(name, parts);
  out.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Report merge_reports(const std::string& name, const std::vector<Report>& parts) {
  Report out;
  out.name = name;
  for (const auto& p : parts) {
    out.instances += p.instances;
    out.failures += p.failures;
    out.elapsed_ms += p.elapsed_ms;
    std::string tag = p.name.empty() ? "" : p.name + ": ";
    for (const auto& c : p.counterexamples)
      if (out.counterexamples.size() < kMaxCounterexamples) out.counterexamples.push_back({tag + c.inputs, c.lhs, c.rhs});
    for (const auto& n : p.notes) out.notes.push_back(tag + n);
  }
  return out;
}

namespace {

nlohmann::ordered_json to_json(const Report& r, bool timing) {
  nlohmann::ordered_json j;
  j["suite"] = r.name;
  j["status"] = r.passed() ? "pass" : "fail";
  j["instances"] = r.instances;
  j["failures"] = r.failures;
  auto cx = nlohmann::ordered_json::array();
  for (const auto& c : r.counterexamples) {
    nlohmann::ordered_json e;
    e["inputs"] = c.inputs;
    e["lhs"] = c.lhs;
    e["rhs"] = c.rhs;
    cx.push_back(std::move(e));
  }
  j["counterexamples"] = std::move(cx);
  if (!r.notes.empty()) j["notes"] = r.notes;
  // Null unless timing was requested.
  j["elapsed_ms"] = timing ? nlohmann::ordered_json(static_cast<std::int64_t>(r.elapsed_ms)) : nlohmann::ordered_json();
  return j;
}

}  // namespace

std::string report_json(const Report& r, bool timing) { return to_json(r, timing).dump(2); }

std::string reports_json(const std::string& bundle, const std::vector<Report>& rs, bool timing) {
  nlohmann::ordered_json j;
  j["bundle"] = bundle;
  bool ok = std::all_of(rs.begin(), rs.end(), [](const Report& r) { return r.passed(); });
  j["status"] = ok ? "pass" : "fail";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rs) arr.push_back(to_json(r, timing));
  j["suites"] = std::move(arr);
  return j.dump(2);
}

std::string report_text(const Report& r) {
  std::string s = r.name + ": " + (r.passed() ? "pass" : "FAIL") + " (" + std::to_string(r.instances) +
                  " instances, " + std::to_string(r.failures) + " counterexamples)\n";
  for (const auto& n : r.notes) s += "  note: " + n + "\n";
  for (const auto& c : r.counterexamples) {
    s += "  " + c.inputs + "\n";
    s += "    lhs: " + c.lhs + "\n";
    if (!c.rhs.empty()) s += "    rhs: " + c.rhs + "\n";
  }
  return s;
}

}  // namespace structlaws
