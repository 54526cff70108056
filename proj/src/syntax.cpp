#include "structlaws/syntax.hpp"

#include <algorithm>

namespace structlaws {

namespace {

[[noreturn]] void fail(const std::string& source, const Sexp& at, const std::string& what) {
  throw ParseError(source, at.line, what);
}

std::uint64_t parse_u64(const Sexp& s, const std::string& source, const char* what) {
  if (!is_integer_atom(s)) fail(source, s, std::string("expected ") + what + ", got " + to_string(s));
  try {
    return std::stoull(s.atom);
  } catch (const std::exception&) {
    fail(source, s, std::string(what) + " out of range");
  }
}

const std::string& atom_of(const Sexp& s, const std::string& source, const char* what) {
  if (!s.is_atom()) fail(source, s, std::string("expected ") + what + ", got " + to_string(s));
  return s.atom;
}

KindId kind_of(const Signature& sig, const Sexp& s, const std::string& source) {
  const auto& n = atom_of(s, source, "kind name");
  auto k = sig.find_kind(n);
  if (!k) fail(source, s, "unknown kind " + n);
  return *k;
}

Sexp atom(std::string a) { return Sexp::make_atom(std::move(a)); }
Sexp list(std::vector<Sexp> xs) { return Sexp::make_list(std::move(xs)); }

}  // namespace

NatExpr parse_nat_expr(const Sexp& s, const std::string& source,
                       const std::vector<std::string>* nat_names) {
  auto param = [&](const Sexp& a) -> std::uint32_t {
    const auto& name = atom_of(a, source, "nat parameter");
    if (nat_names) {
      auto it = std::find(nat_names->begin(), nat_names->end(), name);
      if (it == nat_names->end()) fail(source, a, "unknown nat parameter " + name);
      return static_cast<std::uint32_t>(it - nat_names->begin());
    }
    if (name.size() < 2 || name[0] != '$') fail(source, a, "expected $i, got " + name);
    return static_cast<std::uint32_t>(parse_u64(Sexp::make_atom(name.substr(1), a.line), source, "parameter index"));
  };
  if (is_integer_atom(s)) return NatExpr::lit(static_cast<Nat>(parse_u64(s, source, "natural")));
  if (s.is_atom()) return NatExpr::var(param(s));
  if (s.has_head("+") && s.size() == 3)
    return NatExpr::var(param(s[1]), static_cast<Nat>(parse_u64(s[2], source, "natural")));
  fail(source, s, "malformed nat expression " + to_string(s));
}

Sexp nat_expr_to_sexp(const NatExpr& e, const std::vector<std::string>* nat_names) {
  if (e.is_literal()) return atom(std::to_string(e.offset));
  Sexp p = atom(nat_names ? nat_names->at(e.param) : "$" + std::to_string(e.param));
  if (e.offset == 0) return p;
  return list({atom("+"), p, atom(std::to_string(e.offset))});
}

SortExpr parse_sort_expr(const Signature& sig, const Sexp& s, const std::string& source,
                         const std::vector<std::string>* nat_names) {
  SortExpr out;
  const Sexp& head = s.is_list() ? (s.size() == 2 ? s[0] : (fail(source, s, "malformed sort"), s)) : s;
  const auto& name = atom_of(head, source, "sort name");
  auto f = sig.find_sort(name);
  if (!f) fail(source, s, "unknown sort " + name);
  out.family = *f;
  if (s.is_list()) out.arg = parse_nat_expr(s[1], source, nat_names);
  if (sig.sorts[*f].parameterized != out.arg.has_value())
    fail(source, s, "sort " + name + (out.arg ? " takes no argument" : " needs an argument"));
  return out;
}

Sexp sort_expr_to_sexp(const Signature& sig, const SortExpr& e, const std::vector<std::string>* nat_names) {
  Sexp name = atom(sig.sorts.at(e.family).name);
  if (!e.arg) return name;
  return list({name, nat_expr_to_sexp(*e.arg, nat_names)});
}

std::string sort_name(const Signature& sig, const Sort& s) {
  std::string out = sig.sorts.at(s.family).name;
  if (s.arg) out += "(" + std::to_string(*s.arg) + ")";
  return out;
}

Signature parse_signature(const Sexp& form, const std::string& source) {
  if (!form.has_head("signature") || form.size() < 2) fail(source, form, "expected (signature NAME ...)");
  Signature sig;
  sig.name = atom_of(form[1], source, "signature name");
  std::vector<std::pair<const Sexp*, const Sexp*>> var_sorts;
  std::vector<const Sexp*> ops;
  for (std::size_t i = 2; i < form.size(); ++i) {
    const Sexp& d = form[i];
    if (d.has_head("mode") && d.size() == 2) {
      if (d[1].is_atom("scoped")) sig.mode = AmbientMode::Scoped;
      else if (d[1].is_atom("unscoped")) sig.mode = AmbientMode::Unscoped;
      else fail(source, d, "mode must be scoped or unscoped");
    } else if (d.has_head("kind") && (d.size() == 2 || d.size() == 3)) {
      VarKind k{static_cast<KindId>(sig.kinds.size()), atom_of(d[1], source, "kind name"), false};
      if (d.size() == 3) {
        if (!d[2].is_atom("generic")) fail(source, d, "unknown kind flag " + to_string(d[2]));
        k.generic = true;
      }
      sig.kinds.push_back(std::move(k));
    } else if (d.has_head("sort") && (d.size() == 2 || d.size() == 3)) {
      SortFamily f{atom_of(d[1], source, "sort name"), false};
      if (d.size() == 3) {
        if (!d[2].is_atom("param")) fail(source, d, "unknown sort flag " + to_string(d[2]));
        f.parameterized = true;
      }
      sig.sorts.push_back(std::move(f));
    } else if (d.has_head("var-sort") && d.size() == 3) {
      var_sorts.emplace_back(&d[1], &d[2]);
    } else if (d.has_head("op") && d.size() >= 4) {
      ops.push_back(&d);
    } else {
      fail(source, d, "unknown signature declaration " + to_string(d));
    }
  }
  sig.var_sort.assign(sig.kinds.size(), std::nullopt);
  for (auto [k, s] : var_sorts) {
    KindId kind = kind_of(sig, *k, source);
    SortExpr e = parse_sort_expr(sig, *s, source);
    if (e.arg) fail(source, *s, "variables cannot inhabit a parameterized sort");
    sig.var_sort[kind] = Sort{e.family, std::nullopt};
  }
  for (const Sexp* d : ops) {
    OpSchema op;
    op.name = atom_of((*d)[1], source, "operator name");
    op.nat_params = static_cast<Nat>(parse_u64((*d)[2], source, "nat parameter count"));
    op.result = parse_sort_expr(sig, (*d)[3], source);
    for (std::size_t j = 4; j < d->size(); ++j) {
      const Sexp& a = (*d)[j];
      if (a.has_head("sub") && a.size() >= 2) {
        SubArgSpec sub;
        sub.sort = parse_sort_expr(sig, a[1], source);
        for (std::size_t b = 2; b < a.size(); ++b) {
          const Sexp& bd = a[b];
          if (!bd.has_head("bind") || bd.size() != 3) fail(source, bd, "expected (bind KIND NAT)");
          sub.binders.push_back({kind_of(sig, bd[1], source), parse_nat_expr(bd[2], source)});
        }
        op.args.emplace_back(std::move(sub));
      } else if (a.has_head("ref") && a.size() == 2) {
        op.args.emplace_back(RefArgSpec{kind_of(sig, a[1], source)});
      } else {
        fail(source, a, "expected (sub ...) or (ref KIND)");
      }
    }
    sig.ops.push_back(std::move(op));
  }
  return sig;
}

Signature parse_signature(std::string_view text, const std::string& source) {
  return parse_signature(parse_sexp(text, source), source);
}

Sexp signature_to_sexp(const Signature& sig) {
  std::vector<Sexp> out{atom("signature"), atom(sig.name),
                        list({atom("mode"), atom(sig.scoped() ? "scoped" : "unscoped")})};
  for (const auto& k : sig.kinds) {
    std::vector<Sexp> d{atom("kind"), atom(k.name)};
    if (k.generic) d.push_back(atom("generic"));
    out.push_back(list(std::move(d)));
  }
  for (const auto& f : sig.sorts) {
    std::vector<Sexp> d{atom("sort"), atom(f.name)};
    if (f.parameterized) d.push_back(atom("param"));
    out.push_back(list(std::move(d)));
  }
  for (std::size_t k = 0; k < sig.kinds.size(); ++k) {
    if (k < sig.var_sort.size() && sig.var_sort[k])
      out.push_back(list({atom("var-sort"), atom(sig.kinds[k].name), atom(sig.sorts.at(sig.var_sort[k]->family).name)}));
  }
  for (const auto& op : sig.ops) {
    std::vector<Sexp> d{atom("op"), atom(op.name), atom(std::to_string(op.nat_params)),
                        sort_expr_to_sexp(sig, op.result)};
    for (const auto& a : op.args) {
      if (const auto* sub = std::get_if<SubArgSpec>(&a)) {
        std::vector<Sexp> s{atom("sub"), sort_expr_to_sexp(sig, sub->sort)};
        for (const auto& b : sub->binders)
          s.push_back(list({atom("bind"), atom(sig.kinds.at(b.kind).name), nat_expr_to_sexp(b.count)}));
        d.push_back(list(std::move(s)));
      } else {
        d.push_back(list({atom("ref"), atom(sig.kinds.at(std::get<RefArgSpec>(a).kind).name)}));
      }
    }
    out.push_back(list(std::move(d)));
  }
  return list(std::move(out));
}

std::string print_signature(const Signature& sig) { return to_string(signature_to_sexp(sig)); }

// ---------------------------------------------------------------------------

namespace {

class TermReader {
 public:
  TermReader(const Signature& sig, const AuxTable* aux, const std::string& source)
      : sig_(sig), aux_(aux), source_(source) {}

  TermPtr term(const Sexp& s) {
    if (s.has_head("var")) {
      if (s.size() != 3) fail(source_, s, "expected (var KIND INDEX)");
      return Term::var(kind_of(sig_, s[1], source_), parse_u64(s[2], source_, "variable index"));
    }
    if (s.has_head("op")) {
      if (s.size() < 2) fail(source_, s, "expected (op NAME ...)");
      const auto& name = atom_of(s[1], source_, "operator name");
      auto id = sig_.find_op(name);
      if (!id) throw UnknownOp(source_ + ":" + std::to_string(s.line) + ": unknown operator " + name);
      std::vector<Nat> nats;
      std::vector<TermPtr> kids;
      std::size_t i = 2;
      for (; i < s.size() && is_integer_atom(s[i]); ++i)
        nats.push_back(static_cast<Nat>(parse_u64(s[i], source_, "natural")));
      for (; i < s.size(); ++i) kids.push_back(term(s[i]));
      return Term::con(*id, std::move(nats), std::move(kids));
    }
    if (s.has_head("aux")) return aux_term(s);
    fail(source_, s, "expected a term, got " + to_string(s));
  }

  AuxArg arg(const ParamSpec& spec, const Sexp& s) {
    switch (spec.kind) {
      case ParamKind::Term: return TermArg{term(s)};
      case ParamKind::Env: {
        if (!s.has_head("env")) fail(source_, s, "expected (env ...) for parameter " + spec.name);
        EnvArg e{spec.var_kind, {}};
        for (std::size_t i = 1; i < s.size(); ++i) e.entries.push_back(term(s[i]));
        return e;
      }
      case ParamKind::ShiftEnv: {
        if (!s.has_head("senv") || s.size() != 3 || !s[1].is_list())
          fail(source_, s, "expected (senv (t*) k) for parameter " + spec.name);
        ShiftEnvArg e;
        for (const auto& t : s[1].items) e.prefix.push_back(term(t));
        e.shift = parse_u64(s[2], source_, "shift");
        return e;
      }
      case ParamKind::ShiftRen: {
        if (!s.has_head("sren") || s.size() != 3 || !s[1].is_list())
          fail(source_, s, "expected (sren (n*) k) for parameter " + spec.name);
        ShiftRenArg r;
        for (const auto& n : s[1].items) r.prefix.push_back(parse_u64(n, source_, "index"));
        r.shift = parse_u64(s[2], source_, "shift");
        return r;
      }
      case ParamKind::VarRef: {
        if (!s.has_head("vref") || s.size() != 3) fail(source_, s, "expected (vref KIND i) for parameter " + spec.name);
        return VarRefArg{kind_of(sig_, s[1], source_), parse_u64(s[2], source_, "index")};
      }
    }
    fail(source_, s, "bad parameter");
  }

 private:
  TermPtr aux_term(const Sexp& s) {
    if (!aux_) throw UnknownLaw(source_ + ":" + std::to_string(s.line) + ": auxiliary node without a law stack");
    if (s.size() < 3) fail(source_, s, "expected (aux NAME (nat*) MAIN (param*))");
    const auto& name = atom_of(s[1], source_, "auxiliary operator name");
    auto id = aux_->find(name);
    if (!id) throw UnknownLaw(source_ + ":" + std::to_string(s.line) + ": unknown auxiliary operator " + name);
    const AuxSchema* schema = &aux_->at(*id);
    std::vector<Nat> nats;
    std::size_t i = 2;
    auto all_nats = [](const Sexp& x) {
      return x.is_list() && std::all_of(x.items.begin(), x.items.end(), [](const Sexp& n) { return is_integer_atom(n); });
    };
    bool canonical = s.size() == 5 && all_nats(s[2]) && s[4].is_list() &&
                     (s[4].size() == 0 || s[4][0].is_list());
    if (canonical) {
      for (const auto& n : s[2].items) nats.push_back(static_cast<Nat>(parse_u64(n, source_, "natural")));
      TermPtr main = term(s[3]);
      const auto& ps = s[4].items;
      if (ps.size() != schema->params.size())
        fail(source_, s, name + " expects " + std::to_string(schema->params.size()) + " parameters");
      std::vector<AuxArg> params;
      for (std::size_t j = 0; j < ps.size(); ++j) params.push_back(arg(schema->params[j], ps[j]));
      return Term::aux(*id, std::move(nats), std::move(main), std::move(params));
    }
    for (; i < s.size() && is_integer_atom(s[i]); ++i)
      nats.push_back(static_cast<Nat>(parse_u64(s[i], source_, "natural")));
    if (i >= s.size()) fail(source_, s, "missing main argument");
    TermPtr main = term(s[i++]);
    if (s.size() - i != schema->params.size())
      fail(source_, s, name + " expects " + std::to_string(schema->params.size()) + " parameters");
    std::vector<AuxArg> params;
    for (std::size_t j = 0; i < s.size(); ++i, ++j) params.push_back(arg(schema->params[j], s[i]));
    return Term::aux(*id, std::move(nats), std::move(main), std::move(params));
  }

  const Signature& sig_;
  const AuxTable* aux_;
  const std::string& source_;
};

Sexp idx_atom(Index i) { return atom(std::to_string(i)); }

}  // namespace

TermPtr parse_term(const Signature& sig, const AuxTable* aux, const Sexp& s, const std::string& source) {
  return TermReader(sig, aux, source).term(s);
}

TermPtr parse_term(const Signature& sig, const AuxTable* aux, std::string_view text, const std::string& source) {
  return parse_term(sig, aux, parse_sexp(text, source), source);
}

AuxArg parse_aux_arg(const Signature& sig, const AuxTable* aux, const ParamSpec& spec, const Sexp& s,
                     const std::string& source) {
  return TermReader(sig, aux, source).arg(spec, s);
}

Sexp term_to_sexp(const Signature& sig, const AuxTable* aux, const Term& t) {
  switch (t.tag()) {
    case Term::Tag::Var:
      return list({atom("var"), atom(sig.kinds.at(t.kind()).name), idx_atom(t.index())});
    case Term::Tag::Con: {
      std::vector<Sexp> out{atom("op"), atom(sig.op(t.op()).name)};
      for (Nat n : t.nats()) out.push_back(atom(std::to_string(n)));
      for (const auto& c : t.children()) out.push_back(term_to_sexp(sig, aux, *c));
      return list(std::move(out));
    }
    case Term::Tag::Aux: {
      if (!aux) throw UnknownLaw("auxiliary node without a law stack");
      std::vector<Sexp> nats, params;
      for (Nat n : t.nats()) nats.push_back(atom(std::to_string(n)));
      for (const auto& p : t.params()) params.push_back(arg_to_sexp(sig, aux, p));
      return list({atom("aux"), atom(aux->at(t.op()).name), list(std::move(nats)),
                   term_to_sexp(sig, aux, *t.main()), list(std::move(params))});
    }
  }
  return list({});
}

Sexp arg_to_sexp(const Signature& sig, const AuxTable* aux, const AuxArg& a) {
  if (const auto* x = std::get_if<TermArg>(&a)) return term_to_sexp(sig, aux, *x->term);
  if (const auto* x = std::get_if<EnvArg>(&a)) {
    std::vector<Sexp> out{atom("env")};
    for (const auto& e : x->entries) out.push_back(term_to_sexp(sig, aux, *e));
    return list(std::move(out));
  }
  if (const auto* x = std::get_if<ShiftEnvArg>(&a)) {
    std::vector<Sexp> pre;
    for (const auto& e : x->prefix) pre.push_back(term_to_sexp(sig, aux, *e));
    return list({atom("senv"), list(std::move(pre)), idx_atom(x->shift)});
  }
  if (const auto* x = std::get_if<ShiftRenArg>(&a)) {
    std::vector<Sexp> pre;
    for (Index i : x->prefix) pre.push_back(idx_atom(i));
    return list({atom("sren"), list(std::move(pre)), idx_atom(x->shift)});
  }
  const auto& v = std::get<VarRefArg>(a);
  return list({atom("vref"), atom(sig.kinds.at(v.kind).name), idx_atom(v.index)});
}

std::string print_term(const Signature& sig, const AuxTable* aux, const Term& t) {
  return to_string(term_to_sexp(sig, aux, t));
}

std::string print_arg(const Signature& sig, const AuxTable* aux, const AuxArg& a) {
  return to_string(arg_to_sexp(sig, aux, a));
}

}  // namespace structlaws
