#include <algorithm>

#include "structlaws/law.hpp"
#include "structlaws/syntax.hpp"

namespace structlaws {

namespace {

[[noreturn]] void fail(const std::string& source, const Sexp& at, const std::string& what) {
  throw ParseError(source, at.line, what);
}

Sexp atom(std::string a) { return Sexp::make_atom(std::move(a)); }
Sexp list(std::vector<Sexp> xs) { return Sexp::make_list(std::move(xs)); }

const std::string& atom_of(const Sexp& s, const std::string& source, const char* what) {
  if (!s.is_atom()) fail(source, s, std::string("expected ") + what + ", got " + to_string(s));
  return s.atom;
}

std::uint64_t parse_u64(const Sexp& s, const std::string& source) {
  if (!is_integer_atom(s)) fail(source, s, "expected a natural number, got " + to_string(s));
  return std::stoull(s.atom);
}

KindId kind_named(const Signature& sig, const Sexp& s, const std::string& source) {
  auto k = sig.find_kind(atom_of(s, source, "kind name"));
  if (!k) fail(source, s, "unknown kind " + s.atom);
  return *k;
}

void issue(const BodyScope& sc, std::string code, std::string msg) {
  if (sc.issues) sc.issues->push_back({std::move(code), sc.subject, std::move(msg)});
}

std::vector<std::string> scope_nat_names(const BodyScope& sc) {
  std::vector<std::string> names = sc.schema ? sc.schema->nat_names : std::vector<std::string>{};
  if (sc.op)
    for (Nat i = 0; i < sc.op->nat_params && i < sc.binds.size(); ++i) names.push_back(sc.binds[i]);
  return names;
}

std::vector<NatExpr> parse_nat_list(const BodyScope& sc, const Sexp& s, const std::string& source) {
  if (!s.is_list()) fail(source, s, "expected a list of naturals");
  auto names = scope_nat_names(sc);
  std::vector<NatExpr> out;
  for (const auto& n : s.items) out.push_back(parse_nat_expr(n, source, &names));
  return out;
}

Sexp nat_list_to_sexp(const BodyScope& sc, const std::vector<NatExpr>& ns) {
  auto names = scope_nat_names(sc);
  std::vector<Sexp> out;
  for (const auto& n : ns) out.push_back(nat_expr_to_sexp(n, &names));
  return list(std::move(out));
}

enum class SymKind { None, ConNat, Child, RefChild, VarIndex, Param, Main, Fresh };

struct Sym {
  SymKind kind = SymKind::None;
  std::uint32_t slot = 0;
};

Sym resolve(const BodyScope& sc, const std::string& name) {
  if (name == "@" && sc.fresh_allowed) return {SymKind::Fresh, 0};
  for (std::size_t i = 0; i < sc.binds.size(); ++i) {
    if (sc.binds[i] != name) continue;
    if (sc.on_var) return {SymKind::VarIndex, 0};
    if (sc.op) {
      if (i < sc.op->nat_params) return {SymKind::ConNat, static_cast<std::uint32_t>(i)};
      std::size_t c = i - sc.op->nat_params;
      if (c < sc.op->args.size()) {
        if (std::holds_alternative<RefArgSpec>(sc.op->args[c])) return {SymKind::RefChild, static_cast<std::uint32_t>(c)};
        return {SymKind::Child, static_cast<std::uint32_t>(c)};
      }
    }
  }
  if (sc.schema) {
    if (sc.template_mode && name == sc.schema->main_name) return {SymKind::Main, 0};
    if (auto j = sc.schema->find_param(name)) return {SymKind::Param, static_cast<std::uint32_t>(*j)};
  }
  return {};
}

// The kind of the var a lift binds, read off the innermost env parameter.
std::optional<KindId> env_kind(const BodyScope& sc, const ArgExpr& a) {
  switch (a.kind) {
    case ArgExpr::Kind::Param:
      if (sc.schema && a.slot < sc.schema->params.size()) return sc.schema->params[a.slot].var_kind;
      return std::nullopt;
    case ArgExpr::Kind::IdEnv: return a.var_kind;
    case ArgExpr::Kind::Lift:
    case ArgExpr::Kind::Weaken:
    case ArgExpr::Kind::Map:
      if (!a.args.empty()) return env_kind(sc, *a.args[0]);
      return std::nullopt;
    case ArgExpr::Kind::Cons:
      if (!a.args.empty()) return env_kind(sc, *a.args[0]);
      return std::nullopt;
    default: return std::nullopt;
  }
}

IndexExpr parse_index(const BodyScope& sc, const Sexp& s, const std::string& source) {
  IndexExpr e;
  if (is_integer_atom(s)) {
    e.source = IndexSource::Literal;
    e.literal = parse_u64(s, source);
    return e;
  }
  e.name = atom_of(s, source, "variable index");
  Sym sym = resolve(sc, e.name);
  switch (sym.kind) {
    case SymKind::VarIndex: e.source = IndexSource::VarIndex; break;
    case SymKind::RefChild: e.source = IndexSource::RefChild; e.slot = sym.slot; break;
    case SymKind::Param:
      if (sc.schema->params[sym.slot].kind == ParamKind::VarRef) {
        e.source = IndexSource::VarRefParam;
        e.slot = sym.slot;
        break;
      }
      [[fallthrough]];
    default:
      issue(sc, "UnknownMetavar", e.name + " is not a variable index (line " + std::to_string(s.line) + ")");
  }
  return e;
}

Sexp index_to_sexp(const IndexExpr& e) {
  if (e.source == IndexSource::Literal) return atom(std::to_string(e.literal));
  return atom(e.name);
}

ArgPtr parse_arg(const BodyScope& sc, const Sexp& s, const std::string& source);

std::vector<ArgPtr> parse_arg_list(const BodyScope& sc, const Sexp& s, const std::string& source) {
  if (!s.is_list()) fail(source, s, "expected a parameter list");
  std::vector<ArgPtr> out;
  for (const auto& a : s.items) out.push_back(parse_arg(sc, a, source));
  return out;
}

ArgPtr parse_arg(const BodyScope& sc, const Sexp& s, const std::string& source) {
  auto a = std::make_shared<ArgExpr>();
  a->line = s.line;
  const Signature& sig = *sc.sig;
  if (s.is_atom()) {
    Sym sym = resolve(sc, s.atom);
    if (sym.kind == SymKind::Param) {
      a->kind = ArgExpr::Kind::Param;
      a->slot = sym.slot;
      a->name = s.atom;
      return a;
    }
    a->kind = ArgExpr::Kind::Term;
    a->body = parse_body(sc, s, source);
    return a;
  }
  if (s.has_head("lift") && (s.size() == 2 || s.size() == 3)) {
    a->kind = ArgExpr::Kind::Lift;
    a->args.push_back(parse_arg(sc, s[1], source));
    if (s.size() == 3) {
      BodyScope inner = sc;
      inner.fresh_allowed = true;
      if (auto k = env_kind(sc, *a->args[0])) inner.fresh_kind = *k;
      a->body = parse_body(inner, s[2], source);
    }
    return a;
  }
  if (s.has_head("weaken") && s.size() == 3) {
    a->kind = ArgExpr::Kind::Weaken;
    a->var_kind = kind_named(sig, s[1], source);
    a->args.push_back(parse_arg(sc, s[2], source));
    return a;
  }
  if (s.has_head("cons") && s.size() == 3) {
    a->kind = ArgExpr::Kind::Cons;
    a->body = parse_body(sc, s[1], source);
    a->args.push_back(parse_arg(sc, s[2], source));
    return a;
  }
  if (s.has_head("idenv") && s.size() == 2) {
    a->kind = ArgExpr::Kind::IdEnv;
    a->var_kind = kind_named(sig, s[1], source);
    return a;
  }
  if (s.has_head("sren") && s.size() == 3 && s[1].is_list()) {
    a->kind = ArgExpr::Kind::ShiftRenLit;
    for (const auto& n : s[1].items) a->prefix.push_back(parse_u64(n, source));
    a->shift = parse_u64(s[2], source);
    return a;
  }
  if (s.has_head("senv") && s.size() == 3 && s[1].is_list()) {
    a->kind = ArgExpr::Kind::ShiftEnvLit;
    for (const auto& t : s[1].items) a->entries.push_back(parse_body(sc, t, source));
    a->shift = parse_u64(s[2], source);
    return a;
  }
  if (s.has_head("lift-ren") && s.size() == 2) {
    a->kind = ArgExpr::Kind::LiftRen;
    a->args.push_back(parse_arg(sc, s[1], source));
    return a;
  }
  if (s.has_head("compose") && s.size() == 3) {
    a->kind = ArgExpr::Kind::Compose;
    a->args.push_back(parse_arg(sc, s[1], source));
    a->args.push_back(parse_arg(sc, s[2], source));
    return a;
  }
  if (s.has_head("map") && s.size() == 5) {
    a->kind = ArgExpr::Kind::Map;
    a->args.push_back(parse_arg(sc, s[1], source));
    a->name = atom_of(s[2], source, "auxiliary operator name");
    a->nats = parse_nat_list(sc, s[3], source);
    for (auto& x : parse_arg_list(sc, s[4], source)) a->args.push_back(std::move(x));
    return a;
  }
  a->kind = ArgExpr::Kind::Term;
  a->body = parse_body(sc, s, source);
  return a;
}

Sexp arg_to_sexp(const BodyScope& sc, const ArgExpr& a) {
  const Signature& sig = *sc.sig;
  switch (a.kind) {
    case ArgExpr::Kind::Term: return body_to_sexp(sc, *a.body);
    case ArgExpr::Kind::Index: return index_to_sexp(a.index);
    case ArgExpr::Kind::Param: return atom(a.name);
    case ArgExpr::Kind::Lift: {
      std::vector<Sexp> out{atom("lift"), arg_to_sexp(sc, *a.args[0])};
      if (a.body) out.push_back(body_to_sexp(sc, *a.body));
      return list(std::move(out));
    }
    case ArgExpr::Kind::Weaken:
      return list({atom("weaken"), atom(sig.kinds.at(a.var_kind).name), arg_to_sexp(sc, *a.args[0])});
    case ArgExpr::Kind::Cons: return list({atom("cons"), body_to_sexp(sc, *a.body), arg_to_sexp(sc, *a.args[0])});
    case ArgExpr::Kind::IdEnv: return list({atom("idenv"), atom(sig.kinds.at(a.var_kind).name)});
    case ArgExpr::Kind::ShiftRenLit: {
      std::vector<Sexp> pre;
      for (Index i : a.prefix) pre.push_back(atom(std::to_string(i)));
      return list({atom("sren"), list(std::move(pre)), atom(std::to_string(a.shift))});
    }
    case ArgExpr::Kind::ShiftEnvLit: {
      std::vector<Sexp> pre;
      for (const auto& b : a.entries) pre.push_back(body_to_sexp(sc, *b));
      return list({atom("senv"), list(std::move(pre)), atom(std::to_string(a.shift))});
    }
    case ArgExpr::Kind::LiftRen: return list({atom("lift-ren"), arg_to_sexp(sc, *a.args[0])});
    case ArgExpr::Kind::Compose:
      return list({atom("compose"), arg_to_sexp(sc, *a.args[0]), arg_to_sexp(sc, *a.args[1])});
    case ArgExpr::Kind::Map: {
      std::vector<Sexp> rest;
      for (std::size_t i = 1; i < a.args.size(); ++i) rest.push_back(arg_to_sexp(sc, *a.args[i]));
      return list({atom("map"), arg_to_sexp(sc, *a.args[0]), atom(a.name), nat_list_to_sexp(sc, a.nats),
                   list(std::move(rest))});
    }
  }
  return list({});
}

}  // namespace

BodyPtr parse_body(const BodyScope& sc, const Sexp& s, const std::string& source) {
  auto b = std::make_shared<Body>();
  b->line = s.line;
  const Signature& sig = *sc.sig;
  if (s.is_atom()) {
    b->name = s.atom;
    Sym sym = resolve(sc, s.atom);
    switch (sym.kind) {
      case SymKind::Child: b->kind = Body::Kind::Child; b->slot = sym.slot; break;
      case SymKind::Main: b->kind = Body::Kind::Main; break;
      case SymKind::Fresh: b->kind = Body::Kind::Fresh; b->var_kind = sc.fresh_kind; break;
      case SymKind::VarIndex:
      case SymKind::RefChild:
        b->kind = Body::Kind::VarOf;
        b->index = parse_index(sc, s, source);
        b->var_kind = sym.kind == SymKind::VarIndex ? sc.var_kind : std::get<RefArgSpec>(sc.op->args[sym.slot]).kind;
        break;
      case SymKind::Param: {
        const auto& spec = sc.schema->params[sym.slot];
        if (spec.kind == ParamKind::Term) {
          b->kind = Body::Kind::Param;
          b->slot = sym.slot;
        } else if (spec.kind == ParamKind::VarRef) {
          b->kind = Body::Kind::VarOf;
          b->var_kind = spec.var_kind;
          b->index = parse_index(sc, s, source);
        } else {
          b->kind = Body::Kind::Unknown;
          issue(sc, "SortMismatch", s.atom + " is not a term (line " + std::to_string(s.line) + ")");
        }
        break;
      }
      case SymKind::ConNat:
        b->kind = Body::Kind::Unknown;
        issue(sc, "SortMismatch", s.atom + " is a natural, not a term (line " + std::to_string(s.line) + ")");
        break;
      case SymKind::None:
        b->kind = Body::Kind::Unknown;
        issue(sc, "UnknownMetavar", "undeclared metavariable " + s.atom + " (line " + std::to_string(s.line) + ")");
        break;
    }
    return b;
  }
  if (s.has_head("op") && s.size() >= 2) {
    b->kind = Body::Kind::Op;
    b->name = atom_of(s[1], source, "operator name");
    auto id = sig.find_op(b->name);
    if (!id) fail(source, s, "unknown operator " + b->name);
    b->id = *id;
    const OpSchema& op = sig.op(*id);
    auto names = scope_nat_names(sc);
    std::size_t i = 2;
    for (Nat n = 0; n < op.nat_params && i < s.size(); ++n, ++i) b->nats.push_back(parse_nat_expr(s[i], source, &names));
    for (; i < s.size(); ++i) b->children.push_back(parse_body(sc, s[i], source));
    return b;
  }
  if (s.has_head("aux") && s.size() == 5) {
    b->kind = Body::Kind::Aux;
    b->name = atom_of(s[1], source, "auxiliary operator name");
    b->nats = parse_nat_list(sc, s[2], source);
    b->children.push_back(parse_body(sc, s[3], source));
    b->args = parse_arg_list(sc, s[4], source);
    return b;
  }
  if (s.has_head("rc") && s.size() == 4) {
    b->kind = Body::Kind::Rec;
    b->name = atom_of(s[1], source, "child metavariable");
    Sym sym = resolve(sc, b->name);
    if (sc.template_mode) {
      issue(sc, "UnguardedRecursion", "rc is not allowed in interpretations (line " + std::to_string(s.line) + ")");
    } else if (sym.kind != SymKind::Child) {
      issue(sc, "UnguardedRecursion", "rc on " + b->name + ", which is not a subterm of the matched constructor (line " +
                                          std::to_string(s.line) + ")");
    } else {
      b->slot = sym.slot;
      const auto& child_sort = std::get<SubArgSpec>(sc.op->args[sym.slot]).sort;
      bool found = false;
      for (std::size_t c = 0; sc.components && c < sc.components->size(); ++c) {
        if ((*sc.components)[c].main_sort.family == child_sort.family) {
          b->id = static_cast<std::uint32_t>(c);
          found = true;
          break;
        }
      }
      if (!found)
        issue(sc, "SortMismatch", "no component recurses on sort " + sig.sorts.at(child_sort.family).name +
                                      " (line " + std::to_string(s.line) + ")");
    }
    b->nats = parse_nat_list(sc, s[2], source);
    b->args = parse_arg_list(sc, s[3], source);
    return b;
  }
  if (s.has_head("lookup") && s.size() == 3) {
    b->kind = Body::Kind::Lookup;
    b->name = atom_of(s[1], source, "env parameter");
    Sym sym = resolve(sc, b->name);
    if (sym.kind != SymKind::Param ||
        (sc.schema->params[sym.slot].kind != ParamKind::Env && sc.schema->params[sym.slot].kind != ParamKind::ShiftEnv &&
         sc.schema->params[sym.slot].kind != ParamKind::ShiftRen)) {
      issue(sc, "UnknownMetavar", b->name + " is not an env or renaming parameter (line " + std::to_string(s.line) + ")");
    } else {
      b->slot = sym.slot;
    }
    b->index = parse_index(sc, s[2], source);
    return b;
  }
  if (s.has_head("var") && s.size() == 3) {
    b->kind = Body::Kind::VarOf;
    b->var_kind = kind_named(sig, s[1], source);
    b->index = parse_index(sc, s[2], source);
    return b;
  }
  fail(source, s, "malformed body " + to_string(s));
}

Sexp body_to_sexp(const BodyScope& sc, const Body& b) {
  const Signature& sig = *sc.sig;
  switch (b.kind) {
    case Body::Kind::Child:
    case Body::Kind::Param:
    case Body::Kind::Main:
    case Body::Kind::Fresh:
    case Body::Kind::Unknown: return atom(b.name);
    case Body::Kind::VarOf:
      if (!b.name.empty()) return atom(b.name);
      return list({atom("var"), atom(sig.kinds.at(b.var_kind).name), index_to_sexp(b.index)});
    case Body::Kind::Op: {
      std::vector<Sexp> out{atom("op"), atom(b.name)};
      auto names = scope_nat_names(sc);
      for (const auto& n : b.nats) out.push_back(nat_expr_to_sexp(n, &names));
      for (const auto& c : b.children) out.push_back(body_to_sexp(sc, *c));
      return list(std::move(out));
    }
    case Body::Kind::Aux: {
      std::vector<Sexp> args;
      for (const auto& a : b.args) args.push_back(arg_to_sexp(sc, *a));
      return list({atom("aux"), atom(b.name), nat_list_to_sexp(sc, b.nats), body_to_sexp(sc, *b.children[0]),
                   list(std::move(args))});
    }
    case Body::Kind::Rec: {
      std::vector<Sexp> args;
      for (const auto& a : b.args) args.push_back(arg_to_sexp(sc, *a));
      return list({atom("rc"), atom(b.name), nat_list_to_sexp(sc, b.nats), list(std::move(args))});
    }
    case Body::Kind::Lookup: return list({atom("lookup"), atom(b.name), index_to_sexp(b.index)});
  }
  return list({});
}

std::vector<std::string> clause_nat_names(const AuxSchema& schema, const Clause& c, const Signature& sig) {
  std::vector<std::string> names = schema.nat_names;
  if (!c.on_var) {
    const OpSchema& op = sig.op(c.op);
    for (Nat i = 0; i < op.nat_params && i < c.binds.size(); ++i) names.push_back(c.binds[i]);
  }
  return names;
}

AuxSchema parse_schema(const Signature& sig, const Sexp& form, Nat layer, const std::string& source) {
  if (!form.has_head("schema") || form.size() < 2) fail(source, form, "expected (schema NAME ...)");
  AuxSchema sc;
  sc.name = atom_of(form[1], source, "schema name");
  sc.layer = layer;
  bool have_result = false, have_main = false;
  // nats first so sort expressions can refer to them
  for (std::size_t i = 2; i < form.size(); ++i)
    if (form[i].has_head("nats"))
      for (std::size_t j = 1; j < form[i].size(); ++j) sc.nat_names.push_back(atom_of(form[i][j], source, "nat name"));
  auto binders = [&](const Sexp& d, std::size_t from) {
    std::vector<Binder> out;
    for (std::size_t b = from; b < d.size(); ++b) {
      const Sexp& bd = d[b];
      if (!bd.has_head("bind") || bd.size() != 3) fail(source, bd, "expected (bind KIND NAT)");
      out.push_back({kind_named(sig, bd[1], source), parse_nat_expr(bd[2], source, &sc.nat_names)});
    }
    return out;
  };
  for (std::size_t i = 2; i < form.size(); ++i) {
    const Sexp& d = form[i];
    if (d.has_head("nats")) continue;
    if (d.has_head("result") && d.size() == 2) {
      sc.result = parse_sort_expr(sig, d[1], source, &sc.nat_names);
      have_result = true;
    } else if (d.has_head("main") && d.size() >= 3) {
      sc.main_name = atom_of(d[1], source, "main name");
      sc.main_sort = parse_sort_expr(sig, d[2], source, &sc.nat_names);
      sc.main_binders = binders(d, 3);
      have_main = true;
    } else if (d.has_head("params")) {
      for (std::size_t j = 1; j < d.size(); ++j) {
        const Sexp& p = d[j];
        if (!p.is_list() || p.size() < 2) fail(source, p, "malformed parameter");
        ParamSpec spec;
        spec.name = atom_of(p[0], source, "parameter name");
        const auto& k = atom_of(p[1], source, "parameter kind");
        if (k == "term" && p.size() >= 3) {
          spec.kind = ParamKind::Term;
          spec.sort = parse_sort_expr(sig, p[2], source, &sc.nat_names);
          spec.binders = binders(p, 3);
        } else if (k == "env" && p.size() == 4) {
          spec.kind = ParamKind::Env;
          spec.var_kind = kind_named(sig, p[2], source);
          spec.sort = parse_sort_expr(sig, p[3], source, &sc.nat_names);
        } else if (k == "senv" && p.size() == 3) {
          spec.kind = ParamKind::ShiftEnv;
          spec.sort = parse_sort_expr(sig, p[2], source, &sc.nat_names);
        } else if (k == "sren" && p.size() == 2) {
          spec.kind = ParamKind::ShiftRen;
        } else if (k == "vref" && p.size() == 3) {
          spec.kind = ParamKind::VarRef;
          spec.var_kind = kind_named(sig, p[2], source);
        } else {
          fail(source, p, "malformed parameter " + to_string(p));
        }
        sc.params.push_back(std::move(spec));
      }
    } else {
      fail(source, d, "unknown schema declaration " + to_string(d));
    }
  }
  if (!have_result || !have_main) fail(source, form, "schema " + sc.name + " needs (result ...) and (main ...)");
  return sc;
}

Sexp schema_to_sexp(const Signature& sig, const AuxSchema& sc) {
  std::vector<Sexp> out{atom("schema"), atom(sc.name)};
  if (!sc.nat_names.empty()) {
    std::vector<Sexp> ns{atom("nats")};
    for (const auto& n : sc.nat_names) ns.push_back(atom(n));
    out.push_back(list(std::move(ns)));
  }
  out.push_back(list({atom("result"), sort_expr_to_sexp(sig, sc.result, &sc.nat_names)}));
  auto bind = [&](const Binder& b) {
    return list({atom("bind"), atom(sig.kinds.at(b.kind).name), nat_expr_to_sexp(b.count, &sc.nat_names)});
  };
  std::vector<Sexp> main{atom("main"), atom(sc.main_name), sort_expr_to_sexp(sig, sc.main_sort, &sc.nat_names)};
  for (const auto& b : sc.main_binders) main.push_back(bind(b));
  out.push_back(list(std::move(main)));
  if (!sc.params.empty()) {
    std::vector<Sexp> ps{atom("params")};
    for (const auto& p : sc.params) {
      std::vector<Sexp> d{atom(p.name)};
      switch (p.kind) {
        case ParamKind::Term:
          d.push_back(atom("term"));
          d.push_back(sort_expr_to_sexp(sig, p.sort, &sc.nat_names));
          for (const auto& b : p.binders) d.push_back(bind(b));
          break;
        case ParamKind::Env:
          d.push_back(atom("env"));
          d.push_back(atom(sig.kinds.at(p.var_kind).name));
          d.push_back(sort_expr_to_sexp(sig, p.sort, &sc.nat_names));
          break;
        case ParamKind::ShiftEnv:
          d.push_back(atom("senv"));
          d.push_back(sort_expr_to_sexp(sig, p.sort, &sc.nat_names));
          break;
        case ParamKind::ShiftRen: d.push_back(atom("sren")); break;
        case ParamKind::VarRef:
          d.push_back(atom("vref"));
          d.push_back(atom(sig.kinds.at(p.var_kind).name));
          break;
      }
      ps.push_back(list(std::move(d)));
    }
    out.push_back(list(std::move(ps)));
  }
  return list(std::move(out));
}

namespace {

BodyScope clause_scope(const Signature& sig, const StructuralLaw& law, const Clause& c, Diagnostics* issues) {
  BodyScope sc;
  sc.sig = &sig;
  sc.components = &law.components;
  sc.schema = &law.components.at(c.component);
  sc.on_var = c.on_var;
  sc.var_kind = c.var_kind;
  if (!c.on_var) sc.op = &sig.op(c.op);
  sc.binds = c.binds;
  sc.issues = issues;
  sc.subject = law.name;
  return sc;
}

Guard parse_guard(const BodyScope& sc, const Sexp& g, const std::string& source) {
  Guard out;
  out.line = g.line;
  if ((!g.has_head("eq") && !g.has_head("neq")) || g.size() != 3) {
    issue(sc, "BadGuard", "unsupported guard " + to_string(g) + " (line " + std::to_string(g.line) + ")");
    return out;
  }
  out.equal = g.has_head("eq");
  out.a = parse_index(sc, g[1], source);
  out.b = parse_index(sc, g[2], source);
  return out;
}

}  // namespace

StructuralLaw parse_law(const Signature& sig, const Sexp& form, const std::string& source) {
  if (!form.has_head("law") || form.size() < 3) fail(source, form, "expected (law NAME (layer k) ...)");
  StructuralLaw law;
  law.name = atom_of(form[1], source, "law name");
  law.source = source;
  law.line = form.line;
  if (!form[2].has_head("layer") || form[2].size() != 2) fail(source, form[2], "expected (layer k)");
  law.layer = static_cast<Nat>(parse_u64(form[2][1], source));
  std::vector<const Sexp*> clauses;
  for (std::size_t i = 3; i < form.size(); ++i) {
    const Sexp& d = form[i];
    if (d.has_head("schema")) law.components.push_back(parse_schema(sig, d, law.layer, source));
    else if (d.has_head("clause")) clauses.push_back(&d);
    else fail(source, d, "unknown law declaration " + to_string(d));
  }
  if (law.components.empty()) fail(source, form, "law " + law.name + " declares no schema");
  for (const Sexp* cp : clauses) {
    const Sexp& cs = *cp;
    if (cs.size() < 3 || !cs[1].has_head("on") || cs[1].size() < 2)
      fail(source, cs, "expected (clause (on ...) [(binds ...)] BODY)");
    Clause c;
    c.line = cs.line;
    const Sexp& on = cs[1];
    FamilyId family = 0;
    if (on[1].has_head("var") && on[1].size() == 2) {
      c.on_var = true;
      c.var_kind = kind_named(sig, on[1][1], source);
      const auto& vs = sig.var_sort.at(c.var_kind);
      if (!vs) {
        law.issues.push_back({"SortMismatch", law.name, "variables of kind " + sig.kinds[c.var_kind].name +
                                                            " are not terms (line " + std::to_string(cs.line) + ")"});
      } else {
        family = vs->family;
      }
    } else {
      const auto& name = atom_of(on[1], source, "constructor name");
      auto id = sig.find_op(name);
      if (!id) fail(source, on[1], "unknown operator " + name);
      c.op = *id;
      family = sig.op(*id).result.family;
    }
    bool found = false;
    for (std::size_t k = 0; k < law.components.size(); ++k) {
      if (law.components[k].main_sort.family == family) {
        c.component = static_cast<std::uint32_t>(k);
        found = true;
        break;
      }
    }
    if (!found)
      law.issues.push_back({"SortMismatch", law.name, "clause on " + to_string(on[1]) +
                                                          " matches no component's main sort (line " +
                                                          std::to_string(cs.line) + ")"});
    std::size_t bi = 2;
    if (cs[2].has_head("binds")) {
      for (std::size_t j = 1; j < cs[2].size(); ++j) c.binds.push_back(atom_of(cs[2][j], source, "metavariable"));
      bi = 3;
    }
    if (bi + 1 != cs.size()) fail(source, cs, "clause needs exactly one body");
    std::size_t expected = c.on_var ? 1 : sig.op(c.op).nat_params + sig.op(c.op).args.size();
    if (c.binds.size() != expected)
      law.issues.push_back({"ArityMismatch", law.name, "clause on " + to_string(on[1]) + " binds " +
                                                           std::to_string(c.binds.size()) + " metavariables, expected " +
                                                           std::to_string(expected) + " (line " +
                                                           std::to_string(cs.line) + ")"});
    law.clauses.push_back(c);
    Clause& stored = law.clauses.back();
    BodyScope sc = clause_scope(sig, law, stored, &law.issues);
    for (std::size_t g = 2; g < on.size(); ++g) stored.guards.push_back(parse_guard(sc, on[g], source));
    stored.body = parse_body(sc, cs[bi], source);
  }
  return law;
}

std::vector<StructuralLaw> parse_laws(const Signature& sig, std::string_view text, const std::string& source) {
  std::vector<StructuralLaw> out;
  for (const auto& form : parse_sexps(text, source)) out.push_back(parse_law(sig, form, source));
  return out;
}

Sexp law_to_sexp(const Signature& sig, const StructuralLaw& law) {
  std::vector<Sexp> out{atom("law"), atom(law.name), list({atom("layer"), atom(std::to_string(law.layer))})};
  for (const auto& c : law.components) out.push_back(schema_to_sexp(sig, c));
  for (const auto& c : law.clauses) {
    BodyScope sc = clause_scope(sig, law, c, nullptr);
    std::vector<Sexp> on{atom("on")};
    if (c.on_var) on.push_back(list({atom("var"), atom(sig.kinds.at(c.var_kind).name)}));
    else on.push_back(atom(sig.op(c.op).name));
    for (const auto& g : c.guards) on.push_back(list({atom(g.equal ? "eq" : "neq"), index_to_sexp(g.a), index_to_sexp(g.b)}));
    std::vector<Sexp> cl{atom("clause"), list(std::move(on))};
    if (!c.binds.empty()) {
      std::vector<Sexp> bs{atom("binds")};
      for (const auto& b : c.binds) bs.push_back(atom(b));
      cl.push_back(list(std::move(bs)));
    }
    cl.push_back(body_to_sexp(sc, *c.body));
    out.push_back(list(std::move(cl)));
  }
  return list(std::move(out));
}

}  // namespace structlaws
