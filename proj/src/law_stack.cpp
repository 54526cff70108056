#include <algorithm>

#include "structlaws/law.hpp"

namespace structlaws {

namespace {

ArgPtr link_arg(const AuxTable& aux, const ArgPtr& a);

}  // namespace

BodyPtr link_body(const AuxTable& aux, const BodyPtr& b) {
  if (!b) return b;
  auto out = std::make_shared<Body>(*b);
  if (out->kind == Body::Kind::Aux) {
    if (auto id = aux.find(out->name)) {
      out->id = *id;
      out->linked = true;
    }
  }
  for (auto& c : out->children) c = link_body(aux, c);
  for (auto& a : out->args) a = link_arg(aux, a);
  return out;
}

namespace {

ArgPtr link_arg(const AuxTable& aux, const ArgPtr& a) {
  if (!a) return a;
  auto out = std::make_shared<ArgExpr>(*a);
  if (out->kind == ArgExpr::Kind::Map) {
    if (auto id = aux.find(out->name)) {
      out->id = *id;
      out->linked = true;
    }
  }
  out->body = link_body(aux, out->body);
  for (auto& e : out->entries) e = link_body(aux, e);
  for (auto& x : out->args) x = link_arg(aux, x);
  return out;
}

const std::vector<const Clause*>& empty_clauses() {
  static const std::vector<const Clause*> none;
  return none;
}

}  // namespace

LawStack::LawStack(Signature sig) : data_(std::make_shared<Data>()) { data_->sig = std::move(sig); }

const StructuralLaw* LawStack::find_law(std::string_view name) const {
  for (const auto& layer : data_->layers)
    for (const auto& law : layer)
      if (law.name == name) return &law;
  return nullptr;
}

std::pair<const StructuralLaw*, std::uint32_t> LawStack::owner(AuxId id) const {
  if (id >= data_->entries.size()) throw UnknownLaw("unknown auxiliary operator id " + std::to_string(id));
  const Entry& e = data_->entries[id];
  return {&data_->layers[e.layer][e.law], e.component};
}

std::optional<std::size_t> LawStack::layer_of(AuxId id) const {
  if (id >= data_->entries.size()) return std::nullopt;
  return data_->entries[id].layer;
}

const std::vector<const Clause*>& LawStack::clauses_for_op(AuxId id, OpId op) const {
  if (id >= data_->entries.size()) throw UnknownLaw("unknown auxiliary operator id " + std::to_string(id));
  const auto& v = data_->entries[id].by_op;
  return op < v.size() ? v[op] : empty_clauses();
}

const std::vector<const Clause*>& LawStack::clauses_for_var(AuxId id, KindId kind) const {
  if (id >= data_->entries.size()) throw UnknownLaw("unknown auxiliary operator id " + std::to_string(id));
  const auto& v = data_->entries[id].by_kind;
  return kind < v.size() ? v[kind] : empty_clauses();
}

const std::vector<AuxId>& LawStack::sibling_ids(AuxId id) const {
  if (id >= data_->entries.size()) throw UnknownLaw("unknown auxiliary operator id " + std::to_string(id));
  return data_->entries[id].siblings;
}

LawStack LawStack::with_layer(std::vector<StructuralLaw> laws) const {
  if (!data_) throw Error("law stack has no signature");
  LawStack out;
  out.data_ = std::make_shared<Data>();
  Data& d = *out.data_;
  d.sig = data_->sig;
  d.aux = data_->aux;
  d.layers = data_->layers;
  Nat depth = static_cast<Nat>(d.layers.size());
  for (auto& law : laws) {
    law.layer = depth;
    for (auto& c : law.components) {
      c.layer = depth;
      d.aux.add(c);
    }
  }
  for (auto& law : laws)
    for (auto& c : law.clauses) c.body = link_body(d.aux, c.body);
  d.layers.push_back(std::move(laws));

  d.entries.assign(d.aux.size(), Entry{});
  for (std::size_t li = 0; li < d.layers.size(); ++li) {
    for (std::size_t wi = 0; wi < d.layers[li].size(); ++wi) {
      const StructuralLaw& law = d.layers[li][wi];
      for (std::uint32_t k = 0; k < law.components.size(); ++k) {
        AuxId id = *d.aux.find(law.components[k].name);
        Entry& e = d.entries[id];
        e.layer = li;
        e.law = wi;
        e.component = k;
        for (const auto& c : law.components) e.siblings.push_back(*d.aux.find(c.name));
        e.by_op.assign(d.sig.ops.size(), {});
        e.by_kind.assign(d.sig.kinds.size(), {});
        for (const auto& c : law.clauses) {
          if (c.component != k) continue;
          if (c.on_var) e.by_kind[c.var_kind].push_back(&c);
          else e.by_op[c.op].push_back(&c);
        }
      }
    }
  }
  return out;
}

LawStack push_layer(const LawStack& stack, std::vector<StructuralLaw> laws) {
  Diagnostics all;
  std::vector<std::string> names;
  for (const auto& law : laws) {
    for (auto& d : validate_law(stack, law)) all.push_back(std::move(d));
    for (const auto& c : law.components) {
      if (std::find(names.begin(), names.end(), c.name) != names.end())
        all.push_back({"DuplicateOp", law.name, "auxiliary operator " + c.name + " is defined twice in one layer"});
      names.push_back(c.name);
    }
  }
  if (!all.empty()) throw ValidationError(std::move(all));
  return stack.with_layer(std::move(laws));
}

LawStack build_stack(Signature sig, std::vector<StructuralLaw> laws) {
  auto sd = validate_signature(sig);
  if (!sd.empty()) throw ValidationError(std::move(sd));
  LawStack stack(std::move(sig));
  Nat top = 0;
  for (const auto& l : laws) top = std::max(top, l.layer);
  if (laws.empty()) return stack;
  for (Nat k = 0; k <= top; ++k) {
    std::vector<StructuralLaw> layer;
    for (const auto& l : laws)
      if (l.layer == k) layer.push_back(l);
    if (layer.empty())
      throw ValidationError({{"LayerViolation", "layer " + std::to_string(k), "no law declares this layer"}});
    stack = push_layer(stack, std::move(layer));
  }
  return stack;
}

}  // namespace structlaws
