// Copyright 2026 The langlimit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "langlimit/collections.h"

#include <algorithm>
#include <sstream>

#include "langlimit/errors.h"

namespace langlimit {
namespace {

std::string SetString(const ElementSet& s) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (Element x : s) {
    out << (first ? "" : ",") << x;
    first = false;
  }
  out << "}";
  return out.str();
}

bool Disjoint(const ElementSet& a, const ElementSet& b) {
  for (Element x : a) {
    if (b.count(x) > 0) return false;
  }
  return true;
}

ElementSet Union(ElementSet a, const ElementSet& b) {
  a.insert(b.begin(), b.end());
  return a;
}

ElementSet Minus(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  for (Element x : a) {
    if (b.count(x) == 0) out.insert(x);
  }
  return out;
}

bool Subset(const ElementSet& s, const ClosedFormLanguage& l) {
  return std::all_of(s.begin(), s.end(),
                     [&](Element x) { return l.Contains(x); });
}

ClosureResult ProjectClosure(const ClosureResult& r, const ElementSet& removed) {
  switch (r.kind) {
    case ClosureKind::kFinite:
      return ClosureResult::Finite(Minus(r.finite, removed));
    case ClosureKind::kInfinite:
      return ClosureResult::Infinite(project_language(*r.language, removed));
    case ClosureKind::kNoConsistent:
      break;
  }
  return r;
}

void CheckDisjoint(const ElementSet& required, const ElementSet& forbidden) {
  if (!Disjoint(required, forbidden)) {
    throw InvalidArgument("required and forbidden sets overlap");
  }
}

bool ExplicitConsistent(const ExplicitCountable& e, const ElementSet& s) {
  if (e.analytic_consistent) return e.analytic_consistent(s);
  const std::size_t n = e.size ? std::min(*e.size, e.index_bound)
                               : e.index_bound;
  for (std::size_t k = 0; k < n; ++k) {
    if (Subset(s, e.rule(k))) return true;
  }
  if (e.size && *e.size <= e.index_bound) return false;
  throw IndexBoundExceeded("consistency search for " + e.name +
                           " passed index " + std::to_string(n));
}

ClosureResult ExplicitClosure(const ExplicitCountable& e, const ElementSet& s) {
  if (e.analytic_closure) return e.analytic_closure(s);
  if (!e.size || *e.size > e.index_bound) {
    throw IndexBoundExceeded("closure of " + e.name +
                             " needs an intersection over infinitely many "
                             "languages");
  }
  ClosureResult acc = ClosureResult::NoConsistent();
  for (std::size_t k = 0; k < *e.size; ++k) {
    ClosedFormLanguage l = e.rule(k);
    if (!Subset(s, l)) continue;
    acc = IntersectClosures(acc, ClosureResult::Infinite(std::move(l)));
  }
  return acc;
}

// Largest finite intersection over nonempty subfamilies; exact for short
// lists.
int ExplicitDimension(const ExplicitCountable& e) {
  if (e.declared_dim) return *e.declared_dim;
  constexpr std::size_t kMaxExact = 20;
  if (!e.size || *e.size > kMaxExact) {
    throw InvalidArgument("closure dimension of " + e.name +
                          " must be declared");
  }
  const std::size_t n = *e.size;
  std::vector<ClosedFormLanguage> ls;
  for (std::size_t k = 0; k < n; ++k) ls.push_back(e.rule(k));
  int best = -1;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    ClosureResult acc = ClosureResult::NoConsistent();
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        acc = IntersectClosures(acc, ClosureResult::Infinite(ls[k]));
      }
    }
    if (acc.is_finite()) {
      best = std::max(best, static_cast<int>(acc.finite.size()));
    }
  }
  return best;
}

}  // namespace

ClosureResult ClosureResult::Finite(ElementSet s) {
  ClosureResult r;
  r.kind = ClosureKind::kFinite;
  r.finite = std::move(s);
  return r;
}

ClosureResult ClosureResult::Infinite(ClosedFormLanguage l) {
  ClosureResult r;
  r.kind = ClosureKind::kInfinite;
  r.language = std::move(l);
  return r;
}

ClosureResult ClosureResult::NoConsistent() { return ClosureResult{}; }

bool ClosureResult::Contains(Element x) const {
  switch (kind) {
    case ClosureKind::kFinite:
      return finite.count(x) > 0;
    case ClosureKind::kInfinite:
      return language->Contains(x);
    case ClosureKind::kNoConsistent:
      break;
  }
  return false;
}

std::string ClosureResult::ToString() const {
  switch (kind) {
    case ClosureKind::kFinite:
      return "Finite(" + SetString(finite) + ")";
    case ClosureKind::kInfinite:
      return "Infinite(" + language->ToString() + ")";
    case ClosureKind::kNoConsistent:
      break;
  }
  return "NoConsistent";
}

ClosureResult IntersectClosures(const ClosureResult& a,
                                const ClosureResult& b) {
  if (a.kind == ClosureKind::kNoConsistent) return b;
  if (b.kind == ClosureKind::kNoConsistent) return a;
  if (a.is_finite() || b.is_finite()) {
    const ClosureResult& f = a.is_finite() ? a : b;
    const ClosureResult& other = a.is_finite() ? b : a;
    ElementSet out;
    for (Element x : f.finite) {
      if (other.Contains(x)) out.insert(x);
    }
    return ClosureResult::Finite(std::move(out));
  }
  ElementSet finite;
  auto l = intersect_languages(*a.language, *b.language, &finite);
  if (l) return ClosureResult::Infinite(std::move(*l));
  return ClosureResult::Finite(std::move(finite));
}

ExplicitCountable ExplicitCountable::FromList(
    std::vector<ClosedFormLanguage> languages, std::string name) {
  auto shared =
      std::make_shared<const std::vector<ClosedFormLanguage>>(
          std::move(languages));
  ExplicitCountable e;
  e.size = shared->size();
  e.rule = [shared](std::size_t k) { return shared->at(k); };
  e.name = std::move(name);
  return e;
}

CollectionSpec::CollectionSpec(SuffixFamily s) {
  CheckDisjoint(s.required, s.forbidden);
  if (s.offset && *s.offset < 0) {
    throw InvalidArgument("suffix offset must be a natural number");
  }
  v_ = std::make_shared<const Variant>(std::move(s));
}

CollectionSpec::CollectionSpec(NegFamily s) {
  CheckDisjoint(s.required, s.forbidden);
  v_ = std::make_shared<const Variant>(std::move(s));
}

CollectionSpec::CollectionSpec(ExplicitCountable s) {
  if (!s.rule) throw InvalidArgument("explicit collection needs a rule");
  if (s.size && *s.size == 0) {
    throw InvalidArgument("explicit collection is empty");
  }
  v_ = std::make_shared<const Variant>(std::move(s));
}

CollectionSpec::CollectionSpec(UnionSpec s) {
  if (s.parts.empty()) throw InvalidArgument("union of no collections");
  v_ = std::make_shared<const Variant>(std::move(s));
}

CollectionSpec::CollectionSpec(ChainSpec s) {
  if (!s.rule) throw InvalidArgument("chain needs a rule");
  v_ = std::make_shared<const Variant>(std::move(s));
}

std::string CollectionSpec::ToString() const {
  struct Visitor {
    std::string operator()(const SuffixFamily& s) const {
      return "Suffix(I=" + SetString(s.required) +
             ", E=" + SetString(s.forbidden) + ", j=" +
             (s.offset ? std::to_string(*s.offset) : std::string("*")) + ")";
    }
    std::string operator()(const NegFamily& s) const {
      return "Neg(I=" + SetString(s.required) +
             ", E=" + SetString(s.forbidden) + ")";
    }
    std::string operator()(const ExplicitCountable& e) const {
      return "Explicit(" + e.name + ")";
    }
    std::string operator()(const UnionSpec& u) const {
      std::string out = "Union(";
      for (std::size_t k = 0; k < u.parts.size(); ++k) {
        out += (k ? ", " : "") + u.parts[k].ToString();
      }
      return out + ")";
    }
    std::string operator()(const ChainSpec& c) const {
      return "Chain(" + c.name + ")";
    }
  };
  return std::visit(Visitor{}, *v_);
}

bool operator==(const CollectionSpec& a, const CollectionSpec& b) {
  if (a.variant().index() != b.variant().index()) return false;
  if (const auto* x = std::get_if<SuffixFamily>(&a.variant())) {
    const auto& y = std::get<SuffixFamily>(b.variant());
    return x->required == y.required && x->forbidden == y.forbidden &&
           x->offset == y.offset;
  }
  if (const auto* x = std::get_if<NegFamily>(&a.variant())) {
    const auto& y = std::get<NegFamily>(b.variant());
    return x->required == y.required && x->forbidden == y.forbidden;
  }
  if (const auto* x = std::get_if<ExplicitCountable>(&a.variant())) {
    const auto& y = std::get<ExplicitCountable>(b.variant());
    return x->name == y.name && x->size == y.size;
  }
  if (const auto* x = std::get_if<UnionSpec>(&a.variant())) {
    const auto& y = std::get<UnionSpec>(b.variant());
    return x->parts == y.parts;
  }
  return std::get<ChainSpec>(a.variant()).name ==
         std::get<ChainSpec>(b.variant()).name;
}

bool consistent(const CollectionSpec& c, const ElementSet& s) {
  const auto& v = c.variant();
  if (const auto* f = std::get_if<SuffixFamily>(&v)) {
    return Disjoint(s, f->forbidden);
  }
  if (const auto* f = std::get_if<NegFamily>(&v)) {
    return Disjoint(s, f->forbidden);
  }
  if (const auto* e = std::get_if<ExplicitCountable>(&v)) {
    return ExplicitConsistent(*e, s);
  }
  if (const auto* u = std::get_if<UnionSpec>(&v)) {
    std::optional<IndexBoundExceeded> unknown;
    for (const auto& part : u->parts) {
      try {
        if (consistent(part, s)) return true;
      } catch (const IndexBoundExceeded& e) {
        unknown = e;
      }
    }
    if (unknown) throw *unknown;
    return false;
  }
  const auto& chain = std::get<ChainSpec>(v);
  if (chain.limit) return consistent(*chain.limit, s);
  for (std::size_t t = 0; t <= chain.bound; ++t) {
    if (consistent(chain.rule(t), s)) return true;
  }
  throw IndexBoundExceeded("consistency search for chain " + chain.name +
                           " passed index " + std::to_string(chain.bound));
}

ClosureResult closure(const CollectionSpec& c, const ElementSet& s) {
  const auto& v = c.variant();
  if (const auto* f = std::get_if<SuffixFamily>(&v)) {
    if (!Disjoint(s, f->forbidden)) return ClosureResult::NoConsistent();
    ElementSet base = Union(s, f->required);
    if (!f->offset) return ClosureResult::Finite(std::move(base));
    return ClosureResult::Infinite(
        ClosedFormLanguage(std::move(base), *f->offset, false, f->forbidden));
  }
  if (const auto* f = std::get_if<NegFamily>(&v)) {
    if (!Disjoint(s, f->forbidden)) return ClosureResult::NoConsistent();
    return ClosureResult::Infinite(ClosedFormLanguage(
        Union(s, f->required), std::nullopt, true, f->forbidden));
  }
  if (const auto* e = std::get_if<ExplicitCountable>(&v)) {
    return ExplicitClosure(*e, s);
  }
  if (const auto* u = std::get_if<UnionSpec>(&v)) {
    ClosureResult acc = ClosureResult::NoConsistent();
    for (const auto& part : u->parts) {
      if (!consistent(part, s)) continue;
      acc = IntersectClosures(acc, closure(part, s));
    }
    return acc;
  }
  const auto& chain = std::get<ChainSpec>(v);
  if (!chain.limit) {
    throw IndexBoundExceeded("closure of chain " + chain.name +
                             " needs its limit collection");
  }
  return closure(*chain.limit, s);
}

int closure_dimension(const CollectionSpec& c) {
  const auto& v = c.variant();
  if (const auto* f = std::get_if<SuffixFamily>(&v)) {
    if (!f->offset) {
      throw UnboundedClosureDimension(
          "every finite set has finite closure in " + c.ToString());
    }
    return -1;
  }
  if (std::holds_alternative<NegFamily>(v)) return -1;
  if (const auto* e = std::get_if<ExplicitCountable>(&v)) {
    return ExplicitDimension(*e);
  }
  std::optional<int> declared;
  if (const auto* u = std::get_if<UnionSpec>(&v)) {
    declared = u->declared_dim;
  } else {
    declared = std::get<ChainSpec>(v).declared_dim;
  }
  if (!declared) {
    throw InvalidArgument("closure dimension of " + c.ToString() +
                          " must be declared");
  }
  return *declared;
}

ClosureResult intersection_stream(const CollectionSpec& c) {
  return closure(c, {});
}

bool uniform_without_samples_check(const CollectionSpec& c) {
  return intersection_stream(c).is_infinite();
}

CollectionSpec project_collection(const CollectionSpec& c,
                                  const ElementSet& removed) {
  const auto& v = c.variant();
  if (const auto* f = std::get_if<SuffixFamily>(&v)) {
    return SuffixFamily{Minus(f->required, removed),
                        Union(f->forbidden, removed), f->offset};
  }
  if (const auto* f = std::get_if<NegFamily>(&v)) {
    return NegFamily{Minus(f->required, removed),
                     Union(f->forbidden, removed)};
  }
  if (const auto* e = std::get_if<ExplicitCountable>(&v)) {
    ExplicitCountable p = *e;
    auto rule = e->rule;
    p.rule = [rule, removed](std::size_t k) {
      return project_language(rule(k), removed);
    };
    if (e->analytic_closure) {
      auto inner = e->analytic_closure;
      p.analytic_closure = [inner, removed](const ElementSet& s) {
        if (!Disjoint(s, removed)) return ClosureResult::NoConsistent();
        return ProjectClosure(inner(s), removed);
      };
    }
    if (e->analytic_consistent) {
      auto inner = e->analytic_consistent;
      p.analytic_consistent = [inner, removed](const ElementSet& s) {
        return Disjoint(s, removed) && inner(s);
      };
    }
    p.declared_dim.reset();
    p.name = e->name + "|" + SetString(removed);
    return p;
  }
  if (const auto* u = std::get_if<UnionSpec>(&v)) {
    UnionSpec p;
    for (const auto& part : u->parts) {
      p.parts.push_back(project_collection(part, removed));
    }
    return p;
  }
  const auto& chain = std::get<ChainSpec>(v);
  ChainSpec p = chain;
  auto rule = chain.rule;
  p.rule = [rule, removed](std::size_t t) {
    return project_collection(rule(t), removed);
  };
  if (chain.limit) {
    p.limit = std::make_shared<const CollectionSpec>(
        project_collection(*chain.limit, removed));
  }
  p.declared_dim.reset();
  p.name = chain.name + "|" + SetString(removed);
  return p;
}

CollectionSpec chain_at(const CollectionSpec& chain, std::size_t t) {
  const auto* c = std::get_if<ChainSpec>(&chain.variant());
  if (!c) throw InvalidArgument(chain.ToString() + " is not a chain");
  if (t > c->bound) {
    throw IndexBoundExceeded("chain " + c->name + " is bounded at " +
                             std::to_string(c->bound));
  }
  return c->rule(t);
}

ElementSet range_set(Element lo, Element hi) {
  ElementSet out;
  for (Element x = lo; x <= hi; ++x) out.insert(x);
  return out;
}

CollectionSpec collection_c1() { return SuffixFamily{}; }

CollectionSpec collection_c2() { return NegFamily{}; }

CollectionSpec collection_ci(int i) {
  if (i < 0) throw InvalidArgument("level must be non-negative");
  return UnionSpec{{SuffixFamily{range_set(0, i), {}, std::nullopt},
                    NegFamily{{}, range_set(0, i)}},
                   std::nullopt};
}

CollectionSpec collection_bi(int i) {
  if (i < 0) throw InvalidArgument("level must be non-negative");
  return UnionSpec{{SuffixFamily{{}, range_set(0, i), std::nullopt},
                    NegFamily{{}, range_set(0, i)}},
                   std::nullopt};
}

CollectionSpec collection_suffix_at(Element j) {
  return SuffixFamily{{}, {}, j};
}

CollectionSpec collection_p_family() {
  ExplicitCountable e;
  e.rule = [](std::size_t k) {
    return ClosedFormLanguage::Suffix(static_cast<Element>(k));
  };
  e.declared_dim = 0;
  e.name = "P-family";
  e.analytic_consistent = [](const ElementSet& s) {
    return s.empty() || *s.begin() >= 0;
  };
  e.analytic_closure = [](const ElementSet& s) {
    if (s.empty()) return ClosureResult::Finite({});
    if (*s.begin() < 0) return ClosureResult::NoConsistent();
    return ClosureResult::Infinite(ClosedFormLanguage::Suffix(*s.begin()));
  };
  return e;
}

CollectionSpec collection_p_prefixes() {
  ChainSpec c;
  c.name = "P-prefixes";
  c.limit = std::make_shared<const CollectionSpec>(collection_p_family());
  c.bound = 1'000'000;
  c.rule = [](std::size_t t) -> CollectionSpec {
    const auto top = static_cast<Element>(t);
    ExplicitCountable e;
    e.size = t + 1;
    e.rule = [](std::size_t k) {
      return ClosedFormLanguage::Suffix(static_cast<Element>(k));
    };
    e.name = "P-prefix:" + std::to_string(t);
    e.analytic_consistent = [](const ElementSet& s) {
      return s.empty() || *s.begin() >= 0;
    };
    // Consistent P_k are those with k <= min S; the largest wins.
    e.analytic_closure = [top](const ElementSet& s) {
      if (!s.empty() && *s.begin() < 0) return ClosureResult::NoConsistent();
      const Element j = s.empty() ? top : std::min(top, *s.begin());
      return ClosureResult::Infinite(ClosedFormLanguage::Suffix(j));
    };
    return e;
  };
  return c;
}

CollectionSpec collection_sensitivity() {
  return UnionSpec{{collection_p_family(), collection_c2()}, std::nullopt};
}

CollectionSpec named_collection(const std::string& name) {
  auto suffix_int = [&](const std::string& prefix) -> std::optional<int> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      std::size_t used = 0;
      const int v = std::stoi(name.substr(prefix.size()), &used);
      if (used + prefix.size() != name.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (name == "C1") return collection_c1();
  if (name == "C2") return collection_c2();
  if (name == "P-family") return collection_p_family();
  if (name == "P-prefixes") return collection_p_prefixes();
  if (name == "thm5.4") return collection_sensitivity();
  if (auto i = suffix_int("C^i:")) return collection_ci(*i);
  if (auto i = suffix_int("B^i:")) return collection_bi(*i);
  if (auto j = suffix_int("suffix-at:")) {
    if (*j < 0) throw InvalidArgument("negative suffix offset");
    return collection_suffix_at(*j);
  }
  throw InvalidArgument("unknown collection '" + name + "'");
}

nlohmann::ordered_json ToJson(const CollectionSpec& c) {
  nlohmann::ordered_json j;
  const auto& v = c.variant();
  auto set_json = [](const ElementSet& s) {
    return std::vector<Element>(s.begin(), s.end());
  };
  if (const auto* f = std::get_if<SuffixFamily>(&v)) {
    j["kind"] = "suffix";
    j["required"] = set_json(f->required);
    j["forbidden"] = set_json(f->forbidden);
    if (f->offset) {
      j["offset"] = *f->offset;
    } else {
      j["offset"] = nullptr;
    }
  } else if (const auto* f = std::get_if<NegFamily>(&v)) {
    j["kind"] = "neg";
    j["required"] = set_json(f->required);
    j["forbidden"] = set_json(f->forbidden);
  } else if (const auto* e = std::get_if<ExplicitCountable>(&v)) {
    j["kind"] = "explicit";
    j["name"] = e->name;
    constexpr std::size_t kMaxListed = 64;
    if (e->size && *e->size <= kMaxListed) {
      auto langs = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < *e->size; ++k) {
        langs.push_back(ToJson(e->rule(k)));
      }
      j["languages"] = std::move(langs);
    }
  } else if (const auto* u = std::get_if<UnionSpec>(&v)) {
    j["kind"] = "union";
    auto parts = nlohmann::ordered_json::array();
    for (const auto& p : u->parts) parts.push_back(ToJson(p));
    j["parts"] = std::move(parts);
    if (u->declared_dim) j["declared_dim"] = *u->declared_dim;
  } else {
    j["kind"] = "chain";
    j["name"] = std::get<ChainSpec>(v).name;
  }
  return j;
}

CollectionSpec CollectionFromJson(const nlohmann::json& j) {
  try {
    if (j.is_string()) return named_collection(j.get<std::string>());
    auto set_of = [&](const char* key) {
      ElementSet s;
      if (j.contains(key)) {
        for (const auto& x : j.at(key)) s.insert(x.get<Element>());
      }
      return s;
    };
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "suffix") {
      std::optional<Element> offset;
      if (j.contains("offset") && !j.at("offset").is_null()) {
        offset = j.at("offset").get<Element>();
      }
      return SuffixFamily{set_of("required"), set_of("forbidden"), offset};
    }
    if (kind == "neg") return NegFamily{set_of("required"), set_of("forbidden")};
    if (kind == "explicit") {
      if (!j.contains("languages")) {
        return named_collection(j.at("name").get<std::string>());
      }
      std::vector<ClosedFormLanguage> ls;
      for (const auto& l : j.at("languages")) ls.push_back(LanguageFromJson(l));
      return ExplicitCountable::FromList(std::move(ls),
                                         j.value("name", "explicit"));
    }
    if (kind == "union") {
      UnionSpec u;
      for (const auto& p : j.at("parts")) {
        u.parts.push_back(CollectionFromJson(p));
      }
      if (j.contains("declared_dim")) {
        u.declared_dim = j.at("declared_dim").get<int>();
      }
      return u;
    }
    if (kind == "chain" || kind == "named") {
      return named_collection(j.at("name").get<std::string>());
    }
    throw InvalidArgument("unknown collection kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad collection record: ") + e.what());
  }
}

}  // namespace langlimit
