#include "dimpact/schema.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace dimpact {

std::string_view toString(Cardinality c) {
  switch (c) {
    case Cardinality::OneToOne: return "1-1";
    case Cardinality::OneToMany: return "1-m";
    case Cardinality::ManyToOne: return "m-1";
    case Cardinality::ManyToMany: return "m-m";
  }
  return "?";
}

std::optional<Cardinality> parseCardinality(std::string_view text) {
  for (auto c : kAllCardinalities)
    if (toString(c) == text) return c;
  return std::nullopt;
}

std::vector<std::string> Relation::primaryKey() const {
  std::vector<std::string> key;
  for (const auto& a : attributes)
    if (a.isPrimaryKey) key.push_back(a.name);
  return key;
}

bool Relation::hasAttribute(std::string_view attribute) const {
  return std::any_of(attributes.begin(), attributes.end(),
                     [&](const AttributeDef& a) { return a.name == attribute; });
}

const Relation* RelationalSchema::findRelation(std::string_view relation) const {
  auto it = std::find_if(relations.begin(), relations.end(),
                         [&](const Relation& r) { return r.name == relation; });
  return it == relations.end() ? nullptr : &*it;
}

ValidationReport validateSchema(const RelationalSchema& schema) {
  ValidationReport report;
  std::unordered_set<std::string> names;
  for (const auto& r : schema.relations) {
    if (!names.insert(r.name).second)
      report.add(ViolationKind::DuplicateId, r.name,
                 "relation '" + r.name + "' is declared twice");
    if (r.attributes.empty())
      report.add(ViolationKind::EmptyRelation, r.name,
                 "relation '" + r.name + "' has no attributes");
    else if (r.primaryKey().empty())
      report.add(ViolationKind::MissingPrimaryKey, r.name,
                 "relation '" + r.name + "' has no primary-key attribute");
    std::unordered_set<std::string> attrs;
    for (const auto& a : r.attributes)
      if (!attrs.insert(a.name).second)
        report.add(ViolationKind::DuplicateAttribute, r.name,
                   "relation '" + r.name + "' repeats attribute '" + a.name + "'");
  }
  if (!names.contains(schema.identityRelation))
    report.add(ViolationKind::UnknownIdentityRelation, schema.identityRelation,
               "identity relation '" + schema.identityRelation + "' is not declared");
  for (const auto& ref : schema.references) {
    for (const auto* end : {&ref.from, &ref.to})
      if (!names.contains(*end))
        report.add(ViolationKind::DanglingReference, *end,
                   "reference " + ref.from + " -> " + ref.to + " names unknown relation '" +
                       *end + "'");
  }
  return report;
}

ValidationReport validateBindings(const ProcessModel& model, const RelationalSchema& schema) {
  ValidationReport report;
  for (const auto& d : model.dataItems) {
    if (!d.binding) continue;
    const auto* r = schema.findRelation(d.binding->relation);
    if (!r)
      report.add(ViolationKind::UnresolvedBinding, d.id,
                 "data item '" + d.id + "' is bound to unknown relation '" +
                     d.binding->relation + "'");
    else if (!r->hasAttribute(d.binding->attribute))
      report.add(ViolationKind::UnresolvedBinding, d.id,
                 "data item '" + d.id + "' is bound to unknown attribute '" +
                     d.binding->relation + "." + d.binding->attribute + "'");
  }
  return report;
}

const Relation* findRel(const RelationalSchema& schema, const DataItem& item) {
  if (!item.binding) return nullptr;
  const auto* r = schema.findRelation(item.binding->relation);
  if (!r)
    throw Error("unresolved binding: data item '" + item.id + "' names relation '" +
                item.binding->relation + "'");
  return r;
}

Cardinality findCardinality(const RelationalSchema& schema, std::string_view from,
                            std::string_view identity) {
  if (!schema.findRelation(from))
    throw Error("unknown relation '" + std::string(from) + "'");
  if (!schema.findRelation(identity))
    throw Error("unknown relation '" + std::string(identity) + "'");
  if (from == identity) return Cardinality::OneToOne;

  struct Edge {
    std::string_view target;
    Cardinality cardinality;
  };
  std::unordered_map<std::string_view, std::vector<Edge>> edges;
  for (const auto& ref : schema.references) {
    edges[ref.from].push_back({ref.to, ref.cardinality});
    edges[ref.to].push_back({ref.from, dual(ref.cardinality)});
  }

  std::optional<Cardinality> widest;
  std::unordered_set<std::string_view> onPath{from};
  // Exhaustive simple-path search; reference graphs are small.
  std::function<void(std::string_view, Cardinality)> visit = [&](std::string_view at,
                                                                  Cardinality sofar) {
    if (at == identity) {
      widest = widest ? widen(*widest, sofar) : sofar;
      return;
    }
    // Once m-m is reached nothing can widen it further.
    if (widest == Cardinality::ManyToMany) return;
    auto it = edges.find(at);
    if (it == edges.end()) return;
    for (const auto& e : it->second) {
      if (onPath.contains(e.target)) continue;
      onPath.insert(e.target);
      visit(e.target, composeCardinality(sofar, e.cardinality));
      onPath.erase(e.target);
    }
  };
  visit(from, Cardinality::OneToOne);

  if (!widest)
    throw Error("relation unreachable from identity relation: '" + std::string(from) + "'");
  return *widest;
}

}  // namespace dimpact
