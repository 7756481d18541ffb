#include <map>
#include <set>

#include "dimpact/io.hpp"
#include "located_json.hpp"

namespace dimpact {

using detail::LocatedDocument;
using detail::Node;

namespace {

void checkHeader(const Node& root, std::string_view kind) {
  const Node k = root.require("kind");
  if (k.string() != kind) k.fail("expected a " + std::string(kind) + " document, found '" + k.string() + "'");
  const Node v = root.require("version");
  if (v.string() != kFormatVersion)
    v.fail("version mismatch: expected " + std::string(kFormatVersion) + ", found '" + v.string() +
           "'");
}

std::vector<std::string> stringList(const Node& node) {
  std::vector<std::string> out;
  for (const auto& e : node.elements()) out.push_back(e.string());
  return out;
}

[[noreturn]] void rejectReport(const LocatedDocument& doc, const ValidationReport& report,
                               const std::map<std::string, std::string>& pointers,
                               std::string_view what) {
  std::string pointer;
  if (auto it = pointers.find(report.violations.front().element); it != pointers.end())
    pointer = it->second;
  throw ParseError(std::string(what) + " validation failed: " + report.summary(),
                   doc.locate(pointer));
}

Scalar scalar(const Node& node) {
  if (node.isString()) return node.string();
  if (node.raw().is_number_integer()) return node.integer();
  node.fail(node.pointer() + " must be an integer or a string");
}

}  // namespace

ProcessModel parseModel(std::string_view text) {
  const LocatedDocument doc = detail::parseLocated(text);
  const Node root = detail::rootNode(doc);
  checkHeader(root, "model");
  root.onlyKeys({"kind", "version", "name", "activities", "gateways", "flows",
                 "routingConstraints", "dataItems", "iao"});

  ProcessModel model;
  std::map<std::string, std::string> pointers;  // element id -> JSON pointer
  model.name = root.require("name").string();

  for (const auto& n : root.require("activities").elements()) {
    n.onlyKeys({"id", "name"});
    Activity a;
    a.id = n.require("id").string();
    a.name = n.optional("name") ? n.require("name").string() : a.id;
    pointers.try_emplace(a.id, n.pointer());
    model.activities.push_back(std::move(a));
  }
  if (auto gws = root.optional("gateways"))
    for (const auto& n : gws->elements()) {
      n.onlyKeys({"id", "type"});
      Gateway g;
      g.id = n.require("id").string();
      const Node t = n.require("type");
      auto type = parseGatewayType(t.string());
      if (!type) t.fail("gateway '" + g.id + "': type must be xor or and, found '" + t.string() + "'");
      g.type = *type;
      pointers.try_emplace(g.id, n.pointer());
      model.gateways.push_back(std::move(g));
    }
  for (const auto& n : root.require("flows").elements()) {
    n.onlyKeys({"id", "source", "target"});
    ControlFlow f{n.require("id").string(), n.require("source").string(),
                  n.require("target").string()};
    pointers.try_emplace(f.id, n.pointer());
    model.flows.push_back(std::move(f));
  }
  if (auto rcs = root.optional("routingConstraints"))
    for (const auto& n : rcs->elements()) {
      n.onlyKeys({"id", "expression", "support", "guardedFlows"});
      RoutingConstraint rc;
      rc.id = n.require("id").string();
      if (auto e = n.optional("expression")) rc.expression = e->nullableString();
      rc.support = stringList(n.require("support"));
      rc.guardedFlows = stringList(n.require("guardedFlows"));
      pointers.try_emplace(rc.id, n.pointer());
      model.routingConstraints.push_back(std::move(rc));
    }
  for (const auto& n : root.require("dataItems").elements()) {
    n.onlyKeys({"id", "name", "binding"});
    DataItem d;
    d.id = n.require("id").string();
    d.name = n.optional("name") ? n.require("name").string() : d.id;
    const Node b = n.require("binding");
    if (b.isString()) {
      if (b.string() != "transient") b.fail("binding must be \"transient\" or an object");
    } else {
      b.onlyKeys({"relation", "attribute"});
      d.binding = StoredBinding{b.require("relation").string(), b.require("attribute").string()};
    }
    pointers.try_emplace(d.id, n.pointer());
    model.dataItems.push_back(std::move(d));
  }
  const auto iao = root.require("iao").elements();
  for (std::size_t i = 0; i < iao.size(); ++i) {
    const Node& n = iao[i];
    n.onlyKeys({"input", "activity", "output"});
    IaoTriple t{n.require("input").nullableString(), n.require("activity").string(),
                n.require("output").nullableString()};
    if (!t.input && !t.output) n.fail("IAO entry " + std::to_string(i) + " has both input and output null");
    pointers.try_emplace("iao[" + std::to_string(i) + "]", n.pointer());
    model.iao.push_back(std::move(t));
  }

  if (auto report = validateModel(model); !report.ok()) rejectReport(doc, report, pointers, "model");
  return model;
}

RelationalSchema parseSchema(std::string_view text) {
  const LocatedDocument doc = detail::parseLocated(text);
  const Node root = detail::rootNode(doc);
  checkHeader(root, "schema");
  root.onlyKeys({"kind", "version", "name", "relations", "references", "identityRelation"});

  RelationalSchema schema;
  std::map<std::string, std::string> pointers;
  schema.name = root.optional("name") ? root.require("name").string() : std::string();
  for (const auto& n : root.require("relations").elements()) {
    n.onlyKeys({"name", "attributes"});
    Relation r;
    r.name = n.require("name").string();
    for (const auto& a : n.require("attributes").elements()) {
      a.onlyKeys({"name", "primaryKey"});
      AttributeDef attr{a.require("name").string(), false};
      if (auto pk = a.optional("primaryKey")) attr.isPrimaryKey = pk->boolean();
      r.attributes.push_back(std::move(attr));
    }
    pointers.try_emplace(r.name, n.pointer());
    schema.relations.push_back(std::move(r));
  }
  if (auto refs = root.optional("references"))
    for (const auto& n : refs->elements()) {
      n.onlyKeys({"from", "to", "cardinality"});
      ReferenceMapping ref{n.require("from").string(), n.require("to").string()};
      const Node c = n.require("cardinality");
      auto card = parseCardinality(c.string());
      if (!card) c.fail("cardinality must be one of 1-1, 1-m, m-1, m-m, found '" + c.string() + "'");
      ref.cardinality = *card;
      pointers.try_emplace(ref.from, n.pointer());
      pointers.try_emplace(ref.to, n.pointer());
      schema.references.push_back(std::move(ref));
    }
  const Node ir = root.require("identityRelation");
  schema.identityRelation = ir.string();
  pointers.try_emplace(schema.identityRelation, ir.pointer());

  if (auto report = validateSchema(schema); !report.ok())
    rejectReport(doc, report, pointers, "schema");
  return schema;
}

InstanceLog parseLog(std::string_view text) {
  const LocatedDocument doc = detail::parseLocated(text);
  const Node root = detail::rootNode(doc);
  checkHeader(root, "log");
  root.onlyKeys({"kind", "version", "modelName", "instances"});

  InstanceLog log;
  log.modelName = root.require("modelName").string();
  std::set<Scalar> seen;
  for (const auto& n : root.require("instances").elements()) {
    n.onlyKeys({"caseId", "trace", "dataItems"});
    ProcessInstance pi;
    const Node caseNode = n.require("caseId");
    pi.caseId = scalar(caseNode);
    if (!seen.insert(pi.caseId).second)
      caseNode.fail("case id " + toString(pi.caseId) + " occurs more than once");
    pi.trace = stringList(n.require("trace"));
    for (const auto& d : n.require("dataItems").elements()) {
      d.onlyKeys({"item", "pk", "value"});
      DataItemInstance inst;
      inst.item = d.require("item").string();
      if (auto pk = d.optional("pk"); pk && !pk->isNull()) {
        KeyTuple key;
        for (const auto& k : pk->elements()) key.push_back(scalar(k));
        if (key.empty()) pk->fail("pk must list at least one key value");
        inst.pkValue = std::move(key);
      }
      if (auto v = d.optional("value"); v && !v->isNull()) {
        const auto& raw = v->raw();
        if (raw.is_boolean())
          inst.value = raw.get<bool>();
        else if (raw.is_number_integer() && !raw.is_number_unsigned())
          inst.value = raw.get<std::int64_t>();
        else if (raw.is_number())
          inst.value = raw.get<double>();
        else if (raw.is_string())
          inst.value = raw.get<std::string>();
        else
          v->fail("value must be a scalar or null");
      }
      pi.dataItems.push_back(std::move(inst));
    }
    log.instances.push_back(std::move(pi));
  }
  return log;
}

}  // namespace dimpact
