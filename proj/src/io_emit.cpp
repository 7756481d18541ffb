#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dimpact/io.hpp"

namespace dimpact {

namespace {

using OJson = nlohmann::ordered_json;

std::string dump(const OJson& j) { return j.dump(2) + "\n"; }

OJson header(std::string_view kind) {
  OJson j;
  j["kind"] = kind;
  j["version"] = kFormatVersion;
  return j;
}

OJson nullable(const std::optional<std::string>& s) { return s ? OJson(*s) : OJson(nullptr); }

OJson scalarJson(const Scalar& s) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return *i;
  return std::get<std::string>(s);
}

OJson valueJson(const Value& v) {
  return std::visit([](const auto& x) { return OJson(x); }, v);
}

std::string formatRatio(const Ratio& r) {
  if (!r.defined()) return "0 (undefined)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r.value());
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

OJson metricsJson(const ImpactMetrics& m) {
  OJson j;
  j["uniqueSharedCount"] = m.uniqueSharedCount;
  j["uniqueTriggerCount"] = m.uniqueTriggerCount;
  std::vector<std::string> undefined;
  auto ratio = [&](const char* key, const Ratio& r) {
    j[key] = r.value();
    if (!r.defined()) undefined.emplace_back(key);
  };
  ratio("avgImpactSetsPerTrigger", m.avgImpactSetsPerTrigger);
  ratio("avgAffectedPerTrigger", m.avgAffectedPerTrigger);
  ratio("avgTriggersPerShared", m.avgTriggersPerShared);
  j["undefined"] = undefined;
  return j;
}

OJson affectedJson(const AffectedSet& a) {
  OJson j;
  j["trigger"] = a.trigger;
  OJson functions = OJson::array();
  for (const auto& sf : a.sharingFunctions) {
    OJson f;
    f["item"] = sf.item;
    f["relation"] = sf.relation;
    f["primaryKey"] = sf.pkAttributes;
    functions.push_back(std::move(f));
  }
  j["sharingFunctions"] = std::move(functions);
  return j;
}

void metricsTable(std::ostringstream& out, const ImpactMetrics& m) {
  out << "|";
  for (auto c : kMetricColumns) out << " " << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < kMetricColumns.size(); ++i) out << "---|";
  out << "\n| " << m.uniqueSharedCount << " | " << m.uniqueTriggerCount << " | "
      << formatRatio(m.avgImpactSetsPerTrigger) << " | " << formatRatio(m.avgAffectedPerTrigger)
      << " | " << formatRatio(m.avgTriggersPerShared) << " |\n";
}

void affectedMarkdown(std::ostringstream& out, const AffectedSet& a) {
  out << "### " << a.trigger << "\n\n";
  if (a.empty()) {
    out << "No sharing functions.\n\n";
    return;
  }
  out << "| Shared item | Relation | Primary key |\n|---|---|---|\n";
  for (const auto& sf : a.sharingFunctions) {
    std::string key;
    for (const auto& k : sf.pkAttributes) key += (key.empty() ? "" : ", ") + k;
    out << "| " << cell(sf.item) << " | " << cell(sf.relation) << " | " << cell(key) << " |\n";
  }
  out << "\n";
}

std::string dotId(std::string_view id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string emitModel(const ProcessModel& model) {
  OJson j = header("model");
  j["name"] = model.name;
  j["activities"] = OJson::array();
  for (const auto& a : model.activities) j["activities"].push_back({{"id", a.id}, {"name", a.name}});
  j["gateways"] = OJson::array();
  for (const auto& g : model.gateways)
    j["gateways"].push_back({{"id", g.id}, {"type", toString(g.type)}});
  j["flows"] = OJson::array();
  for (const auto& f : model.flows)
    j["flows"].push_back({{"id", f.id}, {"source", f.source}, {"target", f.target}});
  j["routingConstraints"] = OJson::array();
  for (const auto& rc : model.routingConstraints) {
    OJson r;
    r["id"] = rc.id;
    r["expression"] = nullable(rc.expression);
    r["support"] = rc.support;
    r["guardedFlows"] = rc.guardedFlows;
    j["routingConstraints"].push_back(std::move(r));
  }
  j["dataItems"] = OJson::array();
  for (const auto& d : model.dataItems) {
    OJson item;
    item["id"] = d.id;
    item["name"] = d.name;
    if (d.binding)
      item["binding"] = {{"relation", d.binding->relation}, {"attribute", d.binding->attribute}};
    else
      item["binding"] = "transient";
    j["dataItems"].push_back(std::move(item));
  }
  j["iao"] = OJson::array();
  for (const auto& t : model.iao) {
    OJson e;
    e["input"] = nullable(t.input);
    e["activity"] = t.activity;
    e["output"] = nullable(t.output);
    j["iao"].push_back(std::move(e));
  }
  return dump(j);
}

std::string emitSchema(const RelationalSchema& schema) {
  OJson j = header("schema");
  j["name"] = schema.name;
  j["relations"] = OJson::array();
  for (const auto& r : schema.relations) {
    OJson rel;
    rel["name"] = r.name;
    rel["attributes"] = OJson::array();
    for (const auto& a : r.attributes)
      rel["attributes"].push_back({{"name", a.name}, {"primaryKey", a.isPrimaryKey}});
    j["relations"].push_back(std::move(rel));
  }
  j["references"] = OJson::array();
  for (const auto& ref : schema.references) {
    OJson e;
    e["from"] = ref.from;
    e["to"] = ref.to;
    e["cardinality"] = toString(ref.cardinality);
    j["references"].push_back(std::move(e));
  }
  j["identityRelation"] = schema.identityRelation;
  return dump(j);
}

std::string emitLog(const InstanceLog& log) {
  OJson j = header("log");
  j["modelName"] = log.modelName;
  j["instances"] = OJson::array();
  for (const auto& pi : log.instances) {
    OJson inst;
    inst["caseId"] = scalarJson(pi.caseId);
    inst["trace"] = pi.trace;
    inst["dataItems"] = OJson::array();
    for (const auto& d : pi.dataItems) {
      OJson e;
      e["item"] = d.item;
      if (d.pkValue) {
        OJson key = OJson::array();
        for (const auto& k : *d.pkValue) key.push_back(scalarJson(k));
        e["pk"] = std::move(key);
      } else {
        e["pk"] = nullptr;
      }
      e["value"] = d.value ? valueJson(*d.value) : OJson(nullptr);
      inst["dataItems"].push_back(std::move(e));
    }
    j["instances"].push_back(std::move(inst));
  }
  return dump(j);
}

std::string emitIntra(const IntraImpactSet& intra, ReportFormat format) {
  if (format == ReportFormat::Json) {
    OJson j = header("intra-report");
    j["pairs"] = OJson::array();
    for (const auto& [a, b] : intra.pairs) j["pairs"].push_back({a, b});
    return dump(j);
  }
  std::ostringstream out;
  out << "# Intra-instance data impacts\n\n" << intra.size() << " pairs.\n\n";
  out << "| d | d' |\n|---|---|\n";
  for (const auto& [a, b] : intra.pairs) out << "| " << cell(a) << " | " << cell(b) << " |\n";
  return out.str();
}

std::string emitReport(const PdiSet& pdi, const AffectedSets& affected,
                       const ImpactMetrics& metrics, ReportFormat format) {
  if (format == ReportFormat::Json) {
    OJson j = header("pdi-report");
    j["triplets"] = OJson::array();
    for (const auto& t : pdi)
      j["triplets"].push_back({{"d1", t.d1},
                               {"d2", t.d2},
                               {"d", t.d},
                               {"relation", t.sharedRelation},
                               {"cardinality", toString(t.cardinalityToIr)}});
    j["affectedSets"] = OJson::array();
    for (const auto& [trigger, set] : affected) j["affectedSets"].push_back(affectedJson(set));
    j["metrics"] = metricsJson(metrics);
    return dump(j);
  }
  std::ostringstream out;
  out << "# Potential inter-instance data impacts\n\n";
  out << "## Triplets\n\n" << pdi.size() << " triplets.\n\n";
  out << "| d1 | d2 | d | Relation of d | Cardinality to IR |\n|---|---|---|---|---|\n";
  for (const auto& t : pdi)
    out << "| " << cell(t.d1) << " | " << cell(t.d2) << " | " << cell(t.d) << " | "
        << cell(t.sharedRelation) << " | " << toString(t.cardinalityToIr) << " |\n";
  out << "\n## Affected sets\n\n";
  for (const auto& [trigger, set] : affected) affectedMarkdown(out, set);
  out << "## Metrics\n\n";
  metricsTable(out, metrics);
  return out.str();
}

std::string emitAffected(const AffectedSet& affected, ReportFormat format) {
  if (format == ReportFormat::Json) {
    OJson j = header("affected-set");
    const OJson body = affectedJson(affected);
    for (const auto& [k, v] : body.items()) j[k] = v;
    return dump(j);
  }
  std::ostringstream out;
  out << "# Affected set\n\n";
  affectedMarkdown(out, affected);
  return out.str();
}

std::string emitMetrics(const ImpactMetrics& metrics, ReportFormat format) {
  if (format == ReportFormat::Json) {
    OJson j = header("metrics");
    j["metrics"] = metricsJson(metrics);
    OJson columns = OJson::array();
    for (auto c : kMetricColumns) columns.push_back(c);
    j["columns"] = std::move(columns);
    return dump(j);
  }
  std::ostringstream out;
  out << "# Impact metrics\n\n";
  metricsTable(out, metrics);
  return out.str();
}

std::string emitDot(const PdiSet& pdi) {
  std::set<std::string> shared, others;
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& t : pdi) shared.insert(t.d);
  for (const auto& t : pdi) {
    for (const auto* item : {&t.d1, &t.d2})
      if (!shared.contains(*item)) others.insert(*item);
    if (t.d1 != t.d) edges.emplace(t.d1, t.d);
    if (t.d != t.d2) edges.emplace(t.d, t.d2);
  }
  std::ostringstream out;
  out << "digraph pdi {\n  rankdir=LR;\n  node [shape=ellipse];\n";
  for (const auto& s : shared)
    out << "  " << dotId(s) << " [shape=doublecircle, style=filled, fillcolor=gold];\n";
  for (const auto& o : others) out << "  " << dotId(o) << ";\n";
  for (const auto& [a, b] : edges) out << "  " << dotId(a) << " -> " << dotId(b) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace dimpact
