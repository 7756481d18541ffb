#include "dimpact/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

namespace dimpact {

namespace {

template <class Range>
auto findById(const Range& range, std::string_view id) -> decltype(&*range.begin()) {
  auto it = std::find_if(range.begin(), range.end(),
                         [&](const auto& e) { return e.id == id; });
  return it == range.end() ? nullptr : &*it;
}

}  // namespace

std::string_view toString(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateId: return "duplicate id";
    case ViolationKind::DanglingReference: return "dangling reference";
    case ViolationKind::EmptyDataItems: return "empty data-item set";
    case ViolationKind::BadGatewayType: return "bad gateway type";
    case ViolationKind::DegenerateIao: return "degenerate IAO triple";
    case ViolationKind::EmptySupport: return "empty support";
    case ViolationKind::EmptyGuardedFlows: return "no guarded flows";
    case ViolationKind::EmptyRelation: return "relation without attributes";
    case ViolationKind::MissingPrimaryKey: return "missing primary key";
    case ViolationKind::DuplicateAttribute: return "duplicate attribute";
    case ViolationKind::UnknownIdentityRelation: return "unknown identity relation";
    case ViolationKind::UnresolvedBinding: return "unresolved binding";
    case ViolationKind::DuplicateCaseId: return "duplicate case id";
    case ViolationKind::UnknownActivity: return "unknown activity";
    case ViolationKind::BadKey: return "bad key";
    case ViolationKind::SharedIdentityAttribute: return "shared identity attribute";
    case ViolationKind::NarrowCardinalitySharing: return "sharing through narrow cardinality";
    case ViolationKind::UnexplainedTraceImpact: return "unexplained trace impact";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "no violations";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += toString(v.kind);
    out += ": ";
    out += v.message;
  }
  return out;
}

std::string_view toString(GatewayType type) {
  return type == GatewayType::And ? "and" : "xor";
}

std::optional<GatewayType> parseGatewayType(std::string_view text) {
  if (text == "xor") return GatewayType::Xor;
  if (text == "and") return GatewayType::And;
  return std::nullopt;
}

const Activity* ProcessModel::findActivity(std::string_view id) const {
  return findById(activities, id);
}
const Gateway* ProcessModel::findGateway(std::string_view id) const {
  return findById(gateways, id);
}
const ControlFlow* ProcessModel::findFlow(std::string_view id) const {
  return findById(flows, id);
}
const RoutingConstraint* ProcessModel::findRoutingConstraint(std::string_view id) const {
  return findById(routingConstraints, id);
}
const DataItem* ProcessModel::findDataItem(std::string_view id) const {
  return findById(dataItems, id);
}

ValidationReport validateModel(const ProcessModel& model) {
  ValidationReport report;

  auto unique = [&](std::unordered_set<std::string>& seen, const std::string& id,
                    std::string_view what) {
    if (!seen.insert(id).second)
      report.add(ViolationKind::DuplicateId, id,
                 std::string(what) + " id '" + id + "' is not unique");
  };
  std::unordered_set<std::string> nodes;
  for (const auto& a : model.activities) unique(nodes, a.id, "node");
  for (const auto& g : model.gateways) {
    unique(nodes, g.id, "node");
    if (g.type != GatewayType::Xor && g.type != GatewayType::And)
      report.add(ViolationKind::BadGatewayType, g.id,
                 "gateway '" + g.id + "': type must be xor or and");
  }
  std::unordered_set<std::string> flowIds, rcIds, itemIds;
  for (const auto& f : model.flows) unique(flowIds, f.id, "flow");
  for (const auto& rc : model.routingConstraints) unique(rcIds, rc.id, "routing constraint");
  for (const auto& d : model.dataItems) unique(itemIds, d.id, "data item");

  if (model.dataItems.empty())
    report.add(ViolationKind::EmptyDataItems, "", "model declares no data items");

  auto dangling = [&](const std::string& owner, const std::string& ref, std::string_view what) {
    report.add(ViolationKind::DanglingReference, owner,
               "'" + owner + "' references unknown " + std::string(what) + " '" + ref + "'");
  };

  for (const auto& f : model.flows) {
    if (!model.isNode(f.source)) dangling(f.id, f.source, "node");
    if (!model.isNode(f.target)) dangling(f.id, f.target, "node");
  }
  for (const auto& rc : model.routingConstraints) {
    if (rc.support.empty())
      report.add(ViolationKind::EmptySupport, rc.id,
                 "routing constraint '" + rc.id + "' has an empty support");
    if (rc.guardedFlows.empty())
      report.add(ViolationKind::EmptyGuardedFlows, rc.id,
                 "routing constraint '" + rc.id + "' guards no flow");
    for (const auto& d : rc.support)
      if (!itemIds.contains(d)) dangling(rc.id, d, "data item");
    for (const auto& f : rc.guardedFlows)
      if (!flowIds.contains(f)) dangling(rc.id, f, "flow");
  }
  for (std::size_t i = 0; i < model.iao.size(); ++i) {
    const auto& t = model.iao[i];
    const std::string owner = "iao[" + std::to_string(i) + "]";
    if (!t.input && !t.output)
      report.add(ViolationKind::DegenerateIao, owner,
                 owner + " has neither input nor output");
    if (!model.findActivity(t.activity)) dangling(owner, t.activity, "activity");
    if (t.input && !itemIds.contains(*t.input)) dangling(owner, *t.input, "data item");
    if (t.output && !itemIds.contains(*t.output)) dangling(owner, *t.output, "data item");
  }
  return report;
}

std::set<std::string> reachableActivitySet(const ProcessModel& model,
                                           std::string_view element) {
  std::deque<std::string> frontier;
  if (model.findActivity(element)) {
    frontier.emplace_back(element);
  } else if (const auto* rc = model.findRoutingConstraint(element)) {
    for (const auto& fid : rc->guardedFlows)
      if (const auto* f = model.findFlow(fid)) frontier.push_back(f->target);
  } else {
    throw Error("element not found: '" + std::string(element) + "'");
  }

  std::multimap<std::string_view, std::string_view> successors;
  for (const auto& f : model.flows) successors.emplace(f.source, f.target);

  std::set<std::string> visited;
  std::set<std::string> result;
  while (!frontier.empty()) {
    std::string node = std::move(frontier.front());
    frontier.pop_front();
    if (!visited.insert(node).second) continue;
    if (model.findActivity(node)) result.insert(node);
    auto [lo, hi] = successors.equal_range(node);
    for (auto it = lo; it != hi; ++it)
      if (!visited.contains(std::string(it->second))) frontier.emplace_back(it->second);
  }
  return result;
}

}  // namespace dimpact
