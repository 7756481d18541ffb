#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dimpact/diagnostics.hpp"

namespace dimpact {

/// Location of a persistent data item: one attribute of one relation.
struct StoredBinding {
  std::string relation;
  std::string attribute;

  friend bool operator==(const StoredBinding&, const StoredBinding&) = default;
};

struct DataItem {
  std::string id;
  std::string name;
  std::optional<StoredBinding> binding;  // empty for transient items

  bool stored() const noexcept { return binding.has_value(); }
  friend bool operator==(const DataItem&, const DataItem&) = default;
};

struct Activity {
  std::string id;
  std::string name;

  friend bool operator==(const Activity&, const Activity&) = default;
};

enum class GatewayType { Xor, And };

std::string_view toString(GatewayType type);
std::optional<GatewayType> parseGatewayType(std::string_view text);

struct Gateway {
  std::string id;
  GatewayType type = GatewayType::Xor;

  friend bool operator==(const Gateway&, const Gateway&) = default;
};

struct ControlFlow {
  std::string id;
  std::string source;
  std::string target;

  friend bool operator==(const ControlFlow&, const ControlFlow&) = default;
};

/// A data predicate attached to one or more control flows.
struct RoutingConstraint {
  std::string id;
  std::optional<std::string> expression;
  std::vector<std::string> support;       // data item ids
  std::vector<std::string> guardedFlows;  // control flow ids

  friend bool operator==(const RoutingConstraint&, const RoutingConstraint&) = default;
};

/// (input, activity, output); either side may be null but not both.
struct IaoTriple {
  std::optional<std::string> input;
  std::string activity;
  std::optional<std::string> output;

  friend bool operator==(const IaoTriple&, const IaoTriple&) = default;
};

struct ProcessModel {
  std::string name;
  std::vector<Activity> activities;
  std::vector<Gateway> gateways;
  std::vector<ControlFlow> flows;
  std::vector<RoutingConstraint> routingConstraints;
  std::vector<DataItem> dataItems;
  std::vector<IaoTriple> iao;

  const Activity* findActivity(std::string_view id) const;
  const Gateway* findGateway(std::string_view id) const;
  const ControlFlow* findFlow(std::string_view id) const;
  const RoutingConstraint* findRoutingConstraint(std::string_view id) const;
  const DataItem* findDataItem(std::string_view id) const;
  bool isNode(std::string_view id) const {
    return findActivity(id) != nullptr || findGateway(id) != nullptr;
  }

  friend bool operator==(const ProcessModel&, const ProcessModel&) = default;
};

/// Well-formedness check. An empty report means every cross-reference
/// resolves, DI is non-empty, and no IAO triple is null on both sides.
ValidationReport validateModel(const ProcessModel& model);

/// Activities reachable from `element` by following control flows forward.
///
/// For a routing constraint the walk starts at the target of every guarded
/// flow (the target itself counts when it is an activity). For an activity
/// the result contains the activity itself. Gateways are traversed without
/// regard to their type. Throws Error("element not found") for unknown ids.
std::set<std::string> reachableActivitySet(const ProcessModel& model,
                                           std::string_view element);

}  // namespace dimpact
