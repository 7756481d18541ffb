#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dimpact/diagnostics.hpp"
#include "dimpact/impact.hpp"
#include "dimpact/model.hpp"
#include "dimpact/schema.hpp"

namespace dimpact {

/// Case identifiers and primary-key components.
using Scalar = std::variant<std::int64_t, std::string>;
using KeyTuple = std::vector<Scalar>;
/// Attribute payloads; never inspected by the impact semantics.
using Value = std::variant<bool, std::int64_t, double, std::string>;

std::string toString(const Scalar& s);
std::string toString(const KeyTuple& key);

struct DataItemInstance {
  std::string item;
  std::optional<KeyTuple> pkValue;  // present iff the item is stored
  std::optional<Value> value;

  friend bool operator==(const DataItemInstance&, const DataItemInstance&) = default;
};

struct ProcessInstance {
  Scalar caseId;
  std::vector<std::string> trace;  // activity ids, in execution order
  std::vector<DataItemInstance> dataItems;

  bool instantiates(std::string_view item) const;
  bool holds(std::string_view item, const KeyTuple& key) const;

  friend bool operator==(const ProcessInstance&, const ProcessInstance&) = default;
};

struct InstanceLog {
  std::string modelName;
  std::vector<ProcessInstance> instances;

  const ProcessInstance* findCase(const Scalar& caseId) const;

  friend bool operator==(const InstanceLog&, const InstanceLog&) = default;
};

/// Distinct case ids, known activities and items, keys exactly on stored items.
ValidationReport validateLog(const ProcessModel& model, const InstanceLog& log);

/// Cases holding an instance of `item` owned by the tuple with key `key`.
/// Throws Error("not shareable") for transient items.
std::set<Scalar> dataSharingSet(const ProcessModel& model, const InstanceLog& log,
                                std::string_view item, const KeyTuple& key);

/// Direct impact of `from` on `to` with respect to `activity`: an IAO triple,
/// or `from` constrains a flow from which `activity` is reachable and
/// `activity` writes `to`.
bool modelLevelImpact(const ProcessModel& model, std::string_view from,
                      std::string_view activity, std::string_view to);

/// Precomputed direct impacts of one model, answering trace-ordered
/// reachability queries. Chains may reuse an activity instance for
/// consecutive steps but never move backwards in the trace.
class ImpactIndex {
public:
  explicit ImpactIndex(const ProcessModel& model);

  const ProcessModel& model() const noexcept { return *model_; }

  bool direct(std::string_view from, std::string_view activity, std::string_view to) const;

  /// Latest-step position of the earliest chain from `source` to each item,
  /// indexed like model().dataItems. The source itself maps to 0.
  std::vector<std::optional<std::size_t>> reach(std::span<const std::string> trace,
                                                std::string_view source) const;

  bool impacts(std::span<const std::string> trace, std::string_view from,
               std::string_view to) const;
  std::set<std::string> impacted(const ProcessInstance& pi, std::string_view from) const;
  std::set<std::string> impacting(const ProcessInstance& pi, std::string_view to) const;

  std::size_t itemIndex(std::string_view item) const;  // throws for unknown ids

private:
  struct Step {
    std::size_t activity;
    std::size_t target;
  };
  const ProcessModel* model_;
  std::unordered_map<std::string, std::size_t> items_;
  std::unordered_map<std::string, std::size_t> activities_;
  std::vector<std::vector<Step>> steps_;  // by source item
};

bool intraImpactInTrace(const ProcessModel& model, const ProcessInstance& pi,
                        std::string_view from, std::string_view to);
std::set<std::string> impactedSetOf(const ProcessModel& model, const ProcessInstance& pi,
                                    std::string_view from);
std::set<std::string> impactingSetOf(const ProcessModel& model, const ProcessInstance& pi,
                                     std::string_view to);

/// Whether case `source` impacts case `target` through shared item `item`.
bool interInstanceImpact(const ProcessModel& model, const InstanceLog& log,
                         const ProcessInstance& source, const ProcessInstance& target,
                         std::string_view item);

struct ObservedTriplet {
  std::string d1;
  std::string d2;
  std::string d;
  Scalar sourceCase;
  Scalar targetCase;
  KeyTuple pkValue;

  auto operator<=>(const ObservedTriplet&) const = default;
  bool operator==(const ObservedTriplet&) const = default;
};

/// Exhaustive over ordered pairs of distinct cases; both directions are
/// reported when both hold.
std::set<ObservedTriplet> observedTriplets(const ProcessModel& model, const InstanceLog& log);

using TripletKey = std::tuple<std::string, std::string, std::string>;

struct ContainmentReport {
  std::size_t checked = 0;
  std::vector<TripletKey> missing;  // (d1, d2, d) observed but absent from the PDI

  bool passed() const noexcept { return missing.empty(); }
};

ContainmentReport checkNecessity(const std::set<ObservedTriplet>& observed, const PdiSet& pdi);

/// Flags items of the identity relation held with one key by several cases.
ValidationReport checkLemma1(const ProcessModel& model, const InstanceLog& log,
                             const RelationalSchema& schema);

/// Flags non-trivial sharing sets whose relation is 1-1 or m-1 to the identity relation.
ValidationReport checkTheorem1(const ProcessModel& model, const InstanceLog& log,
                               const RelationalSchema& schema);

/// Flags ordered trace impacts (d1 != d2) missing from the design-time intra set.
ValidationReport checkIntraSuperset(const ProcessModel& model, const InstanceLog& log,
                                    const IntraImpactSet& intra);

struct GeneratorBounds {
  std::size_t maxInstances = 4;
  std::size_t maxLoopUnroll = 1;
  std::size_t pkDomainSize = 3;
};

/// Deterministic in (model, schema, seed, bounds).
///
/// Traces come from a token game over the control-flow graph: xor gateways
/// and multi-successor activities pick one branch, and-gateways fork every
/// branch and join on all inputs, and ready tokens fire in random order.
/// A flow is traversed at most 1 + maxLoopUnroll times. Tuples of relations
/// that are 1-1 or m-1 to the identity relation are private to a case; other
/// tuples are drawn from a pool of pkDomainSize keys.
InstanceLog generateRandomLog(const ProcessModel& model, const RelationalSchema& schema,
                              std::uint64_t seed, const GeneratorBounds& bounds);

struct CampaignSummary {
  std::size_t logs = 0;
  std::size_t instances = 0;
  std::size_t observedTriplets = 0;
  std::size_t nontrivialSharingSets = 0;
  std::size_t containmentViolations = 0;
  std::size_t identitySharingViolations = 0;
  std::size_t cardinalityViolations = 0;
  std::size_t intraViolations = 0;
  std::size_t invalidLogs = 0;
  std::vector<std::string> failures;  // first few diagnostics

  bool passed() const noexcept {
    return containmentViolations == 0 && identitySharingViolations == 0 && cardinalityViolations == 0 &&
           intraViolations == 0 && invalidLogs == 0;
  }
  void merge(const CampaignSummary& other);
};

/// Runs every runtime check on one log against the design-time results.
CampaignSummary checkLog(const ProcessModel& model, const RelationalSchema& schema,
                         const IntraImpactSet& intra, const PdiSet& pdi,
                         const InstanceLog& log);

/// Generates and checks one log per seed in [firstSeed, lastSeed].
CampaignSummary runCampaign(const ProcessModel& model, const RelationalSchema& schema,
                            std::uint64_t firstSeed, std::uint64_t lastSeed,
                            const GeneratorBounds& bounds);

}  // namespace dimpact
