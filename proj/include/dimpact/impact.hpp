#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dimpact/model.hpp"
#include "dimpact/schema.hpp"

namespace dimpact {

using ItemPair = std::pair<std::string, std::string>;
using PairSet = std::set<ItemPair>;

/// Smallest transitively closed superset of `pairs` (Warshall).
PairSet transitiveClosure(const PairSet& pairs);

/// Design-time over-approximation of intra-instance impacts. Transitively
/// closed and irreflexive; reflexivity is implied by consumers.
struct IntraImpactSet {
  PairSet pairs;

  bool contains(std::string_view from, std::string_view to) const {
    return pairs.contains(ItemPair(std::string(from), std::string(to)));
  }
  std::size_t size() const noexcept { return pairs.size(); }

  friend bool operator==(const IntraImpactSet&, const IntraImpactSet&) = default;
};

/// Throws ValidationError if the model does not validate.
IntraImpactSet intraInstanceAnalysis(const ProcessModel& model);

/// (d1, d2; d): a change reaching shared item `d` from `d1` in one case may
/// propagate to `d2` in another case sharing the same tuple of `d`.
struct PdiTriplet {
  std::string d1;
  std::string d2;
  std::string d;
  std::string sharedRelation;
  Cardinality cardinalityToIr = Cardinality::OneToMany;

  friend bool operator==(const PdiTriplet&, const PdiTriplet&) = default;
};

/// Triplets kept sorted by (d1, d2, d) and unique on that key.
class PdiSet {
public:
  PdiSet() = default;

  /// Returns false when a triplet with the same (d1, d2, d) already exists.
  bool insert(PdiTriplet triplet);
  bool contains(std::string_view d1, std::string_view d2, std::string_view d) const;

  const std::vector<PdiTriplet>& triplets() const noexcept { return triplets_; }
  std::size_t size() const noexcept { return triplets_.size(); }
  bool empty() const noexcept { return triplets_.empty(); }
  auto begin() const { return triplets_.begin(); }
  auto end() const { return triplets_.end(); }

  friend bool operator==(const PdiSet&, const PdiSet&) = default;

private:
  std::vector<PdiTriplet> triplets_;
};

/// Throws ValidationError for an invalid model, schema or binding set and
/// propagates Error from findCardinality.
PdiSet computePdi(const ProcessModel& model, const RelationalSchema& schema);

/// Design-time stand-in for the sharing-set function of a shared item.
struct SharingFunctionDescriptor {
  std::string item;
  std::string relation;
  std::vector<std::string> pkAttributes;

  friend bool operator==(const SharingFunctionDescriptor&,
                         const SharingFunctionDescriptor&) = default;
};

struct AffectedSet {
  std::string trigger;
  std::vector<SharingFunctionDescriptor> sharingFunctions;  // sorted by item

  bool empty() const noexcept { return sharingFunctions.empty(); }
  bool containsItem(std::string_view item) const;

  friend bool operator==(const AffectedSet&, const AffectedSet&) = default;
};

using AffectedSets = std::map<std::string, AffectedSet, std::less<>>;

/// One entry per trigger occurring as d1.
AffectedSets affectedSets(const PdiSet& pdi, const RelationalSchema& schema);
/// As above, with an (often empty) entry for every data item of `model`.
AffectedSets affectedSets(const ProcessModel& model, const PdiSet& pdi,
                          const RelationalSchema& schema);

/// Exact quotient; denominator 0 marks an undefined average reported as 0.
struct Ratio {
  std::size_t numerator = 0;
  std::size_t denominator = 0;

  bool defined() const noexcept { return denominator != 0; }
  double value() const noexcept {
    return defined() ? static_cast<double>(numerator) / static_cast<double>(denominator) : 0.0;
  }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

struct ImpactMetrics {
  std::size_t uniqueSharedCount = 0;
  std::size_t uniqueTriggerCount = 0;
  Ratio avgImpactSetsPerTrigger;
  Ratio avgAffectedPerTrigger;
  Ratio avgTriggersPerShared;

  friend bool operator==(const ImpactMetrics&, const ImpactMetrics&) = default;
};

inline constexpr std::array<std::string_view, 5> kMetricColumns = {
    "Number of unique d",
    "Number of unique d_1",
    "Average number of impact sets for d_1",
    "Average number of d_2 per d_1",
    "Average number of d_1 per d",
};

ImpactMetrics computeMetrics(const PdiSet& pdi);

}  // namespace dimpact
