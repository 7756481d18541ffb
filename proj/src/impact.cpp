#include "dimpact/impact.hpp"

#include <algorithm>
#include <tuple>

namespace dimpact {

PairSet transitiveClosure(const PairSet& pairs) {
  std::vector<std::string> ids;
  for (const auto& [a, b] : pairs) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index = [&](const std::string& id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  const std::size_t n = ids.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : pairs) reach[index(a)][index(b)] = 1;

  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (reach[k][j]) reach[i][j] = 1;
    }

  PairSet closed;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) closed.emplace_hint(closed.end(), ids[i], ids[j]);
  return closed;
}

IntraImpactSet intraInstanceAnalysis(const ProcessModel& model) {
  if (auto report = validateModel(model); !report.ok()) throw ValidationError(std::move(report));

  PairSet direct;
  for (const auto& t : model.iao)
    if (t.input && t.output) direct.emplace(*t.input, *t.output);

  // A constrained item impacts every output written downstream of the
  // guarded flows, whatever the writing activity reads.
  for (const auto& rc : model.routingConstraints) {
    const auto reachable = reachableActivitySet(model, rc.id);
    for (const auto& t : model.iao) {
      if (!t.output || !reachable.contains(t.activity)) continue;
      for (const auto& d : rc.support) direct.emplace(d, *t.output);
    }
  }

  IntraImpactSet result{transitiveClosure(direct)};
  std::erase_if(result.pairs, [](const ItemPair& p) { return p.first == p.second; });
  return result;
}

namespace {

auto keyOf(const PdiTriplet& t) { return std::tie(t.d1, t.d2, t.d); }

}  // namespace

bool PdiSet::insert(PdiTriplet triplet) {
  auto it = std::lower_bound(triplets_.begin(), triplets_.end(), triplet,
                             [](const PdiTriplet& a, const PdiTriplet& b) {
                               return keyOf(a) < keyOf(b);
                             });
  if (it != triplets_.end() && keyOf(*it) == keyOf(triplet)) return false;
  triplets_.insert(it, std::move(triplet));
  return true;
}

bool PdiSet::contains(std::string_view d1, std::string_view d2, std::string_view d) const {
  auto key = std::make_tuple(d1, d2, d);
  auto it = std::lower_bound(triplets_.begin(), triplets_.end(), key,
                             [](const PdiTriplet& a, const auto& k) {
                               return std::make_tuple(std::string_view(a.d1),
                                                      std::string_view(a.d2),
                                                      std::string_view(a.d)) < k;
                             });
  return it != triplets_.end() && it->d1 == d1 && it->d2 == d2 && it->d == d;
}

PdiSet computePdi(const ProcessModel& model, const RelationalSchema& schema) {
  ValidationReport report = validateModel(model);
  for (auto& v : validateSchema(schema).violations) report.violations.push_back(std::move(v));
  for (auto& v : validateBindings(model, schema).violations)
    report.violations.push_back(std::move(v));
  if (!report.ok()) throw ValidationError(std::move(report));

  const IntraImpactSet intra = intraInstanceAnalysis(model);

  PdiSet pdi;
  for (const auto& item : model.dataItems) {
    const Relation* relation = findRel(schema, item);
    if (!relation) continue;
    const Cardinality card = findCardinality(schema, relation->name, schema.identityRelation);
    if (!allowsSharing(card)) continue;

    // Reflexive pairs are implicit in the intra set.
    std::set<std::string> triggers{item.id};
    std::set<std::string> affected{item.id};
    for (const auto& [from, to] : intra.pairs) {
      if (to == item.id) triggers.insert(from);
      if (from == item.id) affected.insert(to);
    }
    for (const auto& d1 : triggers)
      for (const auto& d2 : affected) pdi.insert({d1, d2, item.id, relation->name, card});
  }
  return pdi;
}

bool AffectedSet::containsItem(std::string_view item) const {
  return std::any_of(sharingFunctions.begin(), sharingFunctions.end(),
                     [&](const SharingFunctionDescriptor& s) { return s.item == item; });
}

AffectedSets affectedSets(const PdiSet& pdi, const RelationalSchema& schema) {
  AffectedSets result;
  for (const auto& t : pdi) {
    auto& entry = result[t.d1];
    entry.trigger = t.d1;
    if (entry.containsItem(t.d)) continue;
    SharingFunctionDescriptor sf{t.d, t.sharedRelation, {}};
    if (const auto* r = schema.findRelation(t.sharedRelation)) sf.pkAttributes = r->primaryKey();
    entry.sharingFunctions.push_back(std::move(sf));
  }
  for (auto& [trigger, set] : result)
    std::sort(set.sharingFunctions.begin(), set.sharingFunctions.end(),
              [](const auto& a, const auto& b) { return a.item < b.item; });
  return result;
}

AffectedSets affectedSets(const ProcessModel& model, const PdiSet& pdi,
                          const RelationalSchema& schema) {
  AffectedSets result = affectedSets(pdi, schema);
  for (const auto& d : model.dataItems) result.try_emplace(d.id, AffectedSet{d.id, {}});
  return result;
}

ImpactMetrics computeMetrics(const PdiSet& pdi) {
  std::map<std::string, std::set<std::string>> sharedPerTrigger;
  std::map<std::string, std::set<std::string>> affectedPerTrigger;
  std::map<std::string, std::set<std::string>> triggersPerShared;
  for (const auto& t : pdi) {
    sharedPerTrigger[t.d1].insert(t.d);
    affectedPerTrigger[t.d1].insert(t.d2);
    triggersPerShared[t.d].insert(t.d1);
  }
  auto total = [](const auto& groups) {
    std::size_t n = 0;
    for (const auto& [key, members] : groups) n += members.size();
    return n;
  };

  ImpactMetrics m;
  m.uniqueSharedCount = triggersPerShared.size();
  m.uniqueTriggerCount = sharedPerTrigger.size();
  m.avgImpactSetsPerTrigger = {total(sharedPerTrigger), m.uniqueTriggerCount};
  m.avgAffectedPerTrigger = {total(affectedPerTrigger), m.uniqueTriggerCount};
  m.avgTriggersPerShared = {total(triggersPerShared), m.uniqueSharedCount};
  return m;
}

}  // namespace dimpact
