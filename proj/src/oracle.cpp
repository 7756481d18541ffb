#include "dimpact/oracle.hpp"

#include <algorithm>
#include <map>

namespace dimpact {

std::string toString(const Scalar& s) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return std::to_string(*i);
  return std::get<std::string>(s);
}

std::string toString(const KeyTuple& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ", ";
    out += toString(key[i]);
  }
  return out + ")";
}

bool ProcessInstance::instantiates(std::string_view item) const {
  return std::any_of(dataItems.begin(), dataItems.end(),
                     [&](const DataItemInstance& d) { return d.item == item; });
}

bool ProcessInstance::holds(std::string_view item, const KeyTuple& key) const {
  return std::any_of(dataItems.begin(), dataItems.end(), [&](const DataItemInstance& d) {
    return d.item == item && d.pkValue && *d.pkValue == key;
  });
}

const ProcessInstance* InstanceLog::findCase(const Scalar& caseId) const {
  auto it = std::find_if(instances.begin(), instances.end(),
                         [&](const ProcessInstance& p) { return p.caseId == caseId; });
  return it == instances.end() ? nullptr : &*it;
}

ValidationReport validateLog(const ProcessModel& model, const InstanceLog& log) {
  ValidationReport report;
  std::set<Scalar> seen;
  for (const auto& pi : log.instances) {
    const std::string caseName = toString(pi.caseId);
    if (!seen.insert(pi.caseId).second)
      report.add(ViolationKind::DuplicateCaseId, caseName,
                 "case id " + caseName + " occurs more than once");
    for (const auto& a : pi.trace)
      if (!model.findActivity(a))
        report.add(ViolationKind::UnknownActivity, caseName,
                   "case " + caseName + " executes unknown activity '" + a + "'");
    for (const auto& d : pi.dataItems) {
      const auto* item = model.findDataItem(d.item);
      if (!item) {
        report.add(ViolationKind::DanglingReference, caseName,
                   "case " + caseName + " instantiates unknown data item '" + d.item + "'");
        continue;
      }
      if (item->stored() && (!d.pkValue || d.pkValue->empty()))
        report.add(ViolationKind::BadKey, caseName,
                   "case " + caseName + ": stored item '" + d.item + "' carries no key");
      if (!item->stored() && d.pkValue)
        report.add(ViolationKind::BadKey, caseName,
                   "case " + caseName + ": transient item '" + d.item + "' carries a key");
    }
  }
  return report;
}

namespace {

const DataItem& requireItem(const ProcessModel& model, std::string_view id) {
  const auto* item = model.findDataItem(id);
  if (!item) throw Error("unknown data item '" + std::string(id) + "'");
  return *item;
}

const DataItem& requireShareable(const ProcessModel& model, std::string_view id) {
  const auto& item = requireItem(model, id);
  if (!item.stored()) throw Error("not shareable: data item '" + item.id + "' is transient");
  return item;
}

using SharingKey = std::pair<std::string, KeyTuple>;

/// (item, key) -> indices of the instances holding it.
std::map<SharingKey, std::set<std::size_t>> sharingGroups(const ProcessModel& model,
                                                          const InstanceLog& log) {
  std::map<SharingKey, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < log.instances.size(); ++i)
    for (const auto& d : log.instances[i].dataItems) {
      const auto* item = model.findDataItem(d.item);
      if (item && item->stored() && d.pkValue) groups[{d.item, *d.pkValue}].insert(i);
    }
  return groups;
}

}  // namespace

std::set<Scalar> dataSharingSet(const ProcessModel& model, const InstanceLog& log,
                                std::string_view item, const KeyTuple& key) {
  requireShareable(model, item);
  std::set<Scalar> cases;
  for (const auto& pi : log.instances)
    if (pi.holds(item, key)) cases.insert(pi.caseId);
  return cases;
}

bool modelLevelImpact(const ProcessModel& model, std::string_view from,
                      std::string_view activity, std::string_view to) {
  requireItem(model, from);
  requireItem(model, to);
  if (!model.findActivity(activity))
    throw Error("unknown activity '" + std::string(activity) + "'");

  bool writes = false;
  for (const auto& t : model.iao) {
    if (t.activity != activity || t.output != to) continue;
    if (t.input == from) return true;
    writes = true;
  }
  if (!writes) return false;
  for (const auto& rc : model.routingConstraints) {
    if (std::find(rc.support.begin(), rc.support.end(), from) == rc.support.end()) continue;
    if (reachableActivitySet(model, rc.id).contains(std::string(activity))) return true;
  }
  return false;
}

ImpactIndex::ImpactIndex(const ProcessModel& model) : model_(&model) {
  for (std::size_t i = 0; i < model.dataItems.size(); ++i) items_.emplace(model.dataItems[i].id, i);
  for (std::size_t i = 0; i < model.activities.size(); ++i)
    activities_.emplace(model.activities[i].id, i);
  steps_.resize(model.dataItems.size());

  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> direct;
  auto add = [&](const std::string& from, const std::string& act, const std::string& to) {
    auto f = items_.find(from);
    auto a = activities_.find(act);
    auto t = items_.find(to);
    if (f != items_.end() && a != activities_.end() && t != items_.end())
      direct.emplace(f->second, a->second, t->second);
  };
  for (const auto& t : model.iao)
    if (t.input && t.output) add(*t.input, t.activity, *t.output);
  for (const auto& rc : model.routingConstraints) {
    const auto reachable = reachableActivitySet(model, rc.id);
    for (const auto& t : model.iao) {
      if (!t.output || !reachable.contains(t.activity)) continue;
      for (const auto& d : rc.support) add(d, t.activity, *t.output);
    }
  }
  for (const auto& [from, act, to] : direct) steps_[from].push_back({act, to});
}

std::size_t ImpactIndex::itemIndex(std::string_view item) const {
  auto it = items_.find(std::string(item));
  if (it == items_.end()) throw Error("unknown data item '" + std::string(item) + "'");
  return it->second;
}

bool ImpactIndex::direct(std::string_view from, std::string_view activity,
                         std::string_view to) const {
  const std::size_t f = itemIndex(from);
  const std::size_t t = itemIndex(to);
  auto a = activities_.find(std::string(activity));
  if (a == activities_.end()) throw Error("unknown activity '" + std::string(activity) + "'");
  return std::any_of(steps_[f].begin(), steps_[f].end(),
                     [&](const Step& s) { return s.activity == a->second && s.target == t; });
}

std::vector<std::optional<std::size_t>> ImpactIndex::reach(std::span<const std::string> trace,
                                                           std::string_view source) const {
  std::vector<std::vector<std::size_t>> occurrences(activities_.size());
  for (std::size_t pos = 0; pos < trace.size(); ++pos) {
    auto a = activities_.find(trace[pos]);
    if (a == activities_.end()) throw Error("unknown activity in trace: '" + trace[pos] + "'");
    occurrences[a->second].push_back(pos);
  }

  // Earliest feasible position only ever decreases, so a worklist reaches
  // the fixpoint; an earlier position never admits fewer continuations.
  std::vector<std::optional<std::size_t>> earliest(steps_.size());
  const std::size_t start = itemIndex(source);
  earliest[start] = 0;
  std::vector<std::size_t> work{start};
  while (!work.empty()) {
    const std::size_t x = work.back();
    work.pop_back();
    const std::size_t after = *earliest[x];
    for (const auto& step : steps_[x]) {
      const auto& occ = occurrences[step.activity];
      auto it = std::lower_bound(occ.begin(), occ.end(), after);
      if (it == occ.end()) continue;
      auto& slot = earliest[step.target];
      if (!slot || *it < *slot) {
        slot = *it;
        work.push_back(step.target);
      }
    }
  }
  return earliest;
}

bool ImpactIndex::impacts(std::span<const std::string> trace, std::string_view from,
                          std::string_view to) const {
  const std::size_t target = itemIndex(to);
  auto r = reach(trace, from);
  return from == to || r[target].has_value();
}

std::set<std::string> ImpactIndex::impacted(const ProcessInstance& pi,
                                            std::string_view from) const {
  auto r = reach(pi.trace, from);
  std::set<std::string> out;
  for (const auto& d : pi.dataItems) {
    if (d.item == from) {
      out.insert(d.item);
      continue;
    }
    auto it = items_.find(d.item);
    if (it != items_.end() && r[it->second]) out.insert(d.item);
  }
  return out;
}

std::set<std::string> ImpactIndex::impacting(const ProcessInstance& pi,
                                             std::string_view to) const {
  itemIndex(to);
  std::set<std::string> out;
  for (const auto& d : pi.dataItems) {
    if (out.contains(d.item) || !items_.contains(d.item)) continue;
    if (impacts(pi.trace, d.item, to)) out.insert(d.item);
  }
  return out;
}

bool intraImpactInTrace(const ProcessModel& model, const ProcessInstance& pi,
                        std::string_view from, std::string_view to) {
  return ImpactIndex(model).impacts(pi.trace, from, to);
}

std::set<std::string> impactedSetOf(const ProcessModel& model, const ProcessInstance& pi,
                                    std::string_view from) {
  return ImpactIndex(model).impacted(pi, from);
}

std::set<std::string> impactingSetOf(const ProcessModel& model, const ProcessInstance& pi,
                                     std::string_view to) {
  return ImpactIndex(model).impacting(pi, to);
}

bool interInstanceImpact(const ProcessModel& model, const InstanceLog& log,
                         const ProcessInstance& source, const ProcessInstance& target,
                         std::string_view item) {
  requireShareable(model, item);
  if (source.caseId == target.caseId) return false;

  bool shared = false;
  for (const auto& d : source.dataItems)
    if (d.item == item && d.pkValue && target.holds(item, *d.pkValue) &&
        dataSharingSet(model, log, item, *d.pkValue).size() > 1) {
      shared = true;
      break;
    }
  if (!shared) return false;

  const ImpactIndex index(model);
  const auto upstream = index.impacting(source, item);
  const auto downstream = index.impacted(target, item);
  bool fromSide = false;
  for (const auto& d1 : upstream)
    if (index.impacted(source, d1).contains(std::string(item))) fromSide = true;
  bool toSide = false;
  for (const auto& d2 : downstream)
    if (index.impacting(target, d2).contains(std::string(item))) toSide = true;
  return fromSide && toSide;
}

std::set<ObservedTriplet> observedTriplets(const ProcessModel& model, const InstanceLog& log) {
  const ImpactIndex index(model);
  std::set<ObservedTriplet> out;

  // Upstream / downstream sets per (instance, shared item), computed lazily.
  std::map<std::pair<std::size_t, std::string>, std::set<std::string>> upstream, downstream;
  auto cached = [&](auto& cache, std::size_t i, const std::string& item, bool up)
      -> const std::set<std::string>& {
    auto key = std::make_pair(i, item);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const auto& pi = log.instances[i];
      it = cache.emplace(key, up ? index.impacting(pi, item) : index.impacted(pi, item)).first;
    }
    return it->second;
  };

  for (const auto& [key, holders] : sharingGroups(model, log)) {
    if (holders.size() < 2) continue;
    const auto& [item, pk] = key;
    for (std::size_t a : holders)
      for (std::size_t b : holders) {
        if (a == b) continue;
        const auto& triggers = cached(upstream, a, item, true);
        const auto& affected = cached(downstream, b, item, false);
        for (const auto& d1 : triggers)
          for (const auto& d2 : affected)
            out.insert({d1, d2, item, log.instances[a].caseId, log.instances[b].caseId, pk});
      }
  }
  return out;
}

ContainmentReport checkNecessity(const std::set<ObservedTriplet>& observed, const PdiSet& pdi) {
  std::set<TripletKey> projected;
  for (const auto& o : observed) projected.emplace(o.d1, o.d2, o.d);
  ContainmentReport report;
  report.checked = projected.size();
  for (const auto& key : projected) {
    const auto& [d1, d2, d] = key;
    if (!pdi.contains(d1, d2, d)) report.missing.push_back(key);
  }
  return report;
}

ValidationReport checkLemma1(const ProcessModel& model, const InstanceLog& log,
                             const RelationalSchema& schema) {
  ValidationReport report;
  for (const auto& [key, holders] : sharingGroups(model, log)) {
    const auto& [item, pk] = key;
    const auto* d = model.findDataItem(item);
    if (holders.size() < 2 || d->binding->relation != schema.identityRelation) continue;
    report.add(ViolationKind::SharedIdentityAttribute, item,
               "identity attribute '" + item + "' with key " + toString(pk) + " is held by " +
                   std::to_string(holders.size()) + " cases");
  }
  return report;
}

ValidationReport checkTheorem1(const ProcessModel& model, const InstanceLog& log,
                               const RelationalSchema& schema) {
  ValidationReport report;
  std::map<std::string, Cardinality> cardinality;
  for (const auto& [key, holders] : sharingGroups(model, log)) {
    if (holders.size() < 2) continue;
    const auto& [item, pk] = key;
    const auto& relation = model.findDataItem(item)->binding->relation;
    auto it = cardinality.find(relation);
    if (it == cardinality.end())
      it = cardinality
               .emplace(relation, findCardinality(schema, relation, schema.identityRelation))
               .first;
    if (allowsSharing(it->second)) continue;
    report.add(ViolationKind::NarrowCardinalitySharing, item,
               "item '" + item + "' with key " + toString(pk) + " is shared by " +
                   std::to_string(holders.size()) + " cases although " + relation + " is " +
                   std::string(toString(it->second)) + " to the identity relation");
  }
  return report;
}

ValidationReport checkIntraSuperset(const ProcessModel& model, const InstanceLog& log,
                                    const IntraImpactSet& intra) {
  ValidationReport report;
  const ImpactIndex index(model);
  for (const auto& pi : log.instances)
    for (const auto& from : model.dataItems) {
      const auto r = index.reach(pi.trace, from.id);
      for (std::size_t j = 0; j < model.dataItems.size(); ++j) {
        const auto& to = model.dataItems[j];
        if (!r[j] || to.id == from.id || intra.contains(from.id, to.id)) continue;
        report.add(ViolationKind::UnexplainedTraceImpact, from.id,
                   "case " + toString(pi.caseId) + ": " + from.id + " impacts " + to.id +
                       " but the pair is missing from the intra-instance set");
      }
    }
  return report;
}

void CampaignSummary::merge(const CampaignSummary& other) {
  logs += other.logs;
  instances += other.instances;
  observedTriplets += other.observedTriplets;
  nontrivialSharingSets += other.nontrivialSharingSets;
  containmentViolations += other.containmentViolations;
  identitySharingViolations += other.identitySharingViolations;
  cardinalityViolations += other.cardinalityViolations;
  intraViolations += other.intraViolations;
  invalidLogs += other.invalidLogs;
  for (const auto& f : other.failures)
    if (failures.size() < 10) failures.push_back(f);
}

CampaignSummary checkLog(const ProcessModel& model, const RelationalSchema& schema,
                         const IntraImpactSet& intra, const PdiSet& pdi,
                         const InstanceLog& log) {
  CampaignSummary summary;
  summary.logs = 1;
  summary.instances = log.instances.size();
  auto note = [&](const std::string& message) {
    if (summary.failures.size() < 10) summary.failures.push_back(message);
  };

  if (auto report = validateLog(model, log); !report.ok()) {
    summary.invalidLogs = 1;
    note("invalid log: " + report.summary());
    return summary;
  }

  for (const auto& [key, holders] : sharingGroups(model, log))
    if (holders.size() > 1) ++summary.nontrivialSharingSets;

  const auto observed = observedTriplets(model, log);
  summary.observedTriplets = observed.size();
  const auto containment = checkNecessity(observed, pdi);
  summary.containmentViolations = containment.missing.size();
  for (const auto& [d1, d2, d] : containment.missing)
    note("observed triplet (" + d1 + ", " + d2 + "; " + d + ") is not in the PDI set");

  const auto lemma = checkLemma1(model, log, schema);
  summary.identitySharingViolations = lemma.size();
  const auto theorem = checkTheorem1(model, log, schema);
  summary.cardinalityViolations = theorem.size();
  const auto superset = checkIntraSuperset(model, log, intra);
  summary.intraViolations = superset.size();
  for (const auto* r : {&lemma, &theorem, &superset})
    for (const auto& v : r->violations) note(v.message);
  return summary;
}

CampaignSummary runCampaign(const ProcessModel& model, const RelationalSchema& schema,
                            std::uint64_t firstSeed, std::uint64_t lastSeed,
                            const GeneratorBounds& bounds) {
  if (firstSeed > lastSeed) throw Error("empty seed range");
  const auto intra = intraInstanceAnalysis(model);
  const auto pdi = computePdi(model, schema);
  CampaignSummary summary;
  for (std::uint64_t seed = firstSeed;; ++seed) {
    auto one = checkLog(model, schema, intra, pdi, generateRandomLog(model, schema, seed, bounds));
    if (!one.failures.empty())
      for (auto& f : one.failures) f = "seed " + std::to_string(seed) + ": " + f;
    summary.merge(one);
    if (seed == lastSeed) break;
  }
  return summary;
}

}  // namespace dimpact
