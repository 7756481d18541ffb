#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "dimpact/oracle.hpp"

namespace dimpact {

namespace {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Plain modulo keeps sequences identical across standard libraries.
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }

private:
  std::mt19937_64 engine_;
};

struct FlowGraph {
  struct Node {
    std::string id;
    bool activity = false;
    bool andGateway = false;
    std::vector<std::size_t> out;  // flow indices
    std::vector<std::size_t> in;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> flows;  // (source node, target node)
  std::vector<std::vector<std::size_t>> guardsOf;          // flow -> routing constraints

  explicit FlowGraph(const ProcessModel& model) {
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& a : model.activities) {
      index.emplace(a.id, nodes.size());
      nodes.push_back({a.id, true, false, {}, {}});
    }
    for (const auto& g : model.gateways) {
      index.emplace(g.id, nodes.size());
      nodes.push_back({g.id, false, g.type == GatewayType::And, {}, {}});
    }
    std::unordered_map<std::string, std::size_t> flowIndex;
    for (const auto& f : model.flows) {
      const std::size_t s = index.at(f.source), t = index.at(f.target);
      flowIndex.emplace(f.id, flows.size());
      nodes[s].out.push_back(flows.size());
      nodes[t].in.push_back(flows.size());
      flows.emplace_back(s, t);
    }
    guardsOf.resize(flows.size());
    for (std::size_t r = 0; r < model.routingConstraints.size(); ++r)
      for (const auto& f : model.routingConstraints[r].guardedFlows)
        guardsOf[flowIndex.at(f)].push_back(r);
  }

  bool isJoin(std::size_t n) const { return nodes[n].andGateway && nodes[n].in.size() > 1; }
};

struct Walk {
  std::vector<std::string> trace;
  std::vector<bool> evaluated;  // routing constraints whose decision was taken
};

Walk tokenGame(const FlowGraph& graph, std::size_t constraintCount, std::size_t maxLoopUnroll,
               Rng& rng) {
  Walk walk{{}, std::vector<bool>(constraintCount, false)};
  if (graph.nodes.empty()) return walk;

  std::vector<std::size_t> ready;
  for (std::size_t n = 0; n < graph.nodes.size(); ++n)
    if (graph.nodes[n].in.empty()) ready.push_back(n);
  if (ready.empty()) ready.push_back(0);

  const std::size_t limit = 1 + maxLoopUnroll;
  std::vector<std::size_t> uses(graph.flows.size(), 0);
  std::map<std::size_t, std::vector<std::size_t>> pending;  // join node -> tokens per input

  auto send = [&](std::size_t flow) {
    ++uses[flow];
    const std::size_t target = graph.flows[flow].second;
    if (!graph.isJoin(target)) {
      ready.push_back(target);
      return;
    }
    const auto& in = graph.nodes[target].in;
    auto& slots = pending.try_emplace(target, in.size(), 0).first->second;
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] == flow) {
        ++slots[i];
        break;
      }
    if (std::all_of(slots.begin(), slots.end(), [](std::size_t c) { return c > 0; })) {
      for (auto& c : slots) --c;
      ready.push_back(target);
    }
  };

  std::size_t budget = 4 * (graph.nodes.size() + graph.flows.size()) * limit + 16;
  while (!ready.empty() && budget-- > 0) {
    const std::size_t pick = rng.below(ready.size());
    const std::size_t node = ready[pick];
    ready[pick] = ready.back();
    ready.pop_back();

    const auto& n = graph.nodes[node];
    if (n.activity) walk.trace.push_back(n.id);
    for (std::size_t f : n.out)
      for (std::size_t r : graph.guardsOf[f]) walk.evaluated[r] = true;

    std::vector<std::size_t> open;
    for (std::size_t f : n.out)
      if (uses[f] < limit) open.push_back(f);
    if (open.empty()) continue;
    if (n.andGateway)
      for (std::size_t f : open) send(f);
    else
      send(open[rng.below(open.size())]);
  }
  return walk;
}

}  // namespace

InstanceLog generateRandomLog(const ProcessModel& model, const RelationalSchema& schema,
                              std::uint64_t seed, const GeneratorBounds& bounds) {
  if (bounds.maxInstances == 0) throw Error("unsatisfiable bounds: maxInstances must be > 0");
  if (bounds.pkDomainSize == 0) throw Error("unsatisfiable bounds: pkDomainSize must be > 0");
  {
    ValidationReport report = validateModel(model);
    for (auto& v : validateSchema(schema).violations) report.violations.push_back(std::move(v));
    for (auto& v : validateBindings(model, schema).violations)
      report.violations.push_back(std::move(v));
    if (!report.ok()) throw ValidationError(std::move(report));
  }

  const FlowGraph graph(model);
  std::map<std::string, Cardinality> toIdentity;
  for (const auto& d : model.dataItems)
    if (d.binding && !toIdentity.contains(d.binding->relation))
      toIdentity.emplace(d.binding->relation,
                         findCardinality(schema, d.binding->relation, schema.identityRelation));

  Rng rng(seed);
  InstanceLog log;
  log.modelName = model.name;
  const std::size_t count =
      bounds.maxInstances < 2 ? bounds.maxInstances : 2 + rng.below(bounds.maxInstances - 1);

  for (std::size_t c = 0; c < count; ++c) {
    ProcessInstance pi;
    const auto caseId = static_cast<std::int64_t>(c + 1);
    pi.caseId = caseId;
    Walk walk = tokenGame(graph, model.routingConstraints.size(), bounds.maxLoopUnroll, rng);
    pi.trace = std::move(walk.trace);

    std::set<std::string> used;
    std::set<std::string> performed(pi.trace.begin(), pi.trace.end());
    for (const auto& t : model.iao) {
      if (!performed.contains(t.activity)) continue;
      if (t.input) used.insert(*t.input);
      if (t.output) used.insert(*t.output);
    }
    for (std::size_t r = 0; r < model.routingConstraints.size(); ++r)
      if (walk.evaluated[r])
        used.insert(model.routingConstraints[r].support.begin(),
                    model.routingConstraints[r].support.end());

    // One tuple per relation and case.
    std::map<std::string, KeyTuple> tupleOf;
    for (const auto& d : model.dataItems) {
      if (!used.contains(d.id)) continue;
      DataItemInstance inst{d.id, std::nullopt, std::nullopt};
      if (d.binding) {
        const auto& relation = d.binding->relation;
        auto it = tupleOf.find(relation);
        if (it == tupleOf.end()) {
          const std::size_t width = std::max<std::size_t>(1, findRel(schema, d)->primaryKey().size());
          std::int64_t key = caseId;
          if (relation != schema.identityRelation && allowsSharing(toIdentity.at(relation)))
            key = static_cast<std::int64_t>(rng.below(bounds.pkDomainSize));
          it = tupleOf.emplace(relation, KeyTuple(width, Scalar{key})).first;
        }
        inst.pkValue = it->second;
      }
      pi.dataItems.push_back(std::move(inst));
    }
    log.instances.push_back(std::move(pi));
  }
  return log;
}

}  // namespace dimpact
