// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "dimpact/cli.hpp"
#include "dimpact/impact.hpp"
#include "dimpact/io.hpp"
#include "dimpact/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_model.hpp"

using namespace dimpact;
using namespace dimpact::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool condition, const std::string& what) {
    if (condition) return;
    if (ok) detail = what;
    ok = false;
  }
};

using Clock = std::chrono::steady_clock;

bool report(int id, const std::string& title, double limitSeconds,
            const std::function<void(Outcome&)>& body) {
  Outcome outcome;
  const auto start = Clock::now();
  try {
    body(outcome);
  } catch (const std::exception& e) {
    outcome.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (limitSeconds > 0)
    outcome.require(seconds < limitSeconds, "took " + std::to_string(seconds) + " s");
  std::printf("%s [%d] %s (%.3f s)%s%s\n", outcome.ok ? "PASS" : "FAIL", id, title.c_str(), seconds,
              outcome.detail.empty() ? "" : ": ", outcome.detail.c_str());
  std::fflush(stdout);
  return outcome.ok;
}

std::string runCli(std::vector<std::string> args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

std::vector<std::string> fixtureArgs(std::vector<std::string> head) {
  head.insert(head.end(), {"--model", fixturePath("hotel/hotel.model.json"), "--schema",
                           fixturePath("hotel/hotel.schema.json"), "--format", "json"});
  return head;
}

/// Shared by the soundness, cardinality and identity criteria.
const CampaignSummary& campaign() {
  static const CampaignSummary summary = [] {
    CampaignSummary s = runCampaign(hotelModel(), hotelSchema(), 0, 999, {});
    for (std::uint64_t pair = 0; pair < 20; ++pair) {
      auto [model, schema] = randomModel(1000 + pair);
      s.merge(runCampaign(model, schema, 0, 99, {}));
    }
    return s;
  }();
  return summary;
}

}  // namespace

int main() {
  bool all = true;

  all &= report(1, "worked example: (hotelBookingID, *, MembershipType) and its affected set", 1.0,
                [](Outcome& o) {
                  int code = 0;
                  const auto pdi = nlohmann::json::parse(runCli(fixtureArgs({"pdi"}), code));
                  o.require(code == 0, "pdi exit code");
                  bool triplet = false, exact = false;
                  for (const auto& t : pdi["triplets"]) {
                    if (t["d1"] != "hotelBookingID" || t["d"] != "MembershipType") continue;
                    triplet = true;
                    exact = exact || t["d2"] == "RoomType";
                  }
                  o.require(triplet, "no triplet with d1 = hotelBookingID and d = MembershipType");
                  o.require(exact, "missing (hotelBookingID, RoomType, MembershipType)");
                  const auto aff =
                      nlohmann::json::parse(runCli(fixtureArgs({"affected", "hotelBookingID"}), code));
                  o.require(code == 0, "affected exit code");
                  bool descriptor = false;
                  for (const auto& sf : aff["sharingFunctions"])
                    descriptor = descriptor ||
                                 (sf["item"] == "MembershipType" && sf["relation"] == "Customer" &&
                                  sf["primaryKey"] == nlohmann::json::array({"customerID"}));
                  o.require(descriptor, "MembershipType descriptor missing from the affected set");
                });

  all &= report(2, "containment: 1000 fixture logs + 20 random models x 100 logs", 120.0,
                [](Outcome& o) {
                  const auto& s = campaign();
                  o.require(s.logs == 3000, "ran " + std::to_string(s.logs) + " logs");
                  o.require(s.invalidLogs == 0, "invalid generated logs");
                  o.require(s.observedTriplets > 0, "no inter-instance impact observed");
                  o.require(s.containmentViolations == 0,
                            std::to_string(s.containmentViolations) + " containment violations");
                  o.require(s.intraViolations == 0,
                            std::to_string(s.intraViolations) + " trace impacts outside the intra set");
                });

  all &= report(3, "cardinality of every non-trivial runtime sharing set", 0, [](Outcome& o) {
    const auto& s = campaign();
    o.require(s.nontrivialSharingSets > 0, "no non-trivial sharing set generated");
    o.require(s.cardinalityViolations == 0,
              std::to_string(s.cardinalityViolations) + " sharing sets through 1-1/m-1 relations");
  });

  all &= report(4, "identity attributes: generated logs pass, counterexample flagged once", 0,
                [](Outcome& o) {
                  o.require(campaign().identitySharingViolations == 0, "generated log violates");
                  InstanceLog log;
                  log.modelName = "hotel-booking";
                  for (std::int64_t c = 1; c <= 2; ++c)
                    log.instances.push_back(
                        {c, {"booking_request"}, {{"hotelBookingID", KeyTuple{Scalar{1}}, std::nullopt}}});
                  const auto r = checkLemma1(hotelModel(), log, hotelSchema());
                  o.require(r.size() == 1, "counterexample produced " + std::to_string(r.size()) +
                                               " violations");
                });

  all &= report(5, "transitive closure vs path enumeration on 200 digraphs", 5.0, [](Outcome& o) {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 200; ++round) {
      const int n = 1 + static_cast<int>(rng() % 8);
      const double density = 0.05 + 0.1 * static_cast<double>(rng() % 5);
      std::bernoulli_distribution edge(density);
      PairSet edges;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (edge(rng)) edges.emplace("v" + std::to_string(i), "v" + std::to_string(j));
      o.require(transitiveClosure(edges) == closureByPathEnumeration(edges),
                "mismatch on graph " + std::to_string(round));
    }
  });

  all &= report(6, "trace-ordered impact vs chain enumeration on 100 cases", 0, [](Outcome& o) {
    RandomModelLimits limits;
    limits.maxDataItems = 8;
    std::mt19937_64 rng(6);
    for (std::uint64_t c = 0; c < 100; ++c) {
      auto [model, schema] = randomModel(5000 + c, limits);
      ProcessInstance pi;
      pi.caseId = 1;
      const std::size_t len = rng() % 7;
      for (std::size_t k = 0; k < len; ++k)
        pi.trace.push_back(model.activities[rng() % model.activities.size()].id);
      for (const auto& a : model.dataItems)
        for (const auto& b : model.dataItems)
          o.require(intraImpactInTrace(model, pi, a.id, b.id) ==
                        chainInTrace(model, pi.trace, a.id, b.id),
                    "case " + std::to_string(c) + ": " + a.id + " -> " + b.id);
    }
  });

  all &= report(7, "metrics of the three-triplet example and table columns", 0, [](Outcome& o) {
    PdiSet pdi;
    pdi.insert({"a", "b", "s", "S", Cardinality::OneToMany});
    pdi.insert({"a", "c", "s", "S", Cardinality::OneToMany});
    pdi.insert({"x", "b", "t", "T", Cardinality::OneToMany});
    const auto m = computeMetrics(pdi);
    o.require(m.uniqueSharedCount == 2 && m.uniqueTriggerCount == 2, "counts");
    o.require(m.avgImpactSetsPerTrigger == Ratio{2, 2} && m.avgImpactSetsPerTrigger.value() == 1.0,
              "impact sets per d1");
    o.require(m.avgAffectedPerTrigger == Ratio{3, 2} && m.avgAffectedPerTrigger.value() == 1.5,
              "d2 per d1");
    o.require(m.avgTriggersPerShared == Ratio{2, 2} && m.avgTriggersPerShared.value() == 1.0,
              "d1 per d");
    const auto table = emitMetrics(m, ReportFormat::Markdown);
    const auto header = table.substr(table.find('|'), table.find('\n', table.find('|')) - table.find('|'));
    o.require(header ==
                  "| Number of unique d | Number of unique d_1 | Average number of impact sets for d_1 "
                  "| Average number of d_2 per d_1 | Average number of d_1 per d |",
              "header row: " + header);
  });

  all &= report(8, "round trip, 10000 fuzzed inputs, deterministic reports", 0, [](Outcome& o) {
    const auto modelText = readText(fixturePath("hotel/hotel.model.json"));
    const auto schemaText = readText(fixturePath("hotel/hotel.schema.json"));
    const auto model = parseModel(modelText);
    const auto schema = parseSchema(schemaText);
    o.require(parseModel(emitModel(model)) == model, "model round trip");
    o.require(parseSchema(emitSchema(schema)) == schema, "schema round trip");
    const auto logText = emitLog(generateRandomLog(model, schema, 1, {}));
    const auto log = parseLog(logText);
    o.require(parseLog(emitLog(log)) == log, "log round trip");

    const std::vector<std::string> seeds{modelText, schemaText, logText};
    const std::string alphabet = "{}[]\":,0123456789-.etrufalsn \n\\\x00\xff";
    std::mt19937_64 rng(8);
    std::size_t survived = 0;
    for (int round = 0; round < 10000; ++round) {
      std::string text = seeds[rng() % seeds.size()];
      for (int k = 1 + static_cast<int>(rng() % 3); k > 0 && !text.empty(); --k) {
        const std::size_t at = rng() % text.size();
        switch (rng() % 4) {
          case 0: text[at] = alphabet[rng() % alphabet.size()]; break;
          case 1: text.erase(at, 1 + rng() % 6); break;
          case 2: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
          default: text.resize(at); break;
        }
      }
      bool clean = true;
      for (int which = 0; which < 3; ++which) {
        try {
          if (which == 0) parseModel(text);
          if (which == 1) parseSchema(text);
          if (which == 2) parseLog(text);
        } catch (const ParseError&) {
        } catch (const std::exception& e) {
          clean = false;
          o.require(false, std::string("non-diagnostic exception: ") + e.what());
        }
      }
      survived += clean ? 1 : 0;
    }
    o.require(survived == 10000, std::to_string(10000 - survived) + " inputs escaped the parsers");

    int code = 0;
    for (const char* cmd : {"pdi", "metrics", "graph", "intra"}) {
      std::vector<std::string> args{cmd, "--model", fixturePath("hotel/hotel.model.json")};
      if (std::string(cmd) != "intra")
        args.insert(args.end(), {"--schema", fixturePath("hotel/hotel.schema.json")});
      const auto first = runCli(args, code);
      for (int again = 0; again < 3; ++again)
        o.require(runCli(args, code) == first, std::string(cmd) + " output differs between runs");
    }
  });

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
