#include <doctest.h>

#include "support/printers.hpp"

#include <random>

#include "dimpact/impact.hpp"
#include "dimpact/io.hpp"
#include "dimpact/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_model.hpp"

using namespace dimpact;
using namespace dimpact::testing;

namespace {

const std::vector<std::string> kFullTrace{"booking_request",   "update_membership",
                                          "calculate_price",   "check_availability",
                                          "room_reservation",  "send_confirmation",
                                          "prepare_room",      "check_out"};

/// A hotel case that books for `customer` and touches every item it uses.
ProcessInstance hotelCase(std::int64_t caseId, std::int64_t customer, std::int64_t room) {
  ProcessInstance pi;
  pi.caseId = caseId;
  pi.trace = kFullTrace;
  const auto& model = hotelModel();
  for (const auto& d : model.dataItems) {
    DataItemInstance inst{d.id, std::nullopt, std::nullopt};
    if (d.binding) {
      std::int64_t key = caseId;
      if (d.binding->relation == "Customer") key = customer;
      if (d.binding->relation == "Room" || d.binding->relation == "Hotel") key = room;
      if (d.binding->relation == "Employee") key = 100 + caseId;
      inst.pkValue = KeyTuple{key};
    }
    pi.dataItems.push_back(std::move(inst));
  }
  return pi;
}

InstanceLog twoBookings() {
  InstanceLog log;
  log.modelName = "hotel-booking";
  log.instances = {hotelCase(1, 7, 1), hotelCase(2, 7, 2)};
  return log;
}

std::set<TripletKey> project(const std::set<ObservedTriplet>& observed) {
  std::set<TripletKey> out;
  for (const auto& o : observed) out.emplace(o.d1, o.d2, o.d);
  return out;
}

/// Small random models for the exhaustive trace oracle.
RandomModelLimits smallLimits() {
  RandomModelLimits l;
  l.maxActivities = 5;
  l.maxDataItems = 8;
  l.maxRelations = 3;
  return l;
}

}  // namespace

TEST_CASE("data sharing sets") {
  const auto log = twoBookings();
  const auto& model = hotelModel();
  CHECK(dataSharingSet(model, log, "MembershipType", {Scalar{7}}) ==
        std::set<Scalar>{Scalar{1}, Scalar{2}});
  CHECK(dataSharingSet(model, log, "RoomType", {Scalar{1}}) == std::set<Scalar>{Scalar{1}});
  CHECK(dataSharingSet(model, log, "RoomType", {Scalar{9}}).empty());
  CHECK_THROWS_WITH_AS(dataSharingSet(model, log, "TotalAmount", {Scalar{1}}),
                       doctest::Contains("not shareable"), Error);
}

TEST_CASE("model-level impact on the fixture") {
  const auto& m = hotelModel();
  CHECK(modelLevelImpact(m, "TotalCredits", "check_availability", "AvailabilityResult"));
  CHECK(modelLevelImpact(m, "TotalPrice", "check_out", "paid"));
  CHECK(modelLevelImpact(m, "TotalCredits", "room_reservation", "RoomType"));
  CHECK_FALSE(modelLevelImpact(m, "paid", "check_out", "TotalPrice"));
  CHECK_FALSE(modelLevelImpact(m, "TotalCredits", "booking_request", "hotelBookingID"));
}

TEST_CASE("model-level impact equals the definition on random models") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto [model, schema] = randomModel(seed);
    const ImpactIndex index(model);
    for (const auto& a : model.activities)
      for (const auto& x : model.dataItems)
        for (const auto& y : model.dataItems) {
          const bool expected = directImpact(model, x.id, a.id, y.id);
          CHECK(modelLevelImpact(model, x.id, a.id, y.id) == expected);
          CHECK(index.direct(x.id, a.id, y.id) == expected);
        }
  }
}

TEST_CASE("trace impact through room reservation and check out") {
  const auto pi = hotelCase(1, 7, 1);
  const auto& m = hotelModel();
  CHECK(impactedSetOf(m, pi, "MembershipType").contains("TotalCredits"));
  CHECK(intraImpactInTrace(m, pi, "hotelBookingID", "MembershipType"));
  CHECK(intraImpactInTrace(m, pi, "paid", "paid"));

  auto reversed = pi;
  std::reverse(reversed.trace.begin(), reversed.trace.end());
  CHECK(intraImpactInTrace(m, reversed, "hotelBookingID", "MembershipType"));
  CHECK(intraImpactInTrace(m, pi, "hotelBookingID", "TotalPrice"));
  CHECK_FALSE(intraImpactInTrace(m, reversed, "hotelBookingID", "TotalPrice"));
}

TEST_CASE("a single activity instance may carry consecutive steps") {
  const auto& m = hotelModel();
  ProcessInstance pi;
  pi.caseId = 1;
  pi.trace = {"check_out"};
  CHECK(intraImpactInTrace(m, pi, "RoomType", "TotalCredits"));
  pi.trace = {"update_membership"};
  CHECK(intraImpactInTrace(m, pi, "hotelBookingID", "MembershipType"));
  pi.trace = {};
  CHECK_FALSE(intraImpactInTrace(m, pi, "RoomType", "TotalPrice"));
}

TEST_CASE("trace impact equals exhaustive chain enumeration") {
  std::mt19937_64 rng(23);
  std::size_t cases = 0;
  for (std::uint64_t seed = 0; cases < 300; ++seed) {
    auto [model, schema] = randomModel(seed, smallLimits());
    for (int t = 0; t < 3; ++t, ++cases) {
      ProcessInstance pi;
      pi.caseId = 1;
      const std::size_t len = rng() % 7;
      for (std::size_t k = 0; k < len; ++k)
        pi.trace.push_back(model.activities[rng() % model.activities.size()].id);
      const ImpactIndex index(model);
      for (const auto& a : model.dataItems)
        for (const auto& b : model.dataItems) {
          INFO("seed " << seed << " " << a.id << " -> " << b.id);
          CHECK(index.impacts(pi.trace, a.id, b.id) == chainInTrace(model, pi.trace, a.id, b.id));
        }
    }
  }
}

TEST_CASE("impacting sets mirror impacted sets") {
  const auto pi = hotelCase(3, 1, 1);
  const auto& m = hotelModel();
  for (const auto& a : m.dataItems)
    for (const auto& b : m.dataItems)
      CHECK(impactedSetOf(m, pi, a.id).contains(b.id) == impactingSetOf(m, pi, b.id).contains(a.id));
}

TEST_CASE("two bookings by one customer") {
  const auto log = twoBookings();
  const auto& m = hotelModel();
  const auto observed = observedTriplets(m, log);
  bool forward = false, backward = false;
  for (const auto& o : observed) {
    if (o.d1 != "hotelBookingID" || o.d2 != "RoomType" || o.d != "MembershipType") continue;
    CHECK(o.pkValue == KeyTuple{Scalar{7}});
    forward = forward || (o.sourceCase == Scalar{1} && o.targetCase == Scalar{2});
    backward = backward || (o.sourceCase == Scalar{2} && o.targetCase == Scalar{1});
  }
  CHECK(forward);
  CHECK(backward);
  CHECK(interInstanceImpact(m, log, log.instances[0], log.instances[1], "MembershipType"));
  CHECK_FALSE(interInstanceImpact(m, log, log.instances[0], log.instances[1], "RoomType"));
  CHECK_FALSE(interInstanceImpact(m, log, log.instances[0], log.instances[0], "MembershipType"));
  CHECK(checkNecessity(observed, computePdi(m, hotelSchema())).passed());
}

TEST_CASE("no inter-instance impact without two cases") {
  InstanceLog empty;
  CHECK(observedTriplets(hotelModel(), empty).empty());
  InstanceLog single;
  single.instances = {hotelCase(1, 7, 1)};
  CHECK(observedTriplets(hotelModel(), single).empty());
}

TEST_CASE("observed triplets equal brute force on generated logs") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    auto [model, schema] = randomModel(seed, smallLimits());
    const auto log = generateRandomLog(model, schema, seed, {3, 1, 2});
    INFO("seed " << seed);
    const auto observed = observedTriplets(model, log);
    CHECK(project(observed) == observedByBruteForce(model, log));
    for (const auto& o : observed) {
      const auto* a = log.findCase(o.sourceCase);
      const auto* b = log.findCase(o.targetCase);
      CHECK(interInstanceImpact(model, log, *a, *b, o.d));
    }
  }
}

TEST_CASE("containment report") {
  PdiSet pdi;
  pdi.insert({"a", "b", "s", "S", Cardinality::OneToMany});
  std::set<ObservedTriplet> observed{{"a", "b", "s", Scalar{1}, Scalar{2}, {Scalar{0}}},
                                     {"a", "b", "s", Scalar{2}, Scalar{1}, {Scalar{0}}}};
  auto report = checkNecessity(observed, pdi);
  CHECK(report.passed());
  CHECK(report.checked == 1);
  observed.insert({"c", "b", "s", Scalar{1}, Scalar{2}, {Scalar{0}}});
  report = checkNecessity(observed, pdi);
  REQUIRE(report.missing.size() == 1);
  CHECK(report.missing[0] == TripletKey{"c", "b", "s"});
  CHECK(checkNecessity({}, pdi).passed());
}

TEST_CASE("identity attribute held by two cases is exactly one violation") {
  auto log = twoBookings();
  for (auto& d : log.instances[1].dataItems)
    if (d.item == "hotelBookingID") d.pkValue = KeyTuple{Scalar{1}};
  const auto report = checkLemma1(hotelModel(), log, hotelSchema());
  REQUIRE(report.size() == 1);
  CHECK((report.violations[0].kind == ViolationKind::SharedIdentityAttribute));
  CHECK(report.violations[0].element == "hotelBookingID");
  CHECK(checkLemma1(hotelModel(), twoBookings(), hotelSchema()).ok());
}

TEST_CASE("sharing through a relation that is many-to-one to the identity") {
  ProcessModel m;
  m.name = "m";
  m.activities = {{"A", "A"}};
  m.dataItems = {{"p", "p", StoredBinding{"Private", "p"}}};
  m.iao = {{std::nullopt, "A", "p"}};
  RelationalSchema s;
  s.relations = {{"IR", {{"id", true}}}, {"Private", {{"id", true}, {"p", false}}}};
  s.references = {{"IR", "Private", Cardinality::OneToOne}};
  s.identityRelation = "IR";
  InstanceLog log;
  for (std::int64_t c = 1; c <= 2; ++c)
    log.instances.push_back({c, {"A"}, {{"p", KeyTuple{Scalar{5}}, std::nullopt}}});
  const auto report = checkTheorem1(m, log, s);
  REQUIRE(report.size() == 1);
  CHECK((report.violations[0].kind == ViolationKind::NarrowCardinalitySharing));
  s.references[0].cardinality = Cardinality::ManyToMany;
  CHECK(checkTheorem1(m, log, s).ok());
}

TEST_CASE("intra superset check flags a missing pair") {
  const auto& m = hotelModel();
  InstanceLog log;
  log.instances = {hotelCase(1, 1, 1)};
  auto intra = intraInstanceAnalysis(m);
  CHECK(checkIntraSuperset(m, log, intra).ok());
  intra.pairs.erase({"TotalPrice", "paid"});
  CHECK(checkIntraSuperset(m, log, intra).size() == 1);
}

TEST_CASE("log validation") {
  auto log = twoBookings();
  CHECK(validateLog(hotelModel(), log).ok());
  log.instances[1].caseId = Scalar{1};
  log.instances[0].trace.push_back("dance");
  log.instances[0].dataItems.push_back({"TotalAmount", KeyTuple{Scalar{1}}, std::nullopt});
  log.instances[0].dataItems.push_back({"RoomType", std::nullopt, std::nullopt});
  log.instances[0].dataItems.push_back({"ghost", std::nullopt, std::nullopt});
  const auto report = validateLog(hotelModel(), log);
  CHECK((report.count(ViolationKind::DuplicateCaseId) == 1));
  CHECK((report.count(ViolationKind::UnknownActivity) == 1));
  CHECK((report.count(ViolationKind::BadKey) == 2));
  CHECK((report.count(ViolationKind::DanglingReference) == 1));
}

TEST_CASE("generator is deterministic in its seed") {
  const auto& m = hotelModel();
  const auto& s = hotelSchema();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = emitLog(generateRandomLog(m, s, seed, {}));
    const auto b = emitLog(generateRandomLog(m, s, seed, {}));
    CHECK(a == b);
  }
  CHECK(emitLog(generateRandomLog(m, s, 1, {})) != emitLog(generateRandomLog(m, s, 2, {})));
}

TEST_CASE("generated logs are valid and instantiate every used item") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto [model, schema] = randomModel(seed);
    const GeneratorBounds bounds{5, 2, 2};
    const auto log = generateRandomLog(model, schema, seed, bounds);
    INFO("seed " << seed);
    CHECK(validateLog(model, log).ok());
    CHECK(log.instances.size() >= 2);
    CHECK(log.instances.size() <= bounds.maxInstances);
    for (const auto& pi : log.instances) {
      std::map<std::string, std::size_t> runs;
      for (const auto& a : pi.trace) ++runs[a];
      for (const auto& t : model.iao) {
        if (!runs.contains(t.activity)) continue;
        if (t.input) CHECK(pi.instantiates(*t.input));
        if (t.output) CHECK(pi.instantiates(*t.output));
      }
      for (const auto& d : pi.dataItems)
        if (d.pkValue)
          CHECK(d.pkValue->size() ==
                std::max<std::size_t>(1, findRel(schema, *model.findDataItem(d.item))->primaryKey().size()));
    }
    CHECK(checkLemma1(model, log, schema).ok());
    CHECK(checkTheorem1(model, log, schema).ok());
  }
}

TEST_CASE("items private to a case are never shared") {
  const auto& m = hotelModel();
  const auto& s = hotelSchema();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto log = generateRandomLog(m, s, seed, {6, 1, 1});
    for (const auto& d : m.dataItems) {
      if (!d.binding || d.binding->relation != "Hotel-booking") continue;
      for (const auto& pi : log.instances)
        for (const auto& inst : pi.dataItems)
          if (inst.item == d.id) CHECK(dataSharingSet(m, log, d.id, *inst.pkValue).size() == 1);
    }
  }
}

TEST_CASE("a single-key pool forces sharing") {
  const auto& m = hotelModel();
  const auto& s = hotelSchema();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto log = generateRandomLog(m, s, seed, {4, 1, 1});
    REQUIRE(log.instances.size() >= 2);
    // Every case performs booking_request and update_membership.
    CHECK(dataSharingSet(m, log, "MembershipType", {Scalar{0}}).size() == log.instances.size());
  }
}

TEST_CASE("generator bounds") {
  const auto& m = hotelModel();
  const auto& s = hotelSchema();
  CHECK_THROWS_WITH_AS(generateRandomLog(m, s, 0, {0, 1, 3}), doctest::Contains("unsatisfiable"),
                       Error);
  CHECK_THROWS_WITH_AS(generateRandomLog(m, s, 0, {3, 1, 0}), doctest::Contains("unsatisfiable"),
                       Error);
  CHECK(generateRandomLog(m, s, 0, {1, 0, 1}).instances.size() == 1);
  // notify_unavailable is entered through a single flow, the retry loop
  // re-enters check_availability through a second one.
  for (std::size_t unroll = 0; unroll < 3; ++unroll)
    for (std::uint64_t seed = 0; seed < 30; ++seed)
      for (const auto& pi : generateRandomLog(m, s, seed, {3, unroll, 3}).instances) {
        const auto count = [&](const char* a) {
          return static_cast<std::size_t>(std::count(pi.trace.begin(), pi.trace.end(), a));
        };
        CHECK(count("booking_request") == 1);
        CHECK(count("notify_unavailable") <= 1 + unroll);
        CHECK(count("check_availability") <= 2 + 2 * unroll);
      }
}

TEST_CASE("campaign on the fixture") {
  const auto summary = runCampaign(hotelModel(), hotelSchema(), 0, 199, {});
  CHECK(summary.passed());
  CHECK(summary.logs == 200);
  CHECK(summary.nontrivialSharingSets > 0);
  CHECK(summary.observedTriplets > 0);
  CHECK_THROWS_AS(runCampaign(hotelModel(), hotelSchema(), 5, 4, {}), Error);
}
