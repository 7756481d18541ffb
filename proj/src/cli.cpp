#include "dimpact/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimpact/impact.hpp"
#include "dimpact/io.hpp"
#include "dimpact/oracle.hpp"

namespace dimpact::cli {

namespace {

struct CliConfig {
  std::string modelPath;
  std::string schemaPath;
  std::string logPath;
  std::string format = "markdown";
  std::string seeds;
  std::string item;
  GeneratorBounds bounds;
  bool withProvenance = false;
};

/// Failure attributable to the invocation or its inputs (exit code 2).
struct InputError : Error {
  using Error::Error;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class Parse>
auto load(const std::string& path, std::string_view what, Parse parse) {
  if (path.empty()) throw InputError("missing --" + std::string(what) + " file");
  const std::string text = readFile(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

ReportFormat reportFormat(const CliConfig& cfg) {
  if (cfg.format == "json") return ReportFormat::Json;
  if (cfg.format == "markdown") return ReportFormat::Markdown;
  throw InputError("format '" + cfg.format + "' is not available for this command");
}

std::pair<std::uint64_t, std::uint64_t> parseSeeds(const std::string& text) {
  auto number = [&](std::string_view s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
      throw InputError("malformed seed range '" + text + "' (expected N or A..B)");
    try {
      return static_cast<std::uint64_t>(std::stoull(std::string(s)));
    } catch (const std::exception&) {
      throw InputError("seed out of range in '" + text + "'");
    }
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto s = number(text);
    return {s, s};
  }
  auto first = number(std::string_view(text).substr(0, dots));
  auto last = number(std::string_view(text).substr(dots + 2));
  if (first > last) throw InputError("empty seed range '" + text + "'");
  return {first, last};
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

/// Prepends a metadata header in the syntax of the output format.
std::string withProvenance(const std::string& body, const std::string& format,
                           const std::string& command, const CliConfig& cfg) {
  std::string inputs = "model=" + cfg.modelPath;
  if (!cfg.schemaPath.empty()) inputs += " schema=" + cfg.schemaPath;
  if (!cfg.logPath.empty()) inputs += " log=" + cfg.logPath;
  const std::string line = "dimpact " + std::string(kToolVersion) + " " + command + " " + inputs +
                           " at " + timestamp();
  if (format == "json") {
    auto parsed = nlohmann::ordered_json::parse(body);
    nlohmann::ordered_json out;
    out["provenance"] = {{"tool", "dimpact"},
                         {"version", kToolVersion},
                         {"command", command},
                         {"model", cfg.modelPath},
                         {"schema", cfg.schemaPath},
                         {"generatedAt", timestamp()}};
    for (auto& [k, v] : parsed.items()) out[k] = v;
    return out.dump(2) + "\n";
  }
  if (format == "dot") return "// " + line + "\n" + body;
  if (format == "markdown") return "<!-- " + line + " -->\n" + body;
  return "# " + line + "\n" + body;
}

std::string oracleSummary(const CampaignSummary& s, const std::string& label, bool json) {
  if (json) {
    nlohmann::ordered_json j;
    j["kind"] = "oracle-summary";
    j["version"] = kFormatVersion;
    j["source"] = label;
    j["logs"] = s.logs;
    j["instances"] = s.instances;
    j["observedTriplets"] = s.observedTriplets;
    j["nontrivialSharingSets"] = s.nontrivialSharingSets;
    j["containmentViolations"] = s.containmentViolations;
    j["identitySharingViolations"] = s.identitySharingViolations;
    j["cardinalityViolations"] = s.cardinalityViolations;
    j["traceOrderViolations"] = s.intraViolations;
    j["invalidLogs"] = s.invalidLogs;
    j["failures"] = s.failures;
    j["result"] = s.passed() ? "pass" : "fail";
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "source: " << label << "\n"
      << "logs: " << s.logs << "\n"
      << "instances: " << s.instances << "\n"
      << "observed triplets: " << s.observedTriplets << "\n"
      << "non-trivial sharing sets: " << s.nontrivialSharingSets << "\n"
      << s.containmentViolations << " containment violations\n"
      << s.identitySharingViolations << " identity-relation sharing violations\n"
      << s.cardinalityViolations << " cardinality violations\n"
      << s.intraViolations << " trace-order violations\n"
      << s.invalidLogs << " invalid logs\n";
  for (const auto& f : s.failures) out << "failure: " << f << "\n";
  out << "result: " << (s.passed() ? "pass" : "fail") << "\n";
  return out.str();
}

bool colorEnabled() {
  const char* v = std::getenv("DIMPACT_COLOR");
  return v != nullptr && std::string_view(v) != "0" && std::string_view(v) != "never";
}

void diagnose(std::ostream& err, const std::string& message) {
  if (colorEnabled())
    err << "\033[31merror:\033[0m " << message << "\n";
  else
    err << "error: " << message << "\n";
}

int execute(const std::string& command, const CliConfig& cfg, std::ostream& out) {
  const ProcessModel model = load(cfg.modelPath, "model", parseModel);
  std::string body;
  std::string format = cfg.format;

  if (command == "intra") {
    body = emitIntra(intraInstanceAnalysis(model), reportFormat(cfg));
  } else {
    const RelationalSchema schema = load(cfg.schemaPath, "schema", parseSchema);
    if (auto report = validateBindings(model, schema); !report.ok())
      throw InputError("model and schema do not match: " + report.summary());

    if (command == "oracle") {
      if (format != "json" && format != "markdown" && format != "text")
        throw InputError("format '" + format + "' is not available for oracle");
      if (cfg.seeds.empty() && cfg.logPath.empty())
        throw InputError("oracle needs --seeds A..B and/or --log FILE");
      CampaignSummary summary;
      std::string label;
      if (!cfg.logPath.empty()) {
        const InstanceLog log = load(cfg.logPath, "log", parseLog);
        if (auto report = validateLog(model, log); !report.ok())
          throw InputError(cfg.logPath + ": log does not match the model: " + report.summary());
        summary.merge(checkLog(model, schema, intraInstanceAnalysis(model),
                               computePdi(model, schema), log));
        label = "log " + cfg.logPath;
      }
      if (!cfg.seeds.empty()) {
        auto [first, last] = parseSeeds(cfg.seeds);
        if (cfg.bounds.maxInstances == 0 || cfg.bounds.pkDomainSize == 0)
          throw InputError("unsatisfiable bounds: --max-instances and --pk-domain must be > 0");
        summary.merge(runCampaign(model, schema, first, last, cfg.bounds));
        label += (label.empty() ? "" : ", ") + ("seeds " + cfg.seeds);
      }
      if (format == "markdown") format = "text";
      body = oracleSummary(summary, label, format == "json");
      out << (cfg.withProvenance ? withProvenance(body, format, command, cfg) : body);
      return summary.passed() ? kSuccess : kViolations;
    }

    const PdiSet pdi = computePdi(model, schema);
    if (command == "graph" || (command == "pdi" && format == "dot")) {
      format = "dot";
      body = emitDot(pdi);
    } else if (command == "pdi") {
      body = emitReport(pdi, affectedSets(pdi, schema), computeMetrics(pdi), reportFormat(cfg));
    } else if (command == "affected") {
      if (!model.findDataItem(cfg.item)) throw InputError("unknown data item '" + cfg.item + "'");
      const auto all = affectedSets(model, pdi, schema);
      body = emitAffected(all.at(cfg.item), reportFormat(cfg));
    } else if (command == "metrics") {
      body = emitMetrics(computeMetrics(pdi), reportFormat(cfg));
    }
  }
  out << (cfg.withProvenance ? withProvenance(body, format, command, cfg) : body);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design-time inter-instance data impact analysis", "dimpact"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  CliConfig cfg;

  auto common = [&](CLI::App* sub, bool needsSchema) {
    sub->add_option("--model", cfg.modelPath, "process model document")->required();
    auto* schema = sub->add_option("--schema", cfg.schemaPath, "relational schema document");
    if (needsSchema) schema->required();
    sub->add_option("--format", cfg.format, "json or markdown (dot for pdi/graph)");
    sub->add_flag("--with-provenance", cfg.withProvenance, "prepend a metadata header");
  };

  common(app.add_subcommand("intra", "intra-instance impact pairs"), false);
  common(app.add_subcommand("pdi", "potential inter-instance impact triplets"), true);
  auto* affected = app.add_subcommand("affected", "affected set of one trigger item");
  common(affected, true);
  affected->add_option("item", cfg.item, "data item id")->required();
  common(app.add_subcommand("metrics", "summary metrics over the triplets"), true);
  common(app.add_subcommand("graph", "triplets as a Graphviz digraph"), true);
  auto* oracle = app.add_subcommand("oracle", "runtime soundness checks over generated or given logs");
  common(oracle, true);
  oracle->add_option("--seeds", cfg.seeds, "seed or inclusive range A..B");
  oracle->add_option("--log", cfg.logPath, "instance log to check");
  oracle->add_option("--max-instances", cfg.bounds.maxInstances, "cases per generated log");
  oracle->add_option("--max-loop-unroll", cfg.bounds.maxLoopUnroll, "extra traversals per flow");
  oracle->add_option("--pk-domain", cfg.bounds.pkDomainSize, "shared key pool size");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    diagnose(err, e.what());
    return kInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "graph") cfg.format = "dot";
  try {
    return execute(command, cfg, out);
  } catch (const InputError& e) {
    diagnose(err, e.what());
  } catch (const ValidationError& e) {
    diagnose(err, e.what());
  } catch (const Error& e) {
    diagnose(err, e.what());
  }
  return kInputError;
}

}  // namespace dimpact::cli
