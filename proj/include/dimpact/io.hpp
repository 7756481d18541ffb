#pragma once

#include <string>
#include <string_view>

#include "dimpact/impact.hpp"
#include "dimpact/model.hpp"
#include "dimpact/oracle.hpp"
#include "dimpact/schema.hpp"

namespace dimpact {

inline constexpr std::string_view kFormatVersion = "1.0";

/// Document parsers. All throw ParseError carrying a line/column; on
/// success the result has passed validateModel / validateSchema (and the
/// structural part of validateLog that needs no model).
ProcessModel parseModel(std::string_view text);
RelationalSchema parseSchema(std::string_view text);
InstanceLog parseLog(std::string_view text);

/// Canonical documents: fixed key order, two-space indentation, element
/// order preserved, trailing newline.
std::string emitModel(const ProcessModel& model);
std::string emitSchema(const RelationalSchema& schema);
std::string emitLog(const InstanceLog& log);

enum class ReportFormat { Json, Markdown };

std::string emitIntra(const IntraImpactSet& intra, ReportFormat format);
std::string emitReport(const PdiSet& pdi, const AffectedSets& affected,
                       const ImpactMetrics& metrics, ReportFormat format);
std::string emitAffected(const AffectedSet& affected, ReportFormat format);
std::string emitMetrics(const ImpactMetrics& metrics, ReportFormat format);

/// Graphviz digraph with d1 -> d and d -> d2 edges; shared items are drawn
/// as filled double circles. Reflexive edges are omitted.
std::string emitDot(const PdiSet& pdi);

}  // namespace dimpact
