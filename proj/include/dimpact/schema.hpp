#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dimpact/diagnostics.hpp"
#include "dimpact/model.hpp"

namespace dimpact {

/// Tuple-mapping multiplicity of a directed reference R1 -> R2, written
/// x-y(R1, R2). The low bit records that one R1 tuple may map to many R2
/// tuples (y = m); the high bit that one R2 tuple may map to many R1 tuples
/// (x = m).
enum class Cardinality : std::uint8_t {
  OneToOne = 0b00,
  OneToMany = 0b01,
  ManyToOne = 0b10,
  ManyToMany = 0b11,
};

inline constexpr Cardinality kAllCardinalities[] = {
    Cardinality::OneToOne, Cardinality::OneToMany, Cardinality::ManyToOne,
    Cardinality::ManyToMany};

std::string_view toString(Cardinality c);
std::optional<Cardinality> parseCardinality(std::string_view text);

/// The same mapping read in the opposite direction: 1-m <-> m-1.
constexpr Cardinality dual(Cardinality c) {
  const auto v = static_cast<std::uint8_t>(c);
  return static_cast<Cardinality>(((v & 1u) << 1) | ((v >> 1) & 1u));
}

/// Cardinality of R1 -> R3 given R1 -> R2 (`first`) and R2 -> R3 (`second`).
/// Fan-out and fan-in are each "many" as soon as one hop allows it.
constexpr Cardinality composeCardinality(Cardinality first, Cardinality second) {
  return static_cast<Cardinality>(static_cast<std::uint8_t>(first) |
                                  static_cast<std::uint8_t>(second));
}

/// Least upper bound under 1-1 < {1-m, m-1} < m-m.
constexpr Cardinality widen(Cardinality a, Cardinality b) {
  return static_cast<Cardinality>(static_cast<std::uint8_t>(a) |
                                  static_cast<std::uint8_t>(b));
}

/// True for 1-m and m-m: a tuple of R may be referenced by several
/// identity tuples, so its attributes can be shared across cases.
constexpr bool allowsSharing(Cardinality toIdentity) {
  return (static_cast<std::uint8_t>(toIdentity) & 1u) != 0;
}

struct AttributeDef {
  std::string name;
  bool isPrimaryKey = false;

  friend bool operator==(const AttributeDef&, const AttributeDef&) = default;
};

struct Relation {
  std::string name;
  std::vector<AttributeDef> attributes;

  /// Primary-key attribute names in declaration order.
  std::vector<std::string> primaryKey() const;
  bool hasAttribute(std::string_view attribute) const;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct ReferenceMapping {
  std::string from;
  std::string to;
  Cardinality cardinality = Cardinality::ManyToOne;

  friend bool operator==(const ReferenceMapping&, const ReferenceMapping&) = default;
};

struct RelationalSchema {
  std::string name;
  std::vector<Relation> relations;
  std::vector<ReferenceMapping> references;
  std::string identityRelation;

  const Relation* findRelation(std::string_view relation) const;

  friend bool operator==(const RelationalSchema&, const RelationalSchema&) = default;
};

ValidationReport validateSchema(const RelationalSchema& schema);

/// Every stored binding of `model` must name an existing relation attribute.
ValidationReport validateBindings(const ProcessModel& model, const RelationalSchema& schema);

/// Relation holding a stored item; nullptr for transient items.
/// Throws Error("unresolved binding ...") when the relation does not exist.
const Relation* findRel(const RelationalSchema& schema, const DataItem& item);

/// Cardinality of the mapping from relation `from` to relation `identity`.
///
/// All simple paths in the reference graph are considered, each reference
/// traversable in both directions (backwards with its dual). Cardinalities
/// compose along a path and the widest result over all paths is returned.
/// Throws Error when `from` cannot reach `identity`.
Cardinality findCardinality(const RelationalSchema& schema, std::string_view from,
                            std::string_view identity);

}  // namespace dimpact
