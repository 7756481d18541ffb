#pragma once

// JSON parsing that remembers where each value came from, so semantic
// errors can be reported with a line and column.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dimpact/diagnostics.hpp"

namespace dimpact::detail {

using Json = nlohmann::json;

struct LocatedDocument {
  std::string text;
  Json root;
  std::map<std::string, std::size_t> offsets;  // JSON pointer -> byte offset

  SourceLocation locate(std::size_t offset) const;
  /// Location of the value at `pointer`, or of its nearest located ancestor.
  SourceLocation locate(std::string pointer) const;
};

/// Throws ParseError on malformed input, duplicate object keys, or input
/// that is not valid UTF-8.
LocatedDocument parseLocated(std::string_view text);

/// A value inside a LocatedDocument together with its JSON pointer.
class Node {
public:
  Node(const LocatedDocument& doc, const Json& value, std::string pointer)
      : doc_(&doc), value_(&value), pointer_(std::move(pointer)) {}

  [[noreturn]] void fail(const std::string& message) const;

  const std::string& pointer() const noexcept { return pointer_; }
  SourceLocation location() const { return doc_->locate(pointer_); }

  bool isNull() const noexcept { return value_->is_null(); }
  bool isString() const noexcept { return value_->is_string(); }
  const Json& raw() const noexcept { return *value_; }

  /// Object access. `require` fails when the key is missing; both fail when
  /// the node is not an object.
  Node require(std::string_view key) const;
  std::optional<Node> optional(std::string_view key) const;
  /// Rejects keys outside `allowed`.
  void onlyKeys(std::initializer_list<std::string_view> allowed) const;

  std::vector<Node> elements() const;  // fails unless array
  std::string string() const;          // fails unless string
  std::optional<std::string> nullableString() const;
  bool boolean() const;
  std::int64_t integer() const;

private:
  const LocatedDocument* doc_;
  const Json* value_;
  std::string pointer_;
};

Node rootNode(const LocatedDocument& doc);

}  // namespace dimpact::detail
