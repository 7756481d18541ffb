#include "located_json.hpp"

#include <algorithm>
#include <iterator>

namespace dimpact::detail {

namespace {

// Input iterator that counts consumed bytes so the SAX handler knows the
// lexer position when a value completes.
class CountingIterator {
public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* at, std::size_t* consumed) : at_(at), consumed_(consumed) {}

  reference operator*() const { return *at_; }
  CountingIterator& operator++() {
    ++at_;
    ++*consumed_;
    return *this;
  }
  CountingIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }
  bool operator==(const CountingIterator& other) const { return at_ == other.at_; }

private:
  const char* at_;
  std::size_t* consumed_;
};

std::string escapeToken(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

class LocatingSax : public nlohmann::json_sax<Json> {
public:
  LocatingSax(LocatedDocument& doc, const std::size_t& consumed) : doc_(doc), consumed_(consumed) {}

  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(v); }
  bool number_unsigned(number_unsigned_t v) override { return put(v); }
  bool number_float(number_float_t v, const string_t&) override { return put(v); }
  bool string(string_t& v) override { return put(std::move(v)); }
  bool binary(binary_t&) override { return fail("binary values are not supported"); }

  bool start_object(std::size_t) override { return open(Json::object()); }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(Json::array()); }
  bool end_array() override { return close(); }

  bool key(string_t& k) override {
    auto& top = stack_.back();
    if (top.value->contains(k)) return fail("duplicate key '" + k + "'");
    top.key = std::move(k);
    doc_.offsets[top.pointer + "/" + escapeToken(top.key)] = here();
    return true;
  }

  bool parse_error(std::size_t position, const std::string& lastToken,
                   const nlohmann::detail::exception& ex) override {
    // Point at the start of the offending token.
    errorOffset_ = position > lastToken.size() ? position - lastToken.size() : 0;
    // Strip nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
    std::string what = ex.what();
    auto colon = what.find(": ");
    errorMessage_ = "syntax error: " + (colon == std::string::npos ? what : what.substr(colon + 2));
    return false;
  }

  const std::optional<std::string>& error() const { return errorMessage_; }
  std::size_t errorOffset() const { return errorOffset_; }

private:
  struct Frame {
    Json* value;
    std::string pointer;
    std::string key;
  };

  std::size_t here() const { return consumed_ == 0 ? 0 : consumed_ - 1; }

  bool fail(std::string message) {
    errorMessage_ = std::move(message);
    errorOffset_ = here();
    return false;
  }

  // Inserts `v` at the current position and returns its slot.
  Json* place(Json v, std::string& pointer) {
    if (stack_.empty()) {
      doc_.root = std::move(v);
      pointer.clear();
      return &doc_.root;
    }
    auto& top = stack_.back();
    if (top.value->is_array()) {
      pointer = top.pointer + "/" + std::to_string(top.value->size());
      top.value->push_back(std::move(v));
      return &top.value->back();
    }
    pointer = top.pointer + "/" + escapeToken(top.key);
    auto& slot = (*top.value)[top.key];
    slot = std::move(v);
    return &slot;
  }

  bool put(Json v) {
    std::string pointer;
    place(std::move(v), pointer);
    doc_.offsets.try_emplace(pointer, here());
    return true;
  }

  bool open(Json container) {
    std::string pointer;
    Json* slot = place(std::move(container), pointer);
    doc_.offsets.try_emplace(pointer, here());
    stack_.push_back({slot, pointer, {}});
    return true;
  }

  bool close() {
    stack_.pop_back();
    return true;
  }

  LocatedDocument& doc_;
  const std::size_t& consumed_;
  std::vector<Frame> stack_;
  std::optional<std::string> errorMessage_;
  std::size_t errorOffset_ = 0;
};

}  // namespace

SourceLocation LocatedDocument::locate(std::size_t offset) const {
  offset = std::min(offset, text.size());
  SourceLocation loc;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

SourceLocation LocatedDocument::locate(std::string pointer) const {
  while (true) {
    if (auto it = offsets.find(pointer); it != offsets.end()) return locate(it->second);
    if (pointer.empty()) return locate(std::size_t{0});
    pointer.erase(pointer.rfind('/'));
  }
}

LocatedDocument parseLocated(std::string_view text) {
  LocatedDocument doc;
  doc.text = std::string(text);
  std::size_t consumed = 0;
  LocatingSax sax(doc, consumed);
  const char* begin = doc.text.data();
  const char* end = begin + doc.text.size();
  bool ok = false;
  try {
    ok = Json::sax_parse(CountingIterator(begin, &consumed), CountingIterator(end, &consumed), &sax);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("syntax error: ") + ex.what(), doc.locate(consumed));
  }
  if (!ok) {
    throw ParseError(sax.error().value_or("syntax error"), doc.locate(sax.errorOffset()));
  }
  return doc;
}

Node rootNode(const LocatedDocument& doc) { return Node(doc, doc.root, ""); }

void Node::fail(const std::string& message) const {
  throw ParseError(message, location());
}

namespace {

std::string describe(const std::string& pointer) { return pointer.empty() ? "document" : pointer; }

}  // namespace

Node Node::require(std::string_view key) const {
  if (!value_->is_object()) fail(describe(pointer_) + " must be an object");
  auto it = value_->find(key);
  if (it == value_->end()) fail(describe(pointer_) + " is missing field '" + std::string(key) + "'");
  return Node(*doc_, *it, pointer_ + "/" + escapeToken(key));
}

std::optional<Node> Node::optional(std::string_view key) const {
  if (!value_->is_object()) fail(describe(pointer_) + " must be an object");
  auto it = value_->find(key);
  if (it == value_->end()) return std::nullopt;
  return Node(*doc_, *it, pointer_ + "/" + escapeToken(key));
}

void Node::onlyKeys(std::initializer_list<std::string_view> allowed) const {
  if (!value_->is_object()) fail(describe(pointer_) + " must be an object");
  for (auto it = value_->begin(); it != value_->end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end()) continue;
    Node(*doc_, it.value(), pointer_ + "/" + escapeToken(it.key()))
        .fail("unknown field '" + it.key() + "' in " + describe(pointer_));
  }
}

std::vector<Node> Node::elements() const {
  if (!value_->is_array()) fail(describe(pointer_) + " must be an array");
  std::vector<Node> out;
  out.reserve(value_->size());
  for (std::size_t i = 0; i < value_->size(); ++i)
    out.emplace_back(*doc_, (*value_)[i], pointer_ + "/" + std::to_string(i));
  return out;
}

std::string Node::string() const {
  if (!value_->is_string()) fail(describe(pointer_) + " must be a string");
  return value_->get<std::string>();
}

std::optional<std::string> Node::nullableString() const {
  if (value_->is_null()) return std::nullopt;
  if (!value_->is_string()) fail(describe(pointer_) + " must be a string or null");
  return value_->get<std::string>();
}

bool Node::boolean() const {
  if (!value_->is_boolean()) fail(describe(pointer_) + " must be a boolean");
  return value_->get<bool>();
}

std::int64_t Node::integer() const {
  if (value_->is_number_integer() && !value_->is_number_unsigned()) return value_->get<std::int64_t>();
  if (value_->is_number_unsigned()) {
    auto u = value_->get<std::uint64_t>();
    if (u <= static_cast<std::uint64_t>(INT64_MAX)) return static_cast<std::int64_t>(u);
  }
  fail(describe(pointer_) + " must be an integer");
}

}  // namespace dimpact::detail
