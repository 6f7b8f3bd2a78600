#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace litrec::xml {

/// Element tree for the small, data-oriented XML dialects this project
/// reads and writes. Supports elements, attributes, character data with
/// the predefined entities plus numeric references, comments, and an
/// optional prolog. No namespaces, CDATA, or DOCTYPE.
struct Node {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Node> children;
  std::string text;  // concatenated character data inside this element

  const Node* child(std::string_view child_name) const;
  std::vector<const Node*> children_named(std::string_view child_name) const;
  std::optional<std::string> attribute(std::string_view attr_name) const;
};

/// Parses a complete document and returns the root element.
/// Throws ParseError with the byte offset of the first violation.
Node parse(std::string_view input);

/// Escapes &, <, >, " and ' for element content and attribute values.
std::string escape(std::string_view raw);

}  // namespace litrec::xml
