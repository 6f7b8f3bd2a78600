#include "litrec/xml.hpp"

#include <cctype>

#include "litrec/errors.hpp"

namespace litrec::xml {

const Node* Node::child(std::string_view child_name) const {
  for (const Node& c : children) {
    if (c.name == child_name) return &c;
  }
  return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view child_name) const {
  std::vector<const Node*> out;
  for (const Node& c : children) {
    if (c.name == child_name) out.push_back(&c);
  }
  return out;
}

std::optional<std::string> Node::attribute(std::string_view attr_name) const {
  for (const auto& [k, v] : attributes) {
    if (k == attr_name) return v;
  }
  return std::nullopt;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  Node parse_document() {
    skip_bom();
    skip_misc();
    Node root = parse_element();
    skip_misc();
    if (pos_ != in_.size()) fail("trailing content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("xml: " + msg, pos_);
  }

  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const {
    return in_.compare(pos_, s.size(), s) == 0;
  }

  void skip_bom() {
    if (starts_with("\xef\xbb\xbf")) pos_ += 3;
  }

  void skip_whitespace() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  // Whitespace, comments and processing instructions between markup.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (starts_with("<!--")) {
        auto end = in_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        auto end = in_.find("?>", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else {
        return;
      }
    }
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':';
  }

  std::string parse_name() {
    std::size_t start = pos_;
    while (!eof() && is_name_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string parse_entity() {
    // pos_ is at '&'
    auto semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 10) {
      fail("malformed entity reference");
    }
    std::string_view body = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (body == "amp") return "&";
    if (body == "lt") return "<";
    if (body == "gt") return ">";
    if (body == "quot") return "\"";
    if (body == "apos") return "'";
    if (!body.empty() && body[0] == '#') {
      long cp = 0;
      try {
        cp = (body.size() > 1 && (body[1] == 'x' || body[1] == 'X'))
                 ? std::stol(std::string(body.substr(2)), nullptr, 16)
                 : std::stol(std::string(body.substr(1)));
      } catch (const std::exception&) {
        fail("bad numeric character reference");
      }
      if (cp <= 0 || cp > 0x10ffff) fail("character reference out of range");
      return encode_utf8(static_cast<char32_t>(cp));
    }
    fail("unknown entity: &" + std::string(body) + ";");
  }

  static std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
    return out;
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted value");
    char quote = peek();
    ++pos_;
    std::string value;
    while (!eof() && peek() != quote) {
      if (peek() == '&') {
        value += parse_entity();
      } else if (peek() == '<') {
        fail("'<' in attribute value");
      } else {
        value.push_back(peek());
        ++pos_;
      }
    }
    expect(quote);
    return value;
  }

  Node parse_element() {
    expect('<');
    Node node;
    node.name = parse_name();
    for (;;) {
      skip_whitespace();
      if (eof()) fail("unterminated start tag");
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (starts_with("/>")) {
        pos_ += 2;
        return node;
      }
      std::string attr = parse_name();
      skip_whitespace();
      expect('=');
      skip_whitespace();
      node.attributes.emplace_back(std::move(attr), parse_attribute_value());
    }
    // content
    for (;;) {
      if (eof()) fail("unterminated element <" + node.name + ">");
      if (starts_with("</")) {
        pos_ += 2;
        std::string closing = parse_name();
        if (closing != node.name) {
          fail("mismatched close tag </" + closing + "> for <" + node.name + ">");
        }
        skip_whitespace();
        expect('>');
        return node;
      }
      if (starts_with("<!--")) {
        auto end = in_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else if (peek() == '<') {
        node.children.push_back(parse_element());
      } else if (peek() == '&') {
        node.text += parse_entity();
      } else {
        node.text.push_back(peek());
        ++pos_;
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view input) { return Parser(input).parse_document(); }

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace litrec::xml
