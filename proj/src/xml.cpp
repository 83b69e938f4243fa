#include "cdtk/xml.hpp"

#include "cdtk/errors.hpp"

#include <cctype>
#include <sstream>

namespace cdtk::xml {

const std::string* Element::attribute(std::string_view attr_name) const {
    for (const auto& [name, value] : attributes) {
        if (name == attr_name) {
            return &value;
        }
    }
    return nullptr;
}

namespace {

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

class Parser {
public:
    explicit Parser(std::string_view input) : input_(input) {}

    Element parse_document() {
        skip_misc();
        if (at_end()) {
            fail("document has no root element");
        }
        Element root = parse_element();
        skip_misc();
        if (!at_end()) {
            fail("content after the root element");
        }
        return root;
    }

private:
    std::string_view input_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::SyntaxError, message, line_, column_);
    }

    bool at_end() const { return pos_ >= input_.size(); }

    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = input_[pos_++];
        if (c == '\n') {
            line_++;
            column_ = 1;
        } else {
            column_++;
        }
        return c;
    }

    bool consume(std::string_view token) {
        if (input_.substr(pos_, token.size()) != token) {
            return false;
        }
        for (std::size_t i = 0; i < token.size(); ++i) {
            advance();
        }
        return true;
    }

    void expect(std::string_view token, const std::string& what) {
        if (!consume(token)) {
            fail("expected " + what);
        }
    }

    void skip_whitespace() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            advance();
        }
    }

    // Whitespace, comments, and at most one prolog before the root.
    void skip_misc() {
        for (;;) {
            skip_whitespace();
            if (consume("<?")) {
                while (!at_end() && !consume("?>")) {
                    advance();
                }
            } else if (input_.substr(pos_, 4) == "<!--") {
                skip_comment();
            } else {
                return;
            }
        }
    }

    void skip_comment() {
        expect("<!--", "comment");
        while (!consume("-->")) {
            if (at_end()) {
                fail("unterminated comment");
            }
            advance();
        }
    }

    std::string parse_name() {
        if (at_end() || !is_name_start(peek())) {
            fail("expected a name");
        }
        std::string name;
        while (!at_end() && is_name_char(peek())) {
            name.push_back(advance());
        }
        return name;
    }

    char parse_entity() {
        expect("&", "entity");
        std::string entity;
        while (!at_end() && peek() != ';') {
            entity.push_back(advance());
            if (entity.size() > 8) {
                fail("malformed entity reference");
            }
        }
        expect(";", "';' closing an entity");
        if (entity == "lt") return '<';
        if (entity == "gt") return '>';
        if (entity == "amp") return '&';
        if (entity == "quot") return '"';
        if (entity == "apos") return '\'';
        fail("unknown entity '&" + entity + ";'");
    }

    std::string parse_attribute_value() {
        if (peek() != '"' && peek() != '\'') {
            fail("expected a quoted attribute value");
        }
        char quote = advance();
        std::string value;
        while (!at_end() && peek() != quote) {
            if (peek() == '&') {
                value.push_back(parse_entity());
            } else if (peek() == '<') {
                fail("'<' in attribute value");
            } else {
                value.push_back(advance());
            }
        }
        expect(std::string_view(&quote, 1), "closing quote");
        return value;
    }

    Element parse_element() {
        expect("<", "'<'");
        Element element;
        element.name = parse_name();
        for (;;) {
            skip_whitespace();
            if (consume("/>")) {
                return element;
            }
            if (consume(">")) {
                break;
            }
            std::string attr_name = parse_name();
            for (const auto& [existing, _] : element.attributes) {
                if (existing == attr_name) {
                    fail("duplicate attribute '" + attr_name + "'");
                }
            }
            skip_whitespace();
            expect("=", "'=' after attribute name");
            skip_whitespace();
            element.attributes.emplace_back(attr_name, parse_attribute_value());
        }

        std::string text;
        for (;;) {
            if (at_end()) {
                fail("unterminated element '" + element.name + "'");
            }
            if (input_.substr(pos_, 4) == "<!--") {
                skip_comment();
            } else if (consume("</")) {
                std::string closing = parse_name();
                if (closing != element.name) {
                    fail("mismatched closing tag '" + closing + "' for '" + element.name + "'");
                }
                skip_whitespace();
                expect(">", "'>'");
                element.text = trim(text);
                return element;
            } else if (peek() == '<') {
                element.children.push_back(parse_element());
            } else if (peek() == '&') {
                text.push_back(parse_entity());
            } else {
                text.push_back(advance());
            }
        }
    }

    static std::string trim(const std::string& s) {
        std::size_t begin = s.find_first_not_of(" \t\r\n");
        if (begin == std::string::npos) {
            return "";
        }
        std::size_t end = s.find_last_not_of(" \t\r\n");
        return s.substr(begin, end - begin + 1);
    }
};

void escape_text(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        default: out.push_back(c);
        }
    }
}

void escape_attribute(const std::string& in, std::string& out) {
    for (char c : in) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
}

void serialize_element(const Element& element, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out.push_back('<');
    out += element.name;
    for (const auto& [name, value] : element.attributes) {
        out.push_back(' ');
        out += name;
        out += "=\"";
        escape_attribute(value, out);
        out.push_back('"');
    }
    if (element.children.empty() && element.text.empty()) {
        out += "/>\n";
        return;
    }
    out.push_back('>');
    if (element.children.empty()) {
        escape_text(element.text, out);
        out += "</" + element.name + ">\n";
        return;
    }
    out.push_back('\n');
    if (!element.text.empty()) {
        out.append(static_cast<std::size_t>(depth + 1) * 2, ' ');
        escape_text(element.text, out);
        out.push_back('\n');
    }
    for (const Element& child : element.children) {
        serialize_element(child, depth + 1, out);
    }
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += "</" + element.name + ">\n";
}

} // namespace

Element parse(std::string_view input) {
    return Parser(input).parse_document();
}

std::string serialize(const Element& root) {
    std::string out;
    serialize_element(root, 0, out);
    return out;
}

} // namespace cdtk::xml
