#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdtk::xml {

/// One XML element. Character data directly inside the element is collected
/// into `text` with surrounding whitespace trimmed; attribute and child order
/// is preserved as written.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;

    const std::string* attribute(std::string_view attr_name) const;

    bool operator==(const Element& other) const = default;
};

/// Parses a single-rooted document: elements, attributes, character data,
/// comments, an optional prolog, and the five named entities. Throws
/// Error(SyntaxError) with line/column on malformed input.
Element parse(std::string_view input);

/// Renders an element tree with 2-space indentation. `parse(serialize(e))`
/// yields an element equal to `e` for every tree this toolkit produces.
std::string serialize(const Element& root);

} // namespace cdtk::xml
