#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semedit/document.hpp"
#include "semedit/templates.hpp"

namespace semedit {

inline constexpr std::string_view kMathMLNamespace = "http://www.w3.org/1998/Math/MathML";
inline constexpr std::string_view kSemeditNamespace = "urn:x-semedit:editing-state";

/// One Content MathML element. `bracketed` and `chain` are grouping
/// bookkeeping and are neither serialized nor compared.
struct ContentNode {
    std::string tag;
    std::string text;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<ContentNode> children;
    bool bracketed = false;
    bool chain = false;

    bool operator==(const ContentNode& o) const
    {
        return tag == o.tag && text == o.text && attributes == o.attributes && children == o.children;
    }

    static ContentNode element(std::string tag) { return ContentNode{std::move(tag), {}, {}, {}}; }
    static ContentNode token(std::string tag, std::string text) { return ContentNode{std::move(tag), std::move(text), {}, {}}; }
    static ContentNode placeholder() { return token("ci", std::string(kEmptySlot)); }
    static ContentNode csymbol(std::string name);

    bool is_placeholder() const { return tag == "ci" && text == kEmptySlot; }
    std::string_view attribute(std::string_view name) const;
};

/// Classification of an auto-detect token: number, function name,
/// operator glyph, else identifier. Total and pure.
ContentRole resolve_auto_detect(std::string_view raw, const TemplateRegistry& reg);

/// Content tree of one Line (placeholder for an empty line).
ContentNode line_content(const DocNode& line, const TemplateRegistry& reg);
/// Content tree of a selected item range.
ContentNode items_content(const std::vector<DocNode>& items, const TemplateRegistry& reg);
/// One content expression per top-level Line.
std::vector<ContentNode> document_content(const Document& doc, const TemplateRegistry& reg);

std::string to_xml(const ContentNode& node);
/// Canonical `<math>` document for a list of statements (`<math/>` when the
/// list is a single placeholder or empty).
std::string math_document(const std::vector<ContentNode>& statements);

/// Well-formed Content MathML for any editing state. Deterministic.
std::string serialize_content(const Document& doc, const TemplateRegistry& reg);

struct ParseResult {
    Document document;
    std::vector<std::string> diagnostics;
};

/// Errors: XmlSyntax(line, column), UnsupportedElement(tag), ShapeError.
ParseResult parse_content_with_diagnostics(std::string_view text, const TemplateRegistry& reg);
Document parse_content(std::string_view text, const TemplateRegistry& reg);

/// Lines of Line items for a `<math>` fragment, used by paste.
std::vector<std::vector<DocNode>> parse_fragment_items(std::string_view text, const TemplateRegistry& reg,
                                                       std::vector<std::string>* diagnostics = nullptr);

/// Generic element tree produced by the XML reader.
struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlElement> children;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Throws Error(XmlSyntax) with position on malformed input.
XmlElement read_xml(std::string_view text);

/// Presentation MathML rendering of the document.
std::string export_presentation(const Document& doc, const TemplateRegistry& reg);

/// Collapses insignificant whitespace between tags for string comparison.
std::string normalize_whitespace(std::string_view xml);

} // namespace semedit
