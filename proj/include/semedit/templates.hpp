#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semedit/document.hpp"

namespace semedit {

enum class RoleFamily { Operator, CSymbol, Function, Bracket };

/// A palette entry: scaffold glyphs, input slots and the Content MathML
/// meaning of the instantiated head.
struct Template {
    std::string id;
    int arity = 0;
    RoleFamily family = RoleFamily::Operator;
    std::string content_tag; ///< `plus`, `sin`, `pm` (csymbol name), empty for brackets.
    std::string symbol;      ///< Head symbol; defaults to the first glyph.
    int precedence = 0;
    std::vector<std::string> glyphs;
    std::string skeleton;

    /// Arity-2 operator rendered `%1 op %2`: typed inline into a Line.
    bool is_infix() const;
    bool is_function() const { return family == RoleFamily::Function; }
    bool is_bracket() const { return family == RoleFamily::Bracket; }
    bool right_associative() const { return content_tag == "power"; }

    ContentRole head_role() const;
    /// The `role=` field of the definition format.
    std::string role_text() const;

    bool operator==(const Template&) const = default;
};

/// Immutable after construction; shareable across sessions.
class TemplateRegistry {
public:
    /// The shipped built-in dictionary.
    static const TemplateRegistry& builtin();

    const Template* find(std::string_view id) const noexcept;
    /// Throws Error(UnknownTemplate).
    const Template& at(std::string_view id) const;

    /// Template typed by an operator key or glyph (`+`, `*`, `/`, `≤`, ...).
    const Template* by_operator(std::string_view key) const noexcept;
    const Template* by_function(std::string_view name) const noexcept;
    const Template* by_content_tag(std::string_view tag) const noexcept;
    /// Infix template whose glyph is `glyph`.
    const Template* by_glyph(std::string_view glyph) const noexcept;

    bool is_function_prefix(std::string_view letters) const noexcept;
    /// True when some registered function name is strictly longer and starts with `name`.
    bool has_longer_function(std::string_view name) const noexcept;

    std::vector<const Template*> all() const;
    std::size_t size() const noexcept { return templates_.size(); }

    /// Serializes back to the definition format.
    std::string to_definitions() const;

    /// Fresh Formula subtree: glyph leaves (ReadOnly, NoMove) followed by
    /// `arity` Slots each holding one empty Line.
    DocNode instantiate(std::string_view id) const;

    bool operator==(const TemplateRegistry& other) const { return templates_ == other.templates_; }

private:
    friend TemplateRegistry parse_definitions(std::string_view, const TemplateRegistry*);
    void add(Template t);
    void rebuild_indexes();

    std::map<std::string, Template, std::less<>> templates_;
    std::map<std::string, std::string, std::less<>> operator_index_;
    std::map<std::string, std::string, std::less<>> function_index_;
};

/// Parses definition text. With a `base`, the result starts from a copy of
/// it and records from `text` replace entries by id.
/// Errors: DefinitionSyntax(line, column), DuplicateId, ArityMismatch.
TemplateRegistry parse_definitions(std::string_view text, const TemplateRegistry* base = nullptr);

/// Built-in templates plus the user overrides in `definitions`.
TemplateRegistry load_registry(std::string_view definitions);

std::string_view builtin_definitions() noexcept;

/// Inline operator leaf for an infix template.
DocNode make_operator_leaf(const Template& t);
/// Invisible multiplication leaf (linear input juxtaposition).
DocNode make_invisible_times(const TemplateRegistry& reg);

} // namespace semedit
