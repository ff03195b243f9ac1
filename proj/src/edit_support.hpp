#pragma once

// Shared item-level primitives for the editing operations.

#include <string>
#include <vector>

#include "semedit/engine.hpp"

namespace semedit::detail {

struct Ctx {
    Session& session;
    Document& doc;
    const TemplateRegistry& reg;
    std::vector<TransformEvent>& log;

    void event(std::string name, std::string from = {}, std::string to = {})
    {
        log.push_back({std::move(name), std::move(from), std::move(to)});
    }
};

inline EditResult applied() { return {EditStatus::Applied, {}, {}, {}}; }
inline EditResult no_effect() { return {EditStatus::NoEffect, {}, {}, {}}; }
inline EditResult rejected(std::string reason) { return {EditStatus::Rejected, std::move(reason), {}, {}}; }

Path child(const Path& p, std::size_t i);
Path parent(const Path& p);

std::vector<DocNode>& items_at(Document& doc, const Path& line);

/// Caret as a Line spot.
Spot caret_spot(const Document& doc);
/// Gap index at the caret, splitting a Text when the caret is inside it.
std::size_t split_at_caret(Document& doc, Path& line);
/// Gap at the caret without splitting; nullopt when strictly inside a Text.
std::optional<std::size_t> caret_gap(const Document& doc, Path& line);

/// Merges adjacent Text tokens of `spot.line` and places the caret at `spot`.
void settle(Document& doc, Spot spot);
inline void settle_gap(Document& doc, const Path& line, std::size_t gap) { settle(doc, Spot{line, gap, 0, false}); }

/// Inserts `items` at `gap`; returns the gap after them. Adjacent Text
/// tokens at the seams are kept apart with a NoOp when `separate` is set.
std::size_t insert_items(Document& doc, const Path& line, std::size_t gap, std::vector<DocNode> items, bool separate);

/// Removes items [begin,end) and black-boxes the seam when two operands
/// would otherwise touch. Caret goes to the seam.
void delete_range(Ctx& ctx, const ItemRange& range);

/// The slot Line inside a structure, `k`-th slot.
Path slot_line(const Path& formula, const DocNode& f, std::size_t k);
std::size_t slot_count(const DocNode& f);
bool is_last_slot(const DocNode& f, std::size_t child_index);

/// First empty slot line of the structure at `formula`, else its first slot.
Path entry_line(const Document& doc, const Path& formula, bool first_empty);

// Operations split across translation units.
EditResult type_basic(Ctx& ctx, const std::string& ch);
std::optional<EditResult> try_fill(Ctx& ctx, const Template& t);
std::optional<EditResult> try_auto_replace(Ctx& ctx, const std::string& key);
EditResult type_operator(Ctx& ctx, const Template& t, const std::string& key);
EditResult type_text(Ctx& ctx, const std::string& ch);
EditResult insert_structure(Ctx& ctx, const Template& t, bool take_operand);
EditResult delete_backward(Ctx& ctx);
EditResult delete_forward(Ctx& ctx);
EditResult insert_bracket(Ctx& ctx, bool open);
EditResult close_bracket_at(Ctx& ctx, const Path& line, std::size_t gap);
EditResult insert_template(Ctx& ctx, const std::string& id);
EditResult cut(Ctx& ctx);
EditResult copy(Ctx& ctx);
EditResult paste(Ctx& ctx);
EditResult legacy_type(Ctx& ctx, const std::string& ch);
/// True when an unmatched open bracket precedes `gap` in the line, directly
/// or inside a pair there.
bool open_in_scope(const DocNode& line, std::size_t gap);

bool is_letter(const std::string& ch);
bool is_digit(const std::string& ch);
/// Characters accepted into a Text token.
bool is_text_char(const std::string& ch);

} // namespace semedit::detail
