// Typing and deletion in the free-style (basic) editing mode.

#include "edit_support.hpp"

namespace semedit::detail {

EditResult type_text(Ctx& ctx, const std::string& ch)
{
    if (!is_text_char(ch))
        return no_effect();
    Spot s = caret_spot(ctx.doc);
    auto& items = items_at(ctx.doc, s.line);
    if (s.in_text) {
        DocNode& t = items[s.index];
        t.text.insert(utf8_byte_offset(t.text, s.offset), ch);
        ++s.offset;
        settle(ctx.doc, s);
        return applied();
    }
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(s.index), DocNode::text_token(ch));
    settle(ctx.doc, Spot{s.line, s.index, 1, true});
    return applied();
}

std::optional<EditResult> try_fill(Ctx& ctx, const Template& t)
{
    Path line;
    auto gap = caret_gap(ctx.doc, line);
    if (!gap)
        return std::nullopt;
    auto& items = items_at(ctx.doc, line);
    // A black box next to the caret takes the operator.
    for (std::size_t i : {*gap, *gap + 1}) {
        if (i == 0 || i > items.size() || !is_noop(items[i - 1]))
            continue;
        items[i - 1] = make_operator_leaf(t);
        ctx.event("OperatorFilled", std::string(kBlackBox), t.glyphs.front());
        settle_gap(ctx.doc, line, i);
        return applied();
    }
    return std::nullopt;
}

std::optional<EditResult> try_auto_replace(Ctx& ctx, const std::string& key)
{
    Path line;
    auto gap = caret_gap(ctx.doc, line);
    if (!gap || *gap == 0)
        return std::nullopt;
    auto& items = items_at(ctx.doc, line);
    DocNode& prev = items[*gap - 1];
    if (!is_operator_leaf(prev) || is_noop(prev) || is_invisible(prev))
        return std::nullopt;
    const std::string from = prev.text;
    auto to = ctx.session.auto_replace().lookup(from, key);
    if (!to)
        return std::nullopt;
    const Template* r = ctx.reg.by_glyph(*to);
    if (!r)
        return std::nullopt;
    prev = make_operator_leaf(*r);
    ctx.event("AutoReplaced", from, *to);
    settle_gap(ctx.doc, line, *gap);
    return applied();
}

EditResult type_operator(Ctx& ctx, const Template& t, const std::string& key)
{
    if (auto r = try_fill(ctx, t))
        return *r;
    if (auto r = try_auto_replace(ctx, key))
        return *r;
    Path line;
    std::size_t g = split_at_caret(ctx.doc, line);
    auto& items = items_at(ctx.doc, line);
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(g), make_operator_leaf(t));
    settle_gap(ctx.doc, line, g + 1);
    return applied();
}

EditResult insert_structure(Ctx& ctx, const Template& t, bool take_operand)
{
    Path line;
    std::size_t g = split_at_caret(ctx.doc, line);
    auto& items = items_at(ctx.doc, line);
    DocNode f = ctx.reg.instantiate(t.id);
    bool took = false;
    if (take_operand && g > 0 && is_operand(items[g - 1])) {
        for (auto& c : f.children) {
            if (c.kind == NodeKind::Slot) {
                c.children.front().children.push_back(std::move(items[g - 1]));
                break;
            }
        }
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(g - 1));
        --g;
        took = true;
    }
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(g), std::move(f));
    Path fpath = child(line, g);
    settle_gap(ctx.doc, line, g + 1);
    // Structure index is unaffected by merging (items before it are unchanged).
    const DocNode& placed = ctx.doc.node_at(fpath);
    Path target = took && slot_count(placed) > 1 ? slot_line(fpath, placed, 1) : entry_line(ctx.doc, fpath, true);
    settle_gap(ctx.doc, target, ctx.doc.node_at(target).children.size());
    return applied();
}

EditResult type_basic(Ctx& ctx, const std::string& ch)
{
    if (const Template* t = ctx.reg.by_operator(ch)) {
        if (t->is_infix())
            return type_operator(ctx, *t, ch);
        // Auto-replacement may claim a structural key ('=' then '/').
        if (auto r = try_auto_replace(ctx, ch))
            return *r;
        return insert_structure(ctx, *t, true);
    }
    return type_text(ctx, ch);
}

// ---------------------------------------------------------------------------
// Deletion
// ---------------------------------------------------------------------------

namespace {

/// Replaces the pair at `index` of `line` by its slot items, wrapped with
/// the given pending brackets; returns the gap after the slot items.
std::size_t unwrap_pair(Document& doc, const Path& line, std::size_t index, bool lead_open, bool trail_close)
{
    auto& items = items_at(doc, line);
    DocNode pair = std::move(items[index]);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(index));
    std::vector<DocNode> inner;
    for (auto& c : pair.children)
        if (c.kind == NodeKind::Slot)
            inner = std::move(c.children.front().children);
    std::size_t n = inner.size();
    if (lead_open)
        inner.insert(inner.begin(), make_pending_bracket(true));
    if (trail_close)
        inner.push_back(make_pending_bracket(false));
    insert_items(doc, line, index, std::move(inner), false);
    return index + n + (lead_open ? 1 : 0);
}

/// Undoes a re-association split: the first `reassoc_inner` items go back
/// into the pair on the left after a pending open.
std::optional<std::size_t> revert_split(Document& doc, const Path& line, std::size_t index)
{
    auto& items = items_at(doc, line);
    const DocNode& n = items[index];
    if (index == 0 || !is_bracket_pair(items[index - 1]))
        return std::nullopt;
    std::size_t k = static_cast<std::size_t>(n.reassoc_inner);
    DocNode pair = std::move(items[index]);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(index));
    std::vector<DocNode> inner;
    for (auto& c : pair.children)
        if (c.kind == NodeKind::Slot)
            inner = std::move(c.children.front().children);
    k = std::min(k, inner.size());
    std::vector<DocNode> back(std::make_move_iterator(inner.begin()),
                              std::make_move_iterator(inner.begin() + static_cast<std::ptrdiff_t>(k)));
    std::vector<DocNode> rest(std::make_move_iterator(inner.begin() + static_cast<std::ptrdiff_t>(k)),
                              std::make_move_iterator(inner.end()));
    if (pair.reassoc_glue && !rest.empty() && is_invisible(rest.front()))
        rest.erase(rest.begin());
    DocNode& p = items_at(doc, line)[index - 1];
    for (auto& c : p.children) {
        if (c.kind != NodeKind::Slot)
            continue;
        auto& pl = c.children.front().children;
        pl.push_back(make_pending_bracket(true));
        for (auto& it : back)
            pl.push_back(std::move(it));
        break;
    }
    std::size_t n_rest = rest.size();
    insert_items(doc, line, index, std::move(rest), false);
    return index + n_rest;
}

std::string pair_text(const DocNode& pair)
{
    return pair.origin == BracketOrigin::Typed ? "()" : "( )";
}

} // namespace

EditResult delete_backward(Ctx& ctx)
{
    Spot s = caret_spot(ctx.doc);
    auto& items = items_at(ctx.doc, s.line);
    if (s.in_text && s.offset > 0) {
        DocNode& t = items[s.index];
        std::size_t a = utf8_byte_offset(t.text, s.offset - 1);
        std::size_t b = utf8_byte_offset(t.text, s.offset);
        t.text.erase(a, b - a);
        if (t.text.empty()) {
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(s.index));
            settle_gap(ctx.doc, s.line, s.index);
        } else {
            settle(ctx.doc, Spot{s.line, s.index, s.offset - 1, true});
        }
        return applied();
    }
    std::size_t g = s.index;
    while (g > 0 && is_invisible(items[g - 1]))
        --g;
    if (g == 0)
        return no_effect();
    DocNode& prev = items[g - 1];
    if (prev.kind == NodeKind::Text) {
        ctx.doc.set_caret(from_spot(ctx.doc.root(), Spot{s.line, g - 1, utf8_length(prev.text), true}));
        return delete_backward(ctx);
    }
    if (is_noop(prev))
        return rejected("ProtectedNoOp");
    if (is_operator_leaf(prev)) {
        std::string from = prev.text;
        int level = 0;
        if (const Template* t = ctx.reg.by_glyph(from))
            level = t->precedence;
        prev = make_noop(level);
        ctx.event("OperatorBlackBoxed", from, std::string(kBlackBox));
        settle_gap(ctx.doc, s.line, g);
        return applied();
    }
    if (is_pending_bracket(prev)) {
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(g - 1));
        settle_gap(ctx.doc, s.line, g - 1);
        return applied();
    }
    if (is_bracket_pair(prev)) {
        std::string from = pair_text(prev);
        std::size_t after;
        if (prev.reassoc_inner >= 0) {
            auto r = revert_split(ctx.doc, s.line, g - 1);
            if (!r)
                return rejected("ReadOnlyTarget");
            after = *r;
            ctx.event("StructureReverted", "split", "merged");
        } else if (prev.origin == BracketOrigin::Typed) {
            after = unwrap_pair(ctx.doc, s.line, g - 1, true, false);
            ctx.event("StructureReverted", from, "(");
        } else {
            after = unwrap_pair(ctx.doc, s.line, g - 1, false, false);
            ctx.event("StructureReverted", from, "");
        }
        settle_gap(ctx.doc, s.line, after);
        return applied();
    }
    return rejected("ReadOnlyTarget");
}

EditResult delete_forward(Ctx& ctx)
{
    Spot s = caret_spot(ctx.doc);
    auto& items = items_at(ctx.doc, s.line);
    if (s.in_text && s.offset < utf8_length(items[s.index].text)) {
        DocNode& t = items[s.index];
        std::size_t a = utf8_byte_offset(t.text, s.offset);
        std::size_t b = utf8_byte_offset(t.text, s.offset + 1);
        t.text.erase(a, b - a);
        if (t.text.empty()) {
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(s.index));
            settle_gap(ctx.doc, s.line, s.index);
        } else {
            settle(ctx.doc, s);
        }
        return applied();
    }
    std::size_t g = s.in_text ? s.index + 1 : s.index;
    while (g < items.size() && is_invisible(items[g]))
        ++g;
    if (g >= items.size())
        return no_effect();
    DocNode& next = items[g];
    if (next.kind == NodeKind::Text) {
        Spot at{s.line, g, 0, true};
        next.text.erase(0, utf8_byte_offset(next.text, 1));
        if (next.text.empty()) {
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(g));
            at = Spot{s.line, g, 0, false};
        }
        settle(ctx.doc, at);
        return applied();
    }
    if (is_noop(next))
        return rejected("ProtectedNoOp");
    if (is_operator_leaf(next)) {
        std::string from = next.text;
        int level = 0;
        if (const Template* t = ctx.reg.by_glyph(from))
            level = t->precedence;
        next = make_noop(level);
        ctx.event("OperatorBlackBoxed", from, std::string(kBlackBox));
        settle_gap(ctx.doc, s.line, g);
        return applied();
    }
    if (is_pending_bracket(next)) {
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(g));
        settle_gap(ctx.doc, s.line, g);
        return applied();
    }
    if (is_bracket_pair(next)) {
        std::string from = pair_text(next);
        if (next.reassoc_inner >= 0) {
            if (!revert_split(ctx.doc, s.line, g))
                return rejected("ReadOnlyTarget");
            ctx.event("StructureReverted", "split", "merged");
        } else if (next.origin == BracketOrigin::Typed) {
            unwrap_pair(ctx.doc, s.line, g, false, true);
            ctx.event("StructureReverted", from, ")");
        } else {
            unwrap_pair(ctx.doc, s.line, g, false, false);
            ctx.event("StructureReverted", from, "");
        }
        settle_gap(ctx.doc, s.line, g);
        return applied();
    }
    return rejected("ReadOnlyTarget");
}

} // namespace semedit::detail
