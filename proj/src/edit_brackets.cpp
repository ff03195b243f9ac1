// Pending brackets, pair materialization and re-association.

#include "edit_support.hpp"

namespace semedit::detail {

namespace {

DocNode& pair_line(DocNode& pair)
{
    for (auto& c : pair.children)
        if (c.kind == NodeKind::Slot)
            return c.children.front();
    throw Error(ErrorCode::PathInvalid, "bracket pair without slot");
}

const DocNode& pair_line(const DocNode& pair)
{
    return pair_line(const_cast<DocNode&>(pair));
}

/// Index of the unmatched pending open in a pair's line, if any.
std::optional<std::size_t> unmatched_open(const DocNode& line)
{
    std::optional<std::size_t> open;
    int depth = 0;
    for (std::size_t i = line.children.size(); i-- > 0;) {
        const DocNode& n = line.children[i];
        if (is_pending_close(n)) {
            ++depth;
        } else if (is_pending_open(n)) {
            if (depth == 0)
                return i;
            --depth;
        }
    }
    return open;
}

} // namespace

bool open_in_scope(const DocNode& line, std::size_t gap)
{
    int depth = 0;
    for (std::size_t i = gap; i-- > 0;) {
        const DocNode& n = line.children[i];
        if (is_pending_close(n)) {
            ++depth;
        } else if (is_pending_open(n)) {
            if (depth == 0)
                return true;
            --depth;
        } else if (depth == 0 && is_bracket_pair(n) && n.reassoc_inner < 0 && unmatched_open(pair_line(n))) {
            return true;
        }
    }
    return false;
}

EditResult close_bracket_at(Ctx& ctx, const Path& line, std::size_t gap)
{
    auto& items = items_at(ctx.doc, line);
    int depth = 0;
    for (std::size_t i = gap; i-- > 0;) {
        DocNode& n = items[i];
        if (is_pending_close(n)) {
            ++depth;
            continue;
        }
        if (is_pending_open(n)) {
            if (depth > 0) {
                --depth;
                continue;
            }
            DocNode pair = ctx.reg.instantiate("bracket-round");
            pair.origin = BracketOrigin::Typed;
            auto& inner = pair_line(pair).children;
            for (std::size_t j = i + 1; j < gap; ++j)
                inner.push_back(std::move(items[j]));
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(i), items.begin() + static_cast<std::ptrdiff_t>(gap));
            items.insert(items.begin() + static_cast<std::ptrdiff_t>(i), std::move(pair));
            settle_gap(ctx.doc, line, i + 1);
            return applied();
        }
        if (depth == 0 && is_bracket_pair(n) && n.reassoc_inner < 0) {
            auto open = unmatched_open(pair_line(n));
            if (!open)
                continue;
            // Split the pair at the new open bracket: it keeps the left part,
            // the new pair takes the rest plus everything up to the caret.
            auto& old_items = pair_line(n).children;
            DocNode pair = ctx.reg.instantiate("bracket-round");
            pair.origin = BracketOrigin::Typed;
            auto& inner = pair_line(pair).children;
            for (std::size_t j = *open + 1; j < old_items.size(); ++j)
                inner.push_back(std::move(old_items[j]));
            pair.reassoc_inner = static_cast<int>(inner.size());
            old_items.erase(old_items.begin() + static_cast<std::ptrdiff_t>(*open), old_items.end());
            for (std::size_t j = i + 1; j < gap; ++j)
                inner.push_back(std::move(items[j]));
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(i + 1),
                        items.begin() + static_cast<std::ptrdiff_t>(gap));
            items.insert(items.begin() + static_cast<std::ptrdiff_t>(i + 1), std::move(pair));
            ctx.event("BracketReassociated", "split", "left-edge");
            settle_gap(ctx.doc, line, i + 2);
            return applied();
        }
    }
    // No open bracket in scope: the close stays pending.
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(gap), make_pending_bracket(false));
    settle_gap(ctx.doc, line, gap + 1);
    return applied();
}

EditResult insert_bracket(Ctx& ctx, bool open)
{
    if (!open) {
        // A close typed at the end of a construct reaches for the open
        // bracket on an enclosing line.
        Path line;
        if (auto gap = caret_gap(ctx.doc, line)) {
            Path l = line;
            std::size_t g = *gap;
            for (;;) {
                const DocNode& ln = ctx.doc.node_at(l);
                if (open_in_scope(ln, g)) {
                    if (l != line)
                        ctx.doc.set_caret(from_spot(ctx.doc.root(), Spot{l, g, 0, false}));
                    break;
                }
                if (l.size() <= 2 || g != ln.children.size())
                    break;
                Path slot = parent(l);
                Path formula = parent(slot);
                if (!is_last_slot(ctx.doc.node_at(formula), slot.back()))
                    break;
                l = parent(formula);
                g = formula.back() + 1;
            }
        }
    }
    Path line;
    std::size_t g = split_at_caret(ctx.doc, line);
    if (!open)
        return close_bracket_at(ctx, line, g);
    auto& items = items_at(ctx.doc, line);
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(g), make_pending_bracket(true));
    settle_gap(ctx.doc, line, g + 1);
    return applied();
}

} // namespace semedit::detail
