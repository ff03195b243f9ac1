// Template insertion and clipboard commands.

#include "edit_support.hpp"

#include "semedit/mathml.hpp"

namespace semedit::detail {

namespace {

std::vector<DocNode> take_range(Document& doc, const ItemRange& r)
{
    auto& items = items_at(doc, r.line);
    std::vector<DocNode> out(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(r.begin)),
                             std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(r.end)));
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(r.begin), items.begin() + static_cast<std::ptrdiff_t>(r.end));
    return out;
}

} // namespace

EditResult insert_template(Ctx& ctx, const std::string& id)
{
    const Template& t = ctx.reg.at(id);
    auto range = ctx.doc.normalized_selection();
    if (t.is_infix()) {
        if (range)
            delete_range(ctx, *range);
        return type_operator(ctx, t, t.glyphs.front());
    }
    if (!range) {
        ctx.doc.set_selection(std::nullopt);
        return insert_structure(ctx, t, false);
    }
    std::vector<DocNode> moved = take_range(ctx.doc, *range);
    DocNode f = ctx.reg.instantiate(t.id);
    for (auto& c : f.children) {
        if (c.kind == NodeKind::Slot) {
            c.children.front().children = std::move(moved);
            break;
        }
    }
    auto& items = items_at(ctx.doc, range->line);
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(range->begin), std::move(f));
    Path fpath = child(range->line, range->begin);
    ctx.doc.set_selection(std::nullopt);
    settle_gap(ctx.doc, range->line, range->begin + 1);
    const DocNode& placed = ctx.doc.node_at(fpath);
    Path first = slot_line(fpath, placed, 0);
    if (t.is_bracket()) {
        // The wrapped content stays selected inside the new pair.
        std::size_t n = ctx.doc.node_at(first).children.size();
        Selection sel{from_spot(ctx.doc.root(), Spot{first, 0, 0, false}),
                      from_spot(ctx.doc.root(), Spot{first, n, 0, false})};
        settle_gap(ctx.doc, first, n);
        ctx.doc.set_selection(sel);
        return applied();
    }
    Path target = entry_line(ctx.doc, fpath, true);
    settle_gap(ctx.doc, target, ctx.doc.node_at(target).children.size());
    return applied();
}

EditResult copy(Ctx& ctx)
{
    auto range = ctx.doc.normalized_selection();
    if (!range)
        return rejected("NoSelection");
    const auto& items = ctx.doc.node_at(range->line).children;
    std::vector<DocNode> part(items.begin() + static_cast<std::ptrdiff_t>(range->begin),
                              items.begin() + static_cast<std::ptrdiff_t>(range->end));
    ctx.session.set_clipboard(math_document({items_content(part, ctx.reg)}));
    return no_effect();
}

EditResult cut(Ctx& ctx)
{
    auto range = ctx.doc.normalized_selection();
    if (!range)
        return rejected("NoSelection");
    copy(ctx);
    delete_range(ctx, *range);
    return applied();
}

EditResult paste(Ctx& ctx)
{
    if (ctx.session.clipboard().empty())
        return rejected("EmptyClipboard");
    auto lines = parse_fragment_items(ctx.session.clipboard(), ctx.reg);
    if (auto range = ctx.doc.normalized_selection())
        delete_range(ctx, *range);
    ctx.doc.set_selection(std::nullopt);
    std::vector<DocNode> items;
    for (auto& l : lines) {
        if (!items.empty() && !l.empty() && is_operand(items.back()) && is_operand(l.front()))
            items.push_back(make_noop(4));
        for (auto& it : l)
            items.push_back(std::move(it));
    }
    if (items.empty())
        return no_effect();
    Path line;
    std::size_t g = split_at_caret(ctx.doc, line);
    std::size_t end = insert_items(ctx.doc, line, g, std::move(items), true);
    settle_gap(ctx.doc, line, end);
    return applied();
}

} // namespace semedit::detail
