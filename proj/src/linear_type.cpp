// Legacy-mode keystrokes: letter runs, implicit multiplication, the
// numerator rule for '/' and widening before operators.

#include "edit_support.hpp"

#include "semedit/linear_input.hpp"

namespace semedit::detail {

namespace {

constexpr int kTimesLevel = 4;

std::string utf8_suffix(const std::string& s, std::size_t scalars_from_end)
{
    std::size_t len = utf8_length(s);
    return s.substr(utf8_byte_offset(s, len - std::min(len, scalars_from_end)));
}

bool is_number_text(const DocNode& n)
{
    if (n.kind != NodeKind::Text || n.text.empty())
        return false;
    for (char c : n.text)
        if (!(c == '.' || (c >= '0' && c <= '9')))
            return false;
    return true;
}

int template_level(const TemplateRegistry& reg, std::string_view id, int fallback)
{
    const Template* t = reg.find(id);
    return t ? t->precedence : fallback;
}

/// Gap at the caret after widening for an implicit product, with the
/// invisible times inserted when an operand precedes it.
std::size_t open_product_gap(Ctx& ctx, Path& line)
{
    Path probe;
    auto gap = caret_gap(ctx.doc, probe);
    if (gap && *gap > 0 && is_operand(ctx.doc.node_at(child(probe, *gap - 1))))
        precedence_widen(ctx.doc, template_level(ctx.reg, "times", kTimesLevel), Assoc::Left, ctx.reg);
    std::size_t g = split_at_caret(ctx.doc, line);
    auto& items = items_at(ctx.doc, line);
    if (g > 0 && is_operand(items[g - 1])) {
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(g), make_invisible_times(ctx.reg));
        ++g;
    }
    return g;
}

std::vector<DocNode> render_product(const std::string& letters, const TemplateRegistry& reg)
{
    std::vector<DocNode> out;
    if (letters.empty())
        return out;
    for (const auto& f : letter_factors(letters)) {
        if (!out.empty())
            out.push_back(make_invisible_times(reg));
        if (f.power == 1) {
            out.push_back(DocNode::text_token(f.letter));
            continue;
        }
        DocNode p = reg.instantiate("power");
        std::size_t k = 0;
        for (auto& c : p.children) {
            if (c.kind != NodeKind::Slot)
                continue;
            c.children.front().children.push_back(DocNode::text_token(k == 0 ? f.letter : std::to_string(f.power)));
            ++k;
        }
        out.push_back(std::move(p));
    }
    return out;
}

/// Replaces the run's items with `items`; returns the gap after them.
std::size_t rerender(Ctx& ctx, LetterRun& run, std::vector<DocNode> items)
{
    auto& line = items_at(ctx.doc, run.line);
    line.erase(line.begin() + static_cast<std::ptrdiff_t>(run.start),
               line.begin() + static_cast<std::ptrdiff_t>(run.start + run.count));
    run.count = items.size();
    line.insert(line.begin() + static_cast<std::ptrdiff_t>(run.start), std::make_move_iterator(items.begin()),
                std::make_move_iterator(items.end()));
    return run.start + run.count;
}

/// Commits the run's pending letters as a function application; the
/// caret moves into its argument and the run ends.
EditResult commit_function(Ctx& ctx, LetterRun run, const std::string& name)
{
    std::string head = run.letters.substr(0, run.letters.size() - name.size());
    std::vector<DocNode> items = render_product(head, ctx.reg);
    if (!items.empty())
        items.push_back(make_invisible_times(ctx.reg));
    items.push_back(ctx.reg.instantiate(ctx.reg.by_function(name)->id));
    std::size_t end = rerender(ctx, run, std::move(items));
    Path fpath = child(run.line, end - 1);
    ctx.session.set_letter_run(std::nullopt);
    Path arg = entry_line(ctx.doc, fpath, false);
    settle_gap(ctx.doc, arg, 0);
    return applied();
}

bool run_is_live(const Ctx& ctx, const LetterRun& run)
{
    if (!ctx.doc.contains(run.line))
        return false;
    Path line;
    auto gap = caret_gap(ctx.doc, line);
    return gap && line == run.line && *gap == run.start + run.count
        && run.start + run.count <= ctx.doc.node_at(run.line).children.size();
}

EditResult type_letter(Ctx& ctx, const std::string& ch)
{
    std::optional<LetterRun> live = ctx.session.letter_run();
    if (live && !run_is_live(ctx, *live))
        live.reset();
    if (!live) {
        Path line;
        auto gap = caret_gap(ctx.doc, line);
        if (!gap)
            return type_text(ctx, ch);
        std::size_t g = open_product_gap(ctx, line);
        auto& items = items_at(ctx.doc, line);
        if (g < items.size() && is_operand(items[g]))
            items.insert(items.begin() + static_cast<std::ptrdiff_t>(g), make_invisible_times(ctx.reg));
        live = LetterRun{line, g, 0, {}, 0};
    }
    LetterRun run = *live;
    std::string buffer = utf8_suffix(run.letters, run.pending) + ch;
    run.letters += ch;
    if (ctx.reg.is_function_prefix(buffer)) {
        run.pending = utf8_length(buffer);
        if (ctx.reg.by_function(buffer) && !ctx.reg.has_longer_function(buffer))
            return commit_function(ctx, run, buffer);
    } else {
        std::string prev = utf8_suffix(run.letters.substr(0, run.letters.size() - ch.size()), run.pending);
        if (!prev.empty() && ctx.reg.by_function(prev)) {
            // A complete name followed by a letter that extends nothing.
            run.letters.resize(run.letters.size() - ch.size());
            EditResult r = commit_function(ctx, run, prev);
            type_letter(ctx, ch);
            return r;
        }
        run.pending = ctx.reg.is_function_prefix(ch) ? 1 : 0;
    }
    std::size_t end = rerender(ctx, run, render_product(run.letters, ctx.reg));
    ctx.session.set_letter_run(run);
    settle_gap(ctx.doc, run.line, end);
    return applied();
}

/// Items before `gap` that bind at least as tightly as division: the
/// numerator taken by a typed '/'.
std::size_t numerator_start(const std::vector<DocNode>& items, std::size_t gap, const TemplateRegistry& reg)
{
    const int div = template_level(reg, "divide", kTimesLevel);
    std::size_t i = gap;
    while (i > 0) {
        const DocNode& n = items[i - 1];
        if (is_operand(n)) {
            --i;
            continue;
        }
        if (is_pending_bracket(n))
            break;
        if (is_noop(n)) {
            if (n.level < div)
                break;
            --i;
            continue;
        }
        if (!is_operator_leaf(n))
            break;
        bool unary = i == 1 || !is_operand(items[i - 2]);
        int level = n.text == "-" && unary ? 5 : 0;
        if (!level) {
            const Template* t = reg.by_glyph(n.text);
            level = is_invisible(n) ? template_level(reg, "times", kTimesLevel) : (t ? t->precedence : 0);
        }
        if (level < div)
            break;
        --i;
    }
    // An operator cannot open the numerator.
    while (i < gap && is_operator_leaf(items[i]) && !(items[i].text == "-"))
        ++i;
    return i;
}

EditResult type_divide(Ctx& ctx, const Template& t)
{
    precedence_widen(ctx.doc, t.precedence, Assoc::Left, ctx.reg);
    Path line;
    std::size_t g = split_at_caret(ctx.doc, line);
    auto& items = items_at(ctx.doc, line);
    std::size_t b = numerator_start(items, g, ctx.reg);
    DocNode f = ctx.reg.instantiate(t.id);
    for (auto& c : f.children) {
        if (c.kind == NodeKind::Slot) {
            auto& num = c.children.front().children;
            for (std::size_t j = b; j < g; ++j)
                num.push_back(std::move(items[j]));
            break;
        }
    }
    bool took = g > b;
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(b), items.begin() + static_cast<std::ptrdiff_t>(g));
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(b), std::move(f));
    Path fpath = child(line, b);
    settle_gap(ctx.doc, line, b + 1);
    const DocNode& placed = ctx.doc.node_at(fpath);
    Path target = slot_line(fpath, placed, took ? 1 : 0);
    settle_gap(ctx.doc, target, 0);
    return applied();
}

} // namespace

EditResult legacy_type(Ctx& ctx, const std::string& ch)
{
    if (is_letter(ch))
        return type_letter(ctx, ch);
    ctx.session.set_letter_run(std::nullopt);
    if (is_digit(ch) || ch == ".") {
        Path line;
        auto gap = caret_gap(ctx.doc, line);
        if (!gap)
            return type_text(ctx, ch);
        const auto& items = ctx.doc.node_at(line).children;
        if (*gap > 0 && is_operand(items[*gap - 1]) && !is_number_text(items[*gap - 1])) {
            std::size_t g = open_product_gap(ctx, line);
            auto& its = items_at(ctx.doc, line);
            its.insert(its.begin() + static_cast<std::ptrdiff_t>(g), DocNode::text_token(ch));
            settle(ctx.doc, Spot{line, g, 1, true});
            return applied();
        }
        return type_text(ctx, ch);
    }
    const Template* t = ctx.reg.by_operator(ch);
    if (!t)
        return type_text(ctx, ch);
    if (t->is_infix()) {
        if (auto r = try_fill(ctx, *t))
            return *r;
        if (auto r = try_auto_replace(ctx, ch))
            return *r;
        Path line;
        auto gap = caret_gap(ctx.doc, line);
        bool prefix = gap && (*gap == 0 || !is_operand(ctx.doc.node_at(child(line, *gap - 1))));
        if (!prefix)
            precedence_widen(ctx.doc, t->precedence, t->right_associative() ? Assoc::Right : Assoc::Left, ctx.reg);
        return type_operator(ctx, *t, ch);
    }
    if (auto r = try_auto_replace(ctx, ch))
        return *r;
    if (t->content_tag == "divide")
        return type_divide(ctx, *t);
    precedence_widen(ctx.doc, t->precedence, t->right_associative() ? Assoc::Right : Assoc::Left, ctx.reg);
    return insert_structure(ctx, *t, true);
}

} // namespace semedit::detail
