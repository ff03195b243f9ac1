#include "edit_support.hpp"

#include <cctype>

namespace semedit::detail {

Path child(const Path& p, std::size_t i)
{
    Path out = p;
    out.push_back(i);
    return out;
}

Path parent(const Path& p)
{
    return Path(p.begin(), p.end() - 1);
}

std::vector<DocNode>& items_at(Document& doc, const Path& line)
{
    return doc.mutable_node_at(line).children;
}

Spot caret_spot(const Document& doc)
{
    return to_spot(doc.root(), doc.caret());
}

std::optional<std::size_t> caret_gap(const Document& doc, Path& line)
{
    Spot s = caret_spot(doc);
    line = s.line;
    return boundary_gap(doc.root(), s);
}

std::size_t split_at_caret(Document& doc, Path& line)
{
    Spot s = caret_spot(doc);
    line = s.line;
    if (auto g = boundary_gap(doc.root(), s))
        return *g;
    auto& items = items_at(doc, line);
    DocNode& t = items[s.index];
    std::size_t cut = utf8_byte_offset(t.text, s.offset);
    DocNode right = t;
    right.text = t.text.substr(cut);
    t.text.resize(cut);
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(s.index + 1), std::move(right));
    return s.index + 1;
}

namespace {

DocNode merged(const DocNode& a, const DocNode& b)
{
    if (a.role == b.role) {
        DocNode m = a;
        m.text += b.text;
        return m;
    }
    return DocNode::text_token(a.text + b.text);
}

} // namespace

void settle(Document& doc, Spot spot)
{
    auto& items = items_at(doc, spot.line);
    for (std::size_t i = 1; i < items.size();) {
        if (items[i - 1].kind != NodeKind::Text || items[i].kind != NodeKind::Text) {
            ++i;
            continue;
        }
        std::size_t left_len = utf8_length(items[i - 1].text);
        if (spot.index == i) {
            if (spot.in_text)
                spot.offset += left_len;
            else
                spot.offset = left_len;
            spot.in_text = true;
            spot.index = i - 1;
        } else if (spot.index > i) {
            --spot.index;
        }
        items[i - 1] = merged(items[i - 1], items[i]);
        items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
    }
    doc.set_caret(from_spot(doc.root(), spot));
}

std::size_t insert_items(Document& doc, const Path& line, std::size_t gap, std::vector<DocNode> items, bool separate)
{
    auto& dst = items_at(doc, line);
    if (items.empty())
        return gap;
    if (separate) {
        if (gap > 0 && is_operand(dst[gap - 1]) && is_operand(items.front()))
            items.insert(items.begin(), make_noop(4));
        if (gap < dst.size() && is_operand(dst[gap]) && is_operand(items.back()))
            items.push_back(make_noop(4));
    }
    std::size_t n = items.size();
    dst.insert(dst.begin() + static_cast<std::ptrdiff_t>(gap), std::make_move_iterator(items.begin()),
               std::make_move_iterator(items.end()));
    return gap + n;
}

void delete_range(Ctx& ctx, const ItemRange& range)
{
    auto& items = items_at(ctx.doc, range.line);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(range.begin),
                items.begin() + static_cast<std::ptrdiff_t>(range.end));
    std::size_t gap = range.begin;
    if (gap > 0 && gap < items.size() && is_operand(items[gap - 1]) && is_operand(items[gap])) {
        items.insert(items.begin() + static_cast<std::ptrdiff_t>(gap), make_noop(4));
        ctx.event("OperatorBlackBoxed", "", std::string(kBlackBox));
        ++gap;
    }
    ctx.doc.set_selection(std::nullopt);
    settle_gap(ctx.doc, range.line, gap);
}

std::size_t slot_count(const DocNode& f)
{
    std::size_t n = 0;
    for (const auto& c : f.children)
        if (c.kind == NodeKind::Slot)
            ++n;
    return n;
}

Path slot_line(const Path& formula, const DocNode& f, std::size_t k)
{
    for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (f.children[i].kind != NodeKind::Slot)
            continue;
        if (k-- == 0)
            return child(child(formula, i), 0);
    }
    throw Error(ErrorCode::PathInvalid, "structure has no such slot");
}

bool is_last_slot(const DocNode& f, std::size_t child_index)
{
    for (std::size_t i = child_index + 1; i < f.children.size(); ++i)
        if (f.children[i].kind == NodeKind::Slot)
            return false;
    return true;
}

Path entry_line(const Document& doc, const Path& formula, bool first_empty)
{
    const DocNode& f = doc.node_at(formula);
    if (first_empty) {
        for (std::size_t k = 0; k < slot_count(f); ++k) {
            Path p = slot_line(formula, f, k);
            if (doc.node_at(p).children.empty())
                return p;
        }
    }
    return slot_line(formula, f, 0);
}

bool is_letter(const std::string& ch)
{
    if (ch.size() == 1)
        return std::isalpha(static_cast<unsigned char>(ch[0])) != 0;
    // Greek and other non-ASCII letters count as letters; symbols do not.
    return ch.size() > 1 && ch != kEmptySlot && ch != kBlackBox && ch != kInvisibleTimes
        && static_cast<unsigned char>(ch[0]) >= 0xCE && static_cast<unsigned char>(ch[0]) <= 0xCF;
}

bool is_digit(const std::string& ch)
{
    return ch.size() == 1 && std::isdigit(static_cast<unsigned char>(ch[0]));
}

bool is_text_char(const std::string& ch)
{
    if (ch.empty())
        return false;
    if (is_letter(ch) || is_digit(ch) || ch == ".")
        return true;
    if (ch.size() == 1) {
        auto c = static_cast<unsigned char>(ch[0]);
        return std::isgraph(c) && c != '<' && c != '>' && c != '&' && c != '(' && c != ')';
    }
    return ch != kEmptySlot && ch != kBlackBox && ch != kInvisibleTimes && ch != "⁡";
}

} // namespace semedit::detail
