#include "semedit/document.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <sstream>

namespace semedit {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::PathInvalid: return "PathInvalid";
    case ErrorCode::SnapshotForeign: return "SnapshotForeign";
    case ErrorCode::NoHistory: return "NoHistory";
    case ErrorCode::DefinitionSyntax: return "DefinitionSyntax";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::XmlSyntax: return "XmlSyntax";
    case ErrorCode::UnsupportedElement: return "UnsupportedElement";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::ScriptSyntax: return "ScriptSyntax";
    case ErrorCode::ProtocolError: return "ProtocolError";
    }
    return "Unknown";
}

namespace {
std::string format_error(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
{
    std::string out(to_string(code));
    if (line != 0) {
        out += " at " + std::to_string(line);
        if (column != 0)
            out += ":" + std::to_string(column);
    }
    if (!message.empty())
        out += ": " + message;
    return out;
}
} // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(format_error(code, message, line, column))
    , code_(code)
    , line_(line)
    , column_(column)
    , message_(message)
{
}

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

std::size_t utf8_length(std::string_view s) noexcept
{
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80)
            ++n;
    return n;
}

std::size_t utf8_byte_offset(std::string_view s, std::size_t scalar_index) noexcept
{
    std::size_t seen = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
            if (seen == scalar_index)
                return i;
            ++seen;
        }
    }
    return s.size();
}

// ---------------------------------------------------------------------------
// Node helpers
// ---------------------------------------------------------------------------

std::string_view to_string(NodeKind kind) noexcept
{
    switch (kind) {
    case NodeKind::Slot: return "Slot";
    case NodeKind::Line: return "Line";
    case NodeKind::Formula: return "Formula";
    case NodeKind::Text: return "Text";
    }
    return "?";
}

std::string to_string(const ContentRole& role)
{
    switch (role.kind) {
    case RoleKind::None: return "None";
    case RoleKind::Number: return "Number";
    case RoleKind::Identifier: return "Identifier";
    case RoleKind::Operator: return "Operator(" + role.symbol + ")";
    case RoleKind::Function: return "Function(" + role.symbol + ")";
    case RoleKind::Apply: return "Apply";
    case RoleKind::BracketPair: return "BracketPair";
    case RoleKind::NoOp: return "NoOp";
    case RoleKind::AutoDetect: return "AutoDetect";
    }
    return "?";
}

DocNode DocNode::slot()
{
    DocNode n;
    n.kind = NodeKind::Slot;
    n.presentation_tag = "mrow";
    return n;
}

DocNode DocNode::line()
{
    DocNode n;
    n.kind = NodeKind::Line;
    n.presentation_tag = "mrow";
    return n;
}

DocNode DocNode::text_token(std::string chars, ContentRole role)
{
    DocNode n;
    n.kind = NodeKind::Text;
    n.text = std::move(chars);
    if (role.kind == RoleKind::AutoDetect)
        n.attrs.set(NodeAttr::AutoDetect);
    n.presentation_tag = role.kind == RoleKind::Number ? "mn" : "mi";
    n.role = std::move(role);
    return n;
}

bool is_operator_leaf(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula && n.children.empty()
        && (n.role.kind == RoleKind::Operator || n.role.kind == RoleKind::NoOp);
}

bool is_noop(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula && n.role.kind == RoleKind::NoOp;
}

bool is_invisible(const DocNode& n) noexcept
{
    return is_operator_leaf(n) && n.text == kInvisibleTimes;
}

bool is_pending_open(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula && n.children.empty() && n.role.kind == RoleKind::BracketPair && n.text == "(";
}

bool is_pending_close(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula && n.children.empty() && n.role.kind == RoleKind::BracketPair && n.text == ")";
}

bool is_pending_bracket(const DocNode& n) noexcept
{
    return is_pending_open(n) || is_pending_close(n);
}

bool is_bracket_pair(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula && n.role.kind == RoleKind::BracketPair && !n.children.empty();
}

bool is_structure(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Formula
        && std::any_of(n.children.begin(), n.children.end(), [](const DocNode& c) { return c.kind == NodeKind::Slot; });
}

bool is_operand(const DocNode& n) noexcept
{
    return n.kind == NodeKind::Text || is_structure(n);
}

DocNode make_pending_bracket(bool open)
{
    DocNode n;
    n.kind = NodeKind::Formula;
    n.role = ContentRole::bracket_pair();
    n.attrs = {NodeAttr::NoMove};
    n.presentation_tag = "mo";
    n.template_id = "bracket-round";
    n.text = open ? "(" : ")";
    return n;
}

DocNode make_noop(int level)
{
    DocNode n;
    n.kind = NodeKind::Formula;
    n.role = ContentRole::noop();
    n.attrs = {NodeAttr::ReadOnly, NodeAttr::NoMove};
    n.presentation_tag = "mo";
    n.text = std::string(kBlackBox);
    n.level = level;
    return n;
}

DocNode make_glyph_leaf(std::string glyph)
{
    DocNode n;
    n.kind = NodeKind::Formula;
    n.attrs = {NodeAttr::ReadOnly, NodeAttr::NoMove};
    n.presentation_tag = "mo";
    n.text = std::move(glyph);
    return n;
}

// ---------------------------------------------------------------------------
// Caret addresses
// ---------------------------------------------------------------------------

std::string CaretPosition::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i)
            out += '/';
        out += std::to_string(path[i]);
    }
    out += ':';
    out += std::to_string(offset);
    return out;
}

CaretPosition CaretPosition::parse(std::string_view text)
{
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0)
        throw Error(ErrorCode::PathInvalid, "caret must look like 0/0/2:1, got '" + std::string(text) + "'");
    auto parse_num = [&](std::string_view part) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty())
            throw Error(ErrorCode::PathInvalid, "bad index '" + std::string(part) + "' in '" + std::string(text) + "'");
        return v;
    };
    CaretPosition pos;
    std::string_view p = text.substr(0, colon);
    while (!p.empty()) {
        auto slash = p.find('/');
        pos.path.push_back(parse_num(p.substr(0, slash)));
        if (slash == std::string_view::npos)
            break;
        p.remove_prefix(slash + 1);
        if (p.empty())
            throw Error(ErrorCode::PathInvalid, "trailing '/' in '" + std::string(text) + "'");
    }
    pos.offset = parse_num(text.substr(colon + 1));
    return pos;
}

namespace {

const DocNode* lookup(const DocNode& root, const Path& path) noexcept
{
    if (path.empty() || path[0] != 0)
        return nullptr;
    const DocNode* n = &root;
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i] >= n->children.size())
            return nullptr;
        n = &n->children[path[i]];
    }
    return n;
}

Path child_path(const Path& p, std::size_t i)
{
    Path out = p;
    out.push_back(i);
    return out;
}

// Canonical caret for gap `g` of `line`, after invisible-operator merging.
CaretPosition gap_caret(const DocNode& line, const Path& line_path, std::size_t g)
{
    const auto& items = line.children;
    while (g > 0 && is_invisible(items[g - 1]))
        --g;
    if (g > 0 && items[g - 1].kind == NodeKind::Text)
        return {child_path(line_path, g - 1), utf8_length(items[g - 1].text)};
    if (g < items.size() && items[g].kind == NodeKind::Text)
        return {child_path(line_path, g), 0};
    return {line_path, g};
}

void collect_line_stops(const DocNode& line, const Path& line_path, std::vector<CaretPosition>& out);

void collect_structure_stops(const DocNode& formula, const Path& formula_path, std::vector<CaretPosition>& out)
{
    for (std::size_t k = 0; k < formula.children.size(); ++k) {
        const auto& slot = formula.children[k];
        if (slot.kind != NodeKind::Slot || slot.attrs.has(NodeAttr::NoMove))
            continue;
        Path slot_path = child_path(formula_path, k);
        for (std::size_t li = 0; li < slot.children.size(); ++li)
            collect_line_stops(slot.children[li], child_path(slot_path, li), out);
    }
}

void collect_line_stops(const DocNode& line, const Path& line_path, std::vector<CaretPosition>& out)
{
    const auto& items = line.children;
    for (std::size_t g = 0; g <= items.size(); ++g) {
        if (!(g > 0 && is_invisible(items[g - 1])))
            out.push_back(gap_caret(line, line_path, g));
        if (g == items.size())
            break;
        const auto& item = items[g];
        if (item.kind == NodeKind::Text) {
            auto len = utf8_length(item.text);
            for (std::size_t off = 1; off < len; ++off)
                out.push_back({child_path(line_path, g), off});
        } else if (is_structure(item) && !item.attrs.has(NodeAttr::NoMove)) {
            collect_structure_stops(item, child_path(line_path, g), out);
        }
    }
}

std::atomic<std::uint64_t> g_next_lineage{1};

} // namespace

Spot to_spot(const DocNode& root, const CaretPosition& caret)
{
    const DocNode* n = lookup(root, caret.path);
    if (!n)
        throw Error(ErrorCode::PathInvalid, caret.to_string());
    Spot s;
    if (n->kind == NodeKind::Text) {
        s.line = Path(caret.path.begin(), caret.path.end() - 1);
        s.index = caret.path.back();
        s.offset = caret.offset;
        s.in_text = true;
        if (caret.offset > utf8_length(n->text))
            throw Error(ErrorCode::PathInvalid, "offset beyond text: " + caret.to_string());
    } else if (n->kind == NodeKind::Line) {
        s.line = caret.path;
        s.index = caret.offset;
        if (caret.offset > n->children.size())
            throw Error(ErrorCode::PathInvalid, "offset beyond line: " + caret.to_string());
    } else if (n->kind == NodeKind::Slot) {
        if (caret.offset >= n->children.size())
            throw Error(ErrorCode::PathInvalid, "slot offset out of range: " + caret.to_string());
        s.line = child_path(caret.path, caret.offset);
        s.index = 0;
    } else {
        throw Error(ErrorCode::PathInvalid, "caret cannot address a Formula: " + caret.to_string());
    }
    return s;
}

std::optional<std::size_t> boundary_gap(const DocNode& root, const Spot& spot)
{
    if (!spot.in_text)
        return spot.index;
    if (spot.offset == 0)
        return spot.index;
    const DocNode* line = lookup(root, spot.line);
    if (line && spot.offset == utf8_length(line->children.at(spot.index).text))
        return spot.index + 1;
    return std::nullopt;
}

CaretPosition from_spot(const DocNode& root, const Spot& spot)
{
    const DocNode* line = lookup(root, spot.line);
    if (!line || line->kind != NodeKind::Line)
        throw Error(ErrorCode::PathInvalid, "spot does not address a line");
    if (spot.in_text) {
        if (spot.index >= line->children.size() || line->children[spot.index].kind != NodeKind::Text)
            throw Error(ErrorCode::PathInvalid, "spot does not address a text item");
        auto len = utf8_length(line->children[spot.index].text);
        if (spot.offset > 0 && spot.offset < len)
            return {child_path(spot.line, spot.index), spot.offset};
        return gap_caret(*line, spot.line, spot.offset == 0 ? spot.index : spot.index + 1);
    }
    if (spot.index > line->children.size())
        throw Error(ErrorCode::PathInvalid, "gap beyond line end");
    return gap_caret(*line, spot.line, spot.index);
}

CaretPosition canonical_caret(const DocNode& root, const CaretPosition& caret)
{
    return from_spot(root, to_spot(root, caret));
}

// ---------------------------------------------------------------------------
// Document
// ---------------------------------------------------------------------------

Document::Document()
    : root_(DocNode::slot())
    , caret_{{0, 0}, 0}
    , lineage_(g_next_lineage.fetch_add(1))
{
    root_.children.push_back(DocNode::line());
}

const DocNode& Document::node_at(const Path& path) const
{
    const DocNode* n = lookup(root_, path);
    if (!n)
        throw Error(ErrorCode::PathInvalid, CaretPosition{path, 0}.to_string());
    return *n;
}

DocNode& Document::mutable_node_at(const Path& path)
{
    return const_cast<DocNode&>(node_at(path));
}

bool Document::contains(const Path& path) const noexcept
{
    return lookup(root_, path) != nullptr;
}

void Document::set_caret(const CaretPosition& caret)
{
    caret_ = canonical_caret(root_, caret);
}

void Document::set_selection(std::optional<Selection> sel)
{
    if (sel) {
        sel->anchor = canonical_caret(root_, sel->anchor);
        sel->focus = canonical_caret(root_, sel->focus);
    }
    selection_ = std::move(sel);
}

std::optional<ItemRange> Document::normalized_selection() const
{
    if (!selection_)
        return std::nullopt;
    const auto& a = selection_->anchor.path;
    const auto& b = selection_->focus.path;
    std::size_t common = 0;
    while (common < a.size() && common < b.size() && a[common] == b[common])
        ++common;
    // Deepest Line on the shared prefix.
    std::optional<std::size_t> line_len;
    for (std::size_t len = common; len >= 1; --len) {
        const DocNode* n = lookup(root_, Path(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len)));
        if (n && n->kind == NodeKind::Line) {
            line_len = len;
            break;
        }
    }
    if (!line_len)
        return std::nullopt;
    Path line_path(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(*line_len));
    const DocNode& line = *lookup(root_, line_path);

    auto interval = [&](const CaretPosition& c) -> std::pair<std::size_t, std::size_t> {
        if (c.path.size() == *line_len)
            return {c.offset, c.offset};
        std::size_t i = c.path[*line_len];
        if (c.path.size() == *line_len + 1 && line.children[i].kind == NodeKind::Text) {
            auto len = utf8_length(line.children[i].text);
            if (c.offset == 0)
                return {i, i};
            if (c.offset == len)
                return {i + 1, i + 1};
        }
        return {i, i + 1};
    };
    auto [alo, ahi] = interval(selection_->anchor);
    auto [blo, bhi] = interval(selection_->focus);
    ItemRange r{line_path, std::min(alo, blo), std::max(ahi, bhi)};
    if (r.begin >= r.end)
        return std::nullopt;
    return r;
}

std::vector<CaretPosition> Document::caret_stops() const
{
    std::vector<CaretPosition> out;
    for (std::size_t li = 0; li < root_.children.size(); ++li)
        collect_line_stops(root_.children[li], {0, li}, out);
    return out;
}

CaretPosition Document::caret_move(Direction dir)
{
    CaretPosition cur = canonical_caret(root_, caret_);
    switch (dir) {
    case Direction::Left:
    case Direction::Right: {
        auto stops = caret_stops();
        auto it = std::find(stops.begin(), stops.end(), cur);
        if (it == stops.end())
            break;
        if (dir == Direction::Right && it + 1 != stops.end())
            cur = *(it + 1);
        else if (dir == Direction::Left && it != stops.begin())
            cur = *(it - 1);
        break;
    }
    case Direction::Home:
    case Direction::End: {
        Spot s = to_spot(root_, cur);
        const DocNode& line = node_at(s.line);
        cur = from_spot(root_, Spot{s.line, dir == Direction::Home ? 0 : line.children.size(), 0, false});
        break;
    }
    case Direction::Up:
    case Direction::Down: {
        Spot s = to_spot(root_, cur);
        std::size_t ordinal = s.index;
        Path slot_path(s.line.begin(), s.line.end() - 1);
        std::size_t li = s.line.back();
        const DocNode& slot = node_at(slot_path);
        std::optional<Path> target;
        if (dir == Direction::Up && li > 0)
            target = child_path(slot_path, li - 1);
        else if (dir == Direction::Down && li + 1 < slot.children.size())
            target = child_path(slot_path, li + 1);
        else if (slot_path.size() >= 2) {
            // Inside a structure: step to the neighbouring slot of the same formula.
            Path formula_path(slot_path.begin(), slot_path.end() - 1);
            const DocNode& formula = node_at(formula_path);
            std::size_t k = slot_path.back();
            if (dir == Direction::Up) {
                for (std::size_t j = k; j-- > 0;)
                    if (formula.children[j].kind == NodeKind::Slot && !formula.children[j].children.empty()) {
                        target = Path(child_path(child_path(formula_path, j), formula.children[j].children.size() - 1));
                        break;
                    }
            } else {
                for (std::size_t j = k + 1; j < formula.children.size(); ++j)
                    if (formula.children[j].kind == NodeKind::Slot && !formula.children[j].children.empty()) {
                        target = child_path(child_path(formula_path, j), 0);
                        break;
                    }
            }
        }
        if (target) {
            const DocNode& line = node_at(*target);
            cur = from_spot(root_, Spot{*target, std::min(ordinal, line.children.size()), 0, false});
        }
        break;
    }
    }
    caret_ = cur;
    return caret_;
}

Snapshot Document::snapshot() const
{
    return Snapshot{root_, caret_, selection_, lineage_, next_sequence_, {}};
}

void Document::restore(const Snapshot& snap)
{
    if (snap.lineage != lineage_)
        throw Error(ErrorCode::SnapshotForeign,
            "snapshot lineage " + std::to_string(snap.lineage) + " does not match document " + std::to_string(lineage_));
    root_ = snap.tree;
    caret_ = snap.caret;
    selection_ = snap.selection;
}

void Document::record(Snapshot before)
{
    before.sequence = next_sequence_++;
    undo_.push_back(std::move(before));
    redo_.clear();
}

Snapshot Document::undo(std::string current_state)
{
    if (undo_.empty())
        throw Error(ErrorCode::NoHistory, "nothing to undo");
    Snapshot cur = snapshot();
    cur.session_state = std::move(current_state);
    redo_.push_back(std::move(cur));
    Snapshot s = std::move(undo_.back());
    undo_.pop_back();
    restore(s);
    return s;
}

Snapshot Document::redo(std::string current_state)
{
    if (redo_.empty())
        throw Error(ErrorCode::NoHistory, "nothing to redo");
    Snapshot cur = snapshot();
    cur.session_state = std::move(current_state);
    undo_.push_back(std::move(cur));
    Snapshot s = std::move(redo_.back());
    redo_.pop_back();
    restore(s);
    return s;
}

void Document::repair_caret()
{
    try {
        caret_ = canonical_caret(root_, caret_);
        return;
    } catch (const Error&) {
    }
    // Walk up to the nearest surviving Line and clamp.
    Path p = caret_.path;
    while (!p.empty()) {
        const DocNode* n = lookup(root_, p);
        if (n && n->kind == NodeKind::Line) {
            caret_ = from_spot(root_, Spot{p, n->children.size(), 0, false});
            return;
        }
        p.pop_back();
    }
    caret_ = from_spot(root_, Spot{{0, 0}, 0, 0, false});
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

void validate_node(const DocNode& n, const std::string& where, bool in_line, std::vector<std::string>& problems)
{
    auto fail = [&](const std::string& what) { problems.push_back(where + ": " + what); };
    switch (n.kind) {
    case NodeKind::Slot:
        if (n.children.empty())
            fail("slot without lines");
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (n.children[i].kind != NodeKind::Line)
                fail("slot child " + std::to_string(i) + " is not a Line");
            validate_node(n.children[i], where + "/" + std::to_string(i), false, problems);
        }
        break;
    case NodeKind::Line:
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const auto& c = n.children[i];
            if (c.kind != NodeKind::Formula && c.kind != NodeKind::Text)
                fail("line child " + std::to_string(i) + " is not Formula/Text");
            if (i > 0 && c.kind == NodeKind::Text && n.children[i - 1].kind == NodeKind::Text)
                fail("adjacent text tokens at " + std::to_string(i));
            validate_node(c, where + "/" + std::to_string(i), true, problems);
        }
        break;
    case NodeKind::Text:
        if (!n.children.empty())
            fail("text node with children");
        if (n.text.empty())
            fail("empty text node");
        break;
    case NodeKind::Formula:
        if (n.role.kind == RoleKind::NoOp && (!n.children.empty() || !in_line))
            fail("NoOp outside an operator position");
        if (n.children.empty()) {
            if (is_operator_leaf(n) && !n.attrs.has(NodeAttr::ReadOnly))
                fail("operator leaf not ReadOnly");
            if (n.text.empty())
                fail("leaf formula without glyph");
            break;
        }
        if (!is_structure(n))
            fail("formula with children but no slots");
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const auto& c = n.children[i];
            if (c.kind == NodeKind::Slot) {
                if (c.children.size() != 1)
                    fail("structure slot must hold exactly one line");
                validate_node(c, where + "/" + std::to_string(i), false, problems);
            } else if (c.kind == NodeKind::Formula && c.children.empty()) {
                if (!c.attrs.has(NodeAttr::ReadOnly) || !c.attrs.has(NodeAttr::NoMove))
                    fail("scaffold glyph must be ReadOnly+NoMove");
                if (c.role.kind == RoleKind::NoOp)
                    fail("NoOp inside scaffold");
            } else {
                fail("formula child " + std::to_string(i) + " must be a Slot or glyph leaf");
            }
        }
        break;
    }
}

} // namespace

std::vector<std::string> validate_tree(const DocNode& root)
{
    std::vector<std::string> problems;
    if (root.kind != NodeKind::Slot)
        problems.push_back("root is not a Slot");
    validate_node(root, "0", false, problems);
    return problems;
}

std::vector<std::string> validate(const Document& doc)
{
    auto problems = validate_tree(doc.root());
    try {
        auto c = canonical_caret(doc.root(), doc.caret());
        if (!(c == doc.caret()))
            problems.push_back("caret " + doc.caret().to_string() + " is not canonical");
    } catch (const Error& e) {
        problems.push_back(std::string("caret invalid: ") + e.what());
    }
    return problems;
}

std::string debug_dump(const DocNode& n)
{
    std::ostringstream os;
    os << to_string(n.kind);
    if (n.role.kind != RoleKind::None)
        os << '<' << to_string(n.role) << '>';
    if (n.head.kind != RoleKind::None)
        os << "{head=" << to_string(n.head) << '}';
    if (!n.template_id.empty())
        os << '#' << n.template_id;
    if (!n.text.empty())
        os << '"' << n.text << '"';
    if (n.attrs.bits())
        os << "[attrs=" << int(n.attrs.bits()) << ']';
    if (!n.children.empty()) {
        os << '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i)
                os << ' ';
            os << debug_dump(n.children[i]);
        }
        os << ')';
    }
    return os.str();
}

} // namespace semedit
