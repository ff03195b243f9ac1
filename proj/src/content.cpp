// Document -> Content MathML: token resolution, precedence grouping of
// Line items, and canonical serialization.

#include "semedit/mathml.hpp"

#include <algorithm>
#include <cctype>

namespace semedit {

ContentNode ContentNode::csymbol(std::string name)
{
    ContentNode n = token("csymbol", std::move(name));
    n.attributes.emplace_back("cd", "semedit");
    return n;
}

std::string_view ContentNode::attribute(std::string_view name) const
{
    for (const auto& [k, v] : attributes)
        if (k == name)
            return v;
    return {};
}

ContentRole resolve_auto_detect(std::string_view raw, const TemplateRegistry& reg)
{
    std::size_t digits = 0, dots = 0;
    bool numeric = !raw.empty();
    for (char c : raw) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            ++digits;
        else if (c == '.')
            ++dots;
        else
            numeric = false;
    }
    if (numeric && digits > 0 && dots <= 1)
        return ContentRole::number();
    if (reg.by_function(raw))
        return ContentRole::function(std::string(raw));
    if (const Template* t = reg.by_glyph(raw))
        return t->head_role();
    return ContentRole::identifier();
}

namespace {

// ---------------------------------------------------------------------------
// Precedence grouping over the flat items of a Line
// ---------------------------------------------------------------------------

constexpr int kJuxtapositionLevel = 4;
constexpr int kUnaryMinusLevel = 5;
constexpr int kFunctionLevel = 7;

ContentNode head_element(const Template& t)
{
    if (t.family == RoleFamily::CSymbol)
        return ContentNode::csymbol(t.content_tag);
    return ContentNode::element(t.content_tag);
}

ContentNode structure_content(const DocNode& f, const TemplateRegistry& reg);

ContentNode text_content(const DocNode& t, const TemplateRegistry& reg)
{
    ContentRole role = t.role.kind == RoleKind::AutoDetect ? resolve_auto_detect(t.text, reg) : t.role;
    switch (role.kind) {
    case RoleKind::Number:
        return ContentNode::token("cn", t.text);
    case RoleKind::Function:
        if (const Template* fn = reg.by_function(role.symbol))
            return head_element(*fn);
        [[fallthrough]];
    default:
        return ContentNode::token("ci", t.text);
    }
}

class Grouper {
public:
    Grouper(const std::vector<DocNode>& items, const TemplateRegistry& reg)
        : reg_(reg)
    {
        tokenize(items);
    }

    ContentNode run()
    {
        if (toks_.empty())
            return ContentNode::placeholder();
        ContentNode out = expr(0);
        return out;
    }

private:
    enum class Kind { Operand, Op, Open, Close, Func };
    struct Tok {
        Kind kind;
        const DocNode* node = nullptr;
        int level = 0;
        const char* unbalanced = nullptr; // Open/Close tokens standing in for a missing partner
    };

    void tokenize(const std::vector<DocNode>& items)
    {
        std::vector<Tok> body;
        std::vector<std::size_t> open_stack;
        std::size_t unmatched_closes = 0;
        for (const auto& it : items) {
            if (is_pending_open(it)) {
                open_stack.push_back(body.size());
                body.push_back({Kind::Open, &it});
            } else if (is_pending_close(it)) {
                if (!open_stack.empty()) {
                    open_stack.pop_back();
                    body.push_back({Kind::Close, &it});
                } else {
                    ++unmatched_closes;
                    body.push_back({Kind::Close, &it, 0, "close"});
                }
            } else if (is_operator_leaf(it)) {
                body.push_back({Kind::Op, &it, op_level(it)});
            } else if (it.kind == NodeKind::Text) {
                ContentRole r = it.role.kind == RoleKind::AutoDetect ? resolve_auto_detect(it.text, reg_) : it.role;
                body.push_back({r.kind == RoleKind::Function ? Kind::Func : Kind::Operand, &it});
            } else {
                body.push_back({Kind::Operand, &it});
            }
        }
        for (std::size_t i : open_stack)
            body[i].unbalanced = "open";
        toks_.assign(unmatched_closes, Tok{Kind::Open, nullptr, 0, "close"});
        toks_.insert(toks_.end(), body.begin(), body.end());
        for (std::size_t i = 0; i < open_stack.size(); ++i)
            toks_.push_back({Kind::Close, nullptr, 0, "open"});
    }

    int op_level(const DocNode& op) const
    {
        if (is_noop(op))
            return op.level;
        if (const Template* t = reg_.find(op.template_id))
            return t->precedence;
        if (const Template* t = reg_.by_glyph(op.text))
            return t->precedence;
        return kJuxtapositionLevel;
    }

    const Template* op_template(const DocNode& op) const
    {
        if (const Template* t = reg_.find(op.template_id))
            return t;
        return reg_.by_glyph(op.text);
    }

    bool at_end() const { return pos_ >= toks_.size(); }
    const Tok& peek() const { return toks_[pos_]; }

    bool starts_operand(const Tok& t) const
    {
        return t.kind == Kind::Operand || t.kind == Kind::Open || t.kind == Kind::Func;
    }

    bool is_prefix_minus(const Tok& t) const
    {
        if (t.kind != Kind::Op || is_noop(*t.node))
            return false;
        const Template* tpl = op_template(*t.node);
        return tpl && tpl->content_tag == "minus";
    }

    ContentNode expr(int min_level)
    {
        ContentNode left = unary();
        while (!at_end()) {
            const Tok& t = peek();
            if (t.kind == Kind::Close)
                break;
            if (t.kind == Kind::Op) {
                if (t.level < min_level)
                    break;
                ++pos_;
                const DocNode& op = *t.node;
                const Template* tpl = is_noop(op) ? nullptr : op_template(op);
                bool right = tpl && tpl->right_associative();
                ContentNode rhs = expr(right ? t.level : t.level + 1);
                left = combine(op, tpl, std::move(left), std::move(rhs));
            } else {
                if (kJuxtapositionLevel < min_level)
                    break;
                ContentNode rhs = expr(kJuxtapositionLevel + 1);
                left = combine_with(head_element(reg_.at("times")), "times", std::move(left), std::move(rhs));
            }
        }
        return left;
    }

    ContentNode unary()
    {
        if (at_end() || peek().kind == Kind::Close)
            return ContentNode::placeholder();
        Tok t = peek();
        switch (t.kind) {
        case Kind::Operand:
            ++pos_;
            return t.node->kind == NodeKind::Text ? text_content(*t.node, reg_) : structure_content(*t.node, reg_);
        case Kind::Open: {
            ++pos_;
            ContentNode inner = expr(0);
            const char* close_tag = nullptr;
            if (!at_end() && peek().kind == Kind::Close) {
                close_tag = peek().unbalanced;
                ++pos_;
            }
            inner.bracketed = true;
            inner.chain = false;
            const char* mark = t.unbalanced ? t.unbalanced : close_tag;
            if (mark) {
                auto it = std::find_if(inner.attributes.begin(), inner.attributes.end(),
                                       [](const auto& a) { return a.first == "semedit:unbalanced"; });
                if (it == inner.attributes.end())
                    inner.attributes.emplace_back("semedit:unbalanced", mark);
                else
                    it->second += std::string(" ") + mark; // innermost bracket first
            }
            return inner;
        }
        case Kind::Func: {
            ++pos_;
            ContentNode fn = text_content(*t.node, reg_);
            if (at_end() || !(starts_operand(peek()) || is_prefix_minus(peek())))
                return fn;
            ContentNode arg = expr(kFunctionLevel + 1);
            ContentNode app = ContentNode::element("apply");
            app.children.push_back(std::move(fn));
            app.children.push_back(std::move(arg));
            return app;
        }
        case Kind::Op:
            if (is_prefix_minus(t)) {
                ++pos_;
                ContentNode operand = expr(kUnaryMinusLevel + 1);
                ContentNode app = ContentNode::element("apply");
                app.children.push_back(ContentNode::element("minus"));
                app.children.push_back(std::move(operand));
                return app;
            }
            return ContentNode::placeholder();
        case Kind::Close:
            break;
        }
        return ContentNode::placeholder();
    }

    ContentNode combine(const DocNode& op, const Template* tpl, ContentNode left, ContentNode right)
    {
        if (is_noop(op) || !tpl)
            return combine_with(ContentNode::csymbol("noop"), "", std::move(left), std::move(right));
        return combine_with(head_element(*tpl), tpl->content_tag, std::move(left), std::move(right));
    }

    static ContentNode combine_with(ContentNode head, std::string_view tag, ContentNode left, ContentNode right)
    {
        bool associative = tag == "plus" || tag == "times";
        if (associative && left.chain && !left.bracketed && left.tag == "apply" && !left.children.empty()
            && left.children.front() == head) {
            left.children.push_back(std::move(right));
            return left;
        }
        ContentNode app = ContentNode::element("apply");
        app.chain = true;
        app.children.push_back(std::move(head));
        app.children.push_back(std::move(left));
        app.children.push_back(std::move(right));
        return app;
    }

    const TemplateRegistry& reg_;
    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

ContentNode structure_content(const DocNode& f, const TemplateRegistry& reg)
{
    std::vector<ContentNode> args;
    for (const auto& c : f.children)
        if (c.kind == NodeKind::Slot)
            args.push_back(c.children.empty() ? ContentNode::placeholder() : line_content(c.children.front(), reg));

    if (is_bracket_pair(f)) {
        ContentNode inner = args.empty() ? ContentNode::placeholder() : std::move(args.front());
        inner.bracketed = true;
        inner.chain = false;
        return inner;
    }
    ContentNode app = ContentNode::element("apply");
    if (const Template* t = reg.find(f.template_id))
        app.children.push_back(head_element(*t));
    else if (f.head.kind == RoleKind::Function)
        app.children.push_back(ContentNode::element(f.head.symbol));
    else
        app.children.push_back(ContentNode::csymbol("noop"));
    for (auto& a : args)
        app.children.push_back(std::move(a));
    return app;
}

void escape_into(std::string& out, std::string_view s)
{
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
}

void write_xml(std::string& out, const ContentNode& n)
{
    out += '<';
    out += n.tag;
    for (const auto& [k, v] : n.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_into(out, v);
        out += '"';
    }
    if (n.children.empty() && n.text.empty()) {
        out += "/>";
        return;
    }
    out += '>';
    escape_into(out, n.text);
    for (const auto& c : n.children)
        write_xml(out, c);
    out += "</";
    out += n.tag;
    out += '>';
}

bool uses_semedit_attributes(const ContentNode& n)
{
    for (const auto& [k, v] : n.attributes)
        if (k.rfind("semedit:", 0) == 0)
            return true;
    for (const auto& c : n.children)
        if (uses_semedit_attributes(c))
            return true;
    return false;
}

} // namespace

ContentNode items_content(const std::vector<DocNode>& items, const TemplateRegistry& reg)
{
    return Grouper(items, reg).run();
}

ContentNode line_content(const DocNode& line, const TemplateRegistry& reg)
{
    return items_content(line.children, reg);
}

std::vector<ContentNode> document_content(const Document& doc, const TemplateRegistry& reg)
{
    std::vector<ContentNode> out;
    for (const auto& line : doc.root().children)
        out.push_back(line_content(line, reg));
    return out;
}

std::string to_xml(const ContentNode& node)
{
    std::string out;
    write_xml(out, node);
    return out;
}

std::string math_document(const std::vector<ContentNode>& statements)
{
    if (statements.empty() || (statements.size() == 1 && statements.front().is_placeholder()
                                  && statements.front().attributes.empty()))
        return "<math/>";
    bool ns = false;
    for (const auto& s : statements)
        ns = ns || uses_semedit_attributes(s);
    std::string out = "<math";
    if (ns) {
        out += " xmlns:semedit=\"";
        out += kSemeditNamespace;
        out += '"';
    }
    out += '>';
    for (const auto& s : statements)
        write_xml(out, s);
    out += "</math>";
    return out;
}

std::string serialize_content(const Document& doc, const TemplateRegistry& reg)
{
    return math_document(document_content(doc, reg));
}

std::string normalize_whitespace(std::string_view xml)
{
    std::string out;
    std::size_t i = 0;
    while (i < xml.size()) {
        if (xml[i] == '>') {
            out += '>';
            std::size_t j = i + 1;
            while (j < xml.size() && std::isspace(static_cast<unsigned char>(xml[j])))
                ++j;
            if (j < xml.size() && xml[j] == '<')
                i = j;
            else
                ++i;
            continue;
        }
        out += xml[i++];
    }
    auto b = out.find_first_not_of(" \t\r\n");
    auto e = out.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : out.substr(b, e - b + 1);
}

} // namespace semedit
