// Content MathML -> Document. Each apply becomes flat Line items with the
// minimum scaffold brackets needed for precedence grouping to rebuild it.

#include <expat.h>

#include <cctype>
#include <memory>
#include <sstream>

#include "semedit/mathml.hpp"

namespace semedit {

// ---------------------------------------------------------------------------
// XML reader (expat)
// ---------------------------------------------------------------------------

namespace {

struct ReaderState {
    XML_Parser parser = nullptr;
    std::vector<XmlElement*> stack;
    XmlElement root;
    bool have_root = false;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** atts)
{
    auto* st = static_cast<ReaderState*>(user);
    XmlElement el;
    el.name = name;
    for (std::size_t i = 0; atts[i]; i += 2)
        el.attributes.emplace_back(atts[i], atts[i + 1]);
    el.line = XML_GetCurrentLineNumber(st->parser);
    el.column = XML_GetCurrentColumnNumber(st->parser) + 1;
    if (st->stack.empty()) {
        st->root = std::move(el);
        st->have_root = true;
        st->stack.push_back(&st->root);
    } else {
        auto& kids = st->stack.back()->children;
        kids.push_back(std::move(el));
        st->stack.push_back(&kids.back());
    }
}

void XMLCALL on_end(void* user, const XML_Char*)
{
    static_cast<ReaderState*>(user)->stack.pop_back();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len)
{
    auto* st = static_cast<ReaderState*>(user);
    if (!st->stack.empty())
        st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

XmlElement read_xml(std::string_view text)
{
    ReaderState st;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                                         &XML_ParserFree);
    st.parser = parser.get();
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);
    if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw Error(ErrorCode::XmlSyntax, XML_ErrorString(XML_GetErrorCode(parser.get())),
                    XML_GetCurrentLineNumber(parser.get()), XML_GetCurrentColumnNumber(parser.get()) + 1);
    }
    if (!st.have_root)
        throw Error(ErrorCode::XmlSyntax, "no root element", 1, 1);
    return std::move(st.root);
}

// ---------------------------------------------------------------------------
// Content mapping
// ---------------------------------------------------------------------------

namespace {

constexpr int kAtomic = 100;
constexpr int kUnary = 5;

bool is_presentation_tag(std::string_view tag)
{
    static constexpr std::string_view tags[] = {
        "mrow", "mi", "mn", "mo", "mtext", "mspace", "ms", "mfrac", "msqrt", "mroot", "msup", "msub", "msubsup",
        "mover", "munder", "munderover", "mfenced", "mstyle", "mpadded", "mphantom", "mtable", "mtr", "mtd",
        "menclose", "merror", "annotation", "annotation-xml",
    };
    for (auto t : tags)
        if (t == tag)
            return true;
    return false;
}

bool is_decimal(std::string_view s)
{
    std::size_t digits = 0, dots = 0;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)))
            ++digits;
        else if (c == '.')
            ++dots;
        else
            return false;
    }
    return digits > 0 && dots <= 1;
}

struct Expr {
    std::vector<DocNode> items;
    int level = kAtomic;
    std::string tag; ///< head tag for infix applies
    bool placeholder = false;
    bool unbalanced = false; ///< carries pending brackets scoped to this operand
    bool trailing_gap = false; ///< items end where an empty operand was left out
};

class ContentReader {
public:
    ContentReader(const TemplateRegistry& reg, std::vector<std::string>& diags)
        : reg_(reg)
        , diags_(diags)
    {
    }

    std::vector<DocNode> line_items(const XmlElement& e)
    {
        Expr x = expr(e);
        return std::move(x.items);
    }

    // Top-level statements of <math>; presentation children are dropped.
    std::vector<std::vector<DocNode>> statements(const XmlElement& math)
    {
        if (math.name != "math")
            throw Error(ErrorCode::UnsupportedElement, "root element <" + math.name + ">, expected <math>", math.line,
                        math.column);
        expect_no_text(math);
        std::vector<std::vector<DocNode>> lines;
        for (const auto& c : math.children) {
            if (is_presentation_tag(c.name)) {
                drop(c);
                continue;
            }
            lines.push_back(line_items(c));
        }
        return lines;
    }

private:
    void drop(const XmlElement& e)
    {
        diags_.push_back("warning: dropped presentation markup <" + e.name + "> at line " + std::to_string(e.line)
                         + " (mixed markup is not retained)");
    }

    static void expect_no_text(const XmlElement& e)
    {
        if (!trim(e.text).empty())
            throw Error(ErrorCode::ShapeError, "unexpected text inside <" + e.name + ">", e.line, e.column);
    }

    Expr expr(const XmlElement& e)
    {
        Expr x = expr_inner(e);
        for (const auto& [k, v] : e.attributes) {
            if (k != "semedit:unbalanced")
                continue;
            std::istringstream marks(v);
            std::string mark;
            bool any = false;
            while (marks >> mark) {
                if (mark != "open" && mark != "close")
                    throw Error(ErrorCode::ShapeError, "semedit:unbalanced must list open or close", e.line, e.column);
                Expr wrapped;
                if (mark == "open")
                    wrapped.items.push_back(make_pending_bracket(true));
                for (auto& it : x.items)
                    wrapped.items.push_back(std::move(it));
                if (mark == "close")
                    wrapped.items.push_back(make_pending_bracket(false));
                wrapped.trailing_gap = mark == "open" && (x.trailing_gap || x.placeholder);
                x = std::move(wrapped);
                x.unbalanced = true;
                any = true;
            }
            if (!any)
                throw Error(ErrorCode::ShapeError, "empty semedit:unbalanced", e.line, e.column);
            return x;
        }
        return x;
    }

    Expr expr_inner(const XmlElement& e)
    {
        if (e.name == "cn") {
            std::string t = trim(e.text);
            if (!is_decimal(t))
                throw Error(ErrorCode::ShapeError, "<cn> must hold a decimal numeral, got '" + t + "'", e.line, e.column);
            return token(t, ContentRole::number());
        }
        if (e.name == "ci") {
            std::string t = trim(e.text);
            if (t.empty())
                throw Error(ErrorCode::ShapeError, "empty <ci>", e.line, e.column);
            if (t == kEmptySlot) {
                Expr x;
                x.placeholder = true;
                return x;
            }
            return token(t, ContentRole::identifier());
        }
        if (e.name == "apply")
            return apply(e);
        if (e.name == "semantics") {
            const XmlElement* content = nullptr;
            for (const auto& c : e.children) {
                if (c.name == "annotation" || c.name == "annotation-xml")
                    drop(c);
                else if (!content)
                    content = &c;
            }
            if (!content)
                throw Error(ErrorCode::ShapeError, "<semantics> without content", e.line, e.column);
            return expr(*content);
        }
        if (is_presentation_tag(e.name)) {
            drop(e);
            Expr x;
            x.placeholder = true;
            return x;
        }
        if (const Template* fn = reg_.by_content_tag(e.name); fn && fn->is_function() && e.children.empty())
            return token(fn->content_tag, ContentRole::function(fn->content_tag));
        if (e.name == "csymbol" || reg_.by_content_tag(e.name))
            throw Error(ErrorCode::ShapeError, "operator <" + e.name + "> used as an operand", e.line, e.column);
        throw Error(ErrorCode::UnsupportedElement, e.name, e.line, e.column);
    }

    Expr token(const std::string& text, ContentRole role)
    {
        ContentRole resolved = resolve_auto_detect(text, reg_);
        Expr x;
        x.items.push_back(resolved == role ? DocNode::text_token(text) : DocNode::text_token(text, role));
        return x;
    }

    // Head of an apply: a template, or nullptr for the NoOp black box.
    const Template* head_template(const XmlElement& h, bool& noop)
    {
        noop = false;
        if (h.name == "csymbol") {
            std::string cd;
            for (const auto& [k, v] : h.attributes)
                if (k == "cd")
                    cd = v;
            std::string name = trim(h.text);
            if (cd != "semedit")
                throw Error(ErrorCode::UnsupportedElement, "csymbol cd='" + cd + "'", h.line, h.column);
            if (name == "noop") {
                noop = true;
                return nullptr;
            }
            for (const Template* t : reg_.all())
                if (t->family == RoleFamily::CSymbol && t->content_tag == name)
                    return t;
            throw Error(ErrorCode::UnsupportedElement, "csymbol '" + name + "'", h.line, h.column);
        }
        if (!h.children.empty())
            throw Error(ErrorCode::ShapeError, "apply head <" + h.name + "> must be an operator element", h.line,
                        h.column);
        const Template* t = reg_.by_content_tag(h.name);
        if (!t) {
            if (h.name == "cn" || h.name == "ci" || h.name == "apply")
                throw Error(ErrorCode::ShapeError, "apply without an operator head", h.line, h.column);
            throw Error(ErrorCode::UnsupportedElement, h.name, h.line, h.column);
        }
        return t;
    }

    // A Slot bounds pending brackets by itself; inline operands need a pair.
    static void append(Expr& into, Expr&& part, bool brackets, const TemplateRegistry& reg, bool scoped = false)
    {
        if (part.placeholder) {
            into.trailing_gap = true;
            return;
        }
        if (!brackets && (scoped || !part.unbalanced)) {
            for (auto& it : part.items)
                into.items.push_back(std::move(it));
            into.trailing_gap = part.trailing_gap;
            return;
        }
        into.trailing_gap = false;
        DocNode pair = reg.instantiate("bracket-round");
        for (auto& c : pair.children)
            if (c.kind == NodeKind::Slot)
                c.children.front().children = std::move(part.items);
        into.items.push_back(std::move(pair));
    }

    DocNode structure(const Template& t, std::vector<Expr> args, bool bracket_first)
    {
        DocNode f = reg_.instantiate(t.id);
        std::size_t k = 0;
        for (auto& c : f.children) {
            if (c.kind != NodeKind::Slot)
                continue;
            Expr holder;
            bool wrap = k == 0 && bracket_first && args[k].level != kAtomic;
            append(holder, std::move(args[k]), wrap, reg_, true);
            c.children.front().children = std::move(holder.items);
            ++k;
        }
        return f;
    }

    Expr apply(const XmlElement& e)
    {
        expect_no_text(e);
        if (e.children.empty())
            throw Error(ErrorCode::ShapeError, "empty <apply>", e.line, e.column);
        bool noop = false;
        const Template* t = head_template(e.children.front(), noop);
        std::vector<Expr> args;
        for (std::size_t i = 1; i < e.children.size(); ++i) {
            if (is_presentation_tag(e.children[i].name)) {
                drop(e.children[i]);
                Expr x;
                x.placeholder = true;
                args.push_back(std::move(x));
                continue;
            }
            args.push_back(expr(e.children[i]));
        }
        if (args.empty())
            throw Error(ErrorCode::ShapeError, "apply of <" + e.children.front().name + "> has no operands", e.line,
                        e.column);

        auto arity_error = [&](const std::string& what) {
            return Error(ErrorCode::ShapeError, "<" + e.children.front().name + "> " + what, e.line, e.column);
        };

        if (noop || t->is_infix()) {
            std::string tag = noop ? std::string() : t->content_tag;
            int level = noop ? 4 : t->precedence;
            Expr out;
            if (!noop && tag == "minus" && args.size() == 1) {
                out.items.push_back(make_operator_leaf(*t));
                bool wrap = args[0].level <= kUnary;
                append(out, std::move(args[0]), wrap, reg_);
                out.level = kUnary;
                out.tag = "minus";
                return out;
            }
            bool nary = tag == "plus" || tag == "times";
            if (args.size() < 2 || (!nary && args.size() != 2))
                throw arity_error("takes " + std::string(nary ? "two or more" : "exactly two") + " operands, got "
                                  + std::to_string(args.size()));
            for (std::size_t i = 0; i < args.size(); ++i) {
                Expr& a = args[i];
                bool wrap = i == 0 ? (a.level < level || (nary && a.level == level && a.tag == tag))
                                   : a.level <= level;
                if (i > 0) {
                    // An empty operand before '-' would read back as prefix minus.
                    if (!noop && tag == "minus" && out.trailing_gap)
                        out.items.push_back(reg_.instantiate("bracket-round"));
                    out.items.push_back(noop ? make_noop(level) : make_operator_leaf(*t));
                }
                append(out, std::move(a), wrap && !a.placeholder, reg_);
            }
            out.level = level;
            out.tag = tag;
            return out;
        }
        if (t->is_bracket())
            throw Error(ErrorCode::UnsupportedElement, "bracket template as apply head", e.line, e.column);
        if (static_cast<int>(args.size()) != t->arity)
            throw arity_error("takes " + std::to_string(t->arity) + " operand(s), got " + std::to_string(args.size()));
        bool bracket_first = t->content_tag == "power" || t->is_function();
        Expr out;
        out.items.push_back(structure(*t, std::move(args), bracket_first));
        return out;
    }

    const TemplateRegistry& reg_;
    std::vector<std::string>& diags_;
};

// Text tokens that ended up adjacent (only possible through odd input) merge.
void merge_texts(std::vector<DocNode>& items)
{
    for (std::size_t i = 1; i < items.size();) {
        if (items[i].kind == NodeKind::Text && items[i - 1].kind == NodeKind::Text) {
            items[i - 1].text += items[i].text;
            items[i - 1] = DocNode::text_token(items[i - 1].text);
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
}

} // namespace

std::vector<std::vector<DocNode>> parse_fragment_items(std::string_view text, const TemplateRegistry& reg,
                                                       std::vector<std::string>* diagnostics)
{
    std::vector<std::string> local;
    ContentReader reader(reg, diagnostics ? *diagnostics : local);
    auto lines = reader.statements(read_xml(text));
    for (auto& l : lines)
        merge_texts(l);
    return lines;
}

ParseResult parse_content_with_diagnostics(std::string_view text, const TemplateRegistry& reg)
{
    ParseResult result;
    auto lines = parse_fragment_items(text, reg, &result.diagnostics);
    DocNode& root = result.document.mutable_root();
    root.children.clear();
    for (auto& items : lines) {
        DocNode line = DocNode::line();
        line.children = std::move(items);
        root.children.push_back(std::move(line));
    }
    if (root.children.empty())
        root.children.push_back(DocNode::line());
    result.document.set_caret({{0, 0}, 0});
    return result;
}

Document parse_content(std::string_view text, const TemplateRegistry& reg)
{
    return parse_content_with_diagnostics(text, reg).document;
}

} // namespace semedit
