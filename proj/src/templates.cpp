#include "semedit/templates.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace semedit {

namespace detail {
extern const std::string_view kBuiltinDefinitions;
}

std::string_view builtin_definitions() noexcept
{
    return detail::kBuiltinDefinitions;
}

namespace {

// Keyboard keys that type a template without being its glyph.
constexpr std::pair<std::string_view, std::string_view> kKeyAliases[] = {
    {"+", "plus"}, {"-", "minus"}, {"*", "times"}, {"×", "times"}, {"·", "times"},
    {"/", "divide"}, {"÷", "divide"}, {"^", "power"}, {"=", "eq"}, {"<", "lt"}, {">", "gt"},
};

int count_slot_markers(std::string_view skeleton, int& max_marker)
{
    std::set<int> seen;
    max_marker = 0;
    for (std::size_t i = 0; i + 1 < skeleton.size(); ++i) {
        if (skeleton[i] != '%' || !std::isdigit(static_cast<unsigned char>(skeleton[i + 1])))
            continue;
        int v = 0;
        std::size_t j = i + 1;
        while (j < skeleton.size() && std::isdigit(static_cast<unsigned char>(skeleton[j])))
            v = v * 10 + (skeleton[j++] - '0');
        seen.insert(v);
        max_marker = std::max(max_marker, v);
        i = j - 1;
    }
    return static_cast<int>(seen.size());
}

std::string quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

class DefinitionLexer {
public:
    DefinitionLexer(std::string_view line, std::size_t line_no)
        : line_(line)
        , line_no_(line_no)
    {
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= line_.size();
    }

    std::size_t column() const { return pos_ + 1; }

    [[noreturn]] void fail(const std::string& msg, std::size_t col = 0) const
    {
        throw Error(ErrorCode::DefinitionSyntax, msg, line_no_, col ? col : pos_ + 1);
    }

    std::string word()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) && line_[pos_] != '=')
            ++pos_;
        if (start == pos_)
            fail("expected a word");
        return std::string(line_.substr(start, pos_ - start));
    }

    // key=value or key="quoted value"
    std::pair<std::string, std::string> field()
    {
        std::string key = word();
        if (pos_ >= line_.size() || line_[pos_] != '=')
            fail("expected '=' after '" + key + "'");
        ++pos_;
        std::string value;
        if (pos_ < line_.size() && line_[pos_] == '"') {
            std::size_t open_col = pos_ + 1;
            ++pos_;
            bool closed = false;
            while (pos_ < line_.size()) {
                char c = line_[pos_++];
                if (c == '\\' && pos_ < line_.size()) {
                    value += line_[pos_++];
                } else if (c == '"') {
                    closed = true;
                    break;
                } else {
                    value += c;
                }
            }
            if (!closed)
                fail("unterminated quoted value", open_col);
        } else {
            std::size_t start = pos_;
            while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])))
                ++pos_;
            value = std::string(line_.substr(start, pos_ - start));
        }
        return {key, value};
    }

private:
    void skip_ws()
    {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
    }

    std::string_view line_;
    std::size_t line_no_;
    std::size_t pos_ = 0;
};

std::vector<std::string> split_glyphs(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string g;
    while (is >> g)
        out.push_back(g);
    return out;
}

Template parse_record(std::string_view line, std::size_t line_no)
{
    DefinitionLexer lex(line, line_no);
    if (lex.word() != "template")
        lex.fail("record must start with 'template'", 1);
    Template t;
    t.id = lex.word();
    std::set<std::string> fields;
    while (!lex.at_end()) {
        std::size_t col = lex.column();
        auto [key, value] = lex.field();
        if (!fields.insert(key).second)
            lex.fail("field '" + key + "' given twice", col);
        if (key == "arity" || key == "prec") {
            int v = 0;
            try {
                std::size_t used = 0;
                v = std::stoi(value, &used);
                if (used != value.size())
                    throw std::invalid_argument(value);
            } catch (const std::exception&) {
                lex.fail("'" + key + "' needs an integer, got '" + value + "'", col);
            }
            if (key == "arity") {
                if (v < 0)
                    lex.fail("arity must be >= 0", col);
                t.arity = v;
            } else {
                t.precedence = v;
            }
        } else if (key == "role") {
            std::vector<std::string> parts;
            std::size_t start = 0;
            while (true) {
                auto colon = value.find(':', start);
                parts.push_back(value.substr(start, colon - start));
                if (colon == std::string::npos)
                    break;
                start = colon + 1;
            }
            const std::string& fam = parts[0];
            if (fam == "op" && (parts.size() == 2 || parts.size() == 3) && !parts[1].empty()) {
                t.family = RoleFamily::Operator;
                t.content_tag = parts[1];
                if (parts.size() == 3)
                    t.symbol = parts[2];
            } else if (fam == "csymbol" && parts.size() == 2 && !parts[1].empty()) {
                t.family = RoleFamily::CSymbol;
                t.content_tag = parts[1];
            } else if (fam == "fn" && parts.size() == 2 && !parts[1].empty()) {
                t.family = RoleFamily::Function;
                t.content_tag = parts[1];
            } else if (fam == "bracket" && parts.size() == 1) {
                t.family = RoleFamily::Bracket;
            } else {
                lex.fail("unknown role '" + value + "'", col);
            }
        } else if (key == "glyphs") {
            t.glyphs = split_glyphs(value);
        } else if (key == "skeleton") {
            t.skeleton = value;
        } else {
            lex.fail("unknown field '" + key + "'", col);
        }
    }
    for (const char* required : {"arity", "role", "prec", "glyphs", "skeleton"})
        if (!fields.count(required))
            lex.fail(std::string("missing field '") + required + "'", 1);
    int max_marker = 0;
    int markers = count_slot_markers(t.skeleton, max_marker);
    if (markers != t.arity || max_marker != t.arity)
        throw Error(ErrorCode::ArityMismatch,
            "template '" + t.id + "' has arity " + std::to_string(t.arity) + " but its skeleton has "
                + std::to_string(markers) + " slot markers",
            line_no);
    if (t.family == RoleFamily::Bracket && t.glyphs.size() != 2)
        lex.fail("bracket templates need an open and a close glyph", 1);
    return t;
}

} // namespace

bool Template::is_infix() const
{
    if (arity != 2 || (family != RoleFamily::Operator && family != RoleFamily::CSymbol) || glyphs.empty())
        return false;
    return skeleton.rfind("%1", 0) == 0 && skeleton.size() >= 4 && skeleton.compare(skeleton.size() - 2, 2, "%2") == 0;
}

ContentRole Template::head_role() const
{
    switch (family) {
    case RoleFamily::Function:
        return ContentRole::function(content_tag);
    case RoleFamily::Bracket:
        return ContentRole::bracket_pair();
    case RoleFamily::Operator:
    case RoleFamily::CSymbol:
        break;
    }
    if (!symbol.empty())
        return ContentRole::op(symbol);
    return ContentRole::op(glyphs.empty() ? content_tag : glyphs.front());
}

std::string Template::role_text() const
{
    switch (family) {
    case RoleFamily::Operator:
        return "op:" + content_tag + (symbol.empty() ? "" : ":" + symbol);
    case RoleFamily::CSymbol:
        return "csymbol:" + content_tag;
    case RoleFamily::Function:
        return "fn:" + content_tag;
    case RoleFamily::Bracket:
        return "bracket";
    }
    return {};
}

void TemplateRegistry::add(Template t)
{
    std::string id = t.id;
    templates_.insert_or_assign(std::move(id), std::move(t));
}

void TemplateRegistry::rebuild_indexes()
{
    operator_index_.clear();
    function_index_.clear();
    for (const auto& [id, t] : templates_) {
        if (t.is_infix()) {
            auto [it, fresh] = operator_index_.emplace(t.glyphs.front(), id);
            if (!fresh)
                throw Error(ErrorCode::DefinitionSyntax,
                    "operator glyph '" + t.glyphs.front() + "' claimed by both '" + it->second + "' and '" + id + "'");
        }
        if (t.is_function()) {
            auto [it, fresh] = function_index_.emplace(t.content_tag, id);
            if (!fresh)
                throw Error(ErrorCode::DefinitionSyntax,
                    "function name '" + t.content_tag + "' claimed by both '" + it->second + "' and '" + id + "'");
        }
    }
    for (auto [key, id] : kKeyAliases)
        if (templates_.count(id) && !operator_index_.count(key))
            operator_index_.emplace(std::string(key), std::string(id));
}

const TemplateRegistry& TemplateRegistry::builtin()
{
    static const TemplateRegistry reg = parse_definitions(builtin_definitions());
    return reg;
}

const Template* TemplateRegistry::find(std::string_view id) const noexcept
{
    auto it = templates_.find(id);
    return it == templates_.end() ? nullptr : &it->second;
}

const Template& TemplateRegistry::at(std::string_view id) const
{
    if (const Template* t = find(id))
        return *t;
    throw Error(ErrorCode::UnknownTemplate, std::string(id));
}

const Template* TemplateRegistry::by_operator(std::string_view key) const noexcept
{
    auto it = operator_index_.find(key);
    return it == operator_index_.end() ? nullptr : find(it->second);
}

const Template* TemplateRegistry::by_glyph(std::string_view glyph) const noexcept
{
    const Template* t = by_operator(glyph);
    return t && t->is_infix() && t->glyphs.front() == glyph ? t : nullptr;
}

const Template* TemplateRegistry::by_function(std::string_view name) const noexcept
{
    auto it = function_index_.find(name);
    return it == function_index_.end() ? nullptr : find(it->second);
}

const Template* TemplateRegistry::by_content_tag(std::string_view tag) const noexcept
{
    for (const auto& [id, t] : templates_)
        if (t.content_tag == tag && t.family != RoleFamily::Bracket)
            return &t;
    return nullptr;
}

bool TemplateRegistry::is_function_prefix(std::string_view letters) const noexcept
{
    if (letters.empty())
        return false;
    auto it = function_index_.lower_bound(letters);
    return it != function_index_.end() && std::string_view(it->first).substr(0, letters.size()) == letters;
}

bool TemplateRegistry::has_longer_function(std::string_view name) const noexcept
{
    for (const auto& [fn, id] : function_index_)
        if (fn.size() > name.size() && std::string_view(fn).substr(0, name.size()) == name)
            return true;
    return false;
}

std::vector<const Template*> TemplateRegistry::all() const
{
    std::vector<const Template*> out;
    for (const auto& [id, t] : templates_)
        out.push_back(&t);
    return out;
}

std::string TemplateRegistry::to_definitions() const
{
    std::string out;
    for (const auto& [id, t] : templates_) {
        std::string glyphs;
        for (std::size_t i = 0; i < t.glyphs.size(); ++i)
            glyphs += (i ? " " : "") + t.glyphs[i];
        out += "template " + t.id + " arity=" + std::to_string(t.arity) + " role=" + t.role_text()
            + " prec=" + std::to_string(t.precedence) + " glyphs=" + quote(glyphs) + " skeleton=" + quote(t.skeleton)
            + "\n";
    }
    return out;
}

DocNode TemplateRegistry::instantiate(std::string_view id) const
{
    const Template& t = at(id);
    DocNode f;
    f.kind = NodeKind::Formula;
    f.template_id = t.id;
    f.head = t.head_role();
    f.role = t.is_bracket() ? ContentRole::bracket_pair() : ContentRole::apply();
    auto tag_end = t.skeleton.find_first_of(" >/", 1);
    f.presentation_tag = t.skeleton.rfind("<", 0) == 0 ? t.skeleton.substr(1, tag_end - 1) : "mrow";
    for (const auto& g : t.glyphs)
        f.children.push_back(make_glyph_leaf(g));
    for (int i = 0; i < t.arity; ++i) {
        DocNode slot = DocNode::slot();
        slot.children.push_back(DocNode::line());
        f.children.push_back(std::move(slot));
    }
    return f;
}

TemplateRegistry parse_definitions(std::string_view text, const TemplateRegistry* base)
{
    TemplateRegistry reg;
    if (base)
        reg = *base;
    std::set<std::string> ids_in_text;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#')
            continue;
        Template t = parse_record(line, line_no);
        if (!ids_in_text.insert(t.id).second)
            throw Error(ErrorCode::DuplicateId, "template '" + t.id + "' defined twice", line_no);
        reg.add(std::move(t));
    }
    reg.rebuild_indexes();
    return reg;
}

TemplateRegistry load_registry(std::string_view definitions)
{
    return parse_definitions(definitions, &TemplateRegistry::builtin());
}

DocNode make_operator_leaf(const Template& t)
{
    DocNode n;
    n.kind = NodeKind::Formula;
    n.role = t.head_role();
    n.attrs = {NodeAttr::ReadOnly, NodeAttr::NoMove};
    n.presentation_tag = "mo";
    n.template_id = t.id;
    n.text = t.glyphs.empty() ? t.head_role().symbol : t.glyphs.front();
    return n;
}

DocNode make_invisible_times(const TemplateRegistry& reg)
{
    DocNode n = make_operator_leaf(reg.at("times"));
    n.text = std::string(kInvisibleTimes);
    return n;
}

} // namespace semedit
