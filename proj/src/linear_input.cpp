// Legacy (linear) keystroke interpretation.

#include "semedit/linear_input.hpp"

#include "edit_support.hpp"

namespace semedit {

// ---------------------------------------------------------------------------
// Tables and pure helpers
// ---------------------------------------------------------------------------

PrecedenceTable PrecedenceTable::from_registry(const TemplateRegistry& reg)
{
    PrecedenceTable t;
    for (const Template* tp : reg.all()) {
        if (tp->is_bracket() || tp->is_function())
            continue;
        Precedence p{tp->precedence, tp->right_associative() ? Assoc::Right : Assoc::Left};
        if (tp->is_infix())
            t.set(tp->glyphs.front(), p);
        else if (tp->content_tag == "divide" || tp->content_tag == "power")
            t.set(tp->symbol, p);
    }
    if (const Template* times = reg.find("times"))
        t.set(std::string(kInvisibleTimes), {times->precedence, Assoc::Left});
    t.set("/", t.find("÷").value_or(Precedence{4, Assoc::Left}));
    t.set("unary-", {5, Assoc::Right});
    t.set("apply", {7, Assoc::Left});
    return t;
}

std::optional<Precedence> PrecedenceTable::find(std::string_view op) const
{
    auto it = entries_.find(op);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

Precedence PrecedenceTable::at(std::string_view op) const
{
    if (auto p = find(op))
        return *p;
    throw Error(ErrorCode::PathInvalid, "no precedence for operator '" + std::string(op) + "'");
}

void PrecedenceTable::set(std::string op, Precedence p)
{
    entries_[std::move(op)] = p;
}

namespace {

std::vector<std::string> scalars(std::string_view s)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size();) {
        std::size_t n = 1;
        auto c = static_cast<unsigned char>(s[i]);
        if (c >= 0xF0)
            n = 4;
        else if (c >= 0xE0)
            n = 3;
        else if (c >= 0xC0)
            n = 2;
        out.emplace_back(s.substr(i, n));
        i += n;
    }
    return out;
}

} // namespace

std::vector<LetterFactor> letter_factors(std::string_view letters)
{
    std::vector<LetterFactor> out;
    for (auto& ch : scalars(letters)) {
        if (!out.empty() && out.back().letter == ch)
            ++out.back().power;
        else
            out.push_back({ch, 1});
    }
    return out;
}

LetterRunReading classify_letter_run(std::string_view letters, const TemplateRegistry& reg)
{
    LetterRunReading r;
    if (reg.by_function(letters)) {
        r.is_function = true;
        r.function = std::string(letters);
        return r;
    }
    r.factors = letter_factors(letters);
    return r;
}

// ---------------------------------------------------------------------------
// Caret widening
// ---------------------------------------------------------------------------

namespace {

/// Binding level of a construct the caret may leave, or 0 for closed ones.
int construct_level(const DocNode& f, const TemplateRegistry& reg)
{
    const Template* t = reg.find(f.template_id);
    if (!t)
        return 0;
    if (t->content_tag == "divide" || t->content_tag == "power" || t->is_function())
        return t->precedence;
    return 0;
}

} // namespace

CaretPosition precedence_widen(Document& doc, int level, Assoc assoc, const TemplateRegistry& reg)
{
    using namespace detail;
    for (;;) {
        Path line;
        auto gap = caret_gap(doc, line);
        if (!gap || line.size() <= 2)
            break;
        const DocNode& l = doc.node_at(line);
        if (*gap != l.children.size() || open_in_scope(l, *gap))
            break;
        Path slot = parent(line);
        Path formula = parent(slot);
        const DocNode& f = doc.node_at(formula);
        if (!is_last_slot(f, slot.back()))
            break;
        int c = construct_level(f, reg);
        if (c == 0 || !(c > level || (c == level && assoc == Assoc::Left)))
            break;
        doc.set_caret(from_spot(doc.root(), Spot{parent(formula), formula.back() + 1, 0, false}));
    }
    return doc.caret();
}

} // namespace semedit
