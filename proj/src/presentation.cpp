// Document -> Presentation MathML. Structures expand their template
// skeleton; empty slots render as a placeholder box.

#include "semedit/mathml.hpp"

namespace semedit {

namespace {

void escape_into(std::string& out, std::string_view s)
{
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
}

void leaf(std::string& out, std::string_view tag, std::string_view text)
{
    out += '<';
    out += tag;
    out += '>';
    escape_into(out, text);
    out += "</";
    out += tag;
    out += '>';
}

void render_line(std::string& out, const DocNode& line, const TemplateRegistry& reg);

void render_text(std::string& out, const DocNode& t, const TemplateRegistry& reg)
{
    ContentRole role = t.role.kind == RoleKind::AutoDetect ? resolve_auto_detect(t.text, reg) : t.role;
    switch (role.kind) {
    case RoleKind::Number: leaf(out, "mn", t.text); break;
    case RoleKind::Operator: leaf(out, "mo", t.text); break;
    default: leaf(out, "mi", t.text); break;
    }
}

void render_structure(std::string& out, const DocNode& f, const TemplateRegistry& reg)
{
    std::vector<const DocNode*> slots;
    for (const auto& c : f.children)
        if (c.kind == NodeKind::Slot)
            slots.push_back(&c);
    const Template* t = reg.find(f.template_id);
    if (!t || t->skeleton.empty()) {
        out += "<mrow>";
        for (const auto& c : f.children) {
            if (c.kind == NodeKind::Slot)
                render_line(out, c.children.front(), reg);
            else
                leaf(out, "mo", c.text);
        }
        out += "</mrow>";
        return;
    }
    const std::string& sk = t->skeleton;
    for (std::size_t i = 0; i < sk.size(); ++i) {
        if (sk[i] == '%' && i + 1 < sk.size() && sk[i + 1] >= '1' && sk[i + 1] <= '9') {
            std::size_t k = static_cast<std::size_t>(sk[i + 1] - '1');
            if (k < slots.size() && !slots[k]->children.empty())
                render_line(out, slots[k]->children.front(), reg);
            else
                leaf(out, "mi", kEmptySlot);
            ++i;
        } else {
            out += sk[i];
        }
    }
}

void render_item(std::string& out, const DocNode& n, const TemplateRegistry& reg)
{
    if (n.kind == NodeKind::Text) {
        render_text(out, n, reg);
    } else if (is_invisible(n)) {
        out += "<mo>&#x2062;</mo>";
    } else if (is_noop(n)) {
        leaf(out, "mo", kBlackBox);
    } else if (is_structure(n)) {
        render_structure(out, n, reg);
    } else {
        leaf(out, "mo", n.text);
    }
}

void render_line(std::string& out, const DocNode& line, const TemplateRegistry& reg)
{
    if (line.children.empty()) {
        leaf(out, "mi", kEmptySlot);
        return;
    }
    if (line.children.size() == 1) {
        render_item(out, line.children.front(), reg);
        return;
    }
    out += "<mrow>";
    for (const auto& item : line.children)
        render_item(out, item, reg);
    out += "</mrow>";
}

} // namespace

std::string export_presentation(const Document& doc, const TemplateRegistry& reg)
{
    std::string out = "<math xmlns=\"";
    out += kMathMLNamespace;
    out += "\">";
    const auto& lines = doc.root().children;
    if (lines.size() == 1) {
        render_line(out, lines.front(), reg);
    } else {
        out += "<mtable>";
        for (const auto& line : lines) {
            out += "<mtr><mtd>";
            render_line(out, line, reg);
            out += "</mtd></mtr>";
        }
        out += "</mtable>";
    }
    out += "</math>";
    return out;
}

} // namespace semedit
