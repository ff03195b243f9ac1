#include "xml_check.hpp"

#include <expat.h>

namespace semedit::testing {

namespace {

struct Builder {
    std::vector<XNode*> stack;
    XNode root;
    bool has_root = false;
};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts)
{
    auto* b = static_cast<Builder*>(data);
    XNode* node;
    if (b->stack.empty()) {
        b->has_root = true;
        node = &b->root;
    } else {
        b->stack.back()->kids.emplace_back();
        node = &b->stack.back()->kids.back();
    }
    node->name = name;
    for (int i = 0; atts[i]; i += 2)
        node->attrs.emplace_back(atts[i], atts[i + 1]);
    b->stack.push_back(node);
}

void XMLCALL on_end(void* data, const XML_Char*)
{
    auto* b = static_cast<Builder*>(data);
    b->stack.back()->text = trim(b->stack.back()->text);
    b->stack.pop_back();
}

void XMLCALL on_text(void* data, const XML_Char* s, int len)
{
    auto* b = static_cast<Builder*>(data);
    if (!b->stack.empty())
        b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

void walk(const XNode& n, std::vector<std::string>& out)
{
    if (n.name == "apply") {
        if (n.kids.size() < 2)
            out.push_back("apply with " + std::to_string(n.kids.size()) + " children");
        if (!n.kids.empty()) {
            const XNode& head = n.kids.front();
            bool ok = head.name == "csymbol" ? !head.text.empty() : head.kids.empty() && head.text.empty()
                    && head.name != "ci" && head.name != "cn" && head.name != "apply";
            if (!ok)
                out.push_back("apply head <" + head.name + "> is not an operator");
        }
    }
    for (const auto& k : n.kids)
        walk(k, out);
}

} // namespace

XmlCheck check_xml(std::string_view xml)
{
    XmlCheck r;
    XML_Parser p = XML_ParserCreate("UTF-8");
    Builder b;
    XML_SetUserData(p, &b);
    XML_SetElementHandler(p, on_start, on_end);
    XML_SetCharacterDataHandler(p, on_text);
    if (XML_Parse(p, xml.data(), static_cast<int>(xml.size()), 1) == XML_STATUS_ERROR) {
        r.error = std::string(XML_ErrorString(XML_GetErrorCode(p))) + " at line "
            + std::to_string(XML_GetCurrentLineNumber(p)) + " column " + std::to_string(XML_GetCurrentColumnNumber(p));
    } else if (!b.has_root) {
        r.error = "no root element";
    } else {
        r.well_formed = true;
        r.root = std::move(b.root);
    }
    XML_ParserFree(p);
    return r;
}

std::vector<std::string> apply_shape_violations(const XNode& root)
{
    std::vector<std::string> out;
    walk(root, out);
    return out;
}

bool valid_content_mathml(std::string_view xml, std::string* why)
{
    XmlCheck c = check_xml(xml);
    if (!c.well_formed) {
        if (why)
            *why = "not well-formed: " + c.error;
        return false;
    }
    if (c.root.name != "math") {
        if (why)
            *why = "root is <" + c.root.name + ">";
        return false;
    }
    auto v = apply_shape_violations(c.root);
    if (!v.empty()) {
        if (why)
            *why = v.front();
        return false;
    }
    return true;
}

bool same_tree(std::string_view a, std::string_view b)
{
    XmlCheck x = check_xml(a), y = check_xml(b);
    return x.well_formed && y.well_formed && x.root == y.root;
}

} // namespace semedit::testing
