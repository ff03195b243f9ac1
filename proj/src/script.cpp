#include "semedit/script.hpp"

#include <fstream>
#include <sstream>

#include "semedit/mathml.hpp"

namespace semedit {

namespace {

std::vector<std::string> fields(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::vector<std::string> out;
    std::string f;
    while (in >> f)
        out.push_back(f);
    return out;
}

[[noreturn]] void syntax(std::size_t line, const std::string& msg)
{
    throw Error(ErrorCode::ScriptSyntax, msg, line, 1);
}

} // namespace

std::optional<EditCommand> parse_script_line(std::string_view text, std::size_t line)
{
    auto f = fields(text);
    if (f.empty() || f.front().front() == '#')
        return std::nullopt;
    const std::string& verb = f.front();
    auto expect_args = [&](std::size_t n) {
        if (f.size() != n + 1)
            syntax(line, "'" + verb + "' takes " + std::to_string(n) + " argument(s)");
    };
    if (verb == "key") {
        expect_args(1);
        if (utf8_length(f[1]) != 1)
            syntax(line, "key takes exactly one character, got '" + f[1] + "'");
        return EditCommand::key(f[1]);
    }
    if (verb == "press") {
        expect_args(1);
        auto k = parse_press_key(f[1]);
        if (!k)
            syntax(line, "unknown key name '" + f[1] + "'");
        return EditCommand::press_key(*k);
    }
    if (verb == "template") {
        expect_args(1);
        return EditCommand::insert_template(f[1]);
    }
    if (verb == "bracket") {
        expect_args(1);
        if (f[1] != "open" && f[1] != "close")
            syntax(line, "bracket takes open or close");
        return EditCommand::bracket(f[1] == "open");
    }
    if (verb == "select") {
        expect_args(2);
        try {
            return EditCommand::select(CaretPosition::parse(f[1]), CaretPosition::parse(f[2]));
        } catch (const Error& e) {
            syntax(line, std::string("bad caret address: ") + e.what());
        }
    }
    if (verb == "mode") {
        expect_args(1);
        if (f[1] != "legacy" && f[1] != "basic")
            syntax(line, "mode takes legacy or basic");
        return EditCommand::set_mode(f[1] == "legacy" ? InputMode::Legacy : InputMode::Basic);
    }
    static const std::pair<std::string_view, EditCommand (*)()> bare[] = {
        {"cut", &EditCommand::cut},   {"copy", &EditCommand::copy}, {"paste", &EditCommand::paste},
        {"undo", &EditCommand::undo}, {"redo", &EditCommand::redo},
    };
    for (auto [name, make] : bare) {
        if (verb == name) {
            expect_args(0);
            return make();
        }
    }
    syntax(line, "unknown verb '" + verb + "'");
}

EditScript EditScript::parse(std::string_view text, std::string source)
{
    EditScript s;
    s.source = std::move(source);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        try {
            if (auto cmd = parse_script_line(line, n))
                s.lines.push_back({n, std::move(*cmd)});
        } catch (const Error& e) {
            throw Error(ErrorCode::ScriptSyntax, s.source + ": " + e.message(), n, 1);
        }
    }
    return s;
}

EditScript EditScript::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ScriptSyntax, "cannot open script '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

ReplayResult run_script(const EditScript& script, const TemplateRegistry& reg)
{
    ReplayResult out;
    Session session(reg);
    for (const auto& line : script.lines) {
        EditResult r = session.apply(line.command);
        if (r.status == EditStatus::Rejected)
            out.any_rejected = true;
        out.steps.push_back({line, std::move(r)});
    }
    out.content_mathml = serialize_content(session.document(), reg);
    out.presentation_mathml = export_presentation(session.document(), reg);
    return out;
}

} // namespace semedit
