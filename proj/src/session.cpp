#include "semedit/engine.hpp"

#include <sstream>

#include "edit_support.hpp"

namespace semedit {

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<PressKey, std::string_view> kPressNames[] = {
    {PressKey::Backspace, "backspace"}, {PressKey::Delete, "delete"}, {PressKey::Left, "left"},
    {PressKey::Right, "right"},         {PressKey::Up, "up"},         {PressKey::Down, "down"},
    {PressKey::Home, "home"},           {PressKey::End, "end"},
};

} // namespace

std::string_view to_string(PressKey key) noexcept
{
    for (auto [k, n] : kPressNames)
        if (k == key)
            return n;
    return "?";
}

std::optional<PressKey> parse_press_key(std::string_view name) noexcept
{
    for (auto [k, n] : kPressNames)
        if (n == name)
            return k;
    return std::nullopt;
}

std::string_view to_string(EditStatus s) noexcept
{
    switch (s) {
    case EditStatus::Applied: return "Applied";
    case EditStatus::NoEffect: return "NoEffect";
    case EditStatus::Rejected: return "Rejected";
    }
    return "?";
}

EditCommand EditCommand::key(std::string ch)
{
    EditCommand c;
    c.kind = Kind::Key;
    c.text = std::move(ch);
    return c;
}

EditCommand EditCommand::press_key(PressKey k)
{
    EditCommand c;
    c.kind = Kind::Press;
    c.press = k;
    return c;
}

EditCommand EditCommand::insert_template(std::string id)
{
    EditCommand c;
    c.kind = Kind::InsertTemplate;
    c.text = std::move(id);
    return c;
}

EditCommand EditCommand::bracket(bool open)
{
    EditCommand c;
    c.kind = Kind::Bracket;
    c.open = open;
    return c;
}

EditCommand EditCommand::select(CaretPosition anchor, CaretPosition focus)
{
    EditCommand c;
    c.kind = Kind::SetSelection;
    c.selection = {std::move(anchor), std::move(focus)};
    return c;
}

EditCommand EditCommand::cut() { EditCommand c; c.kind = Kind::Cut; return c; }
EditCommand EditCommand::copy() { EditCommand c; c.kind = Kind::Copy; return c; }
EditCommand EditCommand::paste() { EditCommand c; c.kind = Kind::Paste; return c; }
EditCommand EditCommand::undo() { EditCommand c; c.kind = Kind::Undo; return c; }
EditCommand EditCommand::redo() { EditCommand c; c.kind = Kind::Redo; return c; }

EditCommand EditCommand::set_mode(InputMode m)
{
    EditCommand c;
    c.kind = Kind::SetMode;
    c.mode = m;
    return c;
}

std::string EditCommand::to_script() const
{
    switch (kind) {
    case Kind::Key: return "key " + text;
    case Kind::Press: return "press " + std::string(to_string(press));
    case Kind::InsertTemplate: return "template " + text;
    case Kind::Bracket: return open ? "bracket open" : "bracket close";
    case Kind::SetSelection: return "select " + selection.anchor.to_string() + " " + selection.focus.to_string();
    case Kind::Cut: return "cut";
    case Kind::Copy: return "copy";
    case Kind::Paste: return "paste";
    case Kind::Undo: return "undo";
    case Kind::Redo: return "redo";
    case Kind::SetMode: return mode == InputMode::Legacy ? "mode legacy" : "mode basic";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Auto-replacement
// ---------------------------------------------------------------------------

AutoReplaceTable AutoReplaceTable::defaults()
{
    AutoReplaceTable t;
    t.add("<", "=", "≤");
    t.add(">", "=", "≥");
    t.add("+", "-", "±");
    t.add("=", "/", "≠");
    return t;
}

void AutoReplaceTable::add(std::string op, std::string ch, std::string result)
{
    // Following `ch` from `result` must never lead back to a visited glyph.
    std::vector<std::string> seen{op};
    std::string cur = result;
    for (;;) {
        for (const auto& s : seen)
            if (s == cur)
                throw Error(ErrorCode::DefinitionSyntax,
                            "auto-replace entry (" + op + ", " + ch + ") -> " + result + " makes a cycle");
        seen.push_back(cur);
        auto it = entries_.find(std::pair{cur, ch});
        if (it == entries_.end())
            break;
        cur = it->second;
    }
    entries_[{std::move(op), std::move(ch)}] = std::move(result);
}

std::optional<std::string> AutoReplaceTable::lookup(std::string_view op, std::string_view ch) const
{
    auto it = entries_.find(std::pair{std::string(op), std::string(ch)});
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

AutoReplaceTable AutoReplaceTable::parse(std::string_view text)
{
    AutoReplaceTable t;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto h = line.find('#'); h != std::string::npos)
            line.resize(h);
        std::istringstream fields(line);
        std::string op, ch, result, extra;
        if (!(fields >> op))
            continue;
        if (!(fields >> ch >> result) || (fields >> extra))
            throw Error(ErrorCode::DefinitionSyntax, "expected '<op> <char> <result>'", n, 1);
        t.add(op, ch, result);
    }
    return t;
}

std::optional<std::string> auto_replace_lookup(const AutoReplaceTable& table, std::string_view op, std::string_view ch)
{
    return table.lookup(op, ch);
}

// ---------------------------------------------------------------------------
// Letter runs
// ---------------------------------------------------------------------------

std::string LetterRun::encode() const
{
    std::string path;
    for (std::size_t i = 0; i < line.size(); ++i)
        path += (i ? "/" : "") + std::to_string(line[i]);
    return path + " " + std::to_string(start) + " " + std::to_string(count) + " " + std::to_string(pending) + " "
        + letters;
}

std::optional<LetterRun> LetterRun::decode(std::string_view s)
{
    if (s.empty())
        return std::nullopt;
    std::istringstream in{std::string(s)};
    std::string path;
    LetterRun r;
    if (!(in >> path >> r.start >> r.count >> r.pending >> r.letters))
        return std::nullopt;
    try {
        r.line = CaretPosition::parse(path + ":0").path;
    } catch (const Error&) {
        return std::nullopt;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

Session::Session(const TemplateRegistry& reg, AutoReplaceTable table)
    : reg_(&reg)
    , table_(std::move(table))
{
}

std::string Session::pending_token() const
{
    if (!run_ || run_->pending == 0)
        return {};
    std::size_t len = utf8_length(run_->letters);
    return run_->letters.substr(utf8_byte_offset(run_->letters, len - std::min(len, run_->pending)));
}

std::string Session::session_state() const
{
    return run_ ? run_->encode() : std::string();
}

void Session::load_session_state(std::string_view s)
{
    run_ = LetterRun::decode(s);
}

EditResult Session::dispatch(const EditCommand& cmd, std::vector<TransformEvent>& log)
{
    using namespace detail;
    Ctx ctx{*this, doc_, *reg_, log};
    bool letter = cmd.kind == EditCommand::Kind::Key && mode_ == InputMode::Legacy && is_letter(cmd.text);
    if (!letter && cmd.kind != EditCommand::Kind::Undo && cmd.kind != EditCommand::Kind::Redo
        && cmd.kind != EditCommand::Kind::Copy && cmd.kind != EditCommand::Kind::SetMode)
        run_.reset();

    switch (cmd.kind) {
    case EditCommand::Kind::Key: {
        if (cmd.text.empty() || utf8_length(cmd.text) != 1)
            return rejected("InvalidKey");
        if (cmd.text == "(" || cmd.text == ")") {
            doc_.set_selection(std::nullopt);
            return insert_bracket(ctx, cmd.text == "(");
        }
        bool had_selection = false;
        if (auto range = doc_.normalized_selection()) {
            delete_range(ctx, *range);
            had_selection = true;
        }
        doc_.set_selection(std::nullopt);
        EditResult r = mode_ == InputMode::Legacy ? legacy_type(ctx, cmd.text) : type_basic(ctx, cmd.text);
        if (had_selection && r.status == EditStatus::NoEffect)
            return applied();
        return r;
    }
    case EditCommand::Kind::Press:
        switch (cmd.press) {
        case PressKey::Backspace:
        case PressKey::Delete:
            if (auto range = doc_.normalized_selection()) {
                delete_range(ctx, *range);
                return applied();
            }
            doc_.set_selection(std::nullopt);
            return cmd.press == PressKey::Backspace ? delete_backward(ctx) : delete_forward(ctx);
        default: {
            static constexpr std::pair<PressKey, Direction> dirs[] = {
                {PressKey::Left, Direction::Left}, {PressKey::Right, Direction::Right},
                {PressKey::Up, Direction::Up},     {PressKey::Down, Direction::Down},
                {PressKey::Home, Direction::Home}, {PressKey::End, Direction::End},
            };
            doc_.set_selection(std::nullopt);
            for (auto [k, d] : dirs)
                if (k == cmd.press)
                    doc_.caret_move(d);
            return applied();
        }
        }
        break;
    case EditCommand::Kind::InsertTemplate:
        return insert_template(ctx, cmd.text);
    case EditCommand::Kind::Bracket:
        doc_.set_selection(std::nullopt);
        return insert_bracket(ctx, cmd.open);
    case EditCommand::Kind::SetSelection: {
        Selection sel = cmd.selection;
        doc_.set_selection(sel);
        doc_.set_caret(sel.focus);
        return applied();
    }
    case EditCommand::Kind::Cut: return cut(ctx);
    case EditCommand::Kind::Copy: return copy(ctx);
    case EditCommand::Kind::Paste: return paste(ctx);
    case EditCommand::Kind::Undo:
    case EditCommand::Kind::Redo: {
        bool undo = cmd.kind == EditCommand::Kind::Undo;
        if (undo ? !doc_.can_undo() : !doc_.can_redo())
            return no_effect();
        Snapshot s = undo ? doc_.undo(session_state()) : doc_.redo(session_state());
        load_session_state(s.session_state);
        return applied();
    }
    case EditCommand::Kind::SetMode:
        mode_ = cmd.mode;
        return no_effect();
    }
    return no_effect();
}

EditResult Session::apply(const EditCommand& cmd)
{
    Snapshot before = doc_.snapshot();
    before.session_state = session_state();
    std::optional<LetterRun> run_before = run_;
    std::vector<TransformEvent> log;
    EditResult r;
    bool history = cmd.kind == EditCommand::Kind::Undo || cmd.kind == EditCommand::Kind::Redo;
    try {
        r = dispatch(cmd, log);
        if (r.status == EditStatus::Applied && !history) {
            auto problems = validate(doc_);
            if (!problems.empty())
                throw Error(ErrorCode::ShapeError, "edit produced an invalid document: " + problems.front());
            if (doc_.root() == before.tree && doc_.caret() == before.caret && doc_.selection() == before.selection)
                r.status = EditStatus::NoEffect;
        }
    } catch (const Error& e) {
        r = detail::rejected(e.code() == ErrorCode::UnknownTemplate || e.code() == ErrorCode::PathInvalid
                                 ? std::string(to_string(e.code()))
                                 : "InternalError");
        r.transform_log.clear();
        log.clear();
        if (r.reason == "InternalError")
            r.reason += std::string(": ") + e.what();
    } catch (const std::exception& e) {
        r = detail::rejected(std::string("InternalError: ") + e.what());
        log.clear();
    }
    if (r.status == EditStatus::Applied) {
        if (!history)
            doc_.record(std::move(before));
        r.transform_log = std::move(log);
    } else if (!history) {
        doc_.restore(before);
        run_ = run_before;
        r.transform_log.clear();
    }
    r.caret = doc_.caret();
    return r;
}

EditResult apply_command(Session& session, const EditCommand& cmd)
{
    return session.apply(cmd);
}

} // namespace semedit
