#include "semedit/service.hpp"

#include "semedit/mathml.hpp"

namespace semedit {

namespace {

[[noreturn]] void protocol(const std::string& msg)
{
    throw Error(ErrorCode::ProtocolError, msg);
}

const std::string& string_field(const Json& j, const char* name)
{
    auto it = j.find(name);
    if (it == j.end() || !it->is_string())
        protocol(std::string("missing string field '") + name + "'");
    return it->get_ref<const std::string&>();
}

Json base_response(const Json& request)
{
    Json r = Json::object();
    if (request.is_object()) {
        if (auto it = request.find("session"); it != request.end())
            r["session"] = *it;
        if (auto it = request.find("seq"); it != request.end())
            r["seq"] = *it;
    }
    r["diagnostics"] = Json::array();
    r["transform_log"] = Json::array();
    return r;
}

Json rejection(const Json& request, const std::string& reason, const std::string& diagnostic, bool closed)
{
    Json r = base_response(request);
    r["status"] = "Rejected";
    r["reason"] = reason;
    r["diagnostics"].push_back(diagnostic);
    if (closed)
        r["closed"] = true;
    return r;
}

} // namespace

Json command_to_json(const EditCommand& cmd)
{
    using K = EditCommand::Kind;
    switch (cmd.kind) {
    case K::Key: return {{"type", "key"}, {"char", cmd.text}};
    case K::Press: return {{"type", "press"}, {"name", std::string(to_string(cmd.press))}};
    case K::InsertTemplate: return {{"type", "template"}, {"id", cmd.text}};
    case K::Bracket: return {{"type", "bracket"}, {"side", cmd.open ? "open" : "close"}};
    case K::SetSelection:
        return {{"type", "select"},
                {"anchor", cmd.selection.anchor.to_string()},
                {"focus", cmd.selection.focus.to_string()}};
    case K::Cut: return {{"type", "cut"}};
    case K::Copy: return {{"type", "copy"}};
    case K::Paste: return {{"type", "paste"}};
    case K::Undo: return {{"type", "undo"}};
    case K::Redo: return {{"type", "redo"}};
    case K::SetMode: return {{"type", "mode"}, {"mode", cmd.mode == InputMode::Legacy ? "legacy" : "basic"}};
    }
    return {};
}

EditCommand command_from_json(const Json& j)
{
    if (!j.is_object())
        protocol("command must be an object");
    const std::string& type = string_field(j, "type");
    if (type == "key") {
        const std::string& ch = string_field(j, "char");
        if (utf8_length(ch) != 1)
            protocol("key takes exactly one character");
        return EditCommand::key(ch);
    }
    if (type == "press") {
        auto k = parse_press_key(string_field(j, j.contains("name") ? "name" : "key"));
        if (!k)
            protocol("unknown key name");
        return EditCommand::press_key(*k);
    }
    if (type == "template")
        return EditCommand::insert_template(string_field(j, "id"));
    if (type == "bracket") {
        const std::string& side = string_field(j, "side");
        if (side != "open" && side != "close")
            protocol("bracket side must be open or close");
        return EditCommand::bracket(side == "open");
    }
    if (type == "select") {
        try {
            return EditCommand::select(CaretPosition::parse(string_field(j, "anchor")),
                                       CaretPosition::parse(string_field(j, "focus")));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ProtocolError)
                throw;
            protocol(std::string("bad caret address: ") + e.message());
        }
    }
    if (type == "mode") {
        const std::string& m = string_field(j, "mode");
        if (m != "legacy" && m != "basic")
            protocol("mode must be legacy or basic");
        return EditCommand::set_mode(m == "legacy" ? InputMode::Legacy : InputMode::Basic);
    }
    if (type == "cut") return EditCommand::cut();
    if (type == "copy") return EditCommand::copy();
    if (type == "paste") return EditCommand::paste();
    if (type == "undo") return EditCommand::undo();
    if (type == "redo") return EditCommand::redo();
    protocol("unknown command type '" + type + "'");
}

SessionService::SessionService(const TemplateRegistry& reg, ServiceConfig config, AutoReplaceTable table)
    : reg_(reg), config_(config), table_(std::move(table))
{
}

std::size_t SessionService::session_count() const
{
    std::lock_guard lock(mutex_);
    return sessions_.size();
}

std::size_t SessionService::expire_idle(Clock::time_point now)
{
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        std::unique_lock busy(it->second->mutex, std::try_to_lock);
        if (busy && now - it->second->last_used > config_.idle_timeout) {
            it->second->closed = true;
            busy.unlock();
            closed_.insert(it->first);
            it = sessions_.erase(it);
            ++n;
        } else {
            ++it;
        }
    }
    return n;
}

std::shared_ptr<SessionService::Entry> SessionService::entry(const std::string& id, Clock::time_point now,
                                                             bool& created)
{
    std::lock_guard lock(mutex_);
    created = false;
    if (closed_.count(id))
        return nullptr;
    auto& slot = sessions_[id];
    if (!slot) {
        slot = std::make_shared<Entry>(reg_, table_);
        slot->last_used = now;
        created = true;
    }
    return slot;
}

void SessionService::close(const std::string& id)
{
    std::lock_guard lock(mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) {
        it->second->closed = true;
        sessions_.erase(it);
    }
    closed_.insert(id);
}

Json SessionService::state(const Entry& e) const
{
    const Session& s = e.session;
    Json r = Json::object();
    r["content_mathml"] = serialize_content(s.document(), reg_);
    r["presentation_mathml"] = export_presentation(s.document(), reg_);
    r["caret"] = s.document().caret().to_string();
    r["pending_token"] = s.pending_token();
    r["mode"] = s.mode() == InputMode::Legacy ? "legacy" : "basic";
    if (const auto& sel = s.document().selection())
        r["selection"] = {{"anchor", sel->anchor.to_string()}, {"focus", sel->focus.to_string()}};
    else
        r["selection"] = nullptr;
    return r;
}

Json SessionService::templates_listing() const
{
    Json list = Json::array();
    for (const Template* t : reg_.all()) {
        list.push_back({{"id", t->id},
                        {"arity", t->arity},
                        {"role", t->role_text()},
                        {"precedence", t->precedence},
                        {"glyphs", t->glyphs},
                        {"skeleton", t->skeleton}});
    }
    return list;
}

Json SessionService::handle(const Json& request, Clock::time_point now)
{
    expire_idle(now);
    if (!request.is_object())
        return rejection(request, "ProtocolError", "ProtocolError: request must be a JSON object", false);
    auto sid = request.find("session");
    if (sid == request.end() || !sid->is_string())
        return rejection(request, "ProtocolError", "ProtocolError: missing session id", false);
    const std::string id = sid->get<std::string>();

    bool created = false;
    auto e = entry(id, now, created);
    if (!e)
        return rejection(request, "SessionClosed", "SessionClosed: session '" + id + "' was closed", true);
    std::lock_guard busy(e->mutex);
    if (e->closed)
        return rejection(request, "SessionClosed", "SessionClosed: session '" + id + "' was closed", true);

    auto violation = [&](const std::string& reason, const std::string& msg) {
        close(id);
        return rejection(request, reason, reason + ": " + msg, true);
    };

    auto seq = request.find("seq");
    if (seq == request.end() || !seq->is_number_integer() || seq->get<std::int64_t>() < 1)
        return violation("ProtocolError", "seq must be a positive integer");
    std::int64_t n = seq->get<std::int64_t>();
    if (e->last_seq != 0 && n != e->last_seq + 1)
        return violation("SeqGap", "expected seq " + std::to_string(e->last_seq + 1) + ", got " + std::to_string(n));
    e->last_seq = n;
    e->last_used = now;

    auto cmd = request.find("command");
    if (cmd == request.end() || !cmd->is_object())
        return violation("ProtocolError", "missing command object");

    Json r = base_response(request);
    auto type = cmd->find("type");
    if (type != cmd->end() && type->is_string() && (*type == "templates" || *type == "state")) {
        r["status"] = std::string(to_string(EditStatus::NoEffect));
        r["reason"] = "";
        r.update(state(*e));
        if (*type == "templates")
            r["templates"] = templates_listing();
        return r;
    }

    EditCommand command;
    try {
        command = command_from_json(*cmd);
    } catch (const Error& err) {
        return violation("ProtocolError", err.message());
    }

    EditResult result = e->session.apply(command);
    r["status"] = std::string(to_string(result.status));
    r["reason"] = result.reason;
    for (const auto& ev : result.transform_log)
        r["transform_log"].push_back({{"event", ev.event}, {"from", ev.from}, {"to", ev.to}});
    if (result.reason.rfind("InternalError", 0) == 0)
        r["diagnostics"].push_back(result.reason);
    r.update(state(*e));
    return r;
}

std::string SessionService::handle_text(std::string_view frame, Clock::time_point now)
{
    Json request = Json::parse(frame.begin(), frame.end(), nullptr, false);
    if (request.is_discarded())
        return rejection(Json(), "ProtocolError", "ProtocolError: frame is not valid JSON", false).dump();
    return handle(request, now).dump();
}

} // namespace semedit
