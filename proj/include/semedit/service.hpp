#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "semedit/engine.hpp"

namespace semedit {

using Json = nlohmann::json;

/// Wire form of a command: `{"type":"key","char":"+"}` and friends.
Json command_to_json(const EditCommand& cmd);
/// Throws Error(ProtocolError) for unknown types or missing fields.
EditCommand command_from_json(const Json& j);

struct ServiceConfig {
    std::chrono::minutes idle_timeout{30};
};

/// Transport-independent session service. One engine session per session
/// id; each session's commands run strictly in seq order. Thread-safe.
class SessionService {
public:
    using Clock = std::chrono::steady_clock;

    explicit SessionService(const TemplateRegistry& reg = TemplateRegistry::builtin(), ServiceConfig config = {},
                            AutoReplaceTable table = AutoReplaceTable::defaults());

    Json handle(const Json& request, Clock::time_point now = Clock::now());
    /// Parses one frame; malformed JSON yields a ProtocolError response.
    std::string handle_text(std::string_view frame, Clock::time_point now = Clock::now());

    std::size_t session_count() const;
    /// Drops sessions idle for longer than the timeout; returns how many.
    std::size_t expire_idle(Clock::time_point now);

    const TemplateRegistry& registry() const noexcept { return reg_; }

private:
    struct Entry {
        std::mutex mutex;
        Session session;
        std::int64_t last_seq = 0;
        Clock::time_point last_used;
        bool closed = false;

        Entry(const TemplateRegistry& reg, AutoReplaceTable table)
            : session(reg, std::move(table))
        {
        }
    };

    std::shared_ptr<Entry> entry(const std::string& id, Clock::time_point now, bool& created);
    void close(const std::string& id);
    Json state(const Entry& e) const;
    Json templates_listing() const;

    const TemplateRegistry& reg_;
    ServiceConfig config_;
    AutoReplaceTable table_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::set<std::string> closed_;
};

} // namespace semedit
