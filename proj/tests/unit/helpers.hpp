#pragma once

#include <string>
#include <vector>

#include "semedit/engine.hpp"
#include "semedit/mathml.hpp"

namespace semedit::testing {

/// Types each byte of an ASCII string as one key; `×` is spelled `*`.
inline Session typed(const std::string& keys, bool legacy = false)
{
    Session s;
    if (legacy)
        s.apply(EditCommand::set_mode(InputMode::Legacy));
    for (char c : keys)
        s.apply(EditCommand::key(std::string(1, c)));
    return s;
}

/// Linear-mode keys, one multi-byte key per element.
inline Session typed_keys(const std::vector<std::string>& keys)
{
    Session s;
    s.apply(EditCommand::set_mode(InputMode::Legacy));
    for (const auto& k : keys)
        s.apply(EditCommand::key(k));
    return s;
}

inline std::string content(const Session& s)
{
    return serialize_content(s.document(), s.registry());
}

inline EditResult press(Session& s, PressKey k)
{
    return s.apply(EditCommand::press_key(k));
}

inline EditResult key(Session& s, const std::string& ch)
{
    return s.apply(EditCommand::key(ch));
}

} // namespace semedit::testing
