#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semedit {

enum class ErrorCode {
    PathInvalid,
    SnapshotForeign,
    NoHistory,
    DefinitionSyntax,
    DuplicateId,
    ArityMismatch,
    UnknownTemplate,
    XmlSyntax,
    UnsupportedElement,
    ShapeError,
    ScriptSyntax,
    ProtocolError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every error the engine reports. Positional errors
/// (template definitions, XML, scripts) carry a 1-based line and column;
/// zero means "not applicable".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0, std::size_t column = 0);

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    /// The message without code and position.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

} // namespace semedit
