#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semedit/engine.hpp"

namespace semedit {

struct ScriptLine {
    std::size_t line = 0; ///< 1-based source line.
    EditCommand command;
};

/// A parsed edit script. Unknown verbs fail at load time.
struct EditScript {
    std::string source;
    std::vector<ScriptLine> lines;

    /// Throws Error(ScriptSyntax) with the offending line.
    static EditScript parse(std::string_view text, std::string source = "<script>");
    static EditScript load(const std::string& path);
};

/// Parses one script line; nullopt for blank and comment lines.
std::optional<EditCommand> parse_script_line(std::string_view text, std::size_t line = 0);

struct StepRecord {
    ScriptLine step;
    EditResult result;
};

struct ReplayResult {
    std::vector<StepRecord> steps;
    std::string content_mathml;
    std::string presentation_mathml;
    bool any_rejected = false;
};

ReplayResult run_script(const EditScript& script, const TemplateRegistry& reg = TemplateRegistry::builtin());

} // namespace semedit
