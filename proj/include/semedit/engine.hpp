#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semedit/document.hpp"
#include "semedit/templates.hpp"

namespace semedit {

enum class InputMode { Basic, Legacy };

enum class PressKey { Backspace, Delete, Left, Right, Up, Down, Home, End };

std::string_view to_string(PressKey key) noexcept;
std::optional<PressKey> parse_press_key(std::string_view name) noexcept;

/// One atomic user action.
struct EditCommand {
    enum class Kind { Key, Press, InsertTemplate, Bracket, SetSelection, Cut, Copy, Paste, Undo, Redo, SetMode };

    Kind kind = Kind::Key;
    std::string text; ///< Key: one Unicode scalar. InsertTemplate: template id.
    PressKey press = PressKey::Left;
    bool open = true; ///< Bracket side.
    Selection selection;
    InputMode mode = InputMode::Basic;

    static EditCommand key(std::string ch);
    static EditCommand press_key(PressKey k);
    static EditCommand insert_template(std::string id);
    static EditCommand bracket(bool open);
    static EditCommand select(CaretPosition anchor, CaretPosition focus);
    static EditCommand cut();
    static EditCommand copy();
    static EditCommand paste();
    static EditCommand undo();
    static EditCommand redo();
    static EditCommand set_mode(InputMode m);

    /// Script-line form (`key +`, `press backspace`, ...).
    std::string to_script() const;
};

struct TransformEvent {
    std::string event; ///< OperatorBlackBoxed, AutoReplaced, BracketReassociated, StructureReverted, OperatorFilled
    std::string from;
    std::string to;
    bool operator==(const TransformEvent&) const = default;
};

enum class EditStatus { Applied, NoEffect, Rejected };
std::string_view to_string(EditStatus s) noexcept;

struct EditResult {
    EditStatus status = EditStatus::NoEffect;
    std::string reason; ///< Rejected only: ReadOnlyTarget, ProtectedNoOp, NoSelection, ...
    std::vector<TransformEvent> transform_log;
    CaretPosition caret;
};

/// (operator glyph, typed char) -> operator glyph.
class AutoReplaceTable {
public:
    static AutoReplaceTable defaults();

    /// Throws Error(DefinitionSyntax) when the entry would make the table
    /// cyclic under repeated application of one char.
    void add(std::string op, std::string ch, std::string result);
    std::optional<std::string> lookup(std::string_view op, std::string_view ch) const;
    std::size_t size() const noexcept { return entries_.size(); }

    /// Lines of `<op> <char> <result>`, `#` comments.
    static AutoReplaceTable parse(std::string_view text);

private:
    std::map<std::pair<std::string, std::string>, std::string, std::less<>> entries_;
};

std::optional<std::string> auto_replace_lookup(const AutoReplaceTable& table, std::string_view op, std::string_view ch);

/// Letter run being typed in legacy mode: items [start, start+count) of
/// `line` render `letters`; the trailing `pending` letters may still grow
/// into a function name.
struct LetterRun {
    Path line;
    std::size_t start = 0;
    std::size_t count = 0;
    std::string letters;
    std::size_t pending = 0;

    bool operator==(const LetterRun&) const = default;
    std::string encode() const;
    static std::optional<LetterRun> decode(std::string_view s);
};

/// A single user's editing state: document, mode, clipboard and history.
class Session {
public:
    explicit Session(const TemplateRegistry& reg = TemplateRegistry::builtin(),
                     AutoReplaceTable table = AutoReplaceTable::defaults());

    EditResult apply(const EditCommand& cmd);

    const Document& document() const noexcept { return doc_; }
    Document& document() noexcept { return doc_; }
    const TemplateRegistry& registry() const noexcept { return *reg_; }
    const AutoReplaceTable& auto_replace() const noexcept { return table_; }

    InputMode mode() const noexcept { return mode_; }
    void set_mode(InputMode m) noexcept { mode_ = m; }

    const std::string& clipboard() const noexcept { return clipboard_; }
    void set_clipboard(std::string xml) { clipboard_ = std::move(xml); }

    const std::optional<LetterRun>& letter_run() const noexcept { return run_; }
    void set_letter_run(std::optional<LetterRun> run) { run_ = std::move(run); }
    /// Undecided letters of the current legacy run (empty when none).
    std::string pending_token() const;

private:
    EditResult dispatch(const EditCommand& cmd, std::vector<TransformEvent>& log);
    std::string session_state() const;
    void load_session_state(std::string_view s);

    const TemplateRegistry* reg_;
    AutoReplaceTable table_;
    Document doc_;
    InputMode mode_ = InputMode::Basic;
    std::string clipboard_;
    std::optional<LetterRun> run_;
};

EditResult apply_command(Session& session, const EditCommand& cmd);

} // namespace semedit
