#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semedit/errors.hpp"

namespace semedit {

// ---------------------------------------------------------------------------
// Nodes
// ---------------------------------------------------------------------------

enum class NodeKind : std::uint8_t { Slot, Line, Formula, Text };

enum class RoleKind : std::uint8_t {
    None,
    Number,
    Identifier,
    Operator,
    Function,
    Apply,
    BracketPair,
    NoOp,
    AutoDetect,
};

/// Content MathML meaning of a node. `symbol` holds the operator glyph
/// (Operator) or the function name (Function); it is empty otherwise.
struct ContentRole {
    RoleKind kind = RoleKind::None;
    std::string symbol;

    static ContentRole none() { return {}; }
    static ContentRole number() { return {RoleKind::Number, {}}; }
    static ContentRole identifier() { return {RoleKind::Identifier, {}}; }
    static ContentRole auto_detect() { return {RoleKind::AutoDetect, {}}; }
    static ContentRole apply() { return {RoleKind::Apply, {}}; }
    static ContentRole bracket_pair() { return {RoleKind::BracketPair, {}}; }
    static ContentRole noop() { return {RoleKind::NoOp, {}}; }
    static ContentRole op(std::string sym) { return {RoleKind::Operator, std::move(sym)}; }
    static ContentRole function(std::string name) { return {RoleKind::Function, std::move(name)}; }

    bool operator==(const ContentRole&) const = default;
};

std::string to_string(const ContentRole& role);
std::string_view to_string(NodeKind kind) noexcept;

enum class NodeAttr : std::uint8_t { ReadOnly = 1, NoMove = 2, AutoDetect = 4 };

class AttrSet {
public:
    constexpr AttrSet() = default;
    constexpr AttrSet(std::initializer_list<NodeAttr> attrs)
    {
        for (auto a : attrs)
            bits_ |= static_cast<std::uint8_t>(a);
    }

    constexpr bool has(NodeAttr a) const noexcept { return (bits_ & static_cast<std::uint8_t>(a)) != 0; }
    constexpr void set(NodeAttr a) noexcept { bits_ |= static_cast<std::uint8_t>(a); }
    constexpr void clear(NodeAttr a) noexcept { bits_ &= static_cast<std::uint8_t>(~static_cast<std::uint8_t>(a)); }
    constexpr std::uint8_t bits() const noexcept { return bits_; }

    bool operator==(const AttrSet&) const = default;

private:
    std::uint8_t bits_ = 0;
};

/// How a materialized bracket pair came to exist. Typed pairs revert to a
/// pending open bracket when their close is deleted; scaffold pairs (from
/// the palette or from parsing) dissolve entirely.
enum class BracketOrigin : std::uint8_t { Scaffold, Typed };

/// One node of the four-type document tree.
///
/// Slot -> Line* ; Line -> (Formula | Text)* ; Formula -> (Slot | leaf Formula)*.
/// A Line stores its tokens flat: operands (Text, structured Formulas),
/// operator leaves and pending bracket leaves. Operator grouping inside a
/// Line is implied by precedence and materialized only on export.
struct DocNode {
    NodeKind kind = NodeKind::Slot;
    ContentRole role;
    AttrSet attrs;
    std::string presentation_tag;
    std::string text;        ///< Text characters, or the glyph of a leaf Formula.
    std::string template_id; ///< Originating template for Formula nodes.
    ContentRole head;        ///< Apply formulas: role of the head operator/function.
    int level = 0;           ///< NoOp leaves: precedence kept from the replaced operator.
    BracketOrigin origin = BracketOrigin::Scaffold;
    int reassoc_inner = -1;  ///< Split bracket pairs: leading slot items that came from the split pair.
    bool reassoc_glue = false;
    std::vector<DocNode> children;

    bool operator==(const DocNode&) const = default;

    static DocNode slot();
    static DocNode line();
    static DocNode text_token(std::string chars, ContentRole role = ContentRole::auto_detect());
};

/// Invisible multiplication operator inserted by linear input.
inline constexpr std::string_view kInvisibleTimes = "⁢";
inline constexpr std::string_view kBlackBox = "■";
inline constexpr std::string_view kEmptySlot = "□";

bool is_operator_leaf(const DocNode& n) noexcept; ///< Operator or NoOp leaf.
bool is_noop(const DocNode& n) noexcept;
bool is_invisible(const DocNode& n) noexcept;
bool is_pending_open(const DocNode& n) noexcept;
bool is_pending_close(const DocNode& n) noexcept;
bool is_pending_bracket(const DocNode& n) noexcept;
bool is_bracket_pair(const DocNode& n) noexcept; ///< Materialized pair with a slot.
bool is_structure(const DocNode& n) noexcept;    ///< Formula that owns Slots.
bool is_operand(const DocNode& n) noexcept;      ///< Text or structure.

DocNode make_pending_bracket(bool open);
DocNode make_noop(int level);
DocNode make_glyph_leaf(std::string glyph);

// ---------------------------------------------------------------------------
// Addresses
// ---------------------------------------------------------------------------

/// Child-index path from the root. The first index selects the root itself
/// and is always 0, so `0/0` is the first Line and `0/0/2` its third item.
using Path = std::vector<std::size_t>;

struct CaretPosition {
    Path path;
    std::size_t offset = 0;

    bool operator==(const CaretPosition&) const = default;

    /// `0/0/2:1` form used by scripts and the wire protocol.
    std::string to_string() const;
    static CaretPosition parse(std::string_view text);
};

struct Selection {
    CaretPosition anchor;
    CaretPosition focus;
    bool operator==(const Selection&) const = default;
};

/// A selection snapped to whole items of one Line: items [begin, end).
struct ItemRange {
    Path line;
    std::size_t begin = 0;
    std::size_t end = 0;
    bool operator==(const ItemRange&) const = default;
};

enum class Direction { Left, Right, Up, Down, Home, End };

struct Snapshot {
    DocNode tree;
    CaretPosition caret;
    std::optional<Selection> selection;
    std::uint64_t lineage = 0;
    std::uint64_t sequence = 0;
    std::string session_state; ///< Opaque state owned by the editing session.
};

// ---------------------------------------------------------------------------
// Document
// ---------------------------------------------------------------------------

class Document {
public:
    /// Root Slot holding one empty Line, caret at `0/0:0`, empty history.
    Document();

    const DocNode& root() const noexcept { return root_; }
    DocNode& mutable_root() noexcept { return root_; }

    /// Throws Error(PathInvalid) when any index is out of range.
    const DocNode& node_at(const Path& path) const;
    DocNode& mutable_node_at(const Path& path);
    bool contains(const Path& path) const noexcept;

    const CaretPosition& caret() const noexcept { return caret_; }
    /// Validates and canonicalizes. Throws Error(PathInvalid) for bad input.
    void set_caret(const CaretPosition& caret);

    const std::optional<Selection>& selection() const noexcept { return selection_; }
    void set_selection(std::optional<Selection> sel);
    /// Snaps the selection to a contiguous item range of one Line.
    std::optional<ItemRange> normalized_selection() const;

    /// Every caret-eligible position in document order.
    std::vector<CaretPosition> caret_stops() const;
    /// Moves the caret; boundaries are a no-op. Returns the new caret.
    CaretPosition caret_move(Direction dir);

    Snapshot snapshot() const;
    /// Throws Error(SnapshotForeign) when the snapshot is from another lineage.
    void restore(const Snapshot& snap);

    /// Undo history. `record` pushes the pre-command snapshot and clears redo.
    void record(Snapshot before);
    bool can_undo() const noexcept { return !undo_.empty(); }
    bool can_redo() const noexcept { return !redo_.empty(); }
    /// Throws Error(NoHistory) when there is nothing to undo/redo. The
    /// current state (with `current_state` as its session blob) is pushed
    /// onto the opposite stack; the restored snapshot is returned.
    Snapshot undo(std::string current_state = {});
    Snapshot redo(std::string current_state = {});
    std::size_t history_depth() const noexcept { return undo_.size(); }

    std::uint64_t lineage() const noexcept { return lineage_; }

    /// Re-establishes a valid caret after a structural edit, clamping
    /// stale paths and offsets.
    void repair_caret();

private:
    DocNode root_;
    CaretPosition caret_;
    std::optional<Selection> selection_;
    std::uint64_t lineage_;
    std::uint64_t next_sequence_ = 1;
    std::vector<Snapshot> undo_;
    std::vector<Snapshot> redo_;
};

/// Well-formedness problems of a tree (empty when valid): four-type
/// nesting, leaf shapes and NoOp placement.
std::vector<std::string> validate_tree(const DocNode& root);
std::vector<std::string> validate(const Document& doc);

/// Canonical caret for any address that names a valid position; equal
/// visual positions map to the same canonical address.
CaretPosition canonical_caret(const DocNode& root, const CaretPosition& caret);

/// Line-relative view of a caret: either a gap between items or a
/// character offset inside a Text item.
struct Spot {
    Path line;
    std::size_t index = 0;  ///< Gap index, or Text item index when in_text.
    std::size_t offset = 0; ///< Character offset (in code points) when in_text.
    bool in_text = false;
};

Spot to_spot(const DocNode& root, const CaretPosition& caret);
CaretPosition from_spot(const DocNode& root, const Spot& spot);

/// Gap index for a spot that sits on an item boundary, or nullopt when the
/// spot is strictly inside a Text.
std::optional<std::size_t> boundary_gap(const DocNode& root, const Spot& spot);

/// Number of Unicode scalars in a UTF-8 string, and byte offset of the
/// n-th scalar.
std::size_t utf8_length(std::string_view s) noexcept;
std::size_t utf8_byte_offset(std::string_view s, std::size_t scalar_index) noexcept;

/// Structural dump (kind, role, attrs, text) used in diagnostics and tests.
std::string debug_dump(const DocNode& node);

} // namespace semedit
