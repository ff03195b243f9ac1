#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semedit/engine.hpp"

namespace semedit {

enum class Assoc { Left, Right };

struct Precedence {
    int level = 0;
    Assoc assoc = Assoc::Left;
    bool operator==(const Precedence&) const = default;
};

/// Binding levels used by linear input. Keys are operator glyphs, plus
/// `unary-` for prefix minus, `apply` for function application and the
/// invisible-times glyph for juxtaposition.
class PrecedenceTable {
public:
    /// Levels taken from the registry's infix and structure templates.
    static PrecedenceTable from_registry(const TemplateRegistry& reg);

    std::optional<Precedence> find(std::string_view op) const;
    Precedence at(std::string_view op) const; ///< Throws Error(PathInvalid) when unknown.
    void set(std::string op, Precedence p);
    const std::map<std::string, Precedence, std::less<>>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, Precedence, std::less<>> entries_;
};

/// One factor of a letter-run product: `letter` raised to `power` (1 = plain).
struct LetterFactor {
    std::string letter;
    int power = 1;
    bool operator==(const LetterFactor&) const = default;
};

struct LetterRunReading {
    bool is_function = false;
    std::string function;
    std::vector<LetterFactor> factors;
    bool operator==(const LetterRunReading&) const = default;
};

/// Maximal runs of equal letters, in order.
std::vector<LetterFactor> letter_factors(std::string_view letters);

/// Function(name) when the whole buffer is a registered function name,
/// else a product where maximal runs of k equal letters become letter^k.
LetterRunReading classify_letter_run(std::string_view letters, const TemplateRegistry& reg);

/// Moves the caret out of every enclosing construct that binds tighter than
/// an incoming operator of `level` (or equally, for left-associative
/// operators). Only leaves a construct from the end of its last slot, and
/// never past an open bracket. Returns the resulting caret.
CaretPosition precedence_widen(Document& doc, int level, Assoc assoc, const TemplateRegistry& reg);

} // namespace semedit
