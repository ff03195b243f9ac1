#pragma once

#include <string>
#include <vector>

#include "semedit/engine.hpp"

namespace semedit::acceptance {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string read_text(const std::string& path);
std::string golden(const std::string& name);
/// Applies every key to a fresh session; `legacy` sets the input mode first.
Session typed(const std::vector<std::string>& keys, bool legacy);
std::vector<std::string> chars(const std::string& s);

Verdict times_plus_structure();
Verdict blackbox_sequence();
Verdict linear_examples();
Verdict auto_replace_undo();
Verdict always_valid_fuzz();
Verdict bracket_revert();
Verdict precedence_oracle();
Verdict round_trip();
Verdict undo_totality();
Verdict service_equivalence();

} // namespace semedit::acceptance
