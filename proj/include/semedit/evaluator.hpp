#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semedit/document.hpp"
#include "semedit/mathml.hpp"
#include "semedit/templates.hpp"

namespace semedit {

/// Ordered identifier bindings; later bindings shadow earlier ones.
class EvalEnvironment {
public:
    void bind(std::string name, double value) { bindings_.emplace_back(std::move(name), value); }
    std::optional<double> lookup(std::string_view name) const;
    const std::vector<std::pair<std::string, double>>& bindings() const noexcept { return bindings_; }
    /// Latest value per name, in first-binding order.
    std::vector<std::pair<std::string, double>> visible() const;

    bool operator==(const EvalEnvironment&) const = default;

private:
    std::vector<std::pair<std::string, double>> bindings_;
};

struct EvalOutcome {
    enum class Kind { Value, Boolean, Undefined };

    Kind kind = Kind::Undefined;
    double value = 0;
    bool truth = false;
    std::string reason; ///< UnboundVariable, DivisionByZero, DomainError, UnresolvedNode
    std::string detail; ///< Variable name or operator.

    static EvalOutcome number(double v) { return {Kind::Value, v, false, {}, {}}; }
    static EvalOutcome boolean(bool b) { return {Kind::Boolean, 0, b, {}, {}}; }
    static EvalOutcome undefined(std::string reason, std::string detail = {})
    {
        return {Kind::Undefined, 0, false, std::move(reason), std::move(detail)};
    }

    bool is_value() const noexcept { return kind == Kind::Value; }
    /// `Value(10)`, `Boolean(true)`, `Undefined(UnboundVariable(x))`.
    std::string to_string() const;
};

struct EvalOptions {
    double eq_tolerance = 1e-9; ///< Relative tolerance of eq/neq.
};

EvalOutcome evaluate(const ContentNode& expr, const EvalEnvironment& env, const EvalOptions& opts = {});
/// Evaluates the document's statements as one chain and returns the last outcome.
EvalOutcome evaluate(const Document& doc, const TemplateRegistry& reg, const EvalEnvironment& env = {},
                     const EvalOptions& opts = {});

struct ChainStep {
    std::size_t statement = 0;
    EvalOutcome outcome;
    EvalEnvironment env_after;
};

std::vector<ChainStep> evaluate_chain(const std::vector<ContentNode>& statements, EvalEnvironment env = {},
                                      const EvalOptions& opts = {});
std::vector<ChainStep> evaluate_chain(const Document& doc, const TemplateRegistry& reg, const EvalOptions& opts = {});

} // namespace semedit
