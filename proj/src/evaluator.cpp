#include "semedit/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace semedit {

std::optional<double> EvalEnvironment::lookup(std::string_view name) const
{
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
        if (it->first == name)
            return it->second;
    return std::nullopt;
}

std::vector<std::pair<std::string, double>> EvalEnvironment::visible() const
{
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [k, v] : bindings_) {
        auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == k; });
        if (it == out.end())
            out.emplace_back(k, v);
        else
            it->second = v;
    }
    return out;
}

std::string EvalOutcome::to_string() const
{
    std::ostringstream out;
    switch (kind) {
    case Kind::Value: out << "Value(" << value << ")"; break;
    case Kind::Boolean: out << "Boolean(" << (truth ? "true" : "false") << ")"; break;
    case Kind::Undefined:
        out << "Undefined(" << reason;
        if (!detail.empty())
            out << "(" << detail << ")";
        out << ")";
        break;
    }
    return out.str();
}

namespace {

bool is_relation(std::string_view tag)
{
    return tag == "eq" || tag == "neq" || tag == "lt" || tag == "gt" || tag == "leq" || tag == "geq";
}

bool close_enough(double a, double b, double tol)
{
    if (a == b)
        return true;
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

EvalOutcome checked(double v, const std::string& op)
{
    if (std::isnan(v) || std::isinf(v))
        return EvalOutcome::undefined("DomainError", op);
    return EvalOutcome::number(v);
}

EvalOutcome eval(const ContentNode& n, const EvalEnvironment& env, const EvalOptions& opts)
{
    if (n.tag == "cn")
        return EvalOutcome::number(std::strtod(n.text.c_str(), nullptr));
    if (n.tag == "ci") {
        if (n.is_placeholder())
            return EvalOutcome::undefined("UnresolvedNode", std::string(kEmptySlot));
        if (auto v = env.lookup(n.text))
            return EvalOutcome::number(*v);
        return EvalOutcome::undefined("UnboundVariable", n.text);
    }
    if (n.tag != "apply" || n.children.empty())
        return EvalOutcome::undefined("UnresolvedNode", n.tag == "csymbol" ? n.text : n.tag);

    const ContentNode& head = n.children.front();
    if (head.tag == "csymbol")
        return EvalOutcome::undefined("UnresolvedNode", head.text);
    const std::string& op = head.tag;

    std::vector<double> args;
    for (std::size_t i = 1; i < n.children.size(); ++i) {
        EvalOutcome a = eval(n.children[i], env, opts);
        if (a.kind == EvalOutcome::Kind::Undefined)
            return a;
        if (a.kind == EvalOutcome::Kind::Boolean)
            return EvalOutcome::undefined("DomainError", op);
        args.push_back(a.value);
    }
    if (args.empty())
        return EvalOutcome::undefined("UnresolvedNode", op);

    if (is_relation(op)) {
        if (args.size() != 2)
            return EvalOutcome::undefined("DomainError", op);
        double a = args[0], b = args[1];
        bool eq = close_enough(a, b, opts.eq_tolerance);
        if (op == "eq") return EvalOutcome::boolean(eq);
        if (op == "neq") return EvalOutcome::boolean(!eq);
        if (op == "lt") return EvalOutcome::boolean(a < b);
        if (op == "gt") return EvalOutcome::boolean(a > b);
        if (op == "leq") return EvalOutcome::boolean(a <= b);
        return EvalOutcome::boolean(a >= b);
    }
    if (op == "plus") {
        double s = 0;
        for (double a : args)
            s += a;
        return checked(s, op);
    }
    if (op == "times") {
        double p = 1;
        for (double a : args)
            p *= a;
        return checked(p, op);
    }
    if (op == "minus")
        return checked(args.size() == 1 ? -args[0] : args[0] - args[1], op);
    if (op == "divide") {
        if (args[1] == 0)
            return EvalOutcome::undefined("DivisionByZero");
        return checked(args[0] / args[1], op);
    }
    if (op == "power") {
        if (args[0] == 0 && args[1] < 0)
            return EvalOutcome::undefined("DivisionByZero");
        return checked(std::pow(args[0], args[1]), op);
    }
    double x = args[0];
    if (op == "root") {
        if (x < 0)
            return EvalOutcome::undefined("DomainError", op);
        return checked(std::sqrt(x), op);
    }
    if (op == "abs") return checked(std::fabs(x), op);
    if (op == "sin") return checked(std::sin(x), op);
    if (op == "cos") return checked(std::cos(x), op);
    if (op == "tan") return checked(std::tan(x), op);
    if (op == "exp") return checked(std::exp(x), op);
    if (op == "ln" || op == "log") {
        if (x <= 0)
            return EvalOutcome::undefined("DomainError", op);
        return checked(op == "ln" ? std::log(x) : std::log10(x), op);
    }
    return EvalOutcome::undefined("UnresolvedNode", op);
}

} // namespace

EvalOutcome evaluate(const ContentNode& expr, const EvalEnvironment& env, const EvalOptions& opts)
{
    return eval(expr, env, opts);
}

std::vector<ChainStep> evaluate_chain(const std::vector<ContentNode>& statements, EvalEnvironment env,
                                      const EvalOptions& opts)
{
    std::vector<ChainStep> steps;
    for (std::size_t i = 0; i < statements.size(); ++i) {
        const ContentNode& s = statements[i];
        EvalOutcome out;
        bool definition = s.tag == "apply" && s.children.size() == 3 && s.children[0].tag == "eq"
            && s.children[1].tag == "ci" && !s.children[1].is_placeholder();
        if (definition) {
            out = eval(s.children[2], env, opts);
            if (out.kind == EvalOutcome::Kind::Value)
                env.bind(s.children[1].text, out.value);
            else if (out.kind == EvalOutcome::Kind::Boolean)
                out = EvalOutcome::undefined("DomainError", "eq");
        } else {
            out = eval(s, env, opts);
        }
        steps.push_back({i, out, env});
    }
    return steps;
}

std::vector<ChainStep> evaluate_chain(const Document& doc, const TemplateRegistry& reg, const EvalOptions& opts)
{
    return evaluate_chain(document_content(doc, reg), {}, opts);
}

EvalOutcome evaluate(const Document& doc, const TemplateRegistry& reg, const EvalEnvironment& env,
                     const EvalOptions& opts)
{
    auto statements = document_content(doc, reg);
    if (statements.size() == 1)
        return eval(statements.front(), env, opts);
    auto steps = evaluate_chain(statements, env, opts);
    return steps.empty() ? EvalOutcome::undefined("UnresolvedNode") : steps.back().outcome;
}

} // namespace semedit
