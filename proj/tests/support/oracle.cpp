#include "oracle.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace semedit::testing {

namespace {

const char* const kFunctions[] = {"sin", "cos", "tan", "ln", "log", "exp"};

enum class T { Num, Var, Fn, Op, Open, Close };

struct Tok {
    T kind;
    std::string text;
};

std::vector<Tok> tokenize(const std::vector<std::string>& keys)
{
    std::string flat;
    for (const auto& k : keys)
        flat += k == "×" ? "*" : k;
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < flat.size()) {
        char c = flat[i];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < flat.size() && (std::isdigit(static_cast<unsigned char>(flat[j])) || flat[j] == '.'))
                ++j;
            out.push_back({T::Num, flat.substr(i, j - i)});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            bool fn = false;
            for (const char* f : kFunctions) {
                std::string name = f;
                if (flat.compare(i, name.size(), name) == 0) {
                    out.push_back({T::Fn, name});
                    i += name.size();
                    fn = true;
                    break;
                }
            }
            if (!fn)
                out.push_back({T::Var, std::string(1, c)}), ++i;
        } else if (c == '(') {
            out.push_back({T::Open, "("}), ++i;
        } else if (c == ')') {
            out.push_back({T::Close, ")"}), ++i;
        } else if (std::string("+-*/^=<>").find(c) != std::string::npos) {
            out.push_back({T::Op, std::string(1, c)}), ++i;
        } else {
            throw std::invalid_argument(std::string("unexpected key '") + c + "'");
        }
    }
    return out;
}

struct Pending {
    enum { Binary, Negate, Function, Paren } kind;
    std::string op;
    int prec = 0;
};

int binary_prec(char c)
{
    switch (c) {
    case '=': return 1;
    case '<': case '>': return 2;
    case '+': case '-': return 3;
    case '*': case '/': return 4;
    case '^': return 6;
    }
    return 0;
}

std::string binary_name(char c)
{
    switch (c) {
    case '=': return "eq";
    case '<': return "lt";
    case '>': return "gt";
    case '+': return "plus";
    case '-': return "minus";
    case '*': return "times";
    case '/': return "divide";
    case '^': return "power";
    }
    return "?";
}

Expr pop_one(std::vector<Expr>& out)
{
    if (out.empty())
        throw std::invalid_argument("missing operand");
    Expr e = std::move(out.back());
    out.pop_back();
    return e;
}

void reduce(std::vector<Expr>& out, const Pending& p)
{
    if (p.kind == Pending::Negate) {
        out.push_back(Expr::apply("minus", {pop_one(out)}));
        return;
    }
    if (p.kind == Pending::Function) {
        out.push_back(Expr::apply(p.op, {pop_one(out)}));
        return;
    }
    Expr r = pop_one(out);
    Expr l = pop_one(out);
    bool nary = p.op == "plus" || p.op == "times";
    if (nary && l.kind == Expr::Kind::Apply && l.op == p.op && l.chain && !l.bracketed) {
        l.args.push_back(std::move(r));
        out.push_back(std::move(l));
        return;
    }
    Expr e = Expr::apply(p.op, {std::move(l), std::move(r)});
    e.chain = true;
    out.push_back(std::move(e));
}

} // namespace

Expr shunting_yard(const std::vector<std::string>& keys)
{
    std::vector<Tok> toks = tokenize(keys);
    std::vector<Expr> out;
    std::vector<Pending> ops;
    auto ends_operand = [](T k) { return k == T::Num || k == T::Var || k == T::Close; };
    auto starts_operand = [](T k) { return k == T::Num || k == T::Var || k == T::Fn || k == T::Open; };

    auto push_binary = [&](const std::string& name, int prec, bool right) {
        while (!ops.empty() && ops.back().kind != Pending::Paren
               && (ops.back().prec > prec || (ops.back().prec == prec && !right))) {
            reduce(out, ops.back());
            ops.pop_back();
        }
        ops.push_back({Pending::Binary, name, prec});
    };

    for (std::size_t i = 0; i < toks.size(); ++i) {
        const Tok& t = toks[i];
        bool after_operand = i > 0 && ends_operand(toks[i - 1].kind);
        if (after_operand && starts_operand(t.kind))
            push_binary("times", 4, false);
        switch (t.kind) {
        case T::Num: out.push_back(Expr::num(t.text)); break;
        case T::Var: out.push_back(Expr::var(t.text)); break;
        case T::Fn: ops.push_back({Pending::Function, t.text, 7}); break;
        case T::Open: ops.push_back({Pending::Paren, "(", 0}); break;
        case T::Close:
            while (!ops.empty() && ops.back().kind != Pending::Paren) {
                reduce(out, ops.back());
                ops.pop_back();
            }
            if (ops.empty())
                throw std::invalid_argument("unbalanced ')'");
            ops.pop_back();
            if (out.empty())
                throw std::invalid_argument("empty parentheses");
            out.back().bracketed = true;
            out.back().chain = false;
            break;
        case T::Op: {
            char c = t.text[0];
            if (c == '-' && !after_operand) {
                ops.push_back({Pending::Negate, "minus", 5});
                break;
            }
            if (!after_operand)
                throw std::invalid_argument("operator without left operand");
            push_binary(binary_name(c), binary_prec(c), c == '^');
            break;
        }
        }
    }
    while (!ops.empty()) {
        if (ops.back().kind == Pending::Paren)
            throw std::invalid_argument("unbalanced '('");
        reduce(out, ops.back());
        ops.pop_back();
    }
    if (out.size() != 1)
        throw std::invalid_argument("dangling operands");
    return out.front();
}

std::string expr_xml(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Num: return "<cn>" + e.text + "</cn>";
    case Expr::Kind::Var: return "<ci>" + e.text + "</ci>";
    case Expr::Kind::Apply: break;
    }
    std::string s = "<apply>";
    if (e.op == "pm" || e.op == "noop")
        s += "<csymbol cd=\"semedit\">" + e.op + "</csymbol>";
    else
        s += "<" + e.op + "/>";
    for (const auto& a : e.args)
        s += expr_xml(a);
    return s + "</apply>";
}

std::string to_content_xml(const Expr& e)
{
    return "<math>" + expr_xml(e) + "</math>";
}

bool close_rel(double a, double b, double tol)
{
    if (a == b)
        return true;
    return std::fabs(a - b) <= tol * std::fmax(std::fabs(a), std::fabs(b));
}

namespace {

RefOutcome undefined(std::string why)
{
    RefOutcome r;
    r.reason = std::move(why);
    return r;
}

RefOutcome number(double v, bool guard = true)
{
    if (guard && !std::isfinite(v))
        return undefined("DomainError");
    RefOutcome r;
    r.kind = RefOutcome::Kind::Value;
    r.value = v;
    return r;
}

RefOutcome truth(bool b)
{
    RefOutcome r;
    r.kind = RefOutcome::Kind::Boolean;
    r.truth = b;
    return r;
}

} // namespace

RefOutcome reference_eval(const Expr& e, const std::map<std::string, double>& env)
{
    if (e.kind == Expr::Kind::Num)
        return number(std::strtod(e.text.c_str(), nullptr), false);
    if (e.kind == Expr::Kind::Var) {
        auto it = env.find(e.text);
        return it == env.end() ? undefined("UnboundVariable") : number(it->second, false);
    }
    std::vector<double> v;
    for (const auto& a : e.args) {
        RefOutcome r = reference_eval(a, env);
        if (r.kind == RefOutcome::Kind::Undefined)
            return r;
        if (r.kind == RefOutcome::Kind::Boolean)
            return undefined("DomainError");
        v.push_back(r.value);
    }
    const std::string& op = e.op;
    if (op == "eq" || op == "neq") {
        bool same = close_rel(v[0], v[1], 1e-9);
        return truth(op == "eq" ? same : !same);
    }
    if (op == "lt") return truth(v[0] < v[1]);
    if (op == "gt") return truth(v[0] > v[1]);
    if (op == "leq") return truth(v[0] <= v[1]);
    if (op == "geq") return truth(v[0] >= v[1]);
    if (op == "plus") {
        double s = 0;
        for (double x : v)
            s += x;
        return number(s);
    }
    if (op == "times") {
        double p = 1;
        for (double x : v)
            p *= x;
        return number(p);
    }
    if (op == "minus")
        return number(v.size() == 1 ? -v[0] : v[0] - v[1]);
    if (op == "divide")
        return v[1] == 0 ? undefined("DivisionByZero") : number(v[0] / v[1]);
    if (op == "power")
        return v[0] == 0 && v[1] < 0 ? undefined("DivisionByZero") : number(std::pow(v[0], v[1]));
    if (op == "root")
        return v[0] < 0 ? undefined("DomainError") : number(std::sqrt(v[0]));
    if (op == "abs") return number(std::fabs(v[0]));
    if (op == "sin") return number(std::sin(v[0]));
    if (op == "cos") return number(std::cos(v[0]));
    if (op == "tan") return number(std::tan(v[0]));
    if (op == "exp") return number(std::exp(v[0]));
    if (op == "ln") return v[0] <= 0 ? undefined("DomainError") : number(std::log(v[0]));
    if (op == "log") return v[0] <= 0 ? undefined("DomainError") : number(std::log10(v[0]));
    return undefined("UnresolvedNode");
}

} // namespace semedit::testing
