// semedit command-line front end: replay, convert, eval, serve.

#include <chrono>
#include <csignal>
#include <pthread.h>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semedit/evaluator.hpp"
#include "semedit/mathml.hpp"
#include "semedit/script.hpp"
#include "semedit/server.hpp"

using namespace semedit;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::XmlSyntax, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

nlohmann::json outcome_json(const ChainStep& step)
{
    nlohmann::json j = {{"statement", step.statement}, {"outcome", step.outcome.to_string()}};
    switch (step.outcome.kind) {
    case EvalOutcome::Kind::Value:
        j["kind"] = "Value";
        j["value"] = step.outcome.value;
        break;
    case EvalOutcome::Kind::Boolean:
        j["kind"] = "Boolean";
        j["value"] = step.outcome.truth;
        break;
    case EvalOutcome::Kind::Undefined:
        j["kind"] = "Undefined";
        j["reason"] = step.outcome.reason;
        if (!step.outcome.detail.empty())
            j["detail"] = step.outcome.detail;
        break;
    }
    nlohmann::json env = nlohmann::json::object();
    for (const auto& [name, v] : step.env_after.visible())
        env[name] = v;
    j["bindings"] = env;
    return j;
}

void print_trace(const StepRecord& rec)
{
    const EditResult& r = rec.result;
    std::cout << "[" << rec.step.line << "] " << rec.step.command.to_script() << " -> " << to_string(r.status);
    if (!r.reason.empty())
        std::cout << " (" << r.reason << ")";
    std::cout << " caret=" << r.caret.to_string();
    for (const auto& ev : r.transform_log)
        std::cout << " " << ev.event << "(" << ev.from << " -> " << ev.to << ")";
    std::cout << "\n";
}

int replay(const std::string& path, bool trace, bool presentation, bool eval, bool allow_rejected)
{
    EditScript script = EditScript::load(path);
    const TemplateRegistry& reg = TemplateRegistry::builtin();
    ReplayResult result = run_script(script, reg);
    if (trace)
        for (const auto& rec : result.steps)
            print_trace(rec);
    std::cout << result.content_mathml << "\n";
    if (presentation)
        std::cout << result.presentation_mathml << "\n";
    if (eval) {
        Document doc = parse_content(result.content_mathml, reg);
        for (const auto& step : evaluate_chain(doc, reg))
            std::cout << step.outcome.to_string() << "\n";
    }
    if (result.any_rejected && !allow_rejected) {
        for (const auto& rec : result.steps)
            if (rec.result.status == EditStatus::Rejected)
                std::cerr << path << ":" << rec.step.line << ": rejected: " << rec.result.reason << "\n";
        return 2;
    }
    return 0;
}

int convert(const std::string& path, bool presentation)
{
    const TemplateRegistry& reg = TemplateRegistry::builtin();
    ParseResult parsed = parse_content_with_diagnostics(read_file(path), reg);
    for (const auto& d : parsed.diagnostics)
        std::cerr << path << ": warning: " << d << "\n";
    if (presentation)
        std::cout << export_presentation(parsed.document, reg) << "\n";
    else
        std::cout << serialize_content(parsed.document, reg) << "\n";
    return 0;
}

int eval_file(const std::string& path)
{
    const TemplateRegistry& reg = TemplateRegistry::builtin();
    ParseResult parsed = parse_content_with_diagnostics(read_file(path), reg);
    for (const auto& d : parsed.diagnostics)
        std::cerr << path << ": warning: " << d << "\n";
    nlohmann::json out = nlohmann::json::array();
    for (const auto& step : evaluate_chain(parsed.document, reg))
        out.push_back(outcome_json(step));
    std::cout << out.dump(2) << "\n";
    return 0;
}

int serve(const std::string& bind, const std::string& templates, int idle_minutes)
{
    auto [host, port] = parse_bind_address(bind);
    TemplateRegistry reg = templates.empty() ? TemplateRegistry::builtin() : load_registry(read_file(templates));
    ServiceConfig config;
    config.idle_timeout = std::chrono::minutes(idle_minutes);
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    SessionService service(reg, config);
    WebSocketServer server(service);
    std::uint16_t bound = server.start(host, port);
    std::cerr << "semedit: listening on ws://" << host << ":" << bound << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"semedit: Content MathML structure editor engine"};
    app.require_subcommand(1);

    std::string script_path;
    bool trace = false, presentation = false, eval = false, allow_rejected = false;
    auto* replay_cmd = app.add_subcommand("replay", "Replay an edit script and print the result");
    replay_cmd->add_option("script", script_path, "Edit script")->required();
    replay_cmd->add_flag("--trace", trace, "Print each step's status and transform log");
    replay_cmd->add_flag("--presentation", presentation, "Also print Presentation MathML");
    replay_cmd->add_flag("--eval", eval, "Also evaluate the resulting formula chain");
    replay_cmd->add_flag("--allow-rejected", allow_rejected, "Exit 0 even if a command was rejected");

    std::string convert_path;
    bool convert_presentation = false;
    auto* convert_cmd = app.add_subcommand("convert", "Re-serialize Content MathML");
    convert_cmd->add_option("file", convert_path, "Content MathML file")->required();
    convert_cmd->add_flag("--presentation", convert_presentation, "Print Presentation MathML instead");

    std::string eval_path;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a Content MathML formula chain");
    eval_cmd->add_option("file", eval_path, "Content MathML file")->required();

    std::string bind = "127.0.0.1:8080", templates;
    int idle = 30;
    auto* serve_cmd = app.add_subcommand("serve", "Run the WebSocket session service");
    serve_cmd->add_option("--bind", bind, "host:port to listen on")->capture_default_str();
    serve_cmd->add_option("--templates", templates, "Template definition overrides");
    serve_cmd->add_option("--idle-timeout", idle, "Session idle timeout in minutes")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*replay_cmd)
            return replay(script_path, trace, presentation, eval, allow_rejected);
        if (*convert_cmd)
            return convert(convert_path, convert_presentation);
        if (*eval_cmd)
            return eval_file(eval_path);
        if (*serve_cmd)
            return serve(bind, templates, idle);
    } catch (const Error& e) {
        std::cerr << "semedit: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "semedit: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
