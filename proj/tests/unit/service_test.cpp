#include <gtest/gtest.h>

#include <thread>

#include "helpers.hpp"
#include "semedit/script.hpp"
#include "semedit/server.hpp"
#include "semedit/service.hpp"
#include "ws_client.hpp"

using namespace semedit;
using namespace semedit::testing;

namespace {

Json request(const std::string& session, std::int64_t seq, Json command)
{
    return {{"session", session}, {"seq", seq}, {"command", std::move(command)}};
}

Json key_cmd(const std::string& ch)
{
    return {{"type", "key"}, {"char", ch}};
}

} // namespace

TEST(Service, KeysProduceStateSnapshots)
{
    SessionService svc;
    Json r1 = svc.handle(request("s", 1, key_cmd("2")));
    EXPECT_EQ(r1["seq"], 1);
    EXPECT_EQ(r1["status"], "Applied");
    Json r2 = svc.handle(request("s", 2, key_cmd("+")));
    EXPECT_EQ(r2["seq"], 2);
    std::string xml = r2["content_mathml"];
    EXPECT_EQ(xml, "<math><apply><plus/><cn>2</cn><ci>□</ci></apply></math>");
    EXPECT_EQ(xml, run_script(EditScript::parse("key 2\nkey +\n")).content_mathml);
    for (const char* field : {"presentation_mathml", "caret", "pending_token", "transform_log", "diagnostics"})
        EXPECT_TRUE(r2.contains(field)) << field;
}

TEST(Service, SeqGapClosesSession)
{
    SessionService svc;
    svc.handle(request("g", 3, key_cmd("1")));
    Json gap = svc.handle(request("g", 5, key_cmd("2")));
    EXPECT_EQ(gap["status"], "Rejected");
    EXPECT_EQ(gap["reason"], "SeqGap");
    EXPECT_EQ(gap["closed"], true);
    ASSERT_FALSE(gap["diagnostics"].empty());
    EXPECT_NE(gap["diagnostics"][0].get<std::string>().find("SeqGap"), std::string::npos);
    Json after = svc.handle(request("g", 6, key_cmd("3")));
    EXPECT_EQ(after["reason"], "SessionClosed");
    EXPECT_EQ(svc.session_count(), 0u);
}

TEST(Service, RepeatedSeqIsAGap)
{
    SessionService svc;
    svc.handle(request("r", 1, key_cmd("1")));
    EXPECT_EQ(svc.handle(request("r", 1, key_cmd("1")))["reason"], "SeqGap");
}

TEST(Service, MalformedFrames)
{
    SessionService svc;
    Json bad = Json::parse(svc.handle_text("{not json"));
    EXPECT_EQ(bad["status"], "Rejected");
    EXPECT_EQ(bad["reason"], "ProtocolError");
    Json nosession = svc.handle(Json{{"seq", 1}});
    EXPECT_EQ(nosession["reason"], "ProtocolError");
    Json unknown = svc.handle(request("u", 1, {{"type", "teleport"}}));
    EXPECT_EQ(unknown["reason"], "ProtocolError");
    EXPECT_EQ(unknown["closed"], true);
}

TEST(Service, TemplatesListing)
{
    SessionService svc;
    Json r = svc.handle(request("t", 1, {{"type", "templates"}}));
    EXPECT_EQ(r["status"], "NoEffect");
    ASSERT_TRUE(r["templates"].is_array());
    EXPECT_EQ(r["templates"].size(), TemplateRegistry::builtin().size());
    bool divide = false;
    for (const auto& t : r["templates"])
        if (t["id"] == "divide") {
            divide = true;
            EXPECT_EQ(t["arity"], 2);
            EXPECT_EQ(t["precedence"], 4);
            EXPECT_EQ(t["skeleton"], "<mfrac>%1%2</mfrac>");
        }
    EXPECT_TRUE(divide);
    EXPECT_EQ(r["content_mathml"], "<math/>");
}

TEST(Service, RejectedCommandKeepsSessionOpen)
{
    SessionService svc;
    Json r = svc.handle(request("k", 1, {{"type", "template"}, {"id", "nosuch"}}));
    EXPECT_EQ(r["status"], "Rejected");
    EXPECT_EQ(r["reason"], "UnknownTemplate");
    EXPECT_FALSE(r.contains("closed"));
    EXPECT_EQ(svc.handle(request("k", 2, key_cmd("1")))["status"], "Applied");
}

TEST(Service, TransformLogOnTheWire)
{
    SessionService svc;
    std::int64_t seq = 0;
    for (const char* c : {"3", "+", "2"})
        svc.handle(request("f", ++seq, key_cmd(c)));
    svc.handle(request("f", ++seq, {{"type", "press"}, {"name", "left"}}));
    Json r = svc.handle(request("f", ++seq, {{"type", "press"}, {"name", "backspace"}}));
    ASSERT_EQ(r["transform_log"].size(), 1u);
    EXPECT_EQ(r["transform_log"][0], (Json{{"event", "OperatorBlackBoxed"}, {"from", "+"}, {"to", "■"}}));
}

TEST(Service, SessionsAreIsolated)
{
    SessionService svc;
    auto drive = [&](const std::string& id, const std::string& keys) {
        std::int64_t seq = 0;
        for (char c : keys)
            svc.handle(request(id, ++seq, key_cmd(std::string(1, c))));
    };
    std::thread a(drive, "a", "1+2+3+4+5");
    std::thread b(drive, "b", "9*8*7*6*5");
    a.join();
    b.join();
    EXPECT_EQ(svc.handle(request("a", 10, {{"type", "state"}}))["content_mathml"], content(typed("1+2+3+4+5")));
    EXPECT_EQ(svc.handle(request("b", 10, {{"type", "state"}}))["content_mathml"], content(typed("9*8*7*6*5")));
}

TEST(Service, IdleSessionsExpire)
{
    ServiceConfig cfg;
    cfg.idle_timeout = std::chrono::minutes(30);
    SessionService svc(TemplateRegistry::builtin(), cfg);
    auto t0 = SessionService::Clock::time_point{} + std::chrono::hours(1);
    svc.handle(request("old", 1, key_cmd("1")), t0);
    svc.handle(request("new", 1, key_cmd("1")), t0 + std::chrono::minutes(20));
    EXPECT_EQ(svc.session_count(), 2u);
    EXPECT_EQ(svc.expire_idle(t0 + std::chrono::minutes(31)), 1u);
    EXPECT_EQ(svc.session_count(), 1u);
    Json r = svc.handle(request("old", 2, key_cmd("2")), t0 + std::chrono::minutes(32));
    EXPECT_EQ(r["reason"], "SessionClosed");
}

TEST(Service, CommandJsonRoundTrip)
{
    const EditCommand cmds[] = {
        EditCommand::key("≤"),
        EditCommand::press_key(PressKey::Delete),
        EditCommand::insert_template("sqrt"),
        EditCommand::bracket(false),
        EditCommand::select(CaretPosition::parse("0/0:0"), CaretPosition::parse("0/0/2:1")),
        EditCommand::cut(),
        EditCommand::copy(),
        EditCommand::paste(),
        EditCommand::undo(),
        EditCommand::redo(),
        EditCommand::set_mode(InputMode::Legacy),
    };
    for (const auto& c : cmds)
        EXPECT_EQ(command_from_json(command_to_json(c)).to_script(), c.to_script());
    EXPECT_EQ(command_from_json({{"type", "press"}, {"key", "home"}}).press, PressKey::Home);
    EXPECT_THROW(command_from_json({{"type", "key"}}), Error);
    EXPECT_THROW(command_from_json({{"type", "bracket"}, {"side", "middle"}}), Error);
}

TEST(Service, BindAddress)
{
    EXPECT_EQ(parse_bind_address("127.0.0.1:8080"), (std::pair<std::string, std::uint16_t>{"127.0.0.1", 8080}));
    EXPECT_THROW(parse_bind_address("localhost"), Error);
    EXPECT_THROW(parse_bind_address("host:99999"), Error);
    EXPECT_THROW(parse_bind_address("host:abc"), Error);
}

TEST(Service, WebSocketRoundTrip)
{
    SessionService svc;
    WebSocketServer server(svc);
    std::uint16_t port = server.start("127.0.0.1", 0);
    ASSERT_NE(port, 0);
    {
        WsClient client("127.0.0.1", port);
        Json r1 = Json::parse(client.roundtrip(request("w", 1, key_cmd("2")).dump()));
        EXPECT_EQ(r1["seq"], 1);
        Json r2 = Json::parse(client.roundtrip(request("w", 2, key_cmd("+")).dump()));
        EXPECT_EQ(r2["content_mathml"], "<math><apply><plus/><cn>2</cn><ci>□</ci></apply></math>");
        Json bad = Json::parse(client.roundtrip("[]"));
        EXPECT_EQ(bad["reason"], "ProtocolError");
    }
    server.stop();
}
