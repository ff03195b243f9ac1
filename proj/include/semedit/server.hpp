#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "semedit/service.hpp"

namespace semedit {

/// WebSocket transport for SessionService: one JSON message per text frame,
/// one response frame per request, in request order per connection.
class WebSocketServer {
public:
    explicit WebSocketServer(SessionService& service);
    ~WebSocketServer();

    WebSocketServer(const WebSocketServer&) = delete;
    WebSocketServer& operator=(const WebSocketServer&) = delete;

    /// Binds and starts accepting on a background thread. Port 0 picks a
    /// free port. Returns the bound port.
    std::uint16_t start(const std::string& host, std::uint16_t port);
    /// Blocks until stop() is called from another thread.
    void wait();
    void stop();

    std::uint16_t port() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits `host:port`; throws Error(ProtocolError) on malformed input.
std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& text);

} // namespace semedit
