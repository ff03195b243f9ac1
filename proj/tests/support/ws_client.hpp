#pragma once

#include <cstdint>
#include <string>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace semedit::testing {

/// Blocking WebSocket client: one text frame out, one frame back.
class WsClient {
public:
    WsClient(const std::string& host, std::uint16_t port) : ws_(io_)
    {
        boost::asio::ip::tcp::resolver resolver(io_);
        auto results = resolver.resolve(host, std::to_string(port));
        boost::asio::connect(ws_.next_layer(), results.begin(), results.end());
        ws_.handshake(host, "/");
        ws_.text(true);
    }

    ~WsClient()
    {
        boost::system::error_code ec;
        ws_.close(boost::beast::websocket::close_code::normal, ec);
    }

    std::string roundtrip(const std::string& frame)
    {
        ws_.write(boost::asio::buffer(frame));
        boost::beast::flat_buffer buffer;
        ws_.read(buffer);
        return boost::beast::buffers_to_string(buffer.data());
    }

private:
    boost::asio::io_context io_;
    boost::beast::websocket::stream<boost::asio::ip::tcp::socket> ws_;
};

} // namespace semedit::testing
