#include "semedit/server.hpp"

#include <condition_variable>
#include <list>
#include <mutex>
#include <thread>

#include <sys/socket.h>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace semedit {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct WebSocketServer::Impl {
    SessionService& service;
    asio::io_context io;
    tcp::acceptor acceptor{io};
    std::thread accept_thread;
    std::uint16_t port = 0;

    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;
    struct Conn {
        std::thread thread;
        int fd = -1;
        bool done = false;
    };
    std::list<Conn> conns;

    explicit Impl(SessionService& s) : service(s) {}

    void reap()
    {
        for (auto it = conns.begin(); it != conns.end();) {
            if (it->done) {
                it->thread.join();
                it = conns.erase(it);
            } else {
                ++it;
            }
        }
    }

    void serve(tcp::socket socket, Conn* conn)
    {
        try {
            websocket::stream<tcp::socket> ws(std::move(socket));
            ws.set_option(websocket::stream_base::decorator(
                [](websocket::response_type& res) { res.set(beast::http::field::server, "semedit"); }));
            ws.accept();
            for (;;) {
                beast::flat_buffer buffer;
                ws.read(buffer);
                std::string reply = service.handle_text(beast::buffers_to_string(buffer.data()));
                ws.text(true);
                ws.write(asio::buffer(reply));
            }
        } catch (const std::exception&) {
            // Peer closed or the server is stopping.
        }
        std::lock_guard lock(mutex);
        conn->done = true;
    }

    void accept_loop()
    {
        for (;;) {
            boost::system::error_code ec;
            tcp::socket socket(io);
            acceptor.accept(socket, ec);
            std::lock_guard lock(mutex);
            if (stopped)
                return;
            if (ec)
                continue;
            reap();
            conns.emplace_back();
            Conn* conn = &conns.back();
            conn->fd = socket.native_handle();
            conn->thread = std::thread([this, conn, s = std::move(socket)]() mutable { serve(std::move(s), conn); });
        }
    }
};

WebSocketServer::WebSocketServer(SessionService& service) : impl_(std::make_unique<Impl>(service)) {}

WebSocketServer::~WebSocketServer()
{
    stop();
}

std::uint16_t WebSocketServer::start(const std::string& host, std::uint16_t port)
{
    tcp::endpoint ep(asio::ip::make_address(host), port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
    impl_->port = impl_->acceptor.local_endpoint().port();
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
    return impl_->port;
}

std::uint16_t WebSocketServer::port() const noexcept
{
    return impl_->port;
}

void WebSocketServer::wait()
{
    std::unique_lock lock(impl_->mutex);
    impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void WebSocketServer::stop()
{
    {
        std::lock_guard lock(impl_->mutex);
        if (impl_->stopped)
            return;
        impl_->stopped = true;
        if (impl_->acceptor.is_open())
            ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
        for (auto& c : impl_->conns)
            if (!c.done)
                ::shutdown(c.fd, SHUT_RDWR);
    }
    impl_->stopped_cv.notify_all();
    if (impl_->accept_thread.joinable())
        impl_->accept_thread.join();
    for (auto& c : impl_->conns)
        if (c.thread.joinable())
            c.thread.join();
    impl_->conns.clear();
    boost::system::error_code ec;
    impl_->acceptor.close(ec);
}

std::pair<std::string, std::uint16_t> parse_bind_address(const std::string& text)
{
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
        throw Error(ErrorCode::ProtocolError, "bind address must be host:port, got '" + text + "'");
    std::string host = text.substr(0, colon);
    if (host.size() > 2 && host.front() == '[' && host.back() == ']')
        host = host.substr(1, host.size() - 2);
    unsigned long port = 0;
    try {
        std::size_t used = 0;
        port = std::stoul(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1 || port > 65535)
            throw std::out_of_range("port");
    } catch (const std::exception&) {
        throw Error(ErrorCode::ProtocolError, "bad port in bind address '" + text + "'");
    }
    return {host, static_cast<std::uint16_t>(port)};
}

} // namespace semedit
