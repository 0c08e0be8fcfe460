#include "repofix/llm/transport.hpp"

#include "httplib.h"

namespace repofix::llm {

namespace {

TransportFactory& factory_override() {
    static TransportFactory factory;
    return factory;
}

class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(std::string base_url) : base_url_(std::move(base_url)) {}

    HttpResult post(const std::string& path, const std::map<std::string, std::string>& headers,
                    const std::string& body, int timeout_seconds) override {
        httplib::Client client(base_url_);
        client.set_read_timeout(timeout_seconds, 0);
        client.set_connection_timeout(timeout_seconds, 0);
        httplib::Headers h(headers.begin(), headers.end());
        auto res = client.Post(path, h, body, "application/json");
        HttpResult out;
        if (!res) {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.transport_ok = true;
        out.status = res->status;
        out.body = res->body;
        return out;
    }

private:
    std::string base_url_;
};

}  // namespace

std::shared_ptr<HttpTransport> make_transport(const std::string& base_url) {
    if (factory_override()) return factory_override()(base_url);
    return std::make_shared<HttplibTransport>(base_url);
}

void set_transport_factory_for_testing(TransportFactory factory) {
    factory_override() = std::move(factory);
}

}  // namespace repofix::llm
