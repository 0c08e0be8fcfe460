#pragma once
// HTTP transport seam for the live backend. Tests can install a factory
// returning a fake (or poisoned) transport; production code uses httplib.

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace repofix::llm {

struct HttpResult {
    bool transport_ok = false;
    int status = 0;
    std::string body;
    std::string error;  // set when transport_ok is false
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResult post(const std::string& path,
                            const std::map<std::string, std::string>& headers,
                            const std::string& body, int timeout_seconds) = 0;
};

using TransportFactory =
    std::function<std::shared_ptr<HttpTransport>(const std::string& base_url)>;

// Returns an httplib-backed transport unless a test factory is installed.
std::shared_ptr<HttpTransport> make_transport(const std::string& base_url);

// Installs (or clears, with nullptr) the process-wide factory override.
void set_transport_factory_for_testing(TransportFactory factory);

}  // namespace repofix::llm
