#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "novopoly/board.hpp"

namespace novopoly {

struct ServiceOptions {
    std::filesystem::path data_dir = "service-data";  // run artifacts, one directory per run
    int workers = 2;                                  // runs executing at once
    int queue_limit = 32;                             // queued runs before requests get 503
    int max_page = 1000;                              // largest frame page served
    std::string static_dir;                           // served at / when set
};

// HTTP facade: catalogs, game and tournament runs, frames and reports.
class SimService {
public:
    explicit SimService(ServiceOptions options = {});
    ~SimService();
    SimService(const SimService&) = delete;
    SimService& operator=(const SimService&) = delete;

    // Binds the listening socket; port 0 picks a free port. Returns the bound port, or -1.
    int bind(const std::string& host, int port);
    // Serves until stop(). Call after bind().
    bool listen();
    void stop();
    // Blocks until every queued and running run has finished.
    void drain();

    // Request handling without a socket, for embedding and tests: returns (status, body).
    std::pair<int, std::string> handle(const std::string& method, const std::string& path_and_query,
                                       const std::string& body = {});

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// The document sent for an error response.
json error_body(const std::string& code, const std::string& message);

}  // namespace novopoly
