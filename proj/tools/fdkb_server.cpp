// Knowledge-base HTTP server.
//
// Settings come from built-in defaults, then --config, then FDKB_* env
// vars, then the remaining flags.

#include "fdkb/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"fdkb knowledge-base server"};
    std::string config_path;
    std::optional<int> port;
    std::optional<std::string> data_dir;
    std::optional<std::string> host;
    std::optional<double> theta;
    std::optional<std::size_t> row_limit;
    bool seed = false;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--port", port, "listen port (0 picks a free one)");
    app.add_option("--host", host, "listen address");
    app.add_option("--data-dir", data_dir, "directory holding journal.jsonl");
    app.add_option("--theta", theta, "FSN link threshold in (0, 1]");
    app.add_option("--row-limit", row_limit, "query intermediate row cap");
    app.add_flag("--seed-fixture", seed, "load the news-typology fixture into an empty journal");
    CLI11_PARSE(app, argc, argv);

    try {
        fdkb::ServiceConfig config;
        if (!config_path.empty()) fdkb::apply_config_file(config, config_path);
        fdkb::apply_config_env(config);
        if (port) config.port = *port;
        if (host) config.host = *host;
        if (data_dir) config.data_dir = *data_dir;
        if (theta) config.theta = *theta;
        if (row_limit) config.row_limit = *row_limit;
        if (seed) config.seed_fixture = true;

        // Server threads inherit this mask; only the main thread takes signals.
        sigset_t signals;
        sigemptyset(&signals);
        sigaddset(&signals, SIGINT);
        sigaddset(&signals, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &signals, nullptr);

        fdkb::KbService service(config);
        service.start();
        std::cout << "fdkb listening on " << config.host << ":" << service.port() << " (revision "
                  << service.store().revision() << ", data dir " << config.data_dir.string() << ")" << std::endl;

        int received = 0;
        sigwait(&signals, &received);
        service.stop();
        return 0;
    } catch (const fdkb::Error& e) {
        std::cerr << fdkb::error_body(e).dump() << "\n";
        return 2;
    }
}
