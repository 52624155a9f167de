#pragma once

// HTTP/JSON facade over a KbStore. Every mutation goes through
// KbStore::commit; every read runs against one snapshot.

#include "fdkb/error.hpp"
#include "fdkb/kb_store.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace fdkb {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8420; // 0 binds an ephemeral port
    std::filesystem::path data_dir = "fdkb-data";
    double theta = kDefaultTheta;
    ElasticityParams elasticity;
    bool seed_fixture = false;
    std::size_t row_limit = kDefaultRowLimit;

    void validate() const;
};

/// Applies `key = value` lines ('#' starts a comment). Keys: host, port,
/// data_dir, theta, modulus, yield_strain, necking_strain, post_yield_slope,
/// seed_fixture, row_limit. Throws InvalidArgument on unknown keys or values.
void apply_config_text(ServiceConfig& config, std::string_view text);
void apply_config_file(ServiceConfig& config, const std::filesystem::path& path);
/// Same keys, upper-cased with an FDKB_ prefix (FDKB_PORT, FDKB_DATA_DIR, ...).
void apply_config_env(ServiceConfig& config);

nlohmann::json error_body(const Error& error);

class KbService {
public:
    /// Opens the journal in `config.data_dir`, replays it, and loads the seed
    /// fixture when requested and the journal is empty. Throws
    /// DataDirUnwritable or JournalCorrupt.
    explicit KbService(ServiceConfig config);
    ~KbService();
    KbService(const KbService&) = delete;
    KbService& operator=(const KbService&) = delete;

    /// Binds and serves on a background thread. Throws PortInUse.
    void start();
    void stop();
    /// Bound port; valid after start().
    int port() const noexcept { return bound_port_; }

    const ServiceConfig& config() const noexcept { return config_; }
    KbStore& store() noexcept { return *store_; }

    /// Blocks until stop() is called from another thread.
    void wait();

private:
    void install_routes();

    ServiceConfig config_;
    std::unique_ptr<Journal> journal_;
    std::unique_ptr<KbStore> store_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int bound_port_ = 0;
};

} // namespace fdkb
