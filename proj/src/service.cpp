#include "fdkb/service.hpp"

#include "fdkb/error.hpp"
#include "fdkb/nav_model.hpp"

#include <httplib.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fdkb {

using nlohmann::json;

// -- config -----------------------------------------------------------------

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range", {{"port", port}});
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must be in (0, 1]");
    if (row_limit == 0) throw Error(ErrorCode::InvalidArgument, "row_limit must be positive");
    elasticity.validate();
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::InvalidArgument, "bad value for " + key + ": " + value, {{"key", key}});
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw Error(ErrorCode::InvalidArgument, "bad value for " + key + ": " + value, {{"key", key}});
}

void set_key(ServiceConfig& c, const std::string& key, const std::string& value) {
    if (key == "host") c.host = value;
    else if (key == "port") c.port = parse_number<int>(key, value);
    else if (key == "data_dir") c.data_dir = value;
    else if (key == "theta") c.theta = parse_number<double>(key, value);
    else if (key == "modulus") c.elasticity.modulus = parse_number<double>(key, value);
    else if (key == "yield_strain") c.elasticity.yield_strain = parse_number<double>(key, value);
    else if (key == "necking_strain") c.elasticity.necking_strain = parse_number<double>(key, value);
    else if (key == "post_yield_slope") c.elasticity.post_yield_slope = parse_number<double>(key, value);
    else if (key == "seed_fixture") c.seed_fixture = parse_bool(key, value);
    else if (key == "row_limit") c.row_limit = parse_number<std::size_t>(key, value);
    else throw Error(ErrorCode::InvalidArgument, "unknown config key: " + key, {{"key", key}});
}

constexpr const char* kConfigKeys[] = {"host",         "port",           "data_dir",         "theta",        "modulus",
                                       "yield_strain", "necking_strain", "post_yield_slope", "seed_fixture", "row_limit"};

} // namespace

void apply_config_text(ServiceConfig& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        ++line_no;
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key = value",
                        {{"line", line_no}});
        }
        set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void apply_config_file(ServiceConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config file " + path.string(), {{"path", path.string()}});
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str());
}

void apply_config_env(ServiceConfig& config) {
    for (const char* key : kConfigKeys) {
        std::string var = "FDKB_";
        for (const char* p = key; *p; ++p) var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
        if (const char* value = std::getenv(var.c_str())) set_key(config, key, trim(value));
    }
}

// -- HTTP -------------------------------------------------------------------

json error_body(const Error& error) {
    return {{"error_code", std::string(error_name(error.code()))},
            {"message", error.what()},
            {"details", error.details().is_null() ? json::object() : error.details()}};
}

namespace {

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(dump(body), "application/json");
}

template <class F>
httplib::Server::Handler guarded(F&& fn) {
    return [fn = std::forward<F>(fn)](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_json(res, error_body(e), http_status(e.code()));
        } catch (const json::exception& e) {
            send_json(res, error_body(Error(ErrorCode::MalformedBody, e.what())), http_status(ErrorCode::MalformedBody));
        } catch (const std::exception& e) {
            send_json(res, error_body(Error(ErrorCode::IoError, e.what())), http_status(ErrorCode::IoError));
        }
    };
}

json body_object(const httplib::Request& req) {
    json body;
    try {
        body = json::parse(req.body.empty() ? std::string("{}") : req.body);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedBody, std::string("request body is not JSON: ") + e.what());
    }
    if (!body.is_object()) throw Error(ErrorCode::MalformedBody, "request body must be a JSON object");
    return body;
}

std::string actor_of(const httplib::Request& req) {
    auto actor = req.get_header_value("X-Actor");
    return actor.empty() ? std::string("anonymous") : actor;
}

std::optional<std::uint64_t> expected_revision(const httplib::Request& req, const json& body) {
    if (req.has_header("If-Match")) {
        auto value = trim(req.get_header_value("If-Match"));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        std::uint64_t rev = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), rev);
        if (ec != std::errc{} || ptr != value.data() + value.size()) {
            throw Error(ErrorCode::MalformedBody, "If-Match must be a revision number");
        }
        return rev;
    }
    if (body.contains("expected_revision")) return body["expected_revision"].get<std::uint64_t>();
    return std::nullopt;
}

json body_without_revision(json body) {
    body.erase("expected_revision");
    return body;
}

NavOptions nav_options(const KbState& state, const json& body) {
    NavOptions opts;
    opts.weight_overrides = state.weight_overrides;
    if (body.contains("order_property") && !body["order_property"].is_null()) {
        opts.order_property = body["order_property"].get<std::string>();
    }
    if (body.contains("part_of_properties")) {
        opts.part_of_properties = body["part_of_properties"].get<std::vector<std::string>>();
    }
    return opts;
}

json model_json(PieModel model, const KbState& state) {
    model = colorize(std::move(model), state.fsn);
    model.revision = state.revision;
    return to_json(model);
}

json table_response(const ResultTable& table, const KbState& state) {
    auto out = to_json(table);
    out["pie"] = model_json(table_to_pie(table, state.kb), state);
    out["revision"] = state.revision;
    return out;
}

bool query_flag(const httplib::Request& req, const std::string& key) {
    if (!req.has_param(key)) return false;
    const auto v = req.get_param_value(key);
    return v.empty() || v == "1" || v == "true" || v == "yes";
}

} // namespace

KbService::KbService(ServiceConfig config) : config_(std::move(config)) {
    config_.validate();
    std::error_code ec;
    std::filesystem::create_directories(config_.data_dir, ec);
    if (ec || !std::filesystem::is_directory(config_.data_dir)) {
        throw Error(ErrorCode::DataDirUnwritable, "cannot create data directory " + config_.data_dir.string(),
                    {{"path", config_.data_dir.string()}});
    }
    journal_ = std::make_unique<Journal>(config_.data_dir / "journal.jsonl");
    store_ = std::make_unique<KbStore>(replay(journal_->loaded(), config_.theta, config_.elasticity), journal_.get());
    if (config_.seed_fixture && journal_->last_revision() == 0) {
        for (const auto& op : seed_fixture_ops()) store_->commit(op, "seed");
    }
}

KbService::~KbService() { stop(); }

void KbService::start() {
    server_ = std::make_unique<httplib::Server>();
    // SO_REUSEADDR only: the library default adds SO_REUSEPORT, which would let a
    // second instance share the port instead of failing with PortInUse.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    install_routes();
    if (config_.port == 0) {
        bound_port_ = server_->bind_to_any_port(config_.host);
        if (bound_port_ < 0) bound_port_ = 0;
    } else if (server_->bind_to_port(config_.host, config_.port)) {
        bound_port_ = config_.port;
    }
    if (bound_port_ == 0) {
        server_.reset();
        throw Error(ErrorCode::PortInUse, "cannot bind " + config_.host + ":" + std::to_string(config_.port),
                    {{"host", config_.host}, {"port", config_.port}});
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void KbService::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

void KbService::wait() {
    if (thread_.joinable()) thread_.join();
}

void KbService::install_routes() {
    auto& srv = *server_;
    KbStore& store = *store_;
    const std::size_t row_limit = config_.row_limit;

    auto commit = [&store](const httplib::Request& req, httplib::Response& res, const json& op, const json& body) {
        const auto result = store.commit(op, actor_of(req), expected_revision(req, body));
        json out{{"revision", result.revision}};
        if (!result.result.empty()) out["result"] = result.result;
        send_json(res, out);
    };

    // navigation
    srv.Get("/api/model/root", guarded([&store](const httplib::Request&, httplib::Response& res) {
                const auto state = store.snapshot();
                send_json(res, model_json(build_root(state->kb, nav_options(*state, json::object())), *state));
            }));
    srv.Post("/api/model/expand", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 const auto state = store.snapshot();
                 const auto opts = nav_options(*state, body);
                 PieModel model;
                 model.root = expand(state->kb, sector_from_id(state->kb, body.at("sector_id").get<std::string>()), opts);
                 send_json(res, model_json(std::move(model), *state));
             }));
    srv.Post("/api/model/focus", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 const auto state = store.snapshot();
                 const auto tags = body.at("tags").get<std::vector<std::string>>();
                 send_json(res, model_json(combine_focus(state->kb, tags, nav_options(*state, body)), *state));
             }));

    // edits
    srv.Post("/api/kb/class", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res, ops::define_class(class_def_from_json(body_without_revision(body))), body);
             }));
    srv.Post("/api/kb/superclass", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res,
                        ops::add_superclass(body.at("class").get<std::string>(), body.at("parent").get<std::string>()),
                        body);
             }));
    srv.Post("/api/kb/property", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res, ops::define_property(property_def_from_json(body_without_revision(body))), body);
             }));
    srv.Post("/api/kb/individual", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res, ops::assert_individual(individual_from_json(body_without_revision(body))), body);
             }));
    auto assertion = guarded([commit](const httplib::Request& req, httplib::Response& res) {
        const auto body = body_object(req);
        commit(req, res,
               ops::set_property_value(body.at("subject").get<std::string>(), body.at("property").get<std::string>(),
                                       assertion_object_from_json(body.at("object"))),
               body);
    });
    srv.Put("/api/kb/assertion", assertion);
    srv.Post("/api/kb/assertion", assertion);
    srv.Delete(R"(/api/kb/individual/(.+))", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                   commit(req, res, ops::remove_individual(req.matches[1].str(), query_flag(req, "cascade")),
                          json::object());
               }));

    // reads
    srv.Get("/api/kb/snapshot", guarded([&store](const httplib::Request&, httplib::Response& res) {
                send_json(res, store.snapshot()->to_json());
            }));
    srv.Get("/api/kb/range-candidates", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const auto state = store.snapshot();
                const auto property = req.get_param_value("property");
                send_json(res, {{"property", property},
                                {"candidates", state->kb.range_candidates(property)},
                                {"revision", state->revision}});
            }));

    // queries
    srv.Post("/api/query", guarded([&store, row_limit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 const auto state = store.snapshot();
                 const auto ast = parse_query(body.at("sparql").get<std::string>());
                 send_json(res, table_response(evaluate(ast, state->kb, {row_limit}), *state));
             }));
    srv.Get("/api/templates", guarded([&store](const httplib::Request&, httplib::Response& res) {
                const auto state = store.snapshot();
                json list = json::array();
                for (const auto& t : state->templates.list()) list.push_back(to_json(t));
                send_json(res, {{"templates", std::move(list)}, {"revision", state->revision}});
            }));
    srv.Post("/api/templates", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res, ops::register_template(template_from_json(body_without_revision(body))), body);
             }));
    srv.Post(R"(/api/templates/([^/]+)/run)",
             guarded([&store, row_limit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 const auto state = store.snapshot();
                 const auto bindings =
                     body.value("bindings", json::object()).get<std::map<std::string, std::string>>();
                 const auto ast = state->templates.instantiate(req.matches[1].str(), bindings, state->kb);
                 auto out = table_response(evaluate(ast, state->kb, {row_limit}), *state);
                 out["sparql"] = print_query(ast);
                 send_json(res, out);
             }));

    // documents
    srv.Get("/api/export/piechart", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const auto state = store.snapshot();
                const auto opts = nav_options(*state, json::object());
                PieModel model;
                if (req.has_param("sector_id")) {
                    model.root = expand(state->kb, sector_from_id(state->kb, req.get_param_value("sector_id")), opts);
                } else {
                    model = build_root(state->kb, opts);
                }
                res.set_content(export_pie_document(model), "application/xml");
            }));
    srv.Post("/api/import/piechart", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                 const auto doc = import_pie_document(req.body);
                 const auto result = store.commit(ops::import_piechart(doc), actor_of(req),
                                                  expected_revision(req, json::object()));
                 send_json(res, {{"revision", result.revision}, {"document", to_json(doc)}});
             }));

    // folksodriven structure network
    srv.Get("/api/fsn/summary", guarded([&store](const httplib::Request&, httplib::Response& res) {
                const auto state = store.snapshot();
                const auto summary = state->fsn.strain_summary();
                json counts;
                for (auto r : {Region::Elastic, Region::Yield, Region::Necking}) {
                    counts[std::string(region_name(r))] = summary.counts[static_cast<std::size_t>(r)];
                }
                send_json(res, {{"counts", counts},
                                {"mean_strain", summary.mean_strain},
                                {"links", summary.links},
                                {"tags", state->fsn.tags().size()},
                                {"theta", state->fsn.theta()},
                                {"revision", state->revision}});
            }));
    srv.Get("/api/fsn/edges", guarded([&store](const httplib::Request&, httplib::Response& res) {
                res.set_content(store.snapshot()->fsn.edge_list(), "text/tab-separated-values");
            }));
    srv.Post("/api/fsn/event", guarded([commit](const httplib::Request& req, httplib::Response& res) {
                 const auto body = body_object(req);
                 commit(req, res, ops::fsn_event(change_from_json(body_without_revision(body))), body);
             }));
}

} // namespace fdkb
