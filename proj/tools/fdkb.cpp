// Offline inspection of a data directory. Reads the journal without taking
// the writer role, so it is safe next to a running server.

#include "fdkb/error.hpp"
#include "fdkb/kb_store.hpp"
#include "fdkb/nav_model.hpp"
#include "fdkb/pie_document.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

fdkb::KbState load(const std::string& data_dir, double theta) {
    const auto path = std::filesystem::path(data_dir) / "journal.jsonl";
    std::string bytes;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        bytes = ss.str();
    }
    return fdkb::replay(fdkb::parse_journal(bytes), theta);
}

std::string read_text(const std::string& arg) {
    if (arg != "-" && !std::filesystem::exists(arg)) return arg;
    std::ostringstream ss;
    if (arg == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(arg, std::ios::binary);
        ss << in.rdbuf();
    }
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fdkb offline tool"};
    app.require_subcommand(1);
    std::string data_dir = "fdkb-data";
    double theta = fdkb::kDefaultTheta;
    app.add_option("--data-dir", data_dir, "directory holding journal.jsonl");
    app.add_option("--theta", theta, "FSN link threshold used for replay");

    auto* replay_cmd = app.add_subcommand("replay", "replay the journal and print the snapshot");
    auto* query_cmd = app.add_subcommand("query", "run a query against the replayed KB");
    std::string query_text;
    query_cmd->add_option("query", query_text, "query text, a file path, or - for stdin")->required();
    std::size_t row_limit = fdkb::kDefaultRowLimit;
    query_cmd->add_option("--row-limit", row_limit);
    auto* edges_cmd = app.add_subcommand("edges", "print the FSN edge list");
    auto* export_cmd = app.add_subcommand("export-piechart", "print the chart document");
    std::string sector_id;
    export_cmd->add_option("--sector-id", sector_id, "export this sector's children instead of the root");
    auto* check_cmd = app.add_subcommand("check-piechart", "validate a chart document");
    std::string doc_path;
    check_cmd->add_option("file", doc_path, "document path or - for stdin")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        if (check_cmd->parsed()) {
            const auto doc = fdkb::import_pie_document(read_text(doc_path));
            std::cout << fdkb::to_json(doc).dump(2) << "\n";
            return 0;
        }
        const auto state = load(data_dir, theta);
        if (replay_cmd->parsed()) {
            std::cout << state.to_json().dump(2) << "\n";
        } else if (query_cmd->parsed()) {
            const auto ast = fdkb::parse_query(read_text(query_text));
            std::cout << fdkb::to_json(fdkb::evaluate(ast, state.kb, {row_limit})).dump(2) << "\n";
        } else if (edges_cmd->parsed()) {
            std::cout << state.fsn.edge_list();
        } else if (export_cmd->parsed()) {
            fdkb::NavOptions opts;
            opts.weight_overrides = state.weight_overrides;
            fdkb::PieModel model;
            if (sector_id.empty()) {
                model = fdkb::build_root(state.kb, opts);
            } else {
                model.root = fdkb::expand(state.kb, fdkb::sector_from_id(state.kb, sector_id), opts);
            }
            std::cout << fdkb::export_pie_document(model);
        }
        return 0;
    } catch (const fdkb::Error& e) {
        std::cerr << fdkb::error_name(e.code()) << ": " << e.what() << "\n";
        return 2;
    }
}
