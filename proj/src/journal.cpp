#include "fdkb/journal.hpp"

#include "fdkb/error.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fdkb {

using nlohmann::json;

json to_json(const JournalRecord& record) {
    return {{"revision", record.revision}, {"timestamp", record.timestamp}, {"actor", record.actor}, {"op", record.op}};
}

JournalRecord journal_record_from_json(const json& j) {
    JournalRecord r;
    r.revision = j.at("revision").get<std::uint64_t>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.actor = j.at("actor").get<std::string>();
    r.op = j.at("op");
    if (!r.op.is_object()) throw Error(ErrorCode::JournalCorrupt, "journal op must be an object");
    return r;
}

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = time_point_cast<milliseconds>(system_clock::now());
    const auto secs = time_point_cast<seconds>(now);
    const auto ms = (now - secs).count();
    const std::time_t t = system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

std::vector<JournalRecord> parse_journal(std::string_view bytes, std::size_t* valid_bytes) {
    std::vector<JournalRecord> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < bytes.size()) {
        const auto nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) break; // torn tail
        ++line_no;
        const auto line = bytes.substr(pos, nl - pos);
        auto corrupt = [&](const std::string& why) {
            throw Error(ErrorCode::JournalCorrupt, "journal line " + std::to_string(line_no) + ": " + why,
                        {{"line", line_no}, {"reason", why}});
        };
        JournalRecord rec;
        try {
            rec = journal_record_from_json(json::parse(line));
        } catch (const json::exception& e) {
            corrupt(e.what());
        } catch (const Error& e) {
            corrupt(e.what());
        }
        if (rec.revision != out.size() + 1) {
            corrupt("expected revision " + std::to_string(out.size() + 1) + ", found " + std::to_string(rec.revision));
        }
        out.push_back(std::move(rec));
        pos = nl + 1;
    }
    if (valid_bytes) *valid_bytes = pos;
    return out;
}

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
    std::error_code ec;
    std::string bytes;
    if (std::filesystem::exists(path_, ec)) {
        std::ifstream in(path_, std::ios::binary);
        if (!in) throw Error(ErrorCode::IoError, "cannot read journal " + path_.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        bytes = ss.str();
    }
    std::size_t valid = 0;
    loaded_ = parse_journal(bytes, &valid);
    if (valid != bytes.size()) {
        std::filesystem::resize_file(path_, valid, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot truncate torn journal tail: " + ec.message());
    }
    last_revision_ = loaded_.size();
    file_ = std::fopen(path_.c_str(), "ab");
    if (!file_) {
        throw Error(ErrorCode::DataDirUnwritable, "cannot open journal for append: " + path_.string(),
                    {{"path", path_.string()}});
    }
}

Journal::~Journal() {
    if (file_) std::fclose(file_);
}

void Journal::append(const JournalRecord& record) {
    if (record.revision != last_revision_ + 1) {
        throw Error(ErrorCode::JournalCorrupt, "journal append out of sequence",
                    {{"expected", last_revision_ + 1}, {"found", record.revision}});
    }
    const std::string line = to_json(record).dump() + "\n";
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0 ||
        ::fsync(fileno(file_)) != 0) {
        throw Error(ErrorCode::IoError, "journal write failed: " + path_.string());
    }
    last_revision_ = record.revision;
}

} // namespace fdkb
