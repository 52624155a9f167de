#pragma once

// Append-only edit journal: one JSON object per LF-terminated line,
//   {"actor":..., "op":{...}, "revision":n, "timestamp":"YYYY-MM-DDTHH:MM:SS.mmmZ"}
// Revisions start at 1 and increase by exactly 1 per line.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

struct JournalRecord {
    std::uint64_t revision = 0;
    std::string timestamp;
    std::string actor;
    nlohmann::json op;

    bool operator==(const JournalRecord&) const = default;
};

nlohmann::json to_json(const JournalRecord& record);
JournalRecord journal_record_from_json(const nlohmann::json& j);

/// Current UTC time, millisecond precision.
std::string utc_timestamp();

/// Parses journal bytes. A final line without its LF terminator is a torn
/// write and is dropped; `*valid_bytes` receives the length of the kept
/// prefix. Any other unparsable line or revision gap throws JournalCorrupt.
std::vector<JournalRecord> parse_journal(std::string_view bytes, std::size_t* valid_bytes = nullptr);

class Journal {
public:
    /// Opens or creates the file, reads existing records and truncates a torn
    /// tail. Throws DataDirUnwritable when the file cannot be opened for append.
    explicit Journal(std::filesystem::path path);
    ~Journal();
    Journal(const Journal&) = delete;
    Journal& operator=(const Journal&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    /// Records present when the journal was opened.
    const std::vector<JournalRecord>& loaded() const noexcept { return loaded_; }
    std::uint64_t last_revision() const noexcept { return last_revision_; }

    /// Writes one line and fsyncs. `record.revision` must be last_revision()+1.
    void append(const JournalRecord& record);

private:
    std::filesystem::path path_;
    std::FILE* file_ = nullptr;
    std::vector<JournalRecord> loaded_;
    std::uint64_t last_revision_ = 0;
};

} // namespace fdkb
