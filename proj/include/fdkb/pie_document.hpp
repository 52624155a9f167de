#pragma once

// XML chart document:
//
//   <piechart>
//     <slice source_iri="...">      (attribute optional)
//       <name>sinking</name>
//       <percent>60.00</percent>
//     </slice>
//   </piechart>
//
// Export is canonical: two-space indentation, LF endings, percents with
// exactly two fraction digits, and `<piechart/>` for an empty chart.

#include "fdkb/nav_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fdkb {

struct PieSlice {
    std::string name;
    std::int64_t hundredths = 0; // percent * 100, in (0, 10000]
    std::optional<std::string> source_iri;

    double percent() const { return static_cast<double>(hundredths) / 100.0; }
    bool operator==(const PieSlice&) const = default;
};

struct PieDocument {
    std::vector<PieSlice> slices;
    bool operator==(const PieDocument&) const = default;
};

/// Throws MalformedDocument (details: line, reason) or BadPercent.
PieDocument import_pie_document(std::string_view bytes);

std::string export_pie_document(const PieDocument& doc);
/// Slices are the root's children (or the root's expanded level).
std::string export_pie_document(const PieModel& model);
PieDocument document_from_model(const PieModel& model);

/// "12.50" style formatting of hundredths.
std::string format_hundredths(std::int64_t hundredths);

nlohmann::json to_json(const PieDocument& doc);
PieDocument pie_document_from_json(const nlohmann::json& j);

} // namespace fdkb
