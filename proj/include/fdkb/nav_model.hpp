#pragma once

// Hierarchical pie-chart model built from a knowledge-base snapshot. This is
// the only structure the workbench renders.

#include "fdkb/fd_core.hpp"
#include "fdkb/fsn_graph.hpp"
#include "fdkb/ontology.hpp"
#include "fdkb/query.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

enum class SectorKind { Class, Individual };

std::string_view sector_kind_name(SectorKind kind);

struct PieSector {
    std::string id;
    std::string label;
    SectorKind kind = SectorKind::Class;
    double percent = 100.0;
    Rgb color = kNeutralColor;
    bool expandable = false;
    std::vector<PieSector> children;
    std::string source_iri;

    bool operator==(const PieSector&) const = default;
};

struct PieModel {
    PieSector root;
    std::vector<std::string> focus_tags;
    std::uint64_t revision = 0;
    bool empty = false; // empty focus intersection or empty result table

    bool operator==(const PieModel&) const = default;
};

struct NavOptions {
    /// TotalOrder property used to order individuals within a level.
    std::optional<std::string> order_property;
    /// Hierarchical properties linking individuals; empty means all of them.
    std::vector<std::string> part_of_properties;
    /// Imported slice percents, keyed by source iri or by label. They replace
    /// the computed weight of a matching sector before normalization.
    std::map<std::string, double> weight_overrides;
};

/// Splits 100 into hundredths proportionally to `weights` with largest
/// remainder rounding; the result sums to exactly 10000. All-zero weights
/// split uniformly, and no entry is left at zero.
std::vector<std::int64_t> allocate_hundredths(const std::vector<double>& weights);

PieModel build_root(const KnowledgeBase& kb, const NavOptions& options = {});

/// Fills `sector.children`. Class sectors list subclasses then direct
/// members; individual sectors list their hierarchical children. Throws
/// NotExpandable for a class sector marked non-expandable.
PieSector expand(const KnowledgeBase& kb, PieSector sector, const NavOptions& options = {});

/// Classes first (by label), then individuals: along the total order when
/// one is given, else by primary label.
std::vector<PieSector> order_children(const KnowledgeBase& kb, std::vector<PieSector> children,
                                      const std::optional<std::string>& total_order_property);

/// Individuals belonging to every focus class, as one level under Thing.
/// Throws UnknownTag for a tag with no matching class.
PieModel combine_focus(const KnowledgeBase& kb, const std::vector<std::string>& tags, const NavOptions& options = {});

/// Colors each sector by the mean strain of its tag's FSN links; sectors with
/// no FSN links get the neutral color.
PieModel colorize(PieModel model, const FsnGraph& fsn);

PieModel table_to_pie(const ResultTable& table, const KnowledgeBase& kb);

/// Resolves a sector id back to an unexpanded sector. Throws UnknownSector.
PieSector sector_from_id(const KnowledgeBase& kb, const std::string& id);

nlohmann::json to_json(const PieSector& sector);
nlohmann::json to_json(const PieModel& model);

} // namespace fdkb
