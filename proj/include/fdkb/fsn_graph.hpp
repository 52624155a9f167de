#pragma once

// Folksodriven Structure Network: FD tags linked by formal-context overlap,
// with per-link strain measured against the separation at link creation.

#include "fdkb/fd_core.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

inline constexpr double kStrainFloor = 1e-6;
inline constexpr double kDefaultTheta = 0.3;

/// Jaccard similarity of the attribute sets; 0 when both are empty.
double overlap(const FormalContext& a, const FormalContext& b);

using LinkKey = std::pair<std::string, std::string>; // first < second

LinkKey make_link_key(const std::string& a, const std::string& b);

struct FsnLink {
    std::string a;
    std::string b;
    double weight = 0.0;
    double rest_interval = 0.0;
    double strain = 0.0;
    Region region = Region::Elastic;

    bool operator==(const FsnLink&) const = default;
};

struct UnitCell {
    std::set<std::string> member_tags;
    std::set<std::string> subject_key;

    bool operator==(const UnitCell&) const = default;
};

namespace change {
struct AddTag {
    FolksodrivenTag tag;
};
struct RemoveTag {
    std::string id;
};
struct Relabel {
    std::string id;
    std::string label;
};
struct EditContext {
    std::string id;
    FormalContext context;
};
struct UpdateExposition {
    std::string id;
    TimeExposition exposition;
};
} // namespace change

using MorphologicalChange =
    std::variant<change::AddTag, change::RemoveTag, change::Relabel, change::EditContext, change::UpdateExposition>;

struct RegionChange {
    LinkKey link;
    Region from = Region::Elastic;
    Region to = Region::Elastic;

    bool operator==(const RegionChange&) const = default;
};

struct PlasticityReport {
    std::vector<LinkKey> created;
    std::vector<LinkKey> broken;
    std::vector<RegionChange> region_changed;

    bool empty() const { return created.empty() && broken.empty() && region_changed.empty(); }
    bool operator==(const PlasticityReport&) const = default;
};

struct StrainSummary {
    std::array<std::size_t, 3> counts{}; // indexed by Region
    double mean_strain = 0.0;
    std::size_t links = 0;
};

class FsnGraph {
public:
    explicit FsnGraph(double theta = kDefaultTheta, ElasticityParams params = {});

    double theta() const noexcept { return theta_; }
    const ElasticityParams& params() const noexcept { return params_; }
    const std::map<std::string, FolksodrivenTag>& tags() const noexcept { return tags_; }
    const std::map<LinkKey, FsnLink>& links() const noexcept { return links_; }
    const FolksodrivenTag* find_tag(const std::string& id) const;

    /// Recomputes the full link set from all tag pairs. Surviving links keep
    /// their rest interval; new links start at zero strain.
    void rebuild_links();

    /// Applies one change, maintaining only the pairs that touch the changed
    /// tag. Throws UnknownTag / DuplicateTag.
    PlasticityReport apply(const MorphologicalChange& change);

    std::vector<UnitCell> unit_cells() const;
    StrainSummary strain_summary() const;

    /// Mean strain over the tag's incident links, nullopt when it has none.
    std::optional<double> mean_incident_strain(const std::string& tag) const;

    /// `a<TAB>b<TAB>weight<TAB>strain<TAB>region` per link, LF-terminated.
    std::string edge_list() const;

    nlohmann::json to_json() const;

    bool operator==(const FsnGraph&) const = default;

private:
    void refresh_pair(const std::string& a, const std::string& b);

    double theta_;
    ElasticityParams params_;
    std::map<std::string, FolksodrivenTag> tags_;
    std::map<LinkKey, FsnLink> links_;
};

/// Difference between two link maps, in canonical link order.
PlasticityReport diff_links(const std::map<LinkKey, FsnLink>& before, const std::map<LinkKey, FsnLink>& after);

std::string format_double(double value);

nlohmann::json to_json(const FolksodrivenTag& tag);
FolksodrivenTag tag_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MorphologicalChange& change);
MorphologicalChange change_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PlasticityReport& report);

} // namespace fdkb
