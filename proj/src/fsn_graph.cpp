#include "fdkb/fsn_graph.hpp"

#include "fdkb/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <numeric>

namespace fdkb {

using nlohmann::json;

double overlap(const FormalContext& a, const FormalContext& b) {
    const auto& da = a.attributes();
    const auto& db = b.attributes();
    if (da.empty() && db.empty()) return 0.0;
    std::size_t common = 0;
    for (const auto& attr : da) common += db.count(attr);
    const std::size_t unioned = da.size() + db.size() - common;
    return static_cast<double>(common) / static_cast<double>(unioned);
}

LinkKey make_link_key(const std::string& a, const std::string& b) {
    return a < b ? LinkKey{a, b} : LinkKey{b, a};
}

FsnGraph::FsnGraph(double theta, ElasticityParams params) : theta_(theta), params_(params) {
    if (!(theta_ > 0.0 && theta_ <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
    params_.validate();
}

const FolksodrivenTag* FsnGraph::find_tag(const std::string& id) const {
    auto it = tags_.find(id);
    return it == tags_.end() ? nullptr : &it->second;
}

void FsnGraph::refresh_pair(const std::string& a, const std::string& b) {
    const auto key = make_link_key(a, b);
    const auto& ta = tags_.at(key.first);
    const auto& tb = tags_.at(key.second);
    const double weight = overlap(ta.context(), tb.context());
    if (weight < theta_) {
        links_.erase(key);
        return;
    }
    const double distance = interval_distance(ta.point(), tb.point());
    auto [it, inserted] = links_.try_emplace(key);
    FsnLink& link = it->second;
    if (inserted) {
        link.a = key.first;
        link.b = key.second;
        link.rest_interval = distance;
    }
    link.weight = weight;
    link.strain = std::abs(distance - link.rest_interval) / std::max(link.rest_interval, kStrainFloor);
    link.region = classify_region(stress_at(link.strain, params_), link.strain, params_);
}

void FsnGraph::rebuild_links() {
    std::map<LinkKey, FsnLink> kept;
    for (auto it = tags_.begin(); it != tags_.end(); ++it) {
        for (auto jt = std::next(it); jt != tags_.end(); ++jt) {
            refresh_pair(it->first, jt->first);
            auto found = links_.find({it->first, jt->first});
            if (found != links_.end()) kept.insert(*found);
        }
    }
    links_ = std::move(kept);
}

namespace {

std::string_view change_target(const MorphologicalChange& change) {
    return std::visit(
        [](const auto& c) -> std::string_view {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, change::AddTag>) return c.tag.id();
            else return c.id;
        },
        change);
}

} // namespace

PlasticityReport FsnGraph::apply(const MorphologicalChange& change) {
    const std::string id(change_target(change));
    const bool adding = std::holds_alternative<change::AddTag>(change);
    if (adding) {
        if (tags_.count(id)) throw Error(ErrorCode::DuplicateTag, "tag already present: " + id, {{"tag", id}});
        if (id.empty()) throw Error(ErrorCode::InvalidArgument, "tag id must not be empty");
    } else if (!tags_.count(id)) {
        throw Error(ErrorCode::UnknownTag, "unknown tag: " + id, {{"tag", id}});
    }

    const auto before = links_;
    bool geometry_changed = true;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, change::AddTag>) {
                tags_.emplace(id, c.tag);
            } else if constexpr (std::is_same_v<T, change::RemoveTag>) {
                tags_.erase(id);
                std::erase_if(links_, [&](const auto& kv) { return kv.first.first == id || kv.first.second == id; });
                geometry_changed = false;
            } else if constexpr (std::is_same_v<T, change::Relabel>) {
                tags_.at(id).set_label(c.label);
                geometry_changed = false;
            } else if constexpr (std::is_same_v<T, change::EditContext>) {
                tags_.at(id).set_context(c.context);
            } else {
                tags_.at(id).set_exposition(c.exposition);
            }
        },
        change);

    if (geometry_changed) {
        for (const auto& [other, tag] : tags_) {
            if (other != id) refresh_pair(id, other);
        }
    }
    return diff_links(before, links_);
}

PlasticityReport diff_links(const std::map<LinkKey, FsnLink>& before, const std::map<LinkKey, FsnLink>& after) {
    PlasticityReport report;
    for (const auto& [key, link] : after) {
        auto it = before.find(key);
        if (it == before.end()) report.created.push_back(key);
        else if (it->second.region != link.region) report.region_changed.push_back({key, it->second.region, link.region});
    }
    for (const auto& [key, link] : before) {
        if (!after.count(key)) report.broken.push_back(key);
    }
    return report;
}

std::vector<UnitCell> FsnGraph::unit_cells() const {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) -> std::string {
        auto& p = parent[x];
        if (p.empty() || p == x) {
            p = x;
            return x;
        }
        p = find(p);
        return p;
    };
    for (const auto& [key, link] : links_) {
        auto ra = find(key.first);
        auto rb = find(key.second);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<std::string, UnitCell> cells;
    for (const auto& [tag, p] : parent) cells[find(tag)].member_tags.insert(tag);

    std::vector<UnitCell> out;
    for (auto& [root, cell] : cells) {
        bool first = true;
        for (const auto& member : cell.member_tags) {
            const auto& attrs = tags_.at(member).context().attributes();
            if (first) {
                cell.subject_key = attrs;
                first = false;
            } else {
                std::set<std::string> keep;
                std::set_intersection(cell.subject_key.begin(), cell.subject_key.end(), attrs.begin(), attrs.end(),
                                      std::inserter(keep, keep.end()));
                cell.subject_key = std::move(keep);
            }
        }
        out.push_back(std::move(cell));
    }
    return out;
}

StrainSummary FsnGraph::strain_summary() const {
    StrainSummary s;
    double total = 0.0;
    for (const auto& [key, link] : links_) {
        ++s.counts[static_cast<std::size_t>(link.region)];
        total += link.strain;
    }
    s.links = links_.size();
    s.mean_strain = s.links ? total / static_cast<double>(s.links) : 0.0;
    return s;
}

std::optional<double> FsnGraph::mean_incident_strain(const std::string& tag) const {
    double total = 0.0;
    std::size_t n = 0;
    for (const auto& [key, link] : links_) {
        if (key.first == tag || key.second == tag) {
            total += link.strain;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return total / static_cast<double>(n);
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string FsnGraph::edge_list() const {
    std::string out;
    for (const auto& [key, link] : links_) {
        out += link.a;
        out += '\t';
        out += link.b;
        out += '\t';
        out += format_double(link.weight);
        out += '\t';
        out += format_double(link.strain);
        out += '\t';
        out += region_name(link.region);
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json context_json(const FormalContext& c) {
    json incidence = json::array();
    for (const auto& [o, a] : c.incidence()) incidence.push_back({o, a});
    return {{"objects", c.objects()}, {"attributes", c.attributes()}, {"incidence", std::move(incidence)}};
}

FormalContext context_from_json(const json& j) {
    FormalContext::Incidence incidence;
    for (const auto& pair : j.value("incidence", json::array())) {
        incidence.emplace(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
    }
    return FormalContext(j.value("objects", std::set<std::string>{}), j.value("attributes", std::set<std::string>{}),
                         std::move(incidence));
}

} // namespace

json to_json(const FolksodrivenTag& tag) {
    return {{"id", tag.id()},
            {"label", tag.label()},
            {"context", context_json(tag.context())},
            {"exposition", {{"clicks", tag.exposition().clicks()}, {"impressions", tag.exposition().impressions()}}},
            {"resource", {{"uri", tag.resource().uri()}, {"ordinal", tag.resource().ordinal()}}}};
}

FolksodrivenTag tag_from_json(const json& j) {
    const auto id = j.at("id").get<std::string>();
    const auto exposition = j.value("exposition", json::object());
    const auto resource = j.value("resource", json::object());
    return FolksodrivenTag(id, j.value("label", id), context_from_json(j.value("context", json::object())),
                           TimeExposition(exposition.value("clicks", 0ull), exposition.value("impressions", 0ull)),
                           Resource(resource.value("uri", std::string("urn:fdkb:") + id), resource.value("ordinal", 0ull)));
}

json to_json(const MorphologicalChange& change) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, change::AddTag>) return {{"kind", "add"}, {"tag", to_json(c.tag)}};
            else if constexpr (std::is_same_v<T, change::RemoveTag>) return {{"kind", "remove"}, {"id", c.id}};
            else if constexpr (std::is_same_v<T, change::Relabel>)
                return {{"kind", "relabel"}, {"id", c.id}, {"label", c.label}};
            else if constexpr (std::is_same_v<T, change::EditContext>)
                return {{"kind", "context"}, {"id", c.id}, {"context", context_json(c.context)}};
            else
                return {{"kind", "exposition"},
                        {"id", c.id},
                        {"clicks", c.exposition.clicks()},
                        {"impressions", c.exposition.impressions()}};
        },
        change);
}

MorphologicalChange change_from_json(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "add") return change::AddTag{tag_from_json(j.at("tag"))};
    const auto id = j.at("id").get<std::string>();
    if (kind == "remove") return change::RemoveTag{id};
    if (kind == "relabel") return change::Relabel{id, j.at("label").get<std::string>()};
    if (kind == "context") return change::EditContext{id, context_from_json(j.at("context"))};
    if (kind == "exposition") {
        return change::UpdateExposition{id, TimeExposition(j.at("clicks").get<std::uint64_t>(),
                                                           j.at("impressions").get<std::uint64_t>())};
    }
    throw Error(ErrorCode::MalformedBody, "unknown morphological change kind: " + kind);
}

json to_json(const PlasticityReport& report) {
    auto keys = [](const std::vector<LinkKey>& v) {
        json arr = json::array();
        for (const auto& k : v) arr.push_back({k.first, k.second});
        return arr;
    };
    json changed = json::array();
    for (const auto& rc : report.region_changed) {
        changed.push_back({{"link", {rc.link.first, rc.link.second}},
                           {"from", region_name(rc.from)},
                           {"to", region_name(rc.to)}});
    }
    return {{"created", keys(report.created)}, {"broken", keys(report.broken)}, {"region_changed", changed}};
}

json FsnGraph::to_json() const {
    json tags = json::array();
    for (const auto& [id, tag] : tags_) tags.push_back(fdkb::to_json(tag));
    json links = json::array();
    for (const auto& [key, l] : links_) {
        links.push_back({{"a", l.a},
                         {"b", l.b},
                         {"weight", l.weight},
                         {"rest_interval", l.rest_interval},
                         {"strain", l.strain},
                         {"region", region_name(l.region)}});
    }
    return {{"theta", theta_}, {"tags", std::move(tags)}, {"links", std::move(links)}};
}

} // namespace fdkb
