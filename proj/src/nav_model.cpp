#include "fdkb/nav_model.hpp"

#include "fdkb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace fdkb {

std::string_view sector_kind_name(SectorKind kind) { return kind == SectorKind::Class ? "Class" : "Individual"; }

std::vector<std::int64_t> allocate_hundredths(const std::vector<double>& weights) {
    constexpr std::int64_t kTotal = 10000;
    const std::size_t n = weights.size();
    std::vector<std::int64_t> units(n, 0);
    if (n == 0) return units;

    std::vector<double> w = weights;
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(sum > 0.0)) {
        std::fill(w.begin(), w.end(), 1.0);
        sum = static_cast<double>(n);
    }
    // Remainders are quantized so rationally equal ones tie exactly and fall
    // back to index order; quotients within 1e-9 of an integer snap to it.
    std::vector<std::int64_t> frac(n);
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = std::max(w[i], 0.0) * static_cast<double>(kTotal) / sum;
        units[i] = static_cast<std::int64_t>(std::floor(exact + 1e-9));
        frac[i] = std::max<std::int64_t>(0, std::llround((exact - static_cast<double>(units[i])) * 1e6));
        assigned += units[i];
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < kTotal; k = (k + 1) % n, ++assigned) ++units[idx[k]];

    // Sectors must stay visible: lift empty ones to 0.01 from the largest.
    for (std::size_t i = 0; i < n; ++i) {
        if (units[i] > 0) continue;
        auto largest = std::max_element(units.begin(), units.end());
        if (*largest <= 1) break;
        --*largest;
        units[i] = 1;
    }
    return units;
}

namespace {

std::string escape_segment(const std::string& iri) {
    std::string out;
    for (char c : iri) {
        if (c == '%') out += "%25";
        else if (c == '/') out += "%2F";
        else out.push_back(c);
    }
    return out;
}

std::string unescape_segment(const std::string& seg) {
    std::string out;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg.compare(i, 3, "%25") == 0) {
            out.push_back('%');
            i += 2;
        } else if (seg.compare(i, 3, "%2F") == 0) {
            out.push_back('/');
            i += 2;
        } else {
            out.push_back(seg[i]);
        }
    }
    return out;
}

std::string segment(SectorKind kind, const std::string& iri) {
    return (kind == SectorKind::Class ? "c:" : "i:") + escape_segment(iri);
}

std::vector<std::string> hierarchy_properties(const KnowledgeBase& kb, const NavOptions& options) {
    if (!options.part_of_properties.empty()) return options.part_of_properties;
    return kb.hierarchical_properties();
}

std::vector<std::string> individual_children(const KnowledgeBase& kb, const std::string& iri,
                                             const std::vector<std::string>& props) {
    std::set<std::string> out;
    for (const auto& p : props) {
        const PropertyDef* def = kb.find_property(p);
        if (!def) throw Error(ErrorCode::UnknownProperty, "unknown property: " + p, {{"property", p}});
        if (def->effective_family() != PropertyFamily::Hierarchical) {
            throw Error(ErrorCode::NotHierarchical, p + " is not a hierarchical property", {{"property", p}});
        }
        for (auto& c : kb.children_of(iri, p)) out.insert(std::move(c));
    }
    return {out.begin(), out.end()};
}

PieSector class_sector(const KnowledgeBase& kb, const std::string& iri, const std::string& parent_id) {
    PieSector s;
    s.kind = SectorKind::Class;
    s.source_iri = iri;
    s.label = kb.find_class(iri)->label;
    s.id = parent_id.empty() ? segment(s.kind, iri) : parent_id + "/" + segment(s.kind, iri);
    s.expandable = !kb.direct_subclasses(iri).empty() || !kb.instances_of(iri, false).empty();
    return s;
}

PieSector individual_sector(const KnowledgeBase& kb, const std::string& iri, const std::string& parent_id,
                            const std::vector<std::string>& props) {
    PieSector s;
    s.kind = SectorKind::Individual;
    s.source_iri = iri;
    s.label = kb.find_individual(iri)->primary_label();
    s.id = parent_id.empty() ? segment(s.kind, iri) : parent_id + "/" + segment(s.kind, iri);
    s.expandable = !individual_children(kb, iri, props).empty();
    return s;
}

double sector_weight(const KnowledgeBase& kb, const PieSector& s, const NavOptions& options) {
    if (auto it = options.weight_overrides.find(s.source_iri); it != options.weight_overrides.end()) return it->second;
    if (auto it = options.weight_overrides.find(s.label); it != options.weight_overrides.end()) return it->second;
    if (s.kind == SectorKind::Class) return static_cast<double>(kb.instances_of(s.source_iri).size());
    return 1.0;
}

void assign_percents(const KnowledgeBase& kb, std::vector<PieSector>& children, const NavOptions& options) {
    std::vector<double> weights;
    for (const auto& c : children) weights.push_back(sector_weight(kb, c, options));
    const auto units = allocate_hundredths(weights);
    for (std::size_t i = 0; i < children.size(); ++i) children[i].percent = static_cast<double>(units[i]) / 100.0;
}

} // namespace

std::vector<PieSector> order_children(const KnowledgeBase& kb, std::vector<PieSector> children,
                                      const std::optional<std::string>& total_order_property) {
    auto by_label = [](const PieSector& a, const PieSector& b) {
        return a.label != b.label ? a.label < b.label : a.source_iri < b.source_iri;
    };
    std::vector<PieSector> classes;
    std::vector<PieSector> individuals;
    for (auto& c : children) (c.kind == SectorKind::Class ? classes : individuals).push_back(std::move(c));
    std::sort(classes.begin(), classes.end(), by_label);

    if (total_order_property) {
        std::vector<std::string> iris;
        for (const auto& s : individuals) iris.push_back(s.source_iri);
        const auto ordered = kb.level_order(iris, *total_order_property);
        std::map<std::string, std::size_t> rank;
        for (std::size_t i = 0; i < ordered.size(); ++i) rank[ordered[i]] = i;
        std::sort(individuals.begin(), individuals.end(),
                  [&](const PieSector& a, const PieSector& b) { return rank[a.source_iri] < rank[b.source_iri]; });
    } else {
        std::sort(individuals.begin(), individuals.end(), by_label);
    }
    classes.insert(classes.end(), std::make_move_iterator(individuals.begin()),
                   std::make_move_iterator(individuals.end()));
    return classes;
}

PieSector expand(const KnowledgeBase& kb, PieSector sector, const NavOptions& options) {
    const auto props = hierarchy_properties(kb, options);
    std::vector<PieSector> children;
    if (sector.kind == SectorKind::Class) {
        if (!kb.find_class(sector.source_iri)) {
            throw Error(ErrorCode::UnknownSector, "class no longer exists: " + sector.source_iri, {{"sector", sector.id}});
        }
        if (!sector.expandable) {
            throw Error(ErrorCode::NotExpandable, sector.label + " has no subclasses or members", {{"sector", sector.id}});
        }
        for (const auto& sub : kb.direct_subclasses(sector.source_iri)) children.push_back(class_sector(kb, sub, sector.id));
        for (const auto& ind : kb.instances_of(sector.source_iri, false)) {
            children.push_back(individual_sector(kb, ind, sector.id, props));
        }
    } else {
        if (!kb.find_individual(sector.source_iri)) {
            throw Error(ErrorCode::UnknownSector, "individual no longer exists: " + sector.source_iri,
                        {{"sector", sector.id}});
        }
        for (const auto& child : individual_children(kb, sector.source_iri, props)) {
            children.push_back(individual_sector(kb, child, sector.id, props));
        }
    }
    children = order_children(kb, std::move(children), options.order_property);
    assign_percents(kb, children, options);
    sector.children = std::move(children);
    sector.expandable = !sector.children.empty();
    return sector;
}

PieModel build_root(const KnowledgeBase& kb, const NavOptions& options) {
    PieModel model;
    model.revision = kb.revision();
    model.root = class_sector(kb, std::string(kThing), "");
    model.root.percent = 100.0;
    if (model.root.expandable) model.root = expand(kb, model.root, options);
    return model;
}

PieModel combine_focus(const KnowledgeBase& kb, const std::vector<std::string>& tags, const NavOptions& options) {
    if (tags.empty()) throw Error(ErrorCode::InvalidArgument, "focus needs at least one tag");
    std::vector<std::string> unique;
    for (const auto& t : tags) {
        if (!kb.find_class(t)) throw Error(ErrorCode::UnknownTag, "no class for FD tag " + t, {{"tag", t}});
        if (std::find(unique.begin(), unique.end(), t) == unique.end()) unique.push_back(t);
    }
    std::set<std::string> members = kb.instances_of(unique.front());
    for (std::size_t i = 1; i < unique.size(); ++i) {
        const auto other = kb.instances_of(unique[i]);
        std::set<std::string> keep;
        std::set_intersection(members.begin(), members.end(), other.begin(), other.end(), std::inserter(keep, keep.end()));
        members = std::move(keep);
    }

    const auto props = hierarchy_properties(kb, options);
    PieModel model;
    model.revision = kb.revision();
    model.focus_tags = unique;
    model.root = class_sector(kb, std::string(kThing), "");
    model.root.percent = 100.0;
    std::vector<PieSector> children;
    for (const auto& m : members) children.push_back(individual_sector(kb, m, model.root.id, props));
    children = order_children(kb, std::move(children), options.order_property);
    assign_percents(kb, children, options);
    model.root.children = std::move(children);
    model.root.expandable = !model.root.children.empty();
    model.empty = members.empty();
    return model;
}

namespace {

void colorize_sector(PieSector& s, const FsnGraph& fsn) {
    s.color = kNeutralColor;
    if (fsn.find_tag(s.source_iri)) {
        if (auto strain = fsn.mean_incident_strain(s.source_iri)) s.color = region_color(*strain, fsn.params());
    }
    for (auto& c : s.children) colorize_sector(c, fsn);
}

} // namespace

PieModel colorize(PieModel model, const FsnGraph& fsn) {
    colorize_sector(model.root, fsn);
    return model;
}

PieModel table_to_pie(const ResultTable& table, const KnowledgeBase& kb) {
    PieModel model;
    model.revision = kb.revision();
    model.root = class_sector(kb, std::string(kThing), "");
    model.root.percent = 100.0;
    model.root.expandable = false;
    if (table.rows.empty() || table.columns.empty()) {
        model.empty = true;
        return model;
    }
    std::vector<std::string> keys;
    std::map<std::string, std::pair<RdfTerm, std::size_t>> tally;
    for (const auto& row : table.rows) {
        const auto key = rdf_term_key(row.front());
        auto [it, inserted] = tally.try_emplace(key, row.front(), 0);
        if (inserted) keys.push_back(key);
        ++it->second.second;
    }
    std::vector<double> weights;
    for (const auto& key : keys) {
        const auto& [term, count] = tally.at(key);
        PieSector s;
        s.kind = SectorKind::Individual;
        if (const auto* iri = std::get_if<Iri>(&term)) {
            s.source_iri = iri->value;
            if (const auto* ind = kb.find_individual(iri->value)) {
                s.label = ind->primary_label();
            } else if (const auto* cls = kb.find_class(iri->value)) {
                s.kind = SectorKind::Class;
                s.label = cls->label;
            } else {
                s.label = iri->value;
            }
        } else {
            s.label = std::get<Literal>(term).lexical;
        }
        s.id = model.root.id + "/" + segment(s.kind, s.source_iri.empty() ? s.label : s.source_iri);
        model.root.children.push_back(std::move(s));
        weights.push_back(static_cast<double>(count));
    }
    const auto units = allocate_hundredths(weights);
    for (std::size_t i = 0; i < units.size(); ++i) model.root.children[i].percent = static_cast<double>(units[i]) / 100.0;
    model.root.expandable = true;
    return model;
}

PieSector sector_from_id(const KnowledgeBase& kb, const std::string& id) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto slash = id.find('/', start);
        parts.push_back(id.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    const auto& last = parts.back();
    if (last.size() < 3 || last[1] != ':' || (last[0] != 'c' && last[0] != 'i')) {
        throw Error(ErrorCode::UnknownSector, "malformed sector id: " + id, {{"sector", id}});
    }
    const std::string iri = unescape_segment(last.substr(2));
    const std::string parent = parts.size() > 1 ? id.substr(0, id.size() - last.size() - 1) : "";
    if (last[0] == 'c') {
        if (!kb.find_class(iri)) throw Error(ErrorCode::UnknownSector, "unknown sector: " + id, {{"sector", id}});
        return class_sector(kb, iri, parent);
    }
    if (!kb.find_individual(iri)) throw Error(ErrorCode::UnknownSector, "unknown sector: " + id, {{"sector", id}});
    return individual_sector(kb, iri, parent, kb.hierarchical_properties());
}

nlohmann::json to_json(const PieSector& sector) {
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : sector.children) children.push_back(to_json(c));
    return {{"id", sector.id},
            {"label", sector.label},
            {"kind", sector_kind_name(sector.kind)},
            {"percent", sector.percent},
            {"color", {sector.color.r, sector.color.g, sector.color.b}},
            {"expandable", sector.expandable},
            {"children", std::move(children)},
            {"source_iri", sector.source_iri}};
}

nlohmann::json to_json(const PieModel& model) {
    return {{"root", to_json(model.root)},
            {"focus_tags", model.focus_tags},
            {"revision", model.revision},
            {"empty", model.empty}};
}

} // namespace fdkb
