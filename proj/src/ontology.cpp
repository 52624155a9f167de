#include "fdkb/ontology.hpp"

#include "fdkb/error.hpp"
#include "fdkb/fd_core.hpp"

#include <algorithm>
#include <deque>
#include <regex>

namespace fdkb {

using nlohmann::json;

std::string_view kind_name(PropertyKind kind) {
    return kind == PropertyKind::Object ? "ObjectProperty" : "DatatypeProperty";
}

std::string_view family_name(PropertyFamily family) {
    switch (family) {
    case PropertyFamily::Plain: return "Plain";
    case PropertyFamily::Hierarchical: return "Hierarchical";
    case PropertyFamily::TotalOrder: return "TotalOrder";
    }
    return "Plain";
}

PropertyKind kind_from_name(std::string_view name) {
    if (name == "ObjectProperty") return PropertyKind::Object;
    if (name == "DatatypeProperty") return PropertyKind::Datatype;
    throw Error(ErrorCode::InvalidArgument, "unknown property kind: " + std::string(name));
}

PropertyFamily family_from_name(std::string_view name) {
    if (name == "Plain") return PropertyFamily::Plain;
    if (name == "Hierarchical") return PropertyFamily::Hierarchical;
    if (name == "TotalOrder") return PropertyFamily::TotalOrder;
    throw Error(ErrorCode::InvalidArgument, "unknown property family: " + std::string(name));
}

bool is_primitive_type(std::string_view tag) {
    return tag == "string" || tag == "integer" || tag == "decimal" || tag == "boolean" || tag == "uri";
}

bool is_valid_lexical(std::string_view tag, std::string_view lexical) {
    static const std::regex integer_re(R"([+-]?[0-9]+)");
    static const std::regex decimal_re(R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+))");
    const std::string s(lexical);
    if (tag == "string") return true;
    if (tag == "integer") return std::regex_match(s, integer_re);
    if (tag == "decimal") return std::regex_match(s, decimal_re);
    if (tag == "boolean") return s == "true" || s == "false";
    if (tag == "uri") return is_absolute_uri(s);
    return false;
}

namespace {

void require_iri(const std::string& iri, std::string_view what) {
    if (iri.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " iri must not be empty");
}

} // namespace

KnowledgeBase::KnowledgeBase() {
    classes_.emplace(std::string(kThing), ClassDef{std::string(kThing), std::string(kThing), {}});
}

// ---------------------------------------------------------------------------
// T-Box

void KnowledgeBase::define_class(ClassDef def) {
    require_iri(def.iri, "class");
    if (iri_in_use(def.iri)) throw Error(ErrorCode::DuplicateIri, "iri already defined: " + def.iri);
    std::vector<std::string> parents;
    for (const auto& p : def.parents) {
        if (p == def.iri) {
            throw Error(ErrorCode::IsACycle, "class cannot be its own parent: " + def.iri,
                        {{"path", json::array({def.iri, def.iri})}});
        }
        if (!classes_.count(p)) throw Error(ErrorCode::UnknownParent, "unknown parent class: " + p, {{"parent", p}});
        if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
    }
    if (parents.empty()) parents.emplace_back(kThing);
    def.parents = std::move(parents);
    if (def.label.empty()) def.label = def.iri;
    classes_.emplace(def.iri, std::move(def));
    ++revision_;
}

void KnowledgeBase::add_superclass(const std::string& cls, const std::string& parent) {
    auto it = classes_.find(cls);
    if (it == classes_.end()) throw Error(ErrorCode::UnknownClass, "unknown class: " + cls, {{"class", cls}});
    if (!classes_.count(parent)) {
        throw Error(ErrorCode::UnknownParent, "unknown parent class: " + parent, {{"parent", parent}});
    }
    const auto& parents = it->second.parents;
    if (std::find(parents.begin(), parents.end(), parent) != parents.end()) {
        throw Error(ErrorCode::InvalidArgument, parent + " is already a parent of " + cls);
    }
    // BFS upward from the new parent; reaching `cls` means the edge closes a cycle.
    std::map<std::string, std::string> came_from{{parent, ""}};
    std::deque<std::string> queue{parent};
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        if (cur == cls) {
            std::vector<std::string> path;
            for (std::string n = cur; !n.empty(); n = came_from[n]) path.push_back(n);
            std::reverse(path.begin(), path.end()); // parent ... cls
            path.insert(path.begin(), cls);
            throw Error(ErrorCode::IsACycle, "isA edge " + cls + " -> " + parent + " closes a cycle",
                        {{"path", path}});
        }
        for (const auto& up : classes_.at(cur).parents) {
            if (!came_from.count(up)) {
                came_from[up] = cur;
                queue.push_back(up);
            }
        }
    }
    it->second.parents.push_back(parent);
    ++revision_;
}

void KnowledgeBase::define_property(PropertyDef def) {
    require_iri(def.iri, "property");
    if (iri_in_use(def.iri)) throw Error(ErrorCode::DuplicateIri, "iri already defined: " + def.iri);
    const auto family = def.effective_family();
    if (def.kind == PropertyKind::Datatype && family != PropertyFamily::Plain) {
        throw Error(ErrorCode::KindMismatch,
                    std::string(family_name(family)) + " family requires an ObjectProperty");
    }
    if (def.max_card && *def.max_card < def.min_card) {
        throw Error(ErrorCode::BadCardinality, "max_card is smaller than min_card",
                    {{"min_card", def.min_card}, {"max_card", *def.max_card}});
    }
    if (def.inverse_of) {
        const PropertyDef* base = find_property(*def.inverse_of);
        if (!base) {
            throw Error(ErrorCode::UnknownProperty, "unknown inverse property: " + *def.inverse_of,
                        {{"property", *def.inverse_of}});
        }
        if (def.kind != PropertyKind::Object || base->kind != PropertyKind::Object || base->inverse_of) {
            throw Error(ErrorCode::KindMismatch, "inverses must pair two base object properties");
        }
    }
    if (def.domain && !classes_.count(*def.domain)) {
        throw Error(ErrorCode::UnknownClass, "unknown domain class: " + *def.domain, {{"class", *def.domain}});
    }
    if (def.kind == PropertyKind::Object) {
        if (def.range.empty()) def.range = std::string(kThing);
        if (!classes_.count(def.range)) {
            throw Error(ErrorCode::UnknownClass, "unknown range class: " + def.range, {{"class", def.range}});
        }
    } else if (!is_primitive_type(def.range)) {
        throw Error(ErrorCode::UnknownDatatype, "unknown literal type: " + def.range, {{"datatype", def.range}});
    }
    properties_.emplace(def.iri, std::move(def));
    ++revision_;
}

// ---------------------------------------------------------------------------
// A-Box

void KnowledgeBase::assert_individual(Individual ind) {
    require_iri(ind.iri, "individual");
    if (iri_in_use(ind.iri)) throw Error(ErrorCode::DuplicateIri, "iri already defined: " + ind.iri);
    if (ind.classes.empty()) ind.classes.insert(std::string(kThing));
    for (const auto& c : ind.classes) {
        if (!classes_.count(c)) throw Error(ErrorCode::UnknownClass, "unknown class: " + c, {{"class", c}});
    }
    if (ind.labels.empty() ||
        std::any_of(ind.labels.begin(), ind.labels.end(), [](const auto& l) { return l.empty(); })) {
        throw Error(ErrorCode::EmptyLabels, "an individual needs at least one non-empty label");
    }
    individuals_.emplace(ind.iri, std::move(ind));
    ++revision_;
}

KnowledgeBase::Resolved KnowledgeBase::resolve_edit(const std::string& subject, const std::string& property,
                                                    AssertionObject object) const {
    if (!individuals_.count(subject)) {
        throw Error(ErrorCode::UnknownIndividual, "unknown individual: " + subject, {{"individual", subject}});
    }
    const PropertyDef* prop = find_property(property);
    if (!prop) throw Error(ErrorCode::UnknownProperty, "unknown property: " + property, {{"property", property}});
    if (!prop->inverse_of) return {subject, prop, std::move(object)};

    const auto* ref = std::get_if<IndividualRef>(&object);
    if (!ref) throw Error(ErrorCode::KindMismatch, property + " expects an individual, got a literal");
    if (!individuals_.count(ref->iri)) {
        throw Error(ErrorCode::UnknownIndividual, "unknown individual: " + ref->iri, {{"individual", ref->iri}});
    }
    return {ref->iri, find_property(*prop->inverse_of), IndividualRef{subject}};
}

void KnowledgeBase::check_assertion(const Resolved& edit) const {
    const PropertyDef& prop = *edit.property;
    const std::string& subject = edit.subject;

    if (prop.kind == PropertyKind::Object) {
        const auto* ref = std::get_if<IndividualRef>(&edit.object);
        if (!ref) throw Error(ErrorCode::KindMismatch, prop.iri + " expects an individual, got a literal");
        if (!individuals_.count(ref->iri)) {
            throw Error(ErrorCode::UnknownIndividual, "unknown individual: " + ref->iri, {{"individual", ref->iri}});
        }
    } else if (!std::holds_alternative<Literal>(edit.object)) {
        throw Error(ErrorCode::KindMismatch, prop.iri + " expects a literal, got an individual");
    }

    if (prop.domain && !is_instance_of(subject, *prop.domain)) {
        throw Error(ErrorCode::DomainViolation, subject + " is not an instance of " + *prop.domain,
                    {{"subject", subject}, {"property", prop.iri}, {"domain", *prop.domain}});
    }

    if (prop.kind == PropertyKind::Object) {
        const auto& target = std::get<IndividualRef>(edit.object).iri;
        if (!is_instance_of(target, prop.range)) {
            throw Error(ErrorCode::RangeViolation, target + " is not an instance of " + prop.range,
                        {{"object", target}, {"property", prop.iri}, {"range", prop.range}});
        }
    } else {
        const auto& lit = std::get<Literal>(edit.object);
        if (lit.datatype != prop.range || !is_valid_lexical(prop.range, lit.lexical)) {
            throw Error(ErrorCode::RangeViolation,
                        "\"" + lit.lexical + "\" is not a valid " + prop.range + " value",
                        {{"literal", lit.lexical}, {"datatype", lit.datatype}, {"property", prop.iri},
                         {"range", prop.range}});
        }
    }

    Assertion candidate{subject, prop.iri, edit.object};
    if (assertions_.count(candidate)) {
        throw Error(ErrorCode::DuplicateAssertion, "assertion already present",
                    {{"subject", subject}, {"property", prop.iri}});
    }

    const auto existing = values_of(subject, prop.iri).size();
    if (prop.max_card && existing + 1 > *prop.max_card) {
        throw Error(ErrorCode::CardinalityExceeded,
                    prop.iri + " allows at most " + std::to_string(*prop.max_card) + " value(s)",
                    {{"subject", subject}, {"property", prop.iri}, {"max_card", *prop.max_card}});
    }

    const auto family = prop.effective_family();
    if (family == PropertyFamily::Plain) return;
    const auto& target = std::get<IndividualRef>(edit.object).iri;

    if (family == PropertyFamily::Hierarchical) {
        if (auto father = father_of(subject, prop.iri)) {
            throw Error(ErrorCode::SecondFather, subject + " already has father " + *father,
                        {{"subject", subject}, {"property", prop.iri}, {"father", *father}});
        }
        // Walk up from the new father; meeting the subject closes a cycle.
        std::vector<std::string> path{subject, target};
        for (std::optional<std::string> cur = target; cur;) {
            if (*cur == subject) {
                throw Error(ErrorCode::WouldCreateCycle, "edge would close a " + prop.iri + " cycle",
                            {{"path", path}});
            }
            cur = father_of(*cur, prop.iri);
            if (cur) path.push_back(*cur);
        }
        return;
    }

    // TotalOrder: each individual has at most one successor and one predecessor.
    bool subject_has_successor = false;
    bool target_has_predecessor = false;
    for (const auto& a : assertions_) {
        if (a.property != prop.iri) continue;
        if (a.subject == subject) subject_has_successor = true;
        if (a.object_iri() == target) target_has_predecessor = true;
    }
    if (subject_has_successor || target_has_predecessor) {
        throw Error(ErrorCode::ChainFork, "edge would fork the " + prop.iri + " chain",
                    {{"subject", subject}, {"object", target}, {"property", prop.iri}});
    }
    std::vector<std::string> path{subject, target};
    std::string cur = target;
    while (true) {
        if (cur == subject) {
            throw Error(ErrorCode::WouldCreateCycle, "edge would close a " + prop.iri + " cycle", {{"path", path}});
        }
        auto next = values_of(cur, prop.iri);
        if (next.empty()) break;
        cur = std::get<IndividualRef>(next.front()).iri;
        path.push_back(cur);
    }
}

void KnowledgeBase::set_property_value(const std::string& subject, const std::string& property,
                                       AssertionObject object) {
    Resolved edit = resolve_edit(subject, property, std::move(object));
    check_assertion(edit);
    assertions_.insert(Assertion{edit.subject, edit.property->iri, std::move(edit.object)});
    ++revision_;
}

void KnowledgeBase::remove_individual(const std::string& iri, bool cascade) {
    if (!individuals_.count(iri)) {
        throw Error(ErrorCode::UnknownIndividual, "unknown individual: " + iri, {{"individual", iri}});
    }
    const auto hierarchical = hierarchical_properties();

    std::set<std::string> doomed{iri};
    if (cascade) {
        std::deque<std::string> queue{iri};
        while (!queue.empty()) {
            auto cur = queue.front();
            queue.pop_front();
            for (const auto& p : hierarchical) {
                for (auto& child : children_of(cur, p)) {
                    if (doomed.insert(child).second) queue.push_back(child);
                }
            }
        }
    }

    std::vector<Assertion> splices;
    if (!cascade) {
        for (const auto& p : hierarchical) {
            auto father = father_of(iri, p);
            if (!father) continue;
            for (const auto& child : children_of(iri, p)) splices.push_back({child, p, IndividualRef{*father}});
        }
        for (const auto& [piri, prop] : properties_) {
            if (prop.effective_family() != PropertyFamily::TotalOrder) continue;
            std::optional<std::string> pred;
            std::optional<std::string> succ;
            for (const auto& a : assertions_) {
                if (a.property != piri) continue;
                if (a.object_iri() == iri) pred = a.subject;
                if (a.subject == iri) succ = a.object_iri();
            }
            if (pred && succ) splices.push_back({*pred, piri, IndividualRef{*succ}});
        }
    }

    for (auto it = assertions_.begin(); it != assertions_.end();) {
        const bool mentions = doomed.count(it->subject) || (it->is_object() && doomed.count(it->object_iri()));
        it = mentions ? assertions_.erase(it) : std::next(it);
    }
    for (auto& a : splices) assertions_.insert(std::move(a));
    for (const auto& d : doomed) individuals_.erase(d);
    ++revision_;
}

// ---------------------------------------------------------------------------
// Queries

const ClassDef* KnowledgeBase::find_class(std::string_view iri) const {
    auto it = classes_.find(std::string(iri));
    return it == classes_.end() ? nullptr : &it->second;
}

const PropertyDef* KnowledgeBase::find_property(std::string_view iri) const {
    auto it = properties_.find(std::string(iri));
    return it == properties_.end() ? nullptr : &it->second;
}

const Individual* KnowledgeBase::find_individual(std::string_view iri) const {
    auto it = individuals_.find(std::string(iri));
    return it == individuals_.end() ? nullptr : &it->second;
}

bool KnowledgeBase::iri_in_use(std::string_view iri) const {
    return find_class(iri) || find_property(iri) || find_individual(iri);
}

std::set<std::string> KnowledgeBase::superclasses_of(const std::string& cls) const {
    std::set<std::string> seen;
    if (!classes_.count(cls)) return seen;
    std::deque<std::string> queue{cls};
    seen.insert(cls);
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (const auto& p : classes_.at(cur).parents) {
            if (seen.insert(p).second) queue.push_back(p);
        }
    }
    return seen;
}

std::set<std::string> KnowledgeBase::subclasses_of(const std::string& cls) const {
    std::set<std::string> result;
    for (const auto& [iri, def] : classes_) {
        if (superclasses_of(iri).count(cls)) result.insert(iri);
    }
    return result;
}

std::vector<std::string> KnowledgeBase::direct_subclasses(const std::string& cls) const {
    std::vector<std::string> out;
    for (const auto& [iri, def] : classes_) {
        if (std::find(def.parents.begin(), def.parents.end(), cls) != def.parents.end()) out.push_back(iri);
    }
    return out;
}

bool KnowledgeBase::is_subclass_of(const std::string& cls, const std::string& ancestor) const {
    return superclasses_of(cls).count(ancestor) > 0;
}

bool KnowledgeBase::is_instance_of(const std::string& individual, const std::string& cls) const {
    const Individual* ind = find_individual(individual);
    if (!ind) return false;
    return std::any_of(ind->classes.begin(), ind->classes.end(),
                       [&](const std::string& c) { return is_subclass_of(c, cls); });
}

std::set<std::string> KnowledgeBase::instances_of(const std::string& cls, bool transitive) const {
    std::set<std::string> out;
    for (const auto& [iri, ind] : individuals_) {
        if (transitive ? is_instance_of(iri, cls) : ind.classes.count(cls) > 0) out.insert(iri);
    }
    return out;
}

std::vector<std::string> KnowledgeBase::range_candidates(const std::string& property) const {
    const PropertyDef* prop = find_property(property);
    if (!prop) throw Error(ErrorCode::UnknownProperty, "unknown property: " + property, {{"property", property}});
    if (prop->kind != PropertyKind::Object) return {};
    std::string cls = prop->range;
    if (prop->inverse_of) {
        const PropertyDef* base = find_property(*prop->inverse_of);
        cls = base->domain.value_or(std::string(kThing));
    }
    auto set = instances_of(cls);
    return {set.begin(), set.end()};
}

std::optional<std::string> KnowledgeBase::father_of(const std::string& individual,
                                                    const std::string& property) const {
    const PropertyDef* prop = find_property(property);
    if (!prop) throw Error(ErrorCode::UnknownProperty, "unknown property: " + property, {{"property", property}});
    if (prop->effective_family() != PropertyFamily::Hierarchical) {
        throw Error(ErrorCode::NotHierarchical, property + " is not a hierarchical property", {{"property", property}});
    }
    if (!individuals_.count(individual)) {
        throw Error(ErrorCode::UnknownIndividual, "unknown individual: " + individual, {{"individual", individual}});
    }
    auto lo = assertions_.lower_bound(Assertion{individual, property, IndividualRef{}});
    if (lo != assertions_.end() && lo->subject == individual && lo->property == property && lo->is_object()) {
        return lo->object_iri();
    }
    return std::nullopt;
}

std::vector<std::string> KnowledgeBase::children_of(const std::string& individual,
                                                    const std::string& property) const {
    std::vector<std::string> out;
    for (const auto& a : assertions_) {
        if (a.property == property && a.is_object() && a.object_iri() == individual) out.push_back(a.subject);
    }
    return out;
}

std::vector<std::string> KnowledgeBase::hierarchical_properties() const {
    std::vector<std::string> out;
    for (const auto& [iri, prop] : properties_) {
        if (prop.effective_family() == PropertyFamily::Hierarchical) out.push_back(iri);
    }
    return out;
}

std::vector<AssertionObject> KnowledgeBase::values_of(const std::string& subject,
                                                      const std::string& property) const {
    std::vector<AssertionObject> out;
    for (auto it = assertions_.lower_bound(Assertion{subject, property, IndividualRef{}});
         it != assertions_.end() && it->subject == subject && it->property == property; ++it) {
        out.push_back(it->object);
    }
    return out;
}

std::string KnowledgeBase::display_label(const std::string& individual) const {
    const Individual* ind = find_individual(individual);
    return ind ? ind->primary_label() : individual;
}

std::vector<std::string> KnowledgeBase::level_order(const std::vector<std::string>& individuals,
                                                    const std::string& property) const {
    const PropertyDef* prop = find_property(property);
    if (!prop) throw Error(ErrorCode::UnknownProperty, "unknown property: " + property, {{"property", property}});
    if (prop->effective_family() != PropertyFamily::TotalOrder) {
        throw Error(ErrorCode::NotTotalOrder, property + " is not a total-order property", {{"property", property}});
    }
    const std::set<std::string> level(individuals.begin(), individuals.end());
    std::map<std::string, std::string> succ;
    std::map<std::string, std::string> pred;
    for (const auto& a : assertions_) {
        if (a.property != property || !level.count(a.subject) || !level.count(a.object_iri())) continue;
        if (succ.count(a.subject) || pred.count(a.object_iri())) {
            throw Error(ErrorCode::ChainInconsistent, "fork in " + property + " chain at " + a.subject);
        }
        succ[a.subject] = a.object_iri();
        pred[a.object_iri()] = a.subject;
    }

    auto by_label = [this](const std::string& a, const std::string& b) {
        auto la = display_label(a);
        auto lb = display_label(b);
        return la != lb ? la < lb : a < b;
    };

    std::vector<std::string> heads;
    std::vector<std::string> loose;
    for (const auto& ind : level) {
        const bool on_chain = succ.count(ind) || pred.count(ind);
        if (!on_chain) loose.push_back(ind);
        else if (!pred.count(ind)) heads.push_back(ind);
    }
    std::sort(heads.begin(), heads.end(), by_label);
    std::sort(loose.begin(), loose.end(), by_label);

    std::vector<std::string> out;
    std::size_t chained = 0;
    for (const auto& head : heads) {
        for (std::string cur = head;;) {
            out.push_back(cur);
            ++chained;
            auto it = succ.find(cur);
            if (it == succ.end()) break;
            cur = it->second;
        }
    }
    if (chained != succ.size() + heads.size()) {
        throw Error(ErrorCode::ChainInconsistent, "cycle in " + property + " chain");
    }
    out.insert(out.end(), loose.begin(), loose.end());
    return out;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const ClassDef& def) { return {{"iri", def.iri}, {"label", def.label}, {"parents", def.parents}}; }

json to_json(const PropertyDef& def) {
    json j{{"iri", def.iri}, {"kind", kind_name(def.kind)}, {"range", def.range}, {"min_card", def.min_card}};
    if (def.domain) j["domain"] = *def.domain;
    if (def.max_card) j["max_card"] = *def.max_card;
    if (def.family) j["family"] = family_name(*def.family);
    if (def.inverse_of) j["inverse_of"] = *def.inverse_of;
    return j;
}

json to_json(const Individual& ind) {
    return {{"iri", ind.iri}, {"labels", ind.labels}, {"classes", ind.classes}};
}

json to_json(const AssertionObject& object) {
    if (const auto* ref = std::get_if<IndividualRef>(&object)) return {{"iri", ref->iri}};
    const auto& lit = std::get<Literal>(object);
    return {{"literal", lit.lexical}, {"datatype", lit.datatype}};
}

ClassDef class_def_from_json(const json& j) {
    ClassDef def;
    def.iri = j.at("iri").get<std::string>();
    def.label = j.value("label", std::string{});
    if (j.contains("parents")) def.parents = j.at("parents").get<std::vector<std::string>>();
    return def;
}

PropertyDef property_def_from_json(const json& j) {
    PropertyDef def;
    def.iri = j.at("iri").get<std::string>();
    def.kind = kind_from_name(j.value("kind", std::string("ObjectProperty")));
    def.range = j.value("range", std::string{});
    def.min_card = j.value("min_card", 0u);
    if (j.contains("domain") && !j["domain"].is_null()) def.domain = j["domain"].get<std::string>();
    if (j.contains("max_card") && !j["max_card"].is_null()) def.max_card = j["max_card"].get<std::uint32_t>();
    if (j.contains("family") && !j["family"].is_null()) def.family = family_from_name(j["family"].get<std::string>());
    if (j.contains("inverse_of") && !j["inverse_of"].is_null()) def.inverse_of = j["inverse_of"].get<std::string>();
    return def;
}

Individual individual_from_json(const json& j) {
    Individual ind;
    ind.iri = j.at("iri").get<std::string>();
    if (j.contains("labels")) ind.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("classes")) ind.classes = j.at("classes").get<std::set<std::string>>();
    return ind;
}

AssertionObject assertion_object_from_json(const json& j) {
    if (j.contains("iri")) return IndividualRef{j.at("iri").get<std::string>()};
    if (j.contains("literal")) {
        return Literal{j.at("literal").get<std::string>(), j.value("datatype", std::string("string"))};
    }
    throw Error(ErrorCode::MalformedBody, "assertion object needs \"iri\" or \"literal\"");
}

json KnowledgeBase::to_json() const {
    json classes = json::array();
    for (const auto& [iri, def] : classes_) classes.push_back(fdkb::to_json(def));
    json properties = json::array();
    for (const auto& [iri, def] : properties_) properties.push_back(fdkb::to_json(def));
    json individuals = json::array();
    for (const auto& [iri, ind] : individuals_) individuals.push_back(fdkb::to_json(ind));
    json assertions = json::array();
    for (const auto& a : assertions_) {
        assertions.push_back({{"subject", a.subject}, {"property", a.property}, {"object", fdkb::to_json(a.object)}});
    }
    return {{"revision", revision_},
            {"classes", std::move(classes)},
            {"properties", std::move(properties)},
            {"individuals", std::move(individuals)},
            {"assertions", std::move(assertions)}};
}

} // namespace fdkb
