#include "fdkb/kb_store.hpp"

#include "fdkb/error.hpp"

namespace fdkb {

using nlohmann::json;

json KbState::to_json() const {
    json templates_json = json::array();
    for (const auto& t : templates.list()) templates_json.push_back(fdkb::to_json(t));
    return {{"revision", revision},
            {"kb", kb.to_json()},
            {"fsn", fsn.to_json()},
            {"templates", std::move(templates_json)},
            {"weight_overrides", weight_overrides}};
}

namespace ops {

json define_class(const ClassDef& def) { return {{"type", "define_class"}, {"class", to_json(def)}}; }

json add_superclass(const std::string& cls, const std::string& parent) {
    return {{"type", "add_superclass"}, {"class", cls}, {"parent", parent}};
}

json define_property(const PropertyDef& def) { return {{"type", "define_property"}, {"property", to_json(def)}}; }

json assert_individual(const Individual& ind) {
    return {{"type", "assert_individual"}, {"individual", to_json(ind)}};
}

json set_property_value(const std::string& subject, const std::string& property, const AssertionObject& object) {
    return {{"type", "set_property_value"}, {"subject", subject}, {"property", property}, {"object", to_json(object)}};
}

json remove_individual(const std::string& iri, bool cascade) {
    return {{"type", "remove_individual"}, {"iri", iri}, {"cascade", cascade}};
}

json fsn_event(const MorphologicalChange& change) { return {{"type", "fsn_event"}, {"change", to_json(change)}}; }

json register_template(const QueryTemplate& tmpl) {
    return {{"type", "register_template"}, {"template", to_json(tmpl)}};
}

json import_piechart(const PieDocument& doc) { return {{"type", "import_piechart"}, {"document", to_json(doc)}}; }

} // namespace ops

namespace {

json apply_decoded(KbState& state, const json& op) {
    const auto type = op.at("type").get<std::string>();
    if (type == "define_class") {
        state.kb.define_class(class_def_from_json(op.at("class")));
    } else if (type == "add_superclass") {
        state.kb.add_superclass(op.at("class").get<std::string>(), op.at("parent").get<std::string>());
    } else if (type == "define_property") {
        state.kb.define_property(property_def_from_json(op.at("property")));
    } else if (type == "assert_individual") {
        state.kb.assert_individual(individual_from_json(op.at("individual")));
    } else if (type == "set_property_value") {
        state.kb.set_property_value(op.at("subject").get<std::string>(), op.at("property").get<std::string>(),
                                    assertion_object_from_json(op.at("object")));
    } else if (type == "remove_individual") {
        state.kb.remove_individual(op.at("iri").get<std::string>(), op.value("cascade", false));
    } else if (type == "fsn_event") {
        return to_json(state.fsn.apply(change_from_json(op.at("change"))));
    } else if (type == "register_template") {
        state.templates.register_template(template_from_json(op.at("template")));
    } else if (type == "import_piechart") {
        const auto doc = pie_document_from_json(op.at("document"));
        std::map<std::string, double> overrides;
        for (const auto& s : doc.slices) overrides[s.source_iri.value_or(s.name)] = s.percent();
        state.weight_overrides = std::move(overrides);
        return {{"slices", doc.slices.size()}};
    } else {
        throw Error(ErrorCode::MalformedBody, "unknown op type: " + type, {{"type", type}});
    }
    return json::object();
}

} // namespace

json apply_op(KbState& state, const json& op) {
    if (!op.is_object()) throw Error(ErrorCode::MalformedBody, "op must be a JSON object");
    json result;
    try {
        result = apply_decoded(state, op);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedBody, std::string("malformed op: ") + e.what());
    }
    ++state.revision;
    return result;
}

KbState replay(const std::vector<JournalRecord>& records, double theta, ElasticityParams params) {
    KbState state(theta, params);
    for (const auto& rec : records) {
        if (rec.revision != state.revision + 1) {
            throw Error(ErrorCode::JournalCorrupt, "journal revision out of sequence", {{"revision", rec.revision}});
        }
        try {
            apply_op(state, rec.op);
        } catch (const Error& e) {
            throw Error(ErrorCode::JournalCorrupt,
                        "journal record " + std::to_string(rec.revision) + " rejected: " + e.what(),
                        {{"revision", rec.revision}, {"cause", error_name(e.code())}});
        }
    }
    return state;
}

std::vector<json> seed_fixture_ops() {
    std::vector<json> out;
    auto cls = [&](const std::string& iri, std::vector<std::string> parents = {}) {
        out.push_back(ops::define_class({iri, iri, std::move(parents)}));
    };
    cls("TypologyOfNewsObject");
    cls("Ship");
    cls("sinking");
    cls("passenger");
    cls("passengerShipwreck", {"sinking", "passenger"});

    PropertyDef part_of;
    part_of.iri = "PartOf";
    part_of.kind = PropertyKind::Object;
    part_of.range = kThing;
    part_of.family = PropertyFamily::Hierarchical;
    out.push_back(ops::define_property(part_of));

    PropertyDef composed;
    composed.iri = "isComposedOf";
    composed.kind = PropertyKind::Object;
    composed.range = kThing;
    composed.inverse_of = "PartOf";
    out.push_back(ops::define_property(composed));

    PropertyDef followed;
    followed.iri = "isFollowedBy";
    followed.kind = PropertyKind::Object;
    followed.range = kThing;
    followed.family = PropertyFamily::TotalOrder;
    out.push_back(ops::define_property(followed));

    PropertyDef built_of;
    built_of.iri = "builtOf";
    built_of.kind = PropertyKind::Object;
    built_of.domain = "TypologyOfNewsObject";
    built_of.range = "Ship";
    out.push_back(ops::define_property(built_of));

    PropertyDef description;
    description.iri = "description";
    description.kind = PropertyKind::Datatype;
    description.range = "string";
    out.push_back(ops::define_property(description));

    auto ind = [&](const std::string& iri, std::set<std::string> classes) {
        out.push_back(ops::assert_individual({iri, {iri}, std::move(classes)}));
    };
    ind("ship", {"sinking", "passenger"});
    ind("captain", {"sinking"});
    ind("rescue", {"sinking"});
    ind("plane", {"passenger"});
    ind("train", {"passenger"});
    ind("ferry", {"passengerShipwreck"});
    ind("titanic", {"passengerShipwreck"});
    ind("Sinking", {"TypologyOfNewsObject"});
    ind("Passenger", {"Ship"});

    auto link = [&](const std::string& s, const std::string& p, const std::string& o) {
        out.push_back(ops::set_property_value(s, p, IndividualRef{o}));
    };
    link("Sinking", "builtOf", "Passenger");
    link("ship", "PartOf", "Sinking");
    link("captain", "PartOf", "ship");
    link("rescue", "PartOf", "ship");
    link("ship", "isFollowedBy", "ferry");
    link("ferry", "isFollowedBy", "titanic");
    out.push_back(ops::set_property_value("titanic", "description", Literal{"sank in 1912", "string"}));

    auto tag = [&](const std::string& id, std::set<std::string> objects, std::set<std::string> attributes,
                   std::uint64_t clicks, std::uint64_t impressions, std::uint64_t ordinal) {
        FormalContext::Incidence incidence;
        for (const auto& o : objects) {
            for (const auto& a : attributes) incidence.emplace(o, a);
        }
        FolksodrivenTag t(id, id, FormalContext(std::move(objects), std::move(attributes), std::move(incidence)),
                          TimeExposition(clicks, impressions), Resource("urn:fdkb:" + id, ordinal));
        out.push_back(ops::fsn_event(change::AddTag{std::move(t)}));
    };
    tag("sinking", {"ship", "captain", "rescue"}, {"sea", "vessel", "accident"}, 7, 40, 3);
    tag("passenger", {"ship", "plane", "train"}, {"sea", "vessel", "travel"}, 3, 20, 1);

    QueryTemplate part;
    part.id = "items-part-of";
    part.description = "Items that are part of {Typology}";
    part.skeleton = parse_query("SELECT ?x WHERE { ?x :PartOf %Typology }", {default_prefixes(), true});
    part.params = {{"Typology", ParamType::ClassInstance, "TypologyOfNewsObject"}};
    out.push_back(ops::register_template(part));

    QueryTemplate built;
    built.id = "typologies-built-of";
    built.description = "Typologies built of {Material}";
    built.skeleton = parse_query("SELECT ?t WHERE { ?t :builtOf %Material }", {default_prefixes(), true});
    built.params = {{"Material", ParamType::ClassInstance, "Ship"}};
    out.push_back(ops::register_template(built));
    return out;
}

KbStore::KbStore(KbState initial, Journal* journal)
    : current_(std::make_shared<const KbState>(std::move(initial))), journal_(journal) {}

std::shared_ptr<const KbState> KbStore::snapshot() const {
    std::lock_guard lock(publish_mutex_);
    return current_;
}

CommitResult KbStore::commit(const json& op, const std::string& actor, std::optional<std::uint64_t> expected_revision) {
    std::lock_guard writer(writer_mutex_);
    const auto base = snapshot();
    if (expected_revision && *expected_revision != base->revision) {
        throw Error(ErrorCode::RevisionConflict, "revision moved on",
                    {{"expected", *expected_revision}, {"current", base->revision}});
    }
    auto next = std::make_shared<KbState>(*base);
    CommitResult out;
    out.result = apply_op(*next, op);
    out.revision = next->revision;
    if (journal_) journal_->append({next->revision, utc_timestamp(), actor, op});
    std::lock_guard publish(publish_mutex_);
    current_ = std::move(next);
    return out;
}

} // namespace fdkb
