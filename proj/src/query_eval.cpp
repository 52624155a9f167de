#include "fdkb/query.hpp"

#include "fdkb/error.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

namespace fdkb {

std::string rdf_term_key(const RdfTerm& term) {
    if (const auto* iri = std::get_if<Iri>(&term)) return iri->value;
    const auto& lit = std::get<Literal>(term);
    return "\"" + lit.lexical + "\"^^" + lit.datatype;
}

std::vector<RdfTriple> materialize(const KnowledgeBase& kb) {
    std::set<RdfTriple> triples;
    const Iri type{std::string(kRdfType)};
    for (const auto& [iri, ind] : kb.individuals()) {
        for (const auto& cls : ind.classes) {
            for (const auto& sup : kb.superclasses_of(cls)) triples.insert({Iri{iri}, type, Iri{sup}});
        }
    }
    std::multimap<std::string, std::string> inverses; // base -> inverse
    for (const auto& [iri, prop] : kb.properties()) {
        if (prop.inverse_of) inverses.emplace(*prop.inverse_of, iri);
    }
    for (const auto& a : kb.assertions()) {
        RdfTerm object = a.is_object() ? RdfTerm{Iri{a.object_iri()}} : RdfTerm{std::get<Literal>(a.object)};
        triples.insert({Iri{a.subject}, Iri{a.property}, object});
        if (a.is_object()) {
            auto [lo, hi] = inverses.equal_range(a.property);
            for (auto it = lo; it != hi; ++it) triples.insert({Iri{a.object_iri()}, Iri{it->second}, Iri{a.subject}});
        }
    }
    return {triples.begin(), triples.end()};
}

namespace {

using Binding = std::vector<std::optional<RdfTerm>>;

struct CompiledTerm {
    int var = -1; // index into the binding, or -1 for a constant
    RdfTerm constant;
};

RdfTerm constant_of(const QueryTerm& term) {
    if (const auto* iri = std::get_if<Iri>(&term)) return *iri;
    if (const auto* lit = std::get_if<Literal>(&term)) return *lit;
    throw Error(ErrorCode::InvalidArgument, "query still contains template hole " + term_to_string(term));
}

// Matches one position; binds the variable when it is still free.
bool unify(const CompiledTerm& ct, const RdfTerm& value, Binding& b) {
    if (ct.var < 0) return ct.constant == value;
    auto& slot = b[static_cast<std::size_t>(ct.var)];
    if (slot) return *slot == value;
    slot = value;
    return true;
}

} // namespace

ResultTable evaluate(const QueryAst& ast, const KnowledgeBase& kb, const EvalOptions& options) {
    std::map<std::string, int> var_index;
    auto compile = [&](const QueryTerm& term) {
        CompiledTerm ct;
        if (const auto* v = std::get_if<Variable>(&term)) {
            auto [it, inserted] = var_index.emplace(v->name, static_cast<int>(var_index.size()));
            ct.var = it->second;
        } else {
            ct.constant = constant_of(term);
        }
        return ct;
    };
    struct CompiledPattern {
        CompiledTerm s, p, o;
    };
    std::vector<CompiledPattern> patterns;
    for (const auto& tp : ast.patterns) patterns.push_back({compile(tp.subject), compile(tp.property), compile(tp.object)});

    struct CompiledFilter {
        int var;
        FilterOp op;
        RdfTerm value;
    };
    std::vector<CompiledFilter> filters;
    for (const auto& f : ast.filters) filters.push_back({var_index.at(f.var.name), f.op, constant_of(f.value)});

    ResultTable table;
    for (const auto& v : ast.select_vars) table.columns.push_back(v.name);

    const auto triples = materialize(kb);
    std::unordered_map<std::string, std::vector<const RdfTriple*>> by_property;
    for (const auto& t : triples) by_property[t.property.value].push_back(&t);

    // Greedy join order: next pick the pattern with the most positions
    // already fixed (constants or bound variables); ties keep text order.
    std::vector<bool> bound(var_index.size(), false);
    std::vector<std::size_t> order;
    std::vector<bool> used(patterns.size(), false);
    for (std::size_t step = 0; step < patterns.size(); ++step) {
        std::size_t best = patterns.size();
        int best_score = -1;
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            if (used[i]) continue;
            int score = 0;
            for (const auto* ct : {&patterns[i].s, &patterns[i].p, &patterns[i].o}) {
                if (ct->var < 0 || bound[static_cast<std::size_t>(ct->var)]) ++score;
            }
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        used[best] = true;
        order.push_back(best);
        for (const auto* ct : {&patterns[best].s, &patterns[best].p, &patterns[best].o}) {
            if (ct->var >= 0) bound[static_cast<std::size_t>(ct->var)] = true;
        }
    }

    auto passes = [&](const Binding& b) {
        for (const auto& f : filters) {
            const auto& slot = b[static_cast<std::size_t>(f.var)];
            if (!slot) continue;
            const bool eq = *slot == f.value;
            if ((f.op == FilterOp::Equal) != eq) return false;
        }
        return true;
    };

    std::vector<Binding> current{Binding(var_index.size())};
    static const std::vector<const RdfTriple*> kNone;
    std::vector<const RdfTriple*> all;
    for (const auto& t : triples) all.push_back(&t);

    for (std::size_t idx : order) {
        const auto& cp = patterns[idx];
        std::vector<Binding> next;
        for (const auto& b : current) {
            const std::vector<const RdfTriple*>* candidates = &all;
            std::optional<RdfTerm> property;
            if (cp.p.var < 0) property = cp.p.constant;
            else if (b[static_cast<std::size_t>(cp.p.var)]) property = b[static_cast<std::size_t>(cp.p.var)];
            if (property) {
                const auto* iri = std::get_if<Iri>(&*property);
                auto it = iri ? by_property.find(iri->value) : by_property.end();
                candidates = it == by_property.end() ? &kNone : &it->second;
            }
            for (const auto* t : *candidates) {
                Binding nb = b;
                if (!unify(cp.s, t->subject, nb) || !unify(cp.p, t->property, nb) || !unify(cp.o, t->object, nb)) {
                    continue;
                }
                if (!passes(nb)) continue;
                next.push_back(std::move(nb));
                if (next.size() > options.row_limit) {
                    throw Error(ErrorCode::RowLimitExceeded,
                                "query exceeded the row limit of " + std::to_string(options.row_limit),
                                {{"row_limit", options.row_limit}});
                }
            }
        }
        current = std::move(next);
    }
    if (patterns.empty()) current.clear();

    std::map<std::vector<std::string>, std::vector<RdfTerm>> rows;
    for (const auto& b : current) {
        std::vector<RdfTerm> row;
        std::vector<std::string> key;
        for (const auto& v : ast.select_vars) {
            const auto& value = *b[static_cast<std::size_t>(var_index.at(v.name))];
            key.push_back(rdf_term_key(value));
            row.push_back(value);
        }
        rows.emplace(std::move(key), std::move(row));
    }
    for (auto& [key, row] : rows) table.rows.push_back(std::move(row));
    return table;
}

nlohmann::json to_json(const RdfTerm& term) {
    if (const auto* iri = std::get_if<Iri>(&term)) return {{"type", "iri"}, {"value", iri->value}};
    const auto& lit = std::get<Literal>(term);
    return {{"type", "literal"}, {"value", lit.lexical}, {"datatype", lit.datatype}};
}

nlohmann::json to_json(const ResultTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& term : row) r.push_back(to_json(term));
        rows.push_back(std::move(r));
    }
    return {{"columns", table.columns}, {"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// Templates

std::vector<std::string> description_slots(std::string_view description) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = description.find('{', pos)) != std::string_view::npos) {
        auto end = description.find('}', pos + 1);
        if (end == std::string_view::npos) break;
        out.emplace_back(description.substr(pos + 1, end - pos - 1));
        pos = end + 1;
    }
    return out;
}

namespace {

std::set<std::string> skeleton_holes(const QueryAst& ast) {
    std::set<std::string> holes;
    auto visit = [&](const QueryTerm& t) {
        if (const auto* h = std::get_if<Hole>(&t)) holes.insert(h->name);
    };
    for (const auto& p : ast.patterns) {
        visit(p.subject);
        visit(p.property);
        visit(p.object);
    }
    for (const auto& f : ast.filters) visit(f.value);
    return holes;
}

std::string_view param_type_name(ParamType t) { return t == ParamType::ClassInstance ? "class-instance" : "literal"; }

} // namespace

void TemplateRegistry::register_template(QueryTemplate tmpl) {
    if (find(tmpl.id)) throw Error(ErrorCode::DuplicateId, "template id already registered: " + tmpl.id, {{"id", tmpl.id}});
    const auto slots = description_slots(tmpl.description);
    const std::set<std::string> slot_set(slots.begin(), slots.end());
    std::set<std::string> params;
    for (const auto& p : tmpl.params) params.insert(p.label);
    const auto holes = skeleton_holes(tmpl.skeleton);
    if (slot_set.size() != slots.size() || params.size() != tmpl.params.size() || slot_set != params || holes != params) {
        throw Error(ErrorCode::SlotMismatch, "description slots, params and skeleton holes must correspond one-to-one",
                    {{"slots", slots}, {"params", params}, {"holes", holes}});
    }
    for (const auto& p : tmpl.params) {
        if (p.type == ParamType::Literal && !is_primitive_type(p.restriction)) {
            throw Error(ErrorCode::UnknownDatatype, "unknown literal type for param " + p.label,
                        {{"param", p.label}, {"datatype", p.restriction}});
        }
    }
    templates_.push_back(std::move(tmpl));
}

const QueryTemplate* TemplateRegistry::find(std::string_view id) const {
    for (const auto& t : templates_) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

QueryAst TemplateRegistry::instantiate(std::string_view id, const std::map<std::string, std::string>& bindings,
                                       const KnowledgeBase& kb) const {
    const QueryTemplate* tmpl = find(id);
    if (!tmpl) throw Error(ErrorCode::UnknownTemplate, "unknown template: " + std::string(id), {{"id", id}});

    std::map<std::string, QueryTerm> values;
    for (const auto& p : tmpl->params) {
        auto it = bindings.find(p.label);
        if (it == bindings.end()) {
            throw Error(ErrorCode::MissingParam, "parameter " + p.label + " is not bound", {{"param", p.label}});
        }
        if (p.type == ParamType::ClassInstance) {
            if (!kb.is_instance_of(it->second, p.restriction)) {
                throw Error(ErrorCode::RestrictionViolation,
                            "parameter " + p.label + " must be an instance of " + p.restriction,
                            {{"param", p.label}, {"required_class", p.restriction}, {"value", it->second}});
            }
            values[p.label] = Iri{it->second};
        } else {
            if (!is_valid_lexical(p.restriction, it->second)) {
                throw Error(ErrorCode::RestrictionViolation,
                            "parameter " + p.label + " must be a " + p.restriction + " literal",
                            {{"param", p.label}, {"required_type", p.restriction}, {"value", it->second}});
            }
            values[p.label] = Literal{it->second, p.restriction};
        }
    }

    QueryAst ast = tmpl->skeleton;
    auto fill = [&](QueryTerm& t) {
        if (const auto* h = std::get_if<Hole>(&t)) t = values.at(h->name);
    };
    for (auto& p : ast.patterns) {
        fill(p.subject);
        fill(p.property);
        fill(p.object);
    }
    for (auto& f : ast.filters) fill(f.value);
    return ast;
}

nlohmann::json to_json(const QueryTemplate& tmpl) {
    nlohmann::json params = nlohmann::json::array();
    for (const auto& p : tmpl.params) {
        params.push_back({{"label", p.label}, {"type", param_type_name(p.type)}, {"restriction", p.restriction}});
    }
    return {{"id", tmpl.id},
            {"description", tmpl.description},
            {"skeleton", print_query(tmpl.skeleton)},
            {"params", std::move(params)}};
}

QueryTemplate template_from_json(const nlohmann::json& j, const PrefixMap& prefixes) {
    QueryTemplate t;
    t.id = j.at("id").get<std::string>();
    t.description = j.at("description").get<std::string>();
    ParseOptions opts;
    opts.prefixes = prefixes;
    opts.allow_holes = true;
    t.skeleton = parse_query(j.at("skeleton").get<std::string>(), opts);
    for (const auto& p : j.value("params", nlohmann::json::array())) {
        TemplateParam param;
        param.label = p.at("label").get<std::string>();
        const auto type = p.value("type", std::string("class-instance"));
        if (type == "class-instance") param.type = ParamType::ClassInstance;
        else if (type == "literal") param.type = ParamType::Literal;
        else throw Error(ErrorCode::MalformedBody, "unknown template param type: " + type);
        param.restriction = p.value("restriction", std::string{});
        t.params.push_back(std::move(param));
    }
    return t;
}

} // namespace fdkb
