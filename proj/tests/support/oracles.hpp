#pragma once

// Reference implementations used as test oracles. Each one recomputes its
// answer from raw inputs with the simplest possible algorithm and shares no
// code with the engine beyond the plain data types.

#include "fdkb/error.hpp"
#include "fdkb/fd_core.hpp"
#include "fdkb/fsn_graph.hpp"
#include "fdkb/kb_store.hpp"
#include "fdkb/ontology.hpp"
#include "fdkb/query.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace oracle {

using fdkb::ErrorCode;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Class closure and instance membership by plain recursion.

inline void collect_ancestors(const fdkb::KnowledgeBase& kb, const std::string& cls, std::set<std::string>& out) {
    if (!out.insert(cls).second) return;
    const auto it = kb.classes().find(cls);
    if (it == kb.classes().end()) return;
    for (const auto& p : it->second.parents) collect_ancestors(kb, p, out);
}

inline std::set<std::string> ancestors(const fdkb::KnowledgeBase& kb, const std::string& cls) {
    std::set<std::string> out;
    collect_ancestors(kb, cls, out);
    return out;
}

inline bool member_of(const fdkb::KnowledgeBase& kb, const std::string& ind, const std::string& cls) {
    const auto it = kb.individuals().find(ind);
    if (it == kb.individuals().end()) return false;
    for (const auto& c : it->second.classes) {
        if (ancestors(kb, c).count(cls)) return true;
    }
    return false;
}

inline std::set<std::string> members(const fdkb::KnowledgeBase& kb, const std::string& cls) {
    std::set<std::string> out;
    for (const auto& [iri, ind] : kb.individuals()) {
        if (member_of(kb, iri, cls)) out.insert(iri);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force constraint checker. Given a valid KB and one edit op (the
// journal op format), builds the candidate KB content and revalidates all of
// it from scratch. Returns the error the edit must raise, or nullopt when the
// edit must be accepted. Where several rules break at once, the reported rule
// follows the documented check priority.

inline bool graph_has_cycle(const std::multimap<std::string, std::string>& edges) {
    std::map<std::string, int> color; // 0 white, 1 grey, 2 black
    std::function<bool(const std::string&)> visit = [&](const std::string& n) {
        color[n] = 1;
        auto [lo, hi] = edges.equal_range(n);
        for (auto it = lo; it != hi; ++it) {
            const int c = color[it->second];
            if (c == 1) return true;
            if (c == 0 && visit(it->second)) return true;
        }
        color[n] = 2;
        return false;
    };
    for (const auto& [from, to] : edges) {
        if (color[from] == 0 && visit(from)) return true;
    }
    return false;
}

inline bool lexical_ok(const std::string& type, const std::string& lex) {
    auto digits = [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    std::string body = lex;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) body = body.substr(1);
    if (type == "string") return true;
    if (type == "integer") return digits(body);
    if (type == "decimal") {
        const auto dot = body.find('.');
        if (dot == std::string::npos) return digits(body);
        const auto whole = body.substr(0, dot);
        const auto frac = body.substr(dot + 1);
        return (digits(whole) || whole.empty()) && (digits(frac) || frac.empty()) && !(whole.empty() && frac.empty());
    }
    if (type == "boolean") return lex == "true" || lex == "false";
    if (type == "uri") {
        const auto colon = lex.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == lex.size()) return false;
        if (!std::isalpha(static_cast<unsigned char>(lex[0]))) return false;
        if (std::any_of(lex.begin(), lex.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
            return false;
        }
        return std::all_of(lex.begin(), lex.begin() + static_cast<long>(colon), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        });
    }
    return false;
}

inline bool iri_taken(const fdkb::KnowledgeBase& kb, const std::string& iri) {
    return kb.classes().count(iri) || kb.properties().count(iri) || kb.individuals().count(iri);
}

inline std::optional<ErrorCode> check_assertion_edit(const fdkb::KnowledgeBase& kb, std::string subject,
                                                     const std::string& property, fdkb::AssertionObject object) {
    if (!kb.individuals().count(subject)) return ErrorCode::UnknownIndividual;
    const auto pit = kb.properties().find(property);
    if (pit == kb.properties().end()) return ErrorCode::UnknownProperty;
    const fdkb::PropertyDef* prop = &pit->second;
    if (prop->inverse_of) {
        const auto* ref = std::get_if<fdkb::IndividualRef>(&object);
        if (!ref) return ErrorCode::KindMismatch;
        if (!kb.individuals().count(ref->iri)) return ErrorCode::UnknownIndividual;
        std::string base_subject = ref->iri;
        object = fdkb::IndividualRef{subject};
        subject = base_subject;
        prop = &kb.properties().at(*prop->inverse_of);
    }
    const bool object_kind = prop->kind == fdkb::PropertyKind::Object;
    const auto* ref = std::get_if<fdkb::IndividualRef>(&object);
    if (object_kind != (ref != nullptr)) return ErrorCode::KindMismatch;
    if (ref && !kb.individuals().count(ref->iri)) return ErrorCode::UnknownIndividual;

    fdkb::Assertion fresh{subject, prop->iri, object};
    std::vector<fdkb::Assertion> all(kb.assertions().begin(), kb.assertions().end());
    all.push_back(fresh);

    // Per-assertion validity over the whole candidate content.
    for (const auto& a : all) {
        const auto& p = kb.properties().at(a.property);
        if (p.domain && !member_of(kb, a.subject, *p.domain)) return ErrorCode::DomainViolation;
    }
    for (const auto& a : all) {
        const auto& p = kb.properties().at(a.property);
        if (a.is_object()) {
            if (!member_of(kb, a.object_iri(), p.range)) return ErrorCode::RangeViolation;
        } else {
            const auto& lit = std::get<fdkb::Literal>(a.object);
            if (lit.datatype != p.range || !lexical_ok(p.range, lit.lexical)) return ErrorCode::RangeViolation;
        }
    }
    if (std::count(all.begin(), all.end(), fresh) > 1) return ErrorCode::DuplicateAssertion;

    std::map<std::pair<std::string, std::string>, std::size_t> per_subject;
    for (const auto& a : all) ++per_subject[{a.subject, a.property}];
    for (const auto& [key, n] : per_subject) {
        const auto& p = kb.properties().at(key.second);
        if (p.max_card && n > *p.max_card) return ErrorCode::CardinalityExceeded;
    }

    for (const auto& [piri, p] : kb.properties()) {
        const auto family = p.family.value_or(fdkb::PropertyFamily::Plain);
        if (family == fdkb::PropertyFamily::Plain) continue;
        std::map<std::string, int> out_degree;
        std::map<std::string, int> in_degree;
        std::multimap<std::string, std::string> edges;
        for (const auto& a : all) {
            if (a.property != piri) continue;
            ++out_degree[a.subject];
            ++in_degree[a.object_iri()];
            edges.emplace(a.subject, a.object_iri());
        }
        if (family == fdkb::PropertyFamily::Hierarchical) {
            // child --PartOf--> father: the father is unique per child.
            for (const auto& [n, d] : out_degree) {
                if (d > 1) return ErrorCode::SecondFather;
            }
        } else {
            for (const auto& [n, d] : out_degree) {
                if (d > 1) return ErrorCode::ChainFork;
            }
            for (const auto& [n, d] : in_degree) {
                if (d > 1) return ErrorCode::ChainFork;
            }
        }
        if (graph_has_cycle(edges)) return ErrorCode::WouldCreateCycle;
    }
    return std::nullopt;
}

inline bool isa_cycle_with(const fdkb::KnowledgeBase& kb, const std::string& cls, const std::string& parent) {
    std::multimap<std::string, std::string> edges;
    for (const auto& [iri, def] : kb.classes()) {
        for (const auto& p : def.parents) edges.emplace(iri, p);
    }
    edges.emplace(cls, parent);
    return graph_has_cycle(edges);
}

inline std::optional<ErrorCode> expected_outcome(const fdkb::KnowledgeBase& kb, const json& op) {
    const auto type = op.at("type").get<std::string>();
    if (type == "set_property_value") {
        return check_assertion_edit(kb, op.at("subject"), op.at("property"),
                                    fdkb::assertion_object_from_json(op.at("object")));
    }
    if (type == "add_superclass") {
        const std::string cls = op.at("class");
        const std::string parent = op.at("parent");
        if (!kb.classes().count(cls)) return ErrorCode::UnknownClass;
        if (!kb.classes().count(parent)) return ErrorCode::UnknownParent;
        const auto& parents = kb.classes().at(cls).parents;
        if (std::find(parents.begin(), parents.end(), parent) != parents.end()) return ErrorCode::InvalidArgument;
        if (isa_cycle_with(kb, cls, parent)) return ErrorCode::IsACycle;
        return std::nullopt;
    }
    if (type == "define_class") {
        const auto def = fdkb::class_def_from_json(op.at("class"));
        if (def.iri.empty()) return ErrorCode::InvalidArgument;
        if (iri_taken(kb, def.iri)) return ErrorCode::DuplicateIri;
        for (const auto& p : def.parents) {
            if (p == def.iri) return ErrorCode::IsACycle;
            if (!kb.classes().count(p)) return ErrorCode::UnknownParent;
        }
        return std::nullopt;
    }
    if (type == "define_property") {
        const auto def = fdkb::property_def_from_json(op.at("property"));
        if (def.iri.empty()) return ErrorCode::InvalidArgument;
        if (iri_taken(kb, def.iri)) return ErrorCode::DuplicateIri;
        const auto family = def.family.value_or(fdkb::PropertyFamily::Plain);
        if (def.kind == fdkb::PropertyKind::Datatype && family != fdkb::PropertyFamily::Plain) {
            return ErrorCode::KindMismatch;
        }
        if (def.max_card && *def.max_card < def.min_card) return ErrorCode::BadCardinality;
        if (def.inverse_of) {
            const auto it = kb.properties().find(*def.inverse_of);
            if (it == kb.properties().end()) return ErrorCode::UnknownProperty;
            if (def.kind != fdkb::PropertyKind::Object || it->second.kind != fdkb::PropertyKind::Object ||
                it->second.inverse_of) {
                return ErrorCode::KindMismatch;
            }
        }
        if (def.domain && !kb.classes().count(*def.domain)) return ErrorCode::UnknownClass;
        if (def.kind == fdkb::PropertyKind::Object) {
            if (!def.range.empty() && !kb.classes().count(def.range)) return ErrorCode::UnknownClass;
        } else {
            static const std::set<std::string> prims{"string", "integer", "decimal", "boolean", "uri"};
            if (!prims.count(def.range)) return ErrorCode::UnknownDatatype;
        }
        return std::nullopt;
    }
    if (type == "assert_individual") {
        const auto ind = fdkb::individual_from_json(op.at("individual"));
        if (ind.iri.empty()) return ErrorCode::InvalidArgument;
        if (iri_taken(kb, ind.iri)) return ErrorCode::DuplicateIri;
        for (const auto& c : ind.classes) {
            if (!kb.classes().count(c)) return ErrorCode::UnknownClass;
        }
        if (ind.labels.empty()) return ErrorCode::EmptyLabels;
        for (const auto& l : ind.labels) {
            if (l.empty()) return ErrorCode::EmptyLabels;
        }
        return std::nullopt;
    }
    if (type == "remove_individual") {
        if (!kb.individuals().count(op.at("iri").get<std::string>())) return ErrorCode::UnknownIndividual;
        return std::nullopt;
    }
    throw std::logic_error("oracle does not model op " + type);
}

/// Full scan of every stored invariant; empty string when all hold.
inline std::string invariant_violation(const fdkb::KnowledgeBase& kb) {
    std::multimap<std::string, std::string> isa;
    for (const auto& [iri, def] : kb.classes()) {
        for (const auto& p : def.parents) isa.emplace(iri, p);
        if (!ancestors(kb, iri).count(std::string(fdkb::kThing))) return "class " + iri + " does not reach Thing";
    }
    if (graph_has_cycle(isa)) return "isA cycle";
    for (const auto& [iri, ind] : kb.individuals()) {
        if (ind.labels.empty() || ind.classes.empty()) return "individual " + iri + " lacks labels or classes";
    }
    for (const auto& [piri, p] : kb.properties()) {
        const auto family = p.family.value_or(fdkb::PropertyFamily::Plain);
        std::map<std::string, int> out_degree;
        std::map<std::string, int> in_degree;
        std::multimap<std::string, std::string> edges;
        for (const auto& a : kb.assertions()) {
            if (a.property != piri) continue;
            if (p.domain && !member_of(kb, a.subject, *p.domain)) return "domain of " + piri;
            if (a.is_object() && !member_of(kb, a.object_iri(), p.range)) return "range of " + piri;
            ++out_degree[a.subject];
            if (a.is_object()) {
                ++in_degree[a.object_iri()];
                edges.emplace(a.subject, a.object_iri());
            }
        }
        for (const auto& [n, d] : out_degree) {
            if (p.max_card && static_cast<std::uint32_t>(d) > *p.max_card) return "cardinality of " + piri;
            if (family != fdkb::PropertyFamily::Plain && d > 1) return "out-degree of " + piri;
        }
        if (family == fdkb::PropertyFamily::TotalOrder) {
            for (const auto& [n, d] : in_degree) {
                if (d > 1) return "in-degree of " + piri;
            }
        }
        if (family != fdkb::PropertyFamily::Plain && graph_has_cycle(edges)) return "cycle in " + piri;
    }
    return {};
}

// ---------------------------------------------------------------------------
// Nested-loop query evaluation over an independently built triple set.

struct Triple {
    fdkb::RdfTerm s;
    std::string p;
    fdkb::RdfTerm o;
    auto operator<=>(const Triple&) const = default;
};

inline std::set<Triple> triples_of(const fdkb::KnowledgeBase& kb) {
    std::set<Triple> out;
    for (const auto& [iri, ind] : kb.individuals()) {
        for (const auto& c : ind.classes) {
            for (const auto& a : ancestors(kb, c)) out.insert({fdkb::Iri{iri}, "rdf:type", fdkb::Iri{a}});
        }
    }
    for (const auto& a : kb.assertions()) {
        if (a.is_object()) {
            out.insert({fdkb::Iri{a.subject}, a.property, fdkb::Iri{a.object_iri()}});
            for (const auto& [qiri, q] : kb.properties()) {
                if (q.inverse_of == a.property) out.insert({fdkb::Iri{a.object_iri()}, qiri, fdkb::Iri{a.subject}});
            }
        } else {
            out.insert({fdkb::Iri{a.subject}, a.property, std::get<fdkb::Literal>(a.object)});
        }
    }
    return out;
}

inline std::string term_key(const fdkb::RdfTerm& t) {
    if (const auto* iri = std::get_if<fdkb::Iri>(&t)) return iri->value;
    const auto& lit = std::get<fdkb::Literal>(t);
    return "\"" + lit.lexical + "\"^^" + lit.datatype;
}

inline fdkb::RdfTerm as_rdf(const fdkb::QueryTerm& t) {
    if (const auto* iri = std::get_if<fdkb::Iri>(&t)) return *iri;
    return std::get<fdkb::Literal>(t);
}

inline fdkb::ResultTable nested_loop(const fdkb::QueryAst& ast, const fdkb::KnowledgeBase& kb) {
    const auto set = triples_of(kb);
    const std::vector<Triple> triples(set.begin(), set.end());
    std::set<std::vector<std::string>> seen;
    std::map<std::vector<std::string>, std::vector<fdkb::RdfTerm>> rows;
    std::vector<std::size_t> pick(ast.patterns.size(), 0);
    fdkb::ResultTable table;
    for (const auto& v : ast.select_vars) table.columns.push_back(v.name);
    if (ast.patterns.empty() || triples.empty()) return table;

    while (true) {
        std::map<std::string, fdkb::RdfTerm> env;
        bool ok = true;
        auto bind = [&](const fdkb::QueryTerm& pattern, const fdkb::RdfTerm& value) {
            if (const auto* v = std::get_if<fdkb::Variable>(&pattern)) {
                auto [it, fresh] = env.emplace(v->name, value);
                return fresh || it->second == value;
            }
            return as_rdf(pattern) == value;
        };
        for (std::size_t i = 0; i < ast.patterns.size() && ok; ++i) {
            const auto& tp = ast.patterns[i];
            const auto& t = triples[pick[i]];
            ok = bind(tp.subject, t.s) && bind(tp.property, fdkb::Iri{t.p}) && bind(tp.object, t.o);
        }
        for (const auto& f : ast.filters) {
            if (!ok) break;
            const bool eq = env.at(f.var.name) == as_rdf(f.value);
            ok = (f.op == fdkb::FilterOp::Equal) == eq;
        }
        if (ok) {
            std::vector<std::string> key;
            std::vector<fdkb::RdfTerm> row;
            for (const auto& v : ast.select_vars) {
                key.push_back(term_key(env.at(v.name)));
                row.push_back(env.at(v.name));
            }
            rows.emplace(key, row);
        }
        // odometer increment
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < triples.size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
    }
    for (auto& [k, row] : rows) table.rows.push_back(row);
    return table;
}

// ---------------------------------------------------------------------------
// FSN rebuilt from scratch after every event. Rest intervals are the only
// carried state: a pair keeps its rest interval while it stays linked.

struct FsnLinkView {
    double weight = 0;
    double rest = 0;
    double strain = 0;
    fdkb::Region region = fdkb::Region::Elastic;
};

struct Point {
    double c, r, e;
};

inline Point point_of(const fdkb::FolksodrivenTag& tag) {
    const auto& ctx = tag.context();
    const double cells = static_cast<double>(ctx.objects().size() * ctx.attributes().size());
    const double c = cells > 0 ? static_cast<double>(ctx.incidence().size()) / cells : 0.0;
    const double ord = static_cast<double>(tag.resource().ordinal());
    const double r = ord / (1.0 + ord);
    const auto& ex = tag.exposition();
    const double e = ex.impressions() ? static_cast<double>(ex.clicks()) / static_cast<double>(ex.impressions()) : 0.0;
    return {c, r, e};
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> uni = a;
    uni.insert(b.begin(), b.end());
    if (uni.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    return static_cast<double>(inter) / static_cast<double>(uni.size());
}

inline double stress_oracle(double eps, const fdkb::ElasticityParams& p) {
    if (eps < p.yield_strain) return p.modulus * eps;
    const double at_neck = p.modulus * p.yield_strain + p.post_yield_slope * (p.necking_strain - p.yield_strain);
    if (eps < p.necking_strain) return p.modulus * p.yield_strain + p.post_yield_slope * (eps - p.yield_strain);
    if (eps >= 2 * p.necking_strain) return 0.0;
    return at_neck * (2 * p.necking_strain - eps) / p.necking_strain;
}

inline fdkb::Region region_oracle(double eps, const fdkb::ElasticityParams& p) {
    if (eps >= p.necking_strain) return fdkb::Region::Necking;
    if (eps >= p.yield_strain) return fdkb::Region::Yield;
    return fdkb::Region::Elastic;
}

class FsnRebuild {
public:
    FsnRebuild(double theta, fdkb::ElasticityParams params) : theta_(theta), params_(params) {}

    /// Returns false (and changes nothing) when the engine must reject the change.
    bool apply(const fdkb::MorphologicalChange& change) {
        if (const auto* add = std::get_if<fdkb::change::AddTag>(&change)) {
            if (tags_.count(add->tag.id())) return false;
            tags_.emplace(add->tag.id(), add->tag);
        } else if (const auto* rm = std::get_if<fdkb::change::RemoveTag>(&change)) {
            if (!tags_.erase(rm->id)) return false;
        } else if (const auto* rl = std::get_if<fdkb::change::Relabel>(&change)) {
            auto it = tags_.find(rl->id);
            if (it == tags_.end()) return false;
            it->second.set_label(rl->label);
        } else if (const auto* ctx = std::get_if<fdkb::change::EditContext>(&change)) {
            auto it = tags_.find(ctx->id);
            if (it == tags_.end()) return false;
            it->second.set_context(ctx->context);
        } else {
            const auto& ex = std::get<fdkb::change::UpdateExposition>(change);
            auto it = tags_.find(ex.id);
            if (it == tags_.end()) return false;
            it->second.set_exposition(ex.exposition);
        }
        rebuild();
        return true;
    }

    const std::map<fdkb::LinkKey, FsnLinkView>& links() const { return links_; }

private:
    void rebuild() {
        std::map<fdkb::LinkKey, FsnLinkView> next;
        for (const auto& [a, ta] : tags_) {
            for (const auto& [b, tb] : tags_) {
                if (!(a < b)) continue;
                const double w = jaccard(ta.context().attributes(), tb.context().attributes());
                if (w < theta_) continue;
                const Point pa = point_of(ta);
                const Point pb = point_of(tb);
                const double dc = pa.c - pb.c, dr = pa.r - pb.r, de = pa.e - pb.e;
                const double d = std::sqrt(std::fabs(dc * dc + dr * dr - de * de));
                FsnLinkView v;
                v.weight = w;
                auto old = links_.find({a, b});
                v.rest = old == links_.end() ? d : old->second.rest;
                v.strain = std::fabs(d - v.rest) / std::max(v.rest, 1e-6);
                v.region = region_oracle(v.strain, params_);
                next[{a, b}] = v;
            }
        }
        links_ = std::move(next);
    }

    double theta_;
    fdkb::ElasticityParams params_;
    std::map<std::string, fdkb::FolksodrivenTag> tags_;
    std::map<fdkb::LinkKey, FsnLinkView> links_;
};

/// Connected components by repeated flooding.
inline std::set<std::set<std::string>> components(const std::map<fdkb::LinkKey, fdkb::FsnLink>& links) {
    std::map<std::string, std::set<std::string>> adj;
    for (const auto& [k, l] : links) {
        adj[k.first].insert(k.second);
        adj[k.second].insert(k.first);
    }
    std::set<std::set<std::string>> out;
    std::set<std::string> done;
    for (const auto& [n, _] : adj) {
        if (done.count(n)) continue;
        std::set<std::string> comp{n};
        std::vector<std::string> stack{n};
        while (!stack.empty()) {
            auto cur = stack.back();
            stack.pop_back();
            for (const auto& m : adj[cur]) {
                if (comp.insert(m).second) stack.push_back(m);
            }
        }
        done.insert(comp.begin(), comp.end());
        out.insert(comp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Percent tally: exact integer largest remainder over integer weights.

inline std::vector<std::int64_t> tally_percents(const std::vector<std::int64_t>& counts) {
    std::vector<std::int64_t> w = counts;
    std::int64_t sum = 0;
    for (auto c : w) sum += c;
    if (sum == 0) {
        std::fill(w.begin(), w.end(), 1);
        sum = static_cast<std::int64_t>(w.size());
    }
    std::vector<std::int64_t> units(w.size());
    std::vector<std::pair<std::int64_t, std::size_t>> rem; // (remainder numerator, index)
    std::int64_t given = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        units[i] = w[i] * 10000 / sum;
        rem.push_back({w[i] * 10000 % sum, i});
        given += units[i];
    }
    std::stable_sort(rem.begin(), rem.end(), [](auto a, auto b) { return a.first > b.first; });
    for (std::size_t k = 0; given < 10000; ++k, ++given) ++units[rem[k % rem.size()].second];
    return units;
}

// ---------------------------------------------------------------------------
// Helpers shared by fixtures.

inline fdkb::KbState seeded_state() {
    fdkb::KbState s;
    for (const auto& op : fdkb::seed_fixture_ops()) fdkb::apply_op(s, op);
    return s;
}

inline fdkb::FolksodrivenTag make_tag(const std::string& id, std::set<std::string> objects,
                                      std::set<std::string> attributes, std::size_t incidence_count,
                                      std::uint64_t clicks, std::uint64_t impressions, std::uint64_t ordinal) {
    fdkb::FormalContext::Incidence inc;
    for (const auto& o : objects) {
        for (const auto& a : attributes) {
            if (inc.size() < incidence_count) inc.emplace(o, a);
        }
    }
    return fdkb::FolksodrivenTag(id, id, fdkb::FormalContext(std::move(objects), std::move(attributes), std::move(inc)),
                                 fdkb::TimeExposition(clicks, impressions),
                                 fdkb::Resource("urn:tag:" + id, ordinal));
}

} // namespace oracle
