#pragma once

// SPARQL subset: SELECT [DISTINCT] ?v... WHERE { s p o . ... FILTER(?v = c) }
// evaluated against a knowledge-base snapshot, plus predefined template
// queries with typed, class-restricted parameter slots.

#include "fdkb/ontology.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

inline constexpr std::string_view kRdfType = "rdf:type";
inline constexpr std::size_t kDefaultRowLimit = 10000;

struct Variable {
    std::string name; // without the leading '?'
    auto operator<=>(const Variable&) const = default;
};

struct Iri {
    std::string value;
    auto operator<=>(const Iri&) const = default;
};

/// Named placeholder in a template skeleton, written `%name`.
struct Hole {
    std::string name;
    auto operator<=>(const Hole&) const = default;
};

using QueryTerm = std::variant<Variable, Iri, Literal, Hole>;

struct TriplePattern {
    QueryTerm subject;
    QueryTerm property;
    QueryTerm object;
    auto operator<=>(const TriplePattern&) const = default;
};

enum class FilterOp { Equal, NotEqual };

struct Filter {
    Variable var;
    FilterOp op = FilterOp::Equal;
    QueryTerm value; // constant or hole
    auto operator<=>(const Filter&) const = default;
};

struct QueryAst {
    std::vector<Variable> select_vars;
    std::vector<TriplePattern> patterns;
    std::vector<Filter> filters;
    bool operator==(const QueryAst&) const = default;
};

/// Prefix name (without ':') to namespace string. The default map sends
/// ":" to "" and "rdf"/"xsd" to "rdf:"/"xsd:".
using PrefixMap = std::map<std::string, std::string>;
PrefixMap default_prefixes();

struct ParseOptions {
    PrefixMap prefixes = default_prefixes();
    bool allow_holes = false;
};

/// Throws SyntaxError (details: line, col, expected), UnboundSelectVar or
/// UnsupportedFeature (details: feature).
QueryAst parse_query(std::string_view text, const ParseOptions& options = {});

/// Canonical text; parse_query(print_query(q)) == q.
std::string print_query(const QueryAst& ast);

std::string term_to_string(const QueryTerm& term);

// ---------------------------------------------------------------------------
// Evaluation

/// A bound value: an IRI (individual, class or property) or a literal.
using RdfTerm = std::variant<Iri, Literal>;

std::string rdf_term_key(const RdfTerm& term);

struct RdfTriple {
    RdfTerm subject;
    Iri property;
    RdfTerm object;
    auto operator<=>(const RdfTriple&) const = default;
};

/// The queryable view of a knowledge base: rdf:type triples for every class
/// in each individual's isA closure, every A-Box assertion, and the swapped
/// copy of each assertion for declared inverse properties.
std::vector<RdfTriple> materialize(const KnowledgeBase& kb);

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<RdfTerm>> rows;
    bool operator==(const ResultTable&) const = default;
};

struct EvalOptions {
    std::size_t row_limit = kDefaultRowLimit;
};

/// Set semantics: rows are deduplicated and sorted by their stringified
/// bindings. Throws RowLimitExceeded past the cap.
ResultTable evaluate(const QueryAst& ast, const KnowledgeBase& kb, const EvalOptions& options = {});

nlohmann::json to_json(const RdfTerm& term);
nlohmann::json to_json(const ResultTable& table);

// ---------------------------------------------------------------------------
// Templates

enum class ParamType { ClassInstance, Literal };

struct TemplateParam {
    std::string label;
    ParamType type = ParamType::ClassInstance;
    std::string restriction; // class iri, or literal datatype
    bool operator==(const TemplateParam&) const = default;
};

struct QueryTemplate {
    std::string id;
    std::string description; // "{label}" marks each slot
    QueryAst skeleton;
    std::vector<TemplateParam> params;
    bool operator==(const QueryTemplate&) const = default;
};

/// Slot names appearing as `{name}` in a description, in order.
std::vector<std::string> description_slots(std::string_view description);

class TemplateRegistry {
public:
    /// Throws DuplicateId or SlotMismatch.
    void register_template(QueryTemplate tmpl);

    const QueryTemplate* find(std::string_view id) const;
    const std::vector<QueryTemplate>& list() const noexcept { return templates_; }

    /// Substitutes every hole. Class-instance params must name an individual
    /// of the restriction class (isA closure); literal params must be valid
    /// lexical forms. Throws UnknownTemplate, MissingParam,
    /// RestrictionViolation.
    QueryAst instantiate(std::string_view id, const std::map<std::string, std::string>& bindings,
                         const KnowledgeBase& kb) const;

    bool operator==(const TemplateRegistry&) const = default;

private:
    std::vector<QueryTemplate> templates_;
};

nlohmann::json to_json(const QueryTemplate& tmpl);
QueryTemplate template_from_json(const nlohmann::json& j, const PrefixMap& prefixes = default_prefixes());

} // namespace fdkb
