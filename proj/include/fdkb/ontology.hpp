#pragma once

// T-Box / A-Box knowledge base with edit-time constraint enforcement.
//
// Every mutator validates completely before touching state, so a rejected
// edit leaves the knowledge base (revision included) exactly as it was.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

inline constexpr std::string_view kThing = "Thing";

enum class PropertyKind { Object, Datatype };
enum class PropertyFamily { Plain, Hierarchical, TotalOrder };

std::string_view kind_name(PropertyKind kind);
std::string_view family_name(PropertyFamily family);
PropertyKind kind_from_name(std::string_view name);
PropertyFamily family_from_name(std::string_view name);

/// Primitive literal types: string, integer, decimal, boolean, uri.
bool is_primitive_type(std::string_view tag);
/// True when `lexical` is a well-formed value of primitive type `tag`.
bool is_valid_lexical(std::string_view tag, std::string_view lexical);

struct ClassDef {
    std::string iri;
    std::string label;
    std::vector<std::string> parents; // first entry is the display parent

    bool operator==(const ClassDef&) const = default;
};

struct PropertyDef {
    std::string iri;
    PropertyKind kind = PropertyKind::Object;
    std::optional<std::string> domain;
    std::string range; // class iri (object) or primitive tag (datatype)
    std::uint32_t min_card = 0;
    std::optional<std::uint32_t> max_card;
    std::optional<PropertyFamily> family;
    // Declared inverse: edits and queries on this property are rewritten to
    // the base property with subject and object swapped.
    std::optional<std::string> inverse_of;

    PropertyFamily effective_family() const { return family.value_or(PropertyFamily::Plain); }
    bool operator==(const PropertyDef&) const = default;
};

struct Individual {
    std::string iri;
    std::vector<std::string> labels;
    std::set<std::string> classes;

    const std::string& primary_label() const { return labels.front(); }
    bool operator==(const Individual&) const = default;
};

struct Literal {
    std::string lexical;
    std::string datatype = "string";

    auto operator<=>(const Literal&) const = default;
};

struct IndividualRef {
    std::string iri;
    auto operator<=>(const IndividualRef&) const = default;
};

using AssertionObject = std::variant<IndividualRef, Literal>;

struct Assertion {
    std::string subject;
    std::string property;
    AssertionObject object;

    bool is_object() const { return std::holds_alternative<IndividualRef>(object); }
    const std::string& object_iri() const { return std::get<IndividualRef>(object).iri; }
    auto operator<=>(const Assertion&) const = default;
};

class KnowledgeBase {
public:
    KnowledgeBase();

    // -- T-Box -------------------------------------------------------------
    void define_class(ClassDef def);
    /// Adds an isA edge to an existing class. Throws IsACycle with the
    /// offending path in details["path"].
    void add_superclass(const std::string& cls, const std::string& parent);
    void define_property(PropertyDef def);

    // -- A-Box -------------------------------------------------------------
    void assert_individual(Individual ind);
    void set_property_value(const std::string& subject, const std::string& property, AssertionObject object);
    /// Hierarchical children are spliced to the removed node's father (or
    /// become roots); total-order chains are spliced around it. With
    /// `cascade`, hierarchical descendants are removed instead.
    void remove_individual(const std::string& iri, bool cascade = false);

    // -- Queries -----------------------------------------------------------
    std::uint64_t revision() const noexcept { return revision_; }

    const std::map<std::string, ClassDef>& classes() const noexcept { return classes_; }
    const std::map<std::string, PropertyDef>& properties() const noexcept { return properties_; }
    const std::map<std::string, Individual>& individuals() const noexcept { return individuals_; }
    const std::set<Assertion>& assertions() const noexcept { return assertions_; }

    const ClassDef* find_class(std::string_view iri) const;
    const PropertyDef* find_property(std::string_view iri) const;
    const Individual* find_individual(std::string_view iri) const;
    bool iri_in_use(std::string_view iri) const;

    /// `cls` and all its transitive superclasses.
    std::set<std::string> superclasses_of(const std::string& cls) const;
    /// `cls` and all its transitive subclasses.
    std::set<std::string> subclasses_of(const std::string& cls) const;
    /// Direct subclasses, sorted by iri.
    std::vector<std::string> direct_subclasses(const std::string& cls) const;
    bool is_subclass_of(const std::string& cls, const std::string& ancestor) const;
    bool is_instance_of(const std::string& individual, const std::string& cls) const;
    /// Individuals typed by `cls` or one of its subclasses.
    std::set<std::string> instances_of(const std::string& cls, bool transitive = true) const;

    /// Individuals that are acceptable objects for `property` (object kind).
    std::vector<std::string> range_candidates(const std::string& property) const;

    std::optional<std::string> father_of(const std::string& individual, const std::string& property) const;
    std::vector<std::string> children_of(const std::string& individual, const std::string& property) const;
    std::vector<std::string> hierarchical_properties() const;

    /// Orders `individuals` along the successor chains of a TotalOrder
    /// property; loose individuals follow, sorted by primary label.
    std::vector<std::string> level_order(const std::vector<std::string>& individuals,
                                         const std::string& property) const;

    /// Assertions with `subject` and the base (non-inverse) property.
    std::vector<AssertionObject> values_of(const std::string& subject, const std::string& property) const;

    /// Canonical JSON form; equal knowledge bases serialize to equal bytes.
    nlohmann::json to_json() const;

    bool operator==(const KnowledgeBase&) const = default;

private:
    // Resolves declared inverses; returns (subject, base property, object).
    struct Resolved {
        std::string subject;
        const PropertyDef* property;
        AssertionObject object;
    };
    Resolved resolve_edit(const std::string& subject, const std::string& property,
                          AssertionObject object) const;
    void check_assertion(const Resolved& edit) const;
    std::string display_label(const std::string& individual) const;

    std::map<std::string, ClassDef> classes_;
    std::map<std::string, PropertyDef> properties_;
    std::map<std::string, Individual> individuals_;
    std::set<Assertion> assertions_;
    std::uint64_t revision_ = 0;
};

// JSON conversions shared by the journal and the HTTP layer.
nlohmann::json to_json(const ClassDef& def);
nlohmann::json to_json(const PropertyDef& def);
nlohmann::json to_json(const Individual& ind);
nlohmann::json to_json(const AssertionObject& object);
ClassDef class_def_from_json(const nlohmann::json& j);
PropertyDef property_def_from_json(const nlohmann::json& j);
Individual individual_from_json(const nlohmann::json& j);
AssertionObject assertion_object_from_json(const nlohmann::json& j);

} // namespace fdkb
