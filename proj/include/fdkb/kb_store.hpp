#pragma once

// Versioned knowledge-base state and its single-writer commit point.
//
// Every accepted edit is an op (a JSON object with a "type" field) applied to
// a private copy of the current state, appended to the journal, then
// published. Readers hold immutable snapshots; a snapshot never changes after
// publication.

#include "fdkb/fsn_graph.hpp"
#include "fdkb/journal.hpp"
#include "fdkb/ontology.hpp"
#include "fdkb/pie_document.hpp"
#include "fdkb/query.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fdkb {

struct KbState {
    KnowledgeBase kb;
    FsnGraph fsn;
    TemplateRegistry templates;
    /// Imported slice percents keyed by source iri, or by name for slices
    /// without one.
    std::map<std::string, double> weight_overrides;
    /// Count of applied ops; equals the journal's last revision.
    std::uint64_t revision = 0;

    KbState() = default;
    KbState(double theta, ElasticityParams params) : fsn(theta, params) {}

    /// Canonical snapshot; equal states dump to equal bytes.
    nlohmann::json to_json() const;
    bool operator==(const KbState&) const = default;
};

/// Op constructors; the returned objects are the journal's "op" payloads.
namespace ops {
nlohmann::json define_class(const ClassDef& def);
nlohmann::json add_superclass(const std::string& cls, const std::string& parent);
nlohmann::json define_property(const PropertyDef& def);
nlohmann::json assert_individual(const Individual& ind);
nlohmann::json set_property_value(const std::string& subject, const std::string& property,
                                  const AssertionObject& object);
nlohmann::json remove_individual(const std::string& iri, bool cascade = false);
nlohmann::json fsn_event(const MorphologicalChange& change);
nlohmann::json register_template(const QueryTemplate& tmpl);
nlohmann::json import_piechart(const PieDocument& doc);
} // namespace ops

/// Applies one op and increments `state.revision`. Returns an op-specific
/// result (the plasticity report for fsn_event, otherwise an empty object).
/// Throws the engine error on rejection, leaving `state` unchanged; a body
/// that does not decode as an op throws MalformedBody.
nlohmann::json apply_op(KbState& state, const nlohmann::json& op);

/// Rebuilds state from journal records. Throws JournalCorrupt if a record is
/// rejected.
KbState replay(const std::vector<JournalRecord>& records, double theta = kDefaultTheta,
               ElasticityParams params = {});

/// Ops building the news-typology fixture used by the navigation scenario.
std::vector<nlohmann::json> seed_fixture_ops();

struct CommitResult {
    std::uint64_t revision = 0;
    nlohmann::json result;
};

class KbStore {
public:
    /// `journal` may be null for an in-memory store. Its loaded records must
    /// already be reflected in `initial`.
    KbStore(KbState initial, Journal* journal);

    std::shared_ptr<const KbState> snapshot() const;
    std::uint64_t revision() const { return snapshot()->revision; }

    /// Throws RevisionConflict when `expected_revision` is set and differs
    /// from the current revision.
    CommitResult commit(const nlohmann::json& op, const std::string& actor,
                        std::optional<std::uint64_t> expected_revision = std::nullopt);

private:
    mutable std::mutex publish_mutex_; // guards current_ (pointer copy only)
    std::mutex writer_mutex_;          // the commit point
    std::shared_ptr<const KbState> current_;
    Journal* journal_;
};

} // namespace fdkb
