#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fdkb {

// Every failure the engine can report. The HTTP layer maps each one to
// exactly one status (see kErrorTable), so adding a code means adding a row.
enum class ErrorCode {
    // fd-core
    ZeroImpressions,
    NegativeStrain,
    InvalidArgument,
    // ontology-store
    DuplicateIri,
    UnknownParent,
    UnknownClass,
    UnknownProperty,
    UnknownIndividual,
    UnknownDatatype,
    IsACycle,
    BadCardinality,
    KindMismatch,
    EmptyLabels,
    DomainViolation,
    RangeViolation,
    DuplicateAssertion,
    CardinalityExceeded,
    WouldCreateCycle,
    SecondFather,
    ChainFork,
    NotHierarchical,
    NotTotalOrder,
    ChainInconsistent,
    // fsn-graph
    UnknownTag,
    DuplicateTag,
    // query-engine
    SyntaxError,
    UnboundSelectVar,
    UnsupportedFeature,
    RowLimitExceeded,
    DuplicateId,
    SlotMismatch,
    UnknownTemplate,
    MissingParam,
    RestrictionViolation,
    // nav-model
    NotExpandable,
    UnknownSector,
    // kb-service
    MalformedDocument,
    BadPercent,
    MalformedBody,
    RevisionConflict,
    JournalCorrupt,
    IoError,
    PortInUse,
    DataDirUnwritable,
};

struct ErrorInfo {
    ErrorCode code;
    std::string_view name;
    int http_status;
};

inline constexpr std::array kErrorTable{
    ErrorInfo{ErrorCode::ZeroImpressions, "ZeroImpressions", 422},
    ErrorInfo{ErrorCode::NegativeStrain, "NegativeStrain", 422},
    ErrorInfo{ErrorCode::InvalidArgument, "InvalidArgument", 400},
    ErrorInfo{ErrorCode::DuplicateIri, "DuplicateIri", 422},
    ErrorInfo{ErrorCode::UnknownParent, "UnknownParent", 404},
    ErrorInfo{ErrorCode::UnknownClass, "UnknownClass", 404},
    ErrorInfo{ErrorCode::UnknownProperty, "UnknownProperty", 404},
    ErrorInfo{ErrorCode::UnknownIndividual, "UnknownIndividual", 404},
    ErrorInfo{ErrorCode::UnknownDatatype, "UnknownDatatype", 422},
    ErrorInfo{ErrorCode::IsACycle, "IsACycle", 422},
    ErrorInfo{ErrorCode::BadCardinality, "BadCardinality", 422},
    ErrorInfo{ErrorCode::KindMismatch, "KindMismatch", 422},
    ErrorInfo{ErrorCode::EmptyLabels, "EmptyLabels", 422},
    ErrorInfo{ErrorCode::DomainViolation, "DomainViolation", 422},
    ErrorInfo{ErrorCode::RangeViolation, "RangeViolation", 422},
    ErrorInfo{ErrorCode::DuplicateAssertion, "DuplicateAssertion", 422},
    ErrorInfo{ErrorCode::CardinalityExceeded, "CardinalityExceeded", 422},
    ErrorInfo{ErrorCode::WouldCreateCycle, "WouldCreateCycle", 422},
    ErrorInfo{ErrorCode::SecondFather, "SecondFather", 422},
    ErrorInfo{ErrorCode::ChainFork, "ChainFork", 422},
    ErrorInfo{ErrorCode::NotHierarchical, "NotHierarchical", 422},
    ErrorInfo{ErrorCode::NotTotalOrder, "NotTotalOrder", 422},
    ErrorInfo{ErrorCode::ChainInconsistent, "ChainInconsistent", 500},
    ErrorInfo{ErrorCode::UnknownTag, "UnknownTag", 404},
    ErrorInfo{ErrorCode::DuplicateTag, "DuplicateTag", 422},
    ErrorInfo{ErrorCode::SyntaxError, "SyntaxError", 400},
    ErrorInfo{ErrorCode::UnboundSelectVar, "UnboundSelectVar", 400},
    ErrorInfo{ErrorCode::UnsupportedFeature, "UnsupportedFeature", 400},
    ErrorInfo{ErrorCode::RowLimitExceeded, "RowLimitExceeded", 422},
    ErrorInfo{ErrorCode::DuplicateId, "DuplicateId", 422},
    ErrorInfo{ErrorCode::SlotMismatch, "SlotMismatch", 422},
    ErrorInfo{ErrorCode::UnknownTemplate, "UnknownTemplate", 404},
    ErrorInfo{ErrorCode::MissingParam, "MissingParam", 422},
    ErrorInfo{ErrorCode::RestrictionViolation, "RestrictionViolation", 422},
    ErrorInfo{ErrorCode::NotExpandable, "NotExpandable", 422},
    ErrorInfo{ErrorCode::UnknownSector, "UnknownSector", 404},
    ErrorInfo{ErrorCode::MalformedDocument, "MalformedDocument", 400},
    ErrorInfo{ErrorCode::BadPercent, "BadPercent", 422},
    ErrorInfo{ErrorCode::MalformedBody, "MalformedBody", 400},
    ErrorInfo{ErrorCode::RevisionConflict, "RevisionConflict", 409},
    ErrorInfo{ErrorCode::JournalCorrupt, "JournalCorrupt", 500},
    ErrorInfo{ErrorCode::IoError, "IoError", 500},
    ErrorInfo{ErrorCode::PortInUse, "PortInUse", 500},
    ErrorInfo{ErrorCode::DataDirUnwritable, "DataDirUnwritable", 500},
};

inline constexpr std::size_t kErrorCodeCount =
    static_cast<std::size_t>(ErrorCode::DataDirUnwritable) + 1;

const ErrorInfo& error_info(ErrorCode code);
std::string_view error_name(ErrorCode code);
int http_status(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    nlohmann::json details_;
};

} // namespace fdkb
