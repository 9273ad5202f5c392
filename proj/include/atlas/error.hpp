#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace atlas {

enum class ErrorCode {
    // graph-core
    DuplicateId,
    InvalidSlug,
    MissingEndpoint,
    KindMismatch,
    SelfLoop,
    DuplicateEdge,
    CrossDimensionParent,
    NonFormatCompatibility,
    UnknownNode,
    // taxonomy
    ParseError,
    CycleDetected,
    DuplicateTermId,
    UnknownParent,
    UnknownTerm,
    // catalog
    UnknownReference,
    GraphConstraintViolation,
    ValidationFailed,
    // search
    WrongDimension,
    AmbiguousLabel,
    SyntaxError,
    UnknownField,
    UnknownEdgeKind,
    // analytics
    SameDimension,
    BadDepth,
    BadThresholds,
    // service
    EmptyTitle,
    NotFound,
    BadRequest,
    MethodNotAllowed,
    Io,
};

/// Stable name used in JSON error bodies and CLI output.
std::string_view to_string(ErrorCode code) noexcept;

struct SourcePosition {
    int line = 1;
    int column = 1;
    bool operator==(const SourcePosition&) const = default;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<SourcePosition> position = std::nullopt)
        : std::runtime_error(message), code_(code), position_(position) {}

    ErrorCode code() const noexcept { return code_; }
    const std::optional<SourcePosition>& position() const noexcept { return position_; }

private:
    ErrorCode code_;
    std::optional<SourcePosition> position_;
};

}  // namespace atlas
