#pragma once

#include <stdexcept>
#include <string>

namespace cdtk {

enum class ErrorKind {
    SyntaxError,
    SchemaError,
    DuplicateName,
    UnknownWidgetKind,
    UnknownProfileProperty,
    DanglingPropertyMapping,
    TypeConversionError,
    RegionOutOfBounds,
    OverlappingWidgets,
    UnknownState,
    NondeterministicMachine,
    NoInitial,
    MissingDuration,
    DuplicateConstraintName,
    TypeError,
    MissingProperty,
    RuntimeTypeError,
    ProfileGap,
    EmptySchedule,
    MissingValue,
    TextOverflow,
    StorageError,
    DimensionMismatch,
    NoGlyphs,
    UnrecognizedGlyph,
    FormatMismatch,
    DuplicateProperty,
    UnresolvableWidget,
    ConfigError,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Toolkit-wide error. `line`/`column` are 1-based and 0 when not applicable.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, int line = 0, int column = 0);

    ErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }

    /// The message without the kind/position decoration what() adds.
    const std::string& message() const { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
    int line_;
    int column_;
};

} // namespace cdtk
