#include "cdtk/errors.hpp"

#include <sstream>

namespace cdtk {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownWidgetKind: return "UnknownWidgetKind";
    case ErrorKind::UnknownProfileProperty: return "UnknownProfileProperty";
    case ErrorKind::DanglingPropertyMapping: return "DanglingPropertyMapping";
    case ErrorKind::TypeConversionError: return "TypeConversionError";
    case ErrorKind::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorKind::OverlappingWidgets: return "OverlappingWidgets";
    case ErrorKind::UnknownState: return "UnknownState";
    case ErrorKind::NondeterministicMachine: return "NondeterministicMachine";
    case ErrorKind::NoInitial: return "NoInitial";
    case ErrorKind::MissingDuration: return "MissingDuration";
    case ErrorKind::DuplicateConstraintName: return "DuplicateConstraintName";
    case ErrorKind::TypeError: return "TypeError";
    case ErrorKind::MissingProperty: return "MissingProperty";
    case ErrorKind::RuntimeTypeError: return "RuntimeTypeError";
    case ErrorKind::ProfileGap: return "ProfileGap";
    case ErrorKind::EmptySchedule: return "EmptySchedule";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::TextOverflow: return "TextOverflow";
    case ErrorKind::StorageError: return "StorageError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoGlyphs: return "NoGlyphs";
    case ErrorKind::UnrecognizedGlyph: return "UnrecognizedGlyph";
    case ErrorKind::FormatMismatch: return "FormatMismatch";
    case ErrorKind::DuplicateProperty: return "DuplicateProperty";
    case ErrorKind::UnresolvableWidget: return "UnresolvableWidget";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    }
    return "UnknownError";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message, int line, int column) {
    std::ostringstream out;
    out << to_string(kind) << ": " << message;
    if (line > 0) {
        out << " (line " << line;
        if (column > 0) {
            out << ", col " << column;
        }
        out << ")";
    }
    return out.str();
}

} // namespace

Error::Error(ErrorKind kind, const std::string& message, int line, int column)
    : std::runtime_error(format_message(kind, message, line, column)),
      kind_(kind),
      message_(message),
      line_(line),
      column_(column) {}

} // namespace cdtk
