#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::display {

struct RawProperty {
    std::string name;
    std::string value;

    bool operator==(const RawProperty&) const = default;
};

struct RawObject {
    std::string name;
    std::vector<RawProperty> properties;

    const std::string* property(std::string_view property_name) const;

    bool operator==(const RawObject&) const = default;
};

struct DisplayDefinition {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<RawObject> objects;

    bool operator==(const DisplayDefinition&) const = default;
};

enum class WidgetKind {
    Altimeter,
    AirspeedIndicator,
    AttitudeIndicator,
    VerticalSpeedIndicator,
    HeadingIndicator,
    BarometricPressure,
};

inline constexpr WidgetKind kAllWidgetKinds[] = {
    WidgetKind::Altimeter,
    WidgetKind::AirspeedIndicator,
    WidgetKind::AttitudeIndicator,
    WidgetKind::VerticalSpeedIndicator,
    WidgetKind::HeadingIndicator,
    WidgetKind::BarometricPressure,
};

std::string_view to_string(WidgetKind kind);
std::optional<WidgetKind> widget_kind_from(std::string_view name);

/// The one aircraft property a widget of this kind displays.
std::string_view target_property(WidgetKind kind);
std::string_view target_unit(WidgetKind kind);

/// Profile-side widget properties a mapping line may target.
enum class ProfileProperty { IsVisible, X, Y, Width, Height, Format };

std::string_view to_string(ProfileProperty prop);
std::optional<ProfileProperty> profile_property_from(std::string_view name);

struct ObjectMapping {
    std::string source_object;
    WidgetKind kind;

    bool operator==(const ObjectMapping&) const = default;
};

struct PropertyMapping {
    std::string source_object;
    std::string source_property;
    ProfileProperty target;

    bool operator==(const PropertyMapping&) const = default;
};

struct MappingFile {
    std::vector<ObjectMapping> object_mappings;
    std::vector<PropertyMapping> property_mappings;

    bool operator==(const MappingFile&) const = default;
};

struct WidgetModel {
    std::string name;
    WidgetKind kind = WidgetKind::Altimeter;
    bool is_visible = true;
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    std::string format = "%d";
    std::string target_property;

    bool operator==(const WidgetModel&) const = default;
};

struct DisplayModel {
    std::string name;
    int width = 0;
    int height = 0;
    std::vector<WidgetModel> widgets;

    const WidgetModel* widget_named(std::string_view widget_name) const;
    const WidgetModel* widget_for_property(std::string_view property_name) const;

    bool operator==(const DisplayModel&) const = default;
};

DisplayDefinition parse_display_xml(std::string_view bytes);
std::string serialize_display_definition(const DisplayDefinition& def);

MappingFile parse_mapping(std::string_view bytes);

struct GeneratedModel {
    DisplayModel model;
    std::vector<std::string> warnings;
};

GeneratedModel generate_model(const DisplayDefinition& def, const MappingFile& mapping);

/// Canonical JSON (sorted keys, 2-space indent, trailing newline).
std::string to_json(const DisplayModel& model);
DisplayModel model_from_json(std::string_view bytes);

} // namespace cdtk::display
