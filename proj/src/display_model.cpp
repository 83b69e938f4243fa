#include "cdtk/display_model.hpp"

#include "cdtk/errors.hpp"
#include "cdtk/xml.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace cdtk::display {

using nlohmann::json;

const std::string* RawObject::property(std::string_view property_name) const {
    for (const auto& prop : properties) {
        if (prop.name == property_name) {
            return &prop.value;
        }
    }
    return nullptr;
}

std::string_view to_string(WidgetKind kind) {
    switch (kind) {
    case WidgetKind::Altimeter: return "Altimeter";
    case WidgetKind::AirspeedIndicator: return "AirspeedIndicator";
    case WidgetKind::AttitudeIndicator: return "AttitudeIndicator";
    case WidgetKind::VerticalSpeedIndicator: return "VerticalSpeedIndicator";
    case WidgetKind::HeadingIndicator: return "HeadingIndicator";
    case WidgetKind::BarometricPressure: return "BarometricPressure";
    }
    return "";
}

std::optional<WidgetKind> widget_kind_from(std::string_view name) {
    for (WidgetKind kind : kAllWidgetKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view target_property(WidgetKind kind) {
    switch (kind) {
    case WidgetKind::Altimeter: return "altitude";
    case WidgetKind::AirspeedIndicator: return "airspeed";
    case WidgetKind::AttitudeIndicator: return "roll";
    case WidgetKind::VerticalSpeedIndicator: return "verticalSpeed";
    case WidgetKind::HeadingIndicator: return "heading";
    case WidgetKind::BarometricPressure: return "pressure";
    }
    return "";
}

std::string_view target_unit(WidgetKind kind) {
    switch (kind) {
    case WidgetKind::Altimeter: return "feet";
    case WidgetKind::AirspeedIndicator: return "knots";
    case WidgetKind::AttitudeIndicator: return "degrees";
    case WidgetKind::VerticalSpeedIndicator: return "feet/min";
    case WidgetKind::HeadingIndicator: return "degrees";
    case WidgetKind::BarometricPressure: return "inHg";
    }
    return "";
}

std::string_view to_string(ProfileProperty prop) {
    switch (prop) {
    case ProfileProperty::IsVisible: return "isVisible";
    case ProfileProperty::X: return "x";
    case ProfileProperty::Y: return "y";
    case ProfileProperty::Width: return "width";
    case ProfileProperty::Height: return "height";
    case ProfileProperty::Format: return "format";
    }
    return "";
}

std::optional<ProfileProperty> profile_property_from(std::string_view name) {
    for (ProfileProperty prop : {ProfileProperty::IsVisible, ProfileProperty::X, ProfileProperty::Y,
                                 ProfileProperty::Width, ProfileProperty::Height, ProfileProperty::Format}) {
        if (to_string(prop) == name) {
            return prop;
        }
    }
    return std::nullopt;
}

const WidgetModel* DisplayModel::widget_named(std::string_view widget_name) const {
    for (const auto& widget : widgets) {
        if (widget.name == widget_name) {
            return &widget;
        }
    }
    return nullptr;
}

const WidgetModel* DisplayModel::widget_for_property(std::string_view property_name) const {
    for (const auto& widget : widgets) {
        if (widget.target_property == property_name) {
            return &widget;
        }
    }
    return nullptr;
}

namespace {

int parse_pixel_attr(const xml::Element& root, std::string_view attr_name) {
    const std::string* raw = root.attribute(attr_name);
    if (raw == nullptr) {
        throw Error(ErrorKind::SchemaError,
                    "DisplayDefinition is missing the '" + std::string(attr_name) + "' attribute");
    }
    int value = 0;
    auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), value);
    if (ec != std::errc() || ptr != raw->data() + raw->size()) {
        throw Error(ErrorKind::SchemaError,
                    "attribute '" + std::string(attr_name) + "' is not an integer: \"" + *raw + "\"");
    }
    return value;
}

void check_known_attributes(const xml::Element& element, std::initializer_list<std::string_view> known) {
    for (const auto& [name, _] : element.attributes) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw Error(ErrorKind::SchemaError,
                        "unknown attribute '" + name + "' on element '" + element.name + "'");
        }
    }
}

std::string require_name_attr(const xml::Element& element) {
    const std::string* name = element.attribute("name");
    if (name == nullptr || name->empty()) {
        throw Error(ErrorKind::SchemaError, "element '" + element.name + "' is missing a name");
    }
    return *name;
}

} // namespace

DisplayDefinition parse_display_xml(std::string_view bytes) {
    xml::Element root = xml::parse(bytes);
    if (root.name != "DisplayDefinition") {
        throw Error(ErrorKind::SchemaError, "unknown root element '" + root.name + "'");
    }
    check_known_attributes(root, {"name", "width", "height"});

    DisplayDefinition def;
    def.name = require_name_attr(root);
    def.width = parse_pixel_attr(root, "width");
    def.height = parse_pixel_attr(root, "height");
    if (def.width < 64 || def.height < 64) {
        throw Error(ErrorKind::SchemaError, "display must be at least 64x64 pixels, got " +
                                                std::to_string(def.width) + "x" + std::to_string(def.height));
    }

    std::set<std::string> object_names;
    for (const xml::Element& object_el : root.children) {
        if (object_el.name != "Object") {
            throw Error(ErrorKind::SchemaError, "unknown element '" + object_el.name + "'");
        }
        check_known_attributes(object_el, {"name"});
        RawObject object;
        object.name = require_name_attr(object_el);
        if (!object_names.insert(object.name).second) {
            throw Error(ErrorKind::DuplicateName, "duplicate object name '" + object.name + "'");
        }
        std::set<std::string> property_names;
        for (const xml::Element& prop_el : object_el.children) {
            if (prop_el.name != "Property") {
                throw Error(ErrorKind::SchemaError, "unknown element '" + prop_el.name +
                                                        "' inside object '" + object.name + "'");
            }
            check_known_attributes(prop_el, {"name"});
            if (!prop_el.children.empty()) {
                throw Error(ErrorKind::SchemaError, "Property elements carry text only");
            }
            RawProperty prop;
            prop.name = require_name_attr(prop_el);
            prop.value = prop_el.text;
            if (!property_names.insert(prop.name).second) {
                throw Error(ErrorKind::DuplicateName, "duplicate property '" + prop.name +
                                                          "' in object '" + object.name + "'");
            }
            object.properties.push_back(std::move(prop));
        }
        def.objects.push_back(std::move(object));
    }
    return def;
}

std::string serialize_display_definition(const DisplayDefinition& def) {
    xml::Element root;
    root.name = "DisplayDefinition";
    root.attributes = {{"name", def.name},
                       {"width", std::to_string(def.width)},
                       {"height", std::to_string(def.height)}};
    for (const RawObject& object : def.objects) {
        xml::Element object_el;
        object_el.name = "Object";
        object_el.attributes = {{"name", object.name}};
        for (const RawProperty& prop : object.properties) {
            xml::Element prop_el;
            prop_el.name = "Property";
            prop_el.attributes = {{"name", prop.name}};
            prop_el.text = prop.value;
            object_el.children.push_back(std::move(prop_el));
        }
        root.children.push_back(std::move(object_el));
    }
    return xml::serialize(root);
}

MappingFile parse_mapping(std::string_view bytes) {
    MappingFile mapping;
    std::set<std::string> object_keys;
    std::set<std::string> property_keys;

    std::istringstream stream{std::string(bytes)};
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream words(line);
        std::string keyword;
        if (!(words >> keyword)) {
            continue;
        }
        std::string source, arrow, target, extra;
        if (!(words >> source >> arrow >> target) || arrow != "=>" || (words >> extra)) {
            throw Error(ErrorKind::SyntaxError, "expected '" + keyword + " <source> => <target>'", line_no);
        }
        if (keyword == "object") {
            auto kind = widget_kind_from(target);
            if (!kind) {
                throw Error(ErrorKind::UnknownWidgetKind, "'" + target + "'", line_no);
            }
            if (!object_keys.insert(source).second) {
                throw Error(ErrorKind::DuplicateName, "object '" + source + "' mapped twice", line_no);
            }
            mapping.object_mappings.push_back({source, *kind});
        } else if (keyword == "prop") {
            auto dot = source.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 == source.size()) {
                throw Error(ErrorKind::SyntaxError, "expected '<SourceName>.<SourceProp>'", line_no);
            }
            auto profile_prop = profile_property_from(target);
            if (!profile_prop) {
                throw Error(ErrorKind::UnknownProfileProperty, "'" + target + "'", line_no);
            }
            if (!property_keys.insert(source).second) {
                throw Error(ErrorKind::DuplicateName, "property '" + source + "' mapped twice", line_no);
            }
            mapping.property_mappings.push_back(
                {source.substr(0, dot), source.substr(dot + 1), *profile_prop});
        } else {
            throw Error(ErrorKind::SyntaxError, "unknown directive '" + keyword + "'", line_no);
        }
    }

    for (const PropertyMapping& prop : mapping.property_mappings) {
        if (!object_keys.contains(prop.source_object)) {
            throw Error(ErrorKind::DanglingPropertyMapping,
                        "'" + prop.source_object + "." + prop.source_property +
                            "' has no matching object mapping");
        }
    }
    return mapping;
}

namespace {

int to_pixels(const std::string& value, const std::string& context) {
    int result = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), result);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorKind::TypeConversionError, context + ": \"" + value + "\" is not an integer");
    }
    return result;
}

bool to_boolean(const std::string& value, const std::string& context) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw Error(ErrorKind::TypeConversionError, context + ": \"" + value + "\" is not a boolean");
}

bool regions_overlap(const WidgetModel& a, const WidgetModel& b) {
    return a.x < b.x + b.width && b.x < a.x + a.width &&
           a.y < b.y + b.height && b.y < a.y + a.height;
}

} // namespace

GeneratedModel generate_model(const DisplayDefinition& def, const MappingFile& mapping) {
    GeneratedModel result;
    result.model.name = def.name;
    result.model.width = def.width;
    result.model.height = def.height;

    for (const RawObject& object : def.objects) {
        const ObjectMapping* object_mapping = nullptr;
        for (const ObjectMapping& candidate : mapping.object_mappings) {
            if (candidate.source_object == object.name) {
                object_mapping = &candidate;
                break;
            }
        }
        if (object_mapping == nullptr) {
            result.warnings.push_back("object '" + object.name + "' is not mapped; ignored");
            continue;
        }

        WidgetModel widget;
        widget.name = object.name;
        widget.kind = object_mapping->kind;
        widget.target_property = std::string(target_property(widget.kind));

        bool has_visible = false;
        bool has_format = false;
        bool has_geometry[4] = {false, false, false, false};
        for (const PropertyMapping& prop_mapping : mapping.property_mappings) {
            if (prop_mapping.source_object != object.name) {
                continue;
            }
            const std::string* raw = object.property(prop_mapping.source_property);
            if (raw == nullptr) {
                throw Error(ErrorKind::SchemaError,
                            "object '" + object.name + "' has no property '" +
                                prop_mapping.source_property + "' named by the mapping");
            }
            const std::string context = object.name + "." + prop_mapping.source_property;
            switch (prop_mapping.target) {
            case ProfileProperty::IsVisible:
                widget.is_visible = to_boolean(*raw, context);
                has_visible = true;
                break;
            case ProfileProperty::X:
                widget.x = to_pixels(*raw, context);
                has_geometry[0] = true;
                break;
            case ProfileProperty::Y:
                widget.y = to_pixels(*raw, context);
                has_geometry[1] = true;
                break;
            case ProfileProperty::Width:
                widget.width = to_pixels(*raw, context);
                has_geometry[2] = true;
                break;
            case ProfileProperty::Height:
                widget.height = to_pixels(*raw, context);
                has_geometry[3] = true;
                break;
            case ProfileProperty::Format:
                if (*raw != "%d" && *raw != "%.1f") {
                    throw Error(ErrorKind::TypeConversionError,
                                context + ": unsupported format \"" + *raw + "\"");
                }
                widget.format = *raw;
                has_format = true;
                break;
            }
        }

        const char* geometry_names[4] = {"x", "y", "width", "height"};
        for (int i = 0; i < 4; ++i) {
            if (!has_geometry[i]) {
                throw Error(ErrorKind::SchemaError, "widget '" + object.name +
                                                        "' has no mapped '" + geometry_names[i] +
                                                        "' property");
            }
        }
        if (!has_visible) {
            result.warnings.push_back("widget '" + object.name + "' defaulted isVisible=true");
        }
        if (!has_format) {
            result.warnings.push_back("widget '" + object.name + "' defaulted format=\"%d\"");
        }

        if (widget.width <= 0 || widget.height <= 0) {
            throw Error(ErrorKind::TypeConversionError,
                        "widget '" + widget.name + "' must have positive width and height");
        }
        if (widget.x < 0 || widget.y < 0 || widget.x + widget.width > def.width ||
            widget.y + widget.height > def.height) {
            throw Error(ErrorKind::RegionOutOfBounds,
                        "widget '" + widget.name + "' region exceeds the " +
                            std::to_string(def.width) + "x" + std::to_string(def.height) + " display");
        }
        for (const WidgetModel& existing : result.model.widgets) {
            if (existing.kind == widget.kind) {
                throw Error(ErrorKind::DuplicateName,
                            "widgets '" + existing.name + "' and '" + widget.name +
                                "' both map to kind " + std::string(to_string(widget.kind)));
            }
            if (regions_overlap(existing, widget)) {
                throw Error(ErrorKind::OverlappingWidgets,
                            "widgets '" + existing.name + "' and '" + widget.name + "' overlap");
            }
        }
        result.model.widgets.push_back(std::move(widget));
    }
    return result;
}

std::string to_json(const DisplayModel& model) {
    json widgets = json::array();
    for (const WidgetModel& widget : model.widgets) {
        widgets.push_back({{"name", widget.name},
                           {"kind", std::string(to_string(widget.kind))},
                           {"isVisible", widget.is_visible},
                           {"x", widget.x},
                           {"y", widget.y},
                           {"width", widget.width},
                           {"height", widget.height},
                           {"format", widget.format},
                           {"targetProperty", widget.target_property}});
    }
    json doc = {{"name", model.name},
                {"width", model.width},
                {"height", model.height},
                {"widgets", widgets}};
    return doc.dump(2) + "\n";
}

DisplayModel model_from_json(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::SyntaxError, std::string("display model JSON: ") + e.what());
    }
    try {
        DisplayModel model;
        model.name = doc.at("name").get<std::string>();
        model.width = doc.at("width").get<int>();
        model.height = doc.at("height").get<int>();
        for (const json& w : doc.at("widgets")) {
            WidgetModel widget;
            widget.name = w.at("name").get<std::string>();
            auto kind = widget_kind_from(w.at("kind").get<std::string>());
            if (!kind) {
                throw Error(ErrorKind::UnknownWidgetKind, w.at("kind").get<std::string>());
            }
            widget.kind = *kind;
            widget.is_visible = w.at("isVisible").get<bool>();
            widget.x = w.at("x").get<int>();
            widget.y = w.at("y").get<int>();
            widget.width = w.at("width").get<int>();
            widget.height = w.at("height").get<int>();
            widget.format = w.at("format").get<std::string>();
            widget.target_property = w.at("targetProperty").get<std::string>();
            if (widget.target_property != target_property(widget.kind)) {
                throw Error(ErrorKind::SchemaError,
                            "widget '" + widget.name + "' target property '" + widget.target_property +
                                "' does not match kind " + std::string(to_string(widget.kind)));
            }
            model.widgets.push_back(std::move(widget));
        }
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("display model JSON: ") + e.what());
    }
}

} // namespace cdtk::display
