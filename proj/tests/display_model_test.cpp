#include "cdtk/display_model.hpp"

#include "cdtk/harness.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace cdtk;

namespace {

const char* kMiniDisplay = R"(<DisplayDefinition name="Mini" width="1024" height="768">
  <Object name="AltitudeTape">
    <Property name="IsVisible">true</Property>
    <Property name="FrameX">824</Property>
    <Property name="FrameY">120</Property>
    <Property name="Width">110</Property>
    <Property name="Height">40</Property>
    <Property name="Format">%d</Property>
  </Object>
</DisplayDefinition>)";

const char* kMiniMapping = R"(object AltitudeTape => Altimeter
prop AltitudeTape.IsVisible => isVisible
prop AltitudeTape.FrameX => x
prop AltitudeTape.FrameY => y
prop AltitudeTape.Width => width
prop AltitudeTape.Height => height
prop AltitudeTape.Format => format
)";

display::DisplayModel mini_model() {
    auto def = display::parse_display_xml(kMiniDisplay);
    auto mapping = display::parse_mapping(kMiniMapping);
    return display::generate_model(def, mapping).model;
}

} // namespace

TEST_CASE("display XML parses into raw objects") {
    display::DisplayDefinition def = display::parse_display_xml(kMiniDisplay);
    CHECK(def.name == "Mini");
    CHECK(def.width == 1024);
    CHECK(def.height == 768);
    REQUIRE(def.objects.size() == 1);
    CHECK(def.objects[0].name == "AltitudeTape");
    REQUIRE(def.objects[0].properties.size() == 6);
    CHECK(*def.objects[0].property("FrameX") == "824");
    CHECK(def.objects[0].property("NoSuch") == nullptr);
}

TEST_CASE("display XML round-trips through the serializer") {
    display::DisplayDefinition def = display::parse_display_xml(kMiniDisplay);
    display::DisplayDefinition again =
        display::parse_display_xml(display::serialize_display_definition(def));
    CHECK(again.name == def.name);
    REQUIRE(again.objects.size() == 1);
    CHECK(again.objects[0].properties == def.objects[0].properties);
}

TEST_CASE("display XML rejects bad structure") {
    check_error([] { display::parse_display_xml("<Display name=\"x\" width=\"64\" height=\"64\"/>"); },
                ErrorKind::SchemaError);
    check_error([] { display::parse_display_xml("<DisplayDefinition width=\"64\" height=\"64\"/>"); },
                ErrorKind::SchemaError);
    check_error(
        [] { display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"wide\" height=\"64\"/>"); },
        ErrorKind::SchemaError);
    check_error(
        [] { display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"63\" height=\"64\"/>"); },
        ErrorKind::SchemaError);
    check_error(
        [] {
            display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"64\" height=\"64\">"
                                       "<Object name=\"a\"/><Object name=\"a\"/></DisplayDefinition>");
        },
        ErrorKind::DuplicateName);
    check_error(
        [] {
            display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"64\" height=\"64\">"
                                       "<Object name=\"a\"><Property name=\"p\">1</Property>"
                                       "<Property name=\"p\">2</Property></Object></DisplayDefinition>");
        },
        ErrorKind::DuplicateName);
    check_error(
        [] {
            display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"64\" height=\"64\" dpi=\"72\"/>");
        },
        ErrorKind::SchemaError);
}

TEST_CASE("mapping files parse directives and comments") {
    display::MappingFile mapping = display::parse_mapping(
        "# heading comment\n"
        "object A => Altimeter   # trailing comment\n"
        "\n"
        "prop A.X => x\n");
    REQUIRE(mapping.object_mappings.size() == 1);
    CHECK(mapping.object_mappings[0].source_object == "A");
    CHECK(mapping.object_mappings[0].kind == display::WidgetKind::Altimeter);
    REQUIRE(mapping.property_mappings.size() == 1);
    CHECK(mapping.property_mappings[0].source_object == "A");
    CHECK(mapping.property_mappings[0].source_property == "X");
    CHECK(mapping.property_mappings[0].target == display::ProfileProperty::X);
}

TEST_CASE("mapping files reject bad directives") {
    check_error([] { display::parse_mapping("object A => FlightDirector\n"); },
                ErrorKind::UnknownWidgetKind);
    check_error([] { display::parse_mapping("object A => Altimeter\nprop A.X => left\n"); },
                ErrorKind::UnknownProfileProperty);
    check_error([] { display::parse_mapping("object A => Altimeter extra\n"); },
                ErrorKind::SyntaxError);
    check_error([] { display::parse_mapping("object A -> Altimeter\n"); }, ErrorKind::SyntaxError);
    check_error([] { display::parse_mapping("widget A => Altimeter\n"); }, ErrorKind::SyntaxError);
    check_error([] { display::parse_mapping("object A => Altimeter\nprop AX => x\n"); },
                ErrorKind::SyntaxError);
    check_error(
        [] { display::parse_mapping("object A => Altimeter\nobject A => AirspeedIndicator\n"); },
        ErrorKind::DuplicateName);
    check_error([] { display::parse_mapping("object A => Altimeter\nprop A.X => x\nprop A.X => y\n"); },
                ErrorKind::DuplicateName);
    check_error([] { display::parse_mapping("prop A.X => x\n"); },
                ErrorKind::DanglingPropertyMapping);
}

TEST_CASE("mapping errors carry line numbers") {
    try {
        display::parse_mapping("object A => Altimeter\nobject B => Nope\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownWidgetKind);
        CHECK(e.line() == 2);
    }
}

TEST_CASE("generate_model builds one typed widget per mapped object") {
    display::DisplayModel model = mini_model();
    CHECK(model.name == "Mini");
    REQUIRE(model.widgets.size() == 1);
    const display::WidgetModel& w = model.widgets[0];
    CHECK(w.name == "AltitudeTape");
    CHECK(w.kind == display::WidgetKind::Altimeter);
    CHECK(w.is_visible);
    CHECK(w.x == 824);
    CHECK(w.y == 120);
    CHECK(w.width == 110);
    CHECK(w.height == 40);
    CHECK(w.format == "%d");
    CHECK(w.target_property == "altitude");
    CHECK(model.widget_named("AltitudeTape") == &w);
    CHECK(model.widget_for_property("altitude") == &w);
    CHECK(model.widget_for_property("airspeed") == nullptr);
}

TEST_CASE("widget kinds own fixed target properties and units") {
    using display::WidgetKind;
    CHECK(display::target_property(WidgetKind::Altimeter) == "altitude");
    CHECK(display::target_property(WidgetKind::AirspeedIndicator) == "airspeed");
    CHECK(display::target_property(WidgetKind::AttitudeIndicator) == "roll");
    CHECK(display::target_property(WidgetKind::VerticalSpeedIndicator) == "verticalSpeed");
    CHECK(display::target_property(WidgetKind::HeadingIndicator) == "heading");
    CHECK(display::target_property(WidgetKind::BarometricPressure) == "pressure");
    CHECK(display::target_unit(WidgetKind::Altimeter) == "feet");
    CHECK(display::target_unit(WidgetKind::AirspeedIndicator) == "knots");
    CHECK(display::widget_kind_from("Altimeter") == WidgetKind::Altimeter);
    CHECK(!display::widget_kind_from("GearLever").has_value());
}

TEST_CASE("generate_model ignores unmapped objects with a warning") {
    auto def = display::parse_display_xml(
        "<DisplayDefinition name=\"x\" width=\"1024\" height=\"768\">"
        "<Object name=\"Decoration\"/>"
        "</DisplayDefinition>");
    auto mapping = display::parse_mapping("");
    display::GeneratedModel generated = display::generate_model(def, mapping);
    CHECK(generated.model.widgets.empty());
    REQUIRE(generated.warnings.size() == 1);
    CHECK(generated.warnings[0].find("Decoration") != std::string::npos);
}

TEST_CASE("generate_model defaults visibility and format with warnings") {
    auto def = display::parse_display_xml(
        "<DisplayDefinition name=\"x\" width=\"1024\" height=\"768\">"
        "<Object name=\"A\">"
        "<Property name=\"X\">10</Property><Property name=\"Y\">10</Property>"
        "<Property name=\"W\">110</Property><Property name=\"H\">40</Property>"
        "</Object></DisplayDefinition>");
    auto mapping = display::parse_mapping(
        "object A => Altimeter\n"
        "prop A.X => x\nprop A.Y => y\nprop A.W => width\nprop A.H => height\n");
    display::GeneratedModel generated = display::generate_model(def, mapping);
    REQUIRE(generated.model.widgets.size() == 1);
    CHECK(generated.model.widgets[0].is_visible);
    CHECK(generated.model.widgets[0].format == "%d");
    CHECK(generated.warnings.size() == 2);
}

TEST_CASE("generate_model rejects inconsistent inputs") {
    auto def_for = [](const std::string& objects) {
        return display::parse_display_xml("<DisplayDefinition name=\"x\" width=\"1024\" height=\"768\">" +
                                          objects + "</DisplayDefinition>");
    };
    std::string alt_object =
        "<Object name=\"A\">"
        "<Property name=\"X\">10</Property><Property name=\"Y\">10</Property>"
        "<Property name=\"W\">110</Property><Property name=\"H\">40</Property>"
        "<Property name=\"V\">yes</Property><Property name=\"F\">%04d</Property>"
        "</Object>";
    std::string geometry_props = "prop A.X => x\nprop A.Y => y\nprop A.W => width\nprop A.H => height\n";

    // Mapping names a property the object does not carry.
    check_error(
        [&] {
            display::generate_model(def_for(alt_object),
                                    display::parse_mapping("object A => Altimeter\nprop A.Missing => x\n"));
        },
        ErrorKind::SchemaError);
    // Geometry not fully mapped.
    check_error(
        [&] {
            display::generate_model(def_for(alt_object),
                                    display::parse_mapping("object A => Altimeter\nprop A.X => x\n"));
        },
        ErrorKind::SchemaError);
    // Boolean and format conversion failures.
    check_error(
        [&] {
            display::generate_model(
                def_for(alt_object),
                display::parse_mapping("object A => Altimeter\n" + geometry_props + "prop A.V => isVisible\n"));
        },
        ErrorKind::TypeConversionError);
    check_error(
        [&] {
            display::generate_model(
                def_for(alt_object),
                display::parse_mapping("object A => Altimeter\n" + geometry_props + "prop A.F => format\n"));
        },
        ErrorKind::TypeConversionError);

    // Region sticking out of the display.
    std::string far_object =
        "<Object name=\"A\">"
        "<Property name=\"X\">1000</Property><Property name=\"Y\">10</Property>"
        "<Property name=\"W\">110</Property><Property name=\"H\">40</Property>"
        "</Object>";
    check_error(
        [&] {
            display::generate_model(def_for(far_object),
                                    display::parse_mapping("object A => Altimeter\n" + geometry_props));
        },
        ErrorKind::RegionOutOfBounds);

    // Two widgets of the same kind, then two overlapping regions.
    std::string pair_objects =
        "<Object name=\"A\">"
        "<Property name=\"X\">10</Property><Property name=\"Y\">10</Property>"
        "<Property name=\"W\">110</Property><Property name=\"H\">40</Property>"
        "</Object>"
        "<Object name=\"B\">"
        "<Property name=\"X\">60</Property><Property name=\"Y\">30</Property>"
        "<Property name=\"W\">110</Property><Property name=\"H\">40</Property>"
        "</Object>";
    std::string b_geometry = "prop B.X => x\nprop B.Y => y\nprop B.W => width\nprop B.H => height\n";
    check_error(
        [&] {
            display::generate_model(def_for(pair_objects),
                                    display::parse_mapping("object A => Altimeter\nobject B => Altimeter\n" +
                                                           geometry_props + b_geometry));
        },
        ErrorKind::DuplicateName);
    check_error(
        [&] {
            display::generate_model(
                def_for(pair_objects),
                display::parse_mapping("object A => Altimeter\nobject B => AirspeedIndicator\n" +
                                       geometry_props + b_geometry));
        },
        ErrorKind::OverlappingWidgets);
}

TEST_CASE("display model JSON round-trips") {
    display::DisplayModel model = mini_model();
    display::DisplayModel again = display::model_from_json(display::to_json(model));
    CHECK(again.name == model.name);
    REQUIRE(again.widgets.size() == 1);
    CHECK(again.widgets[0].name == model.widgets[0].name);
    CHECK(again.widgets[0].kind == model.widgets[0].kind);
    CHECK(again.widgets[0].x == model.widgets[0].x);
    CHECK(again.widgets[0].format == model.widgets[0].format);
    CHECK(again.widgets[0].target_property == model.widgets[0].target_property);
}

TEST_CASE("display model JSON rejects a forged target property") {
    display::DisplayModel model = mini_model();
    std::string bytes = display::to_json(model);
    auto pos = bytes.find("\"altitude\"");
    REQUIRE(pos != std::string::npos);
    bytes.replace(pos, 10, "\"airspeed\"");
    check_error([&] { display::model_from_json(bytes); }, ErrorKind::SchemaError);
}

TEST_CASE("the shipped display and mapping produce the six-widget model") {
    auto def = display::parse_display_xml(harness::read_text_file(data_file("pfd_display.xml")));
    auto mapping = display::parse_mapping(harness::read_text_file(data_file("pfd.map")));
    display::GeneratedModel generated = display::generate_model(def, mapping);
    CHECK(generated.warnings.empty());
    REQUIRE(generated.model.widgets.size() == 6);
    CHECK(display::to_json(generated.model) == harness::read_text_file(golden_file("model.json")));
}
