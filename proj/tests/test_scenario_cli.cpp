// Scenario document parsing, canonical serialization, and the PGM encoder.
//
// Round-trip contract: one parse/serialize cycle canonicalizes a document;
// after that, parse and serialize are mutually inverse byte for byte.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

#include "ifs/errors.hpp"
#include "ifs/raster.hpp"
#include "ifs/scenario.hpp"

#include "test_support.hpp"

#ifndef SCENARIO_DIR
#define SCENARIO_DIR "scenarios"
#endif

using namespace ifs;
using namespace testsupport;

namespace {

std::string shipped(const char* name) { return std::string(SCENARIO_DIR) + "/" + name; }

}  // namespace

TEST_CASE("shipped scenarios load and round-trip byte-identically") {
    for (const char* name : {"sierpinski.json", "interval.json", "overlap.json"}) {
        const Scenario first = load_scenario(shipped(name));
        const std::string canonical = serialize_scenario(first);
        const Scenario second = parse_scenario(canonical);
        CHECK(scenario_equal(first, second));
        CHECK(serialize_scenario(second) == canonical);
    }
}

TEST_CASE("the sierpinski scenario has the documented content") {
    const Scenario scenario = load_scenario(shipped("sierpinski.json"));
    CHECK(scenario.space.dim() == 2);
    CHECK(scenario.alphabet->size() == 3);
    for (int i = 0; i < scenario.alphabet->size(); ++i) {
        CHECK(scenario.alphabet->map(i).ratio() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(scenario.alphabet->map(i).is_similarity());
    }
    CHECK(scenario.sequence("sierpinski").period().size() == 3);
    CHECK(scenario.sequence("stream").kind() == IfsSequence::Kind::BlockEnumeration);
    CHECK(scenario.evolution_operator("scale").kind == EvolutionOperator::Kind::ScaleExp);
    CHECK(scenario.defaults.resolution == 512);
    CHECK(scenario.defaults.seed == 42);
    CHECK(scenario.defaults.tolerance == doctest::Approx(0x1p-40).epsilon(1e-9));
}

TEST_CASE("defaults are optional and partially specifiable") {
    const Scenario scenario = load_scenario(shipped("interval.json"));
    CHECK(scenario.defaults.resolution == 1024);  // overridden
    CHECK(scenario.defaults.seed == 42);          // inherited
    CHECK(scenario.defaults.horizon == 10000);    // inherited

    const Scenario bare = load_scenario(shipped("overlap.json"));
    CHECK(bare.defaults == ScenarioDefaults{});
}

TEST_CASE("unknown names are validation errors") {
    const Scenario scenario = load_scenario(shipped("overlap.json"));
    try {
        (void)scenario.sequence("missing");
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::ValidationError);
        CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
    CHECK_THROWS_AS((void)scenario.evolution_operator("nope"), IfsError);
}

TEST_CASE("malformed json reports a byte position") {
    try {
        (void)parse_scenario("{\"space\": ");
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("structural problems name the offending element") {
    const std::string base = R"({
      "space": {"dim": 1, "lower": [0.0], "upper": [1.0]},
      "alphabet": [{"name": "f", "matrix": [[0.5]], "offset": [0.0]}]
    })";
    CHECK_THROWS_AS((void)parse_scenario("[]"), IfsError);
    CHECK_THROWS_AS((void)parse_scenario("{}"), IfsError);

    // Non-contractive map: the error names the map.
    try {
        (void)parse_scenario(R"({
          "space": {"dim": 1, "lower": [0.0], "upper": [1.0]},
          "alphabet": [{"name": "bad", "matrix": [[1.2]], "offset": [0.0]}]
        })");
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::ValidationError);
        CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }

    // Sequence referencing an unknown symbol: names sequence and symbol.
    try {
        (void)parse_scenario(R"({
          "space": {"dim": 1, "lower": [0.0], "upper": [1.0]},
          "alphabet": [{"name": "f", "matrix": [[0.5]], "offset": [0.0]}],
          "sequences": {"s": {"kind": "eventually_periodic", "period": ["g"]}}
        })");
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::ValidationError);
        const std::string what = e.what();
        CHECK(what.find("sequence 's'") != std::string::npos);
        CHECK(what.find("unknown symbol name 'g'") != std::string::npos);
    }

    // Unknown kinds.
    CHECK_THROWS_AS((void)parse_scenario(base.substr(0, base.size() - 1) +
                                         R"(, "operators": {"o": {"kind": "warp"}}})"),
                    IfsError);
    (void)parse_scenario(base);  // the base document itself is fine
}

TEST_CASE("minimal scenario: one map, one constant sequence") {
    const Scenario minimal = parse_scenario(R"({
      "space": {"dim": 1, "lower": [0.0], "upper": [1.0]},
      "alphabet": [{"name": "f", "matrix": [[0.5]], "offset": [0.0]}],
      "sequences": {"c": {"kind": "eventually_periodic", "period": ["f"]}}
    })");
    CHECK(minimal.alphabet->size() == 1);
    CHECK(minimal.sequence("c").preperiod().empty());
    CHECK(minimal.sequence("c").period().size() == 1);
}

TEST_CASE("missing files are parse errors naming the path") {
    try {
        (void)load_scenario("/nonexistent/path/scenario.json");
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK(std::string(e.what()).find("/nonexistent/path") != std::string::npos);
    }
}

TEST_CASE("twelve significant digits") {
    CHECK(format_g12(2.0) == "2");
    CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
    CHECK(format_g12(1.584962500721156) == "1.58496250072");
    CHECK(format_g12(0.792481250360578) == "0.792481250361");
    CHECK(format_g12(-0.25) == "-0.25");
}

TEST_CASE("pgm encoding puts the top row first") {
    auto raster = AttractorRaster::empty(unit_square(), 2);
    raster.set(0, 1);  // top-left cell
    CHECK(raster_to_pgm(raster) == "P2\n2 2\n255\n0 255\n255 255\n");

    auto line = AttractorRaster::empty(unit_interval(), 3);
    line.set(2, 0);
    CHECK(raster_to_pgm(line) == "P2\n3 1\n255\n255 255 0\n");
}

TEST_CASE("text files round-trip through the helpers") {
    const std::string path = "/tmp/ifs_scenario_io_test.txt";
    const std::string payload = "line one\nline two\n";
    write_text_file(path, payload);
    CHECK(read_text_file(path) == payload);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)read_text_file(path), IfsError);
}

TEST_CASE("serialization orders sequences deterministically") {
    const Scenario scenario = load_scenario(shipped("sierpinski.json"));
    const std::string canonical = serialize_scenario(scenario);
    // Keys inside "sequences" appear sorted: sierpinski, stream, tail.
    const auto at_sierpinski = canonical.find("\"sierpinski\":");
    const auto at_stream = canonical.find("\"stream\":");
    const auto at_tail = canonical.find("\"tail\":");
    REQUIRE(at_sierpinski != std::string::npos);
    REQUIRE(at_stream != std::string::npos);
    REQUIRE(at_tail != std::string::npos);
    CHECK(at_sierpinski < at_stream);
    CHECK(at_stream < at_tail);
}
