#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifs/dynamics.hpp"
#include "ifs/raster.hpp"

namespace ifs {

struct ScenarioDefaults {
    double tolerance = 0x1p-40;
    int resolution = 512;
    std::uint64_t seed = 42;
    std::uint64_t horizon = 10000;

    bool operator==(const ScenarioDefaults& other) const = default;
};

// A parsed scenario document: one space, one alphabet, named sequences and
// evolution operators, and analysis defaults. Everything is validated at
// load time; sequences are stored in canonical form.
struct Scenario {
    Scenario(SpaceBox space_, AlphabetPtr alphabet_)
        : space(std::move(space_)), alphabet(std::move(alphabet_)) {}

    SpaceBox space;
    AlphabetPtr alphabet;
    std::vector<std::pair<std::string, IfsSequence>> sequences;
    std::vector<std::pair<std::string, EvolutionOperator>> operators;
    ScenarioDefaults defaults;

    const IfsSequence& sequence(std::string_view name) const;
    const EvolutionOperator& evolution_operator(std::string_view name) const;
};

bool scenario_equal(const Scenario& a, const Scenario& b);

// Document format: JSON object with keys space / alphabet / sequences /
// operators / defaults. Matrices are row-major nested lists. Throws
// ParseError (malformed document, with byte position) or ValidationError
// (bad contraction, unknown symbol, wrong shape, naming the entity).
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::string& path);

// 12 significant digits, the CLI-wide numeric output format.
std::string format_g12(double value);

// ASCII PGM, maxval 255, occupied = 0, empty = 255; row 0 of the file is the
// row at the space's maximal second coordinate. 1D rasters become height-1
// images.
std::string raster_to_pgm(const AttractorRaster& raster);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ifs
