#include "ifs/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ifs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw IfsError(Errc::ValidationError, message);
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) fail(where + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing key '" + std::string(key) + "'");
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + ": expected a number");
    return v.get<double>();
}

std::uint64_t as_uint(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(where + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<std::string> as_name_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + ": expected a list of symbol names");
    std::vector<std::string> names;
    for (const auto& item : v) {
        if (!item.is_string()) fail(where + ": expected a symbol name string");
        names.push_back(item.get<std::string>());
    }
    return names;
}

SpaceBox parse_space(const json& node) {
    const json& jdim = require_key(node, "dim", "space");
    const json& jlower = require_key(node, "lower", "space");
    const json& jupper = require_key(node, "upper", "space");
    if (!jdim.is_number_integer()) fail("space: 'dim' must be an integer");
    const int dim = jdim.get<int>();
    if (!jlower.is_array() || !jupper.is_array() ||
        static_cast<int>(jlower.size()) != dim || static_cast<int>(jupper.size()) != dim) {
        fail("space: 'lower' and 'upper' must be lists of length dim");
    }
    Vec lower = zero_vec();
    Vec upper = zero_vec();
    for (int i = 0; i < dim; ++i) {
        lower[i] = as_number(jlower[i], "space.lower");
        upper[i] = as_number(jupper[i], "space.upper");
    }
    try {
        return SpaceBox(dim, lower, upper);
    } catch (const IfsError& e) {
        fail(std::string("space: ") + e.what());
    }
}

AlphabetPtr parse_alphabet(const json& node, const SpaceBox& space) {
    if (!node.is_array() || node.empty()) fail("alphabet: expected a nonempty list of maps");
    const int dim = space.dim();
    std::vector<std::pair<std::string, AffineContraction>> entries;
    for (const auto& item : node) {
        const json& jname = require_key(item, "name", "alphabet entry");
        if (!jname.is_string()) fail("alphabet entry: 'name' must be a string");
        const std::string name = jname.get<std::string>();
        const std::string where = "map '" + name + "'";
        const json& jmatrix = require_key(item, "matrix", where);
        const json& joffset = require_key(item, "offset", where);
        if (!jmatrix.is_array() || static_cast<int>(jmatrix.size()) != dim) {
            fail(where + ": 'matrix' must have dim rows");
        }
        Mat matrix = zero_mat();
        for (int i = 0; i < dim; ++i) {
            const json& row = jmatrix[i];
            if (!row.is_array() || static_cast<int>(row.size()) != dim) {
                fail(where + ": matrix row " + std::to_string(i) + " must have dim entries");
            }
            for (int j = 0; j < dim; ++j) matrix[i][j] = as_number(row[j], where + ".matrix");
        }
        if (!joffset.is_array() || static_cast<int>(joffset.size()) != dim) {
            fail(where + ": 'offset' must be a list of length dim");
        }
        Vec offset = zero_vec();
        for (int i = 0; i < dim; ++i) offset[i] = as_number(joffset[i], where + ".offset");
        try {
            entries.emplace_back(name, validate_contraction(space, matrix, offset));
        } catch (const IfsError& e) {
            fail(where + ": " + e.what());
        }
    }
    try {
        return std::make_shared<const ContractionAlphabet>(space, std::move(entries));
    } catch (const IfsError& e) {
        fail(std::string("alphabet: ") + e.what());
    }
}

IfsSequence parse_sequence(const std::string& name, const json& node,
                           const AlphabetPtr& alphabet) {
    const std::string where = "sequence '" + name + "'";
    const json& jkind = require_key(node, "kind", where);
    if (!jkind.is_string()) fail(where + ": 'kind' must be a string");
    const std::string kind = jkind.get<std::string>();
    const auto check_names = [&](const std::vector<std::string>& names) {
        for (const std::string& symbol : names) {
            if (!alphabet->find(symbol)) {
                fail(where + ": unknown symbol name '" + symbol + "'");
            }
        }
    };
    try {
        if (kind == "eventually_periodic") {
            std::vector<std::string> preperiod;
            if (node.contains("preperiod")) {
                preperiod = as_name_list(node["preperiod"], where + ".preperiod");
            }
            const std::vector<std::string> period =
                as_name_list(require_key(node, "period", where), where + ".period");
            check_names(preperiod);
            check_names(period);
            const IfsSequence seq = IfsSequence::eventually_periodic(alphabet, preperiod, period);
            return normalize(seq).sequence;
        }
        if (kind == "block_enumeration") {
            const std::vector<std::string> symbols =
                as_name_list(require_key(node, "symbols", where), where + ".symbols");
            check_names(symbols);
            std::uint64_t offset = 0;
            if (node.contains("start_offset")) {
                offset = as_uint(node["start_offset"], where + ".start_offset");
            }
            return IfsSequence::block_enumeration(alphabet, symbols, offset);
        }
    } catch (const IfsError& e) {
        if (e.code() == Errc::ValidationError) throw;
        fail(where + ": " + e.what());
    }
    fail(where + ": unknown kind '" + kind + "'");
}

EvolutionOperator parse_operator(const std::string& name, const json& node) {
    const std::string where = "operator '" + name + "'";
    const json& jkind = require_key(node, "kind", where);
    if (!jkind.is_string()) fail(where + ": 'kind' must be a string");
    const std::string kind = jkind.get<std::string>();
    if (kind == "shift-discrete") return {EvolutionOperator::Kind::ShiftDiscrete};
    if (kind == "scale-exp") return {EvolutionOperator::Kind::ScaleExp};
    fail(where + ": unknown kind '" + kind + "'");
}

ScenarioDefaults parse_defaults(const json& node) {
    ScenarioDefaults d;
    if (node.is_null()) return d;
    if (!node.is_object()) fail("defaults: expected an object");
    if (node.contains("tolerance")) {
        d.tolerance = as_number(node["tolerance"], "defaults.tolerance");
        if (!(d.tolerance > 0.0 && d.tolerance < 1.0)) {
            fail("defaults.tolerance: must lie in (0,1)");
        }
    }
    if (node.contains("resolution")) {
        d.resolution = static_cast<int>(as_uint(node["resolution"], "defaults.resolution"));
        if (d.resolution < 2) fail("defaults.resolution: must be at least 2");
    }
    if (node.contains("seed")) d.seed = as_uint(node["seed"], "defaults.seed");
    if (node.contains("horizon")) {
        d.horizon = as_uint(node["horizon"], "defaults.horizon");
        if (d.horizon < 1) fail("defaults.horizon: must be at least 1");
    }
    return d;
}

}  // namespace

const IfsSequence& Scenario::sequence(std::string_view name) const {
    for (const auto& [key, seq] : sequences) {
        if (key == name) return seq;
    }
    fail("unknown sequence '" + std::string(name) + "'");
}

const EvolutionOperator& Scenario::evolution_operator(std::string_view name) const {
    for (const auto& [key, op] : operators) {
        if (key == name) return op;
    }
    fail("unknown operator '" + std::string(name) + "'");
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IfsError(Errc::ParseError,
                       "at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) throw IfsError(Errc::ParseError, "document root must be an object");

    const SpaceBox space = parse_space(require_key(doc, "space", "document"));
    AlphabetPtr alphabet = parse_alphabet(require_key(doc, "alphabet", "document"), space);
    Scenario scenario(space, alphabet);

    if (doc.contains("sequences")) {
        const json& node = doc["sequences"];
        if (!node.is_object()) fail("sequences: expected an object of named definitions");
        for (const auto& [name, def] : node.items()) {
            scenario.sequences.emplace_back(name, parse_sequence(name, def, alphabet));
        }
    }
    if (doc.contains("operators")) {
        const json& node = doc["operators"];
        if (!node.is_object()) fail("operators: expected an object of named definitions");
        for (const auto& [name, def] : node.items()) {
            scenario.operators.emplace_back(name, parse_operator(name, def));
        }
    }
    scenario.defaults = parse_defaults(doc.contains("defaults") ? doc["defaults"] : json());
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    const int dim = scenario.space.dim();
    json doc;
    doc["space"]["dim"] = dim;
    for (int i = 0; i < dim; ++i) {
        doc["space"]["lower"].push_back(scenario.space.lower()[i]);
        doc["space"]["upper"].push_back(scenario.space.upper()[i]);
    }
    doc["alphabet"] = json::array();
    for (int k = 0; k < scenario.alphabet->size(); ++k) {
        const AffineContraction& map = scenario.alphabet->map(k);
        json entry;
        entry["name"] = scenario.alphabet->name(k);
        for (int i = 0; i < dim; ++i) {
            json row = json::array();
            for (int j = 0; j < dim; ++j) row.push_back(map.matrix()[i][j]);
            entry["matrix"].push_back(row);
            entry["offset"].push_back(map.offset()[i]);
        }
        doc["alphabet"].push_back(entry);
    }
    doc["sequences"] = json::object();
    for (const auto& [name, seq] : scenario.sequences) {
        json def;
        const auto symbol_names = [&](const std::vector<int>& ids) {
            json list = json::array();
            for (int id : ids) list.push_back(scenario.alphabet->name(id));
            return list;
        };
        if (seq.kind() == IfsSequence::Kind::EventuallyPeriodic) {
            def["kind"] = "eventually_periodic";
            def["preperiod"] = symbol_names(seq.preperiod());
            def["period"] = symbol_names(seq.period());
        } else {
            def["kind"] = "block_enumeration";
            def["symbols"] = symbol_names(seq.symbol_order());
            def["start_offset"] = seq.start_offset();
        }
        doc["sequences"][name] = def;
    }
    doc["operators"] = json::object();
    for (const auto& [name, op] : scenario.operators) {
        doc["operators"][name]["kind"] = op.kind_name();
    }
    doc["defaults"]["tolerance"] = scenario.defaults.tolerance;
    doc["defaults"]["resolution"] = scenario.defaults.resolution;
    doc["defaults"]["seed"] = scenario.defaults.seed;
    doc["defaults"]["horizon"] = scenario.defaults.horizon;
    return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    try {
        return parse_scenario(read_text_file(path));
    } catch (const IfsError& e) {
        throw IfsError(e.code(), path + ": " + e.what());
    }
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
    if (a.space != b.space || a.defaults != b.defaults) return false;
    if (a.alphabet->size() != b.alphabet->size()) return false;
    for (int i = 0; i < a.alphabet->size(); ++i) {
        if (a.alphabet->name(i) != b.alphabet->name(i)) return false;
        if (!a.alphabet->map(i).same_coefficients(b.alphabet->map(i))) return false;
    }
    if (a.sequences.size() != b.sequences.size()) return false;
    for (std::size_t i = 0; i < a.sequences.size(); ++i) {
        const auto& [na, sa] = a.sequences[i];
        const auto& [nb, sb] = b.sequences[i];
        if (na != nb || sa.kind() != sb.kind()) return false;
        if (sa.preperiod() != sb.preperiod() || sa.period() != sb.period()) return false;
        if (sa.symbol_order() != sb.symbol_order()) return false;
        if (sa.start_offset() != sb.start_offset()) return false;
    }
    if (a.operators.size() != b.operators.size()) return false;
    for (std::size_t i = 0; i < a.operators.size(); ++i) {
        if (a.operators[i].first != b.operators[i].first) return false;
        if (a.operators[i].second.kind != b.operators[i].second.kind) return false;
    }
    return true;
}

std::string format_g12(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

std::string raster_to_pgm(const AttractorRaster& raster) {
    std::string out = "P2\n";
    out += std::to_string(raster.width()) + " " + std::to_string(raster.height()) + "\n255\n";
    for (int iy = raster.height() - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < raster.width(); ++ix) {
            out += raster.test(ix, iy) ? "0" : "255";
            out += ix + 1 < raster.width() ? ' ' : '\n';
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IfsError(Errc::ParseError, "cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IfsError(Errc::InvalidArgument, "cannot write file '" + path + "'");
    out << content;
    if (!out) throw IfsError(Errc::InvalidArgument, "write to '" + path + "' failed");
}

}  // namespace ifs
