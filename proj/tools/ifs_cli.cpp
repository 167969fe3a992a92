// Command-line front end: scenario-driven queries over contraction sequences.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.
// All numeric output goes through format_g12 (12 significant digits).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ifs/dimension.hpp"
#include "ifs/dynamics.hpp"
#include "ifs/errors.hpp"
#include "ifs/osc.hpp"
#include "ifs/raster.hpp"
#include "ifs/scenario.hpp"
#include "ifs/sequence.hpp"
#include "ifs/verify.hpp"

namespace {

using namespace ifs;

// Effective run settings: explicit flags win over scenario defaults.
struct Settings {
    std::uint64_t seed = 42;
    double tolerance = 0x1p-40;
    int resolution = 512;
    std::uint64_t horizon = 10000;
};

std::string one_line(const std::string& text) {
    std::string out = text;
    for (char& c : out) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

// Box syntax: "lo1,lo2;hi1,hi2" with as many coordinates as the space dimension.
SpaceBox parse_box(const std::string& text, int dim) {
    const auto semi = text.find(';');
    if (semi == std::string::npos)
        throw IfsError(Errc::InvalidArgument,
                       "open set must be written as lo1,..;hi1,.. with matching dimension");
    auto parse_side = [&](const std::string& part) {
        std::vector<double> coords;
        std::stringstream ss(part);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                coords.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw IfsError(Errc::InvalidArgument, "bad coordinate '" + item + "' in open set");
            }
        }
        return coords;
    };
    const auto lo = parse_side(text.substr(0, semi));
    const auto hi = parse_side(text.substr(semi + 1));
    if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
        throw IfsError(Errc::InvalidArgument,
                       "open set has " + std::to_string(lo.size()) + "," +
                           std::to_string(hi.size()) + " coordinates; space dimension is " +
                           std::to_string(dim));
    Vec lo_v = zero_vec();
    Vec hi_v = zero_vec();
    for (int i = 0; i < dim; ++i) {
        lo_v[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        hi_v[static_cast<std::size_t>(i)] = hi[static_cast<std::size_t>(i)];
    }
    return SpaceBox(dim, lo_v, hi_v);
}

std::string ratio_list(const FiniteIfs& system) {
    std::string out = "[";
    const auto ratios = system.ratios();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (i) out += ", ";
        out += format_g12(ratios[i]);
    }
    return out + "]";
}

int run_distance(const Scenario& scenario, const Settings& settings, const std::string& name_a,
                 const std::string& name_b, const std::string& csv_path) {
    const auto& f = scenario.sequence(name_a);
    const auto& g = scenario.sequence(name_b);
    const auto report = sequence_distance(f, g, settings.tolerance);
    std::cout << "value " << format_g12(report.value) << "\n";
    std::cout << "tail_bound " << format_g12(report.tail_bound) << "\n";
    std::cout << "truncation_depth " << report.truncation_depth << "\n";
    if (!csv_path.empty()) {
        std::string csv = "pair,value,tail_bound,truncation_depth\n";
        csv += name_a + "|" + name_b + "," + format_g12(report.value) + "," +
               format_g12(report.tail_bound) + "," + std::to_string(report.truncation_depth) +
               "\n";
        write_text_file(csv_path, csv);
    }
    return 0;
}

int run_shift(const Scenario& scenario, const Settings&, const std::string& name,
              std::uint64_t steps) {
    const auto& seq = scenario.sequence(name);
    const auto shifted = shift_n(seq, steps);
    std::cout << shifted.describe() << "\n";
    return 0;
}

int run_evolve(const Scenario& scenario, const Settings&, const std::string& name,
               const std::string& op_name, double time) {
    const auto& seq = scenario.sequence(name);
    const auto& op = scenario.evolution_operator(op_name);
    const auto evolved = evolve(op, seq, time);
    std::cout << evolved.describe() << "\n";
    if (op.kind == EvolutionOperator::Kind::ScaleExp) {
        const auto system = distinct_system(seq);
        std::string out = "scaled_ratios [";
        const auto ratios = system.ratios();
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (i) out += ", ";
            out += format_g12(op.ratio_action(ratios[i], time));
        }
        std::cout << out << "]\n";
    }
    return 0;
}

int run_classify(const Scenario& scenario, const Settings& settings, const std::string& name) {
    const auto& seq = scenario.sequence(name);
    const auto report = classify_periodicity(seq, settings.horizon);
    std::cout << report.describe() << "\n";
    return 0;
}

int run_attractor(const Scenario& scenario, const Settings& settings, const std::string& name,
                  const std::string& method, std::uint64_t points, const std::string& out_path) {
    const auto& seq = scenario.sequence(name);
    const auto system = distinct_system(seq);
    AttractorRaster raster = AttractorRaster::empty(system.space(), settings.resolution);
    if (method == "det") {
        RenderStats stats;
        raster = attractor_deterministic(system, settings.resolution, 100, 0.0, &stats);
        std::cout << "method det\n";
        std::cout << "iterations " << stats.iterations << "\n";
        std::cout << "converged " << (stats.converged ? "yes" : "no") << "\n";
    } else if (method == "chaos") {
        ChaosGameParams params;
        params.resolution = settings.resolution;
        params.n_points = points;
        params.seed = settings.seed;
        raster = attractor_chaos_game(system, params);
        std::cout << "method chaos\n";
        std::cout << "points " << points << "\n";
        std::cout << "seed " << settings.seed << "\n";
    } else {
        throw IfsError(Errc::InvalidArgument, "method must be det or chaos, got '" + method + "'");
    }
    std::cout << "occupied " << raster.occupied_count() << "\n";
    write_text_file(out_path, raster_to_pgm(raster));
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_dimension(const Scenario& scenario, const Settings&, const std::string& name,
                  const std::string& op_name, double time) {
    const auto& seq = scenario.sequence(name);
    const auto system = distinct_system(seq);
    for (const auto& [map_name, map] : system.entries()) {
        if (!map.is_similarity())
            throw IfsError(Errc::InvalidRatio,
                           "map '" + map_name + "' is not a similarity; no similarity dimension");
    }
    double uniform_ratio = 0.0;
    DimensionReport base;
    if (system.uniform_similarity(&uniform_ratio)) {
        base = uniform_dimension(static_cast<int>(system.size()), uniform_ratio);
    } else {
        base = moran_dimension(system.ratios());
    }
    std::cout << "s " << format_g12(base.s) << "\n";
    std::cout << "method " << base.method_name() << "\n";
    if (op_name.empty()) return 0;

    const auto& op = scenario.evolution_operator(op_name);
    if (!system.uniform_similarity(&uniform_ratio))
        throw IfsError(Errc::InvalidRatio,
                       "evolved dimension formula needs a uniform similarity ratio");
    const double scaled = op.ratio_action(uniform_ratio, time);
    const auto by_formula = evolved_dimension(base.s, uniform_ratio, scaled);
    std::vector<double> scaled_ratios(system.size(), scaled);
    const auto by_solve = moran_dimension(scaled_ratios);
    std::cout << "s_evolved_formula " << format_g12(by_formula.s) << "\n";
    std::cout << "s_evolved_resolved " << format_g12(by_solve.s) << "\n";
    std::cout << "agreement " << format_g12(std::abs(by_formula.s - by_solve.s)) << "\n";
    return 0;
}

int run_osc(const Scenario& scenario, const Settings&, const std::string& name,
            const std::string& open_set_text) {
    const auto& seq = scenario.sequence(name);
    const auto system = distinct_system(seq);
    OscResult result = open_set_text.empty()
                           ? osc_check(system)
                           : osc_check(system, parse_box(open_set_text, system.space().dim()));
    std::cout << "verdict " << result.verdict_name() << "\n";
    if (result.pair_first >= 0) {
        std::cout << "pair " << system.name(result.pair_first);
        if (result.pair_second >= 0) std::cout << " " << system.name(result.pair_second);
        std::cout << "\n";
    }
    if (result.has_witness)
        std::cout << "witness " << vec_to_string(result.witness, system.space().dim()) << "\n";
    std::cout << "detail " << result.detail << "\n";
    return 0;
}

int run_verify(const Settings& settings, const std::string& suite, const std::string& report_path) {
    const auto results = verify_suite(suite, settings.seed);
    const std::string csv = results_to_csv(results);
    std::cout << csv;
    if (!report_path.empty()) write_text_file(report_path, csv);
    return all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contraction sequence dynamics toolkit"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string scenario_path;
    Settings flags;
    app.add_option("--scenario", scenario_path, "scenario document (JSON)");
    auto* opt_seed = app.add_option("--seed", flags.seed, "random seed")->capture_default_str();
    auto* opt_tol = app.add_option("--tolerance", flags.tolerance, "distance truncation tolerance")
                        ->capture_default_str();
    auto* opt_res =
        app.add_option("--resolution", flags.resolution, "raster resolution")->capture_default_str();
    auto* opt_hor =
        app.add_option("--horizon", flags.horizon, "periodicity search horizon")->capture_default_str();

    auto* cmd_distance = app.add_subcommand("distance", "distance between two sequences");
    std::string seq_a, seq_b, distance_csv;
    cmd_distance->add_option("seq1", seq_a, "first sequence name")->required();
    cmd_distance->add_option("seq2", seq_b, "second sequence name")->required();
    cmd_distance->add_option("--csv", distance_csv, "also write a CSV row to this path");

    auto* cmd_shift = app.add_subcommand("shift", "apply the shift map");
    std::string shift_seq;
    std::uint64_t shift_steps = 1;
    cmd_shift->add_option("seq", shift_seq, "sequence name")->required();
    cmd_shift->add_option("--steps", shift_steps, "number of shifts")->capture_default_str();

    auto* cmd_evolve = app.add_subcommand("evolve", "apply an evolution operator");
    std::string evolve_seq, evolve_op;
    double evolve_time = 0.0;
    cmd_evolve->add_option("seq", evolve_seq, "sequence name")->required();
    cmd_evolve->add_option("--operator", evolve_op, "operator name")->required();
    cmd_evolve->add_option("--time", evolve_time, "evolution time")->required();

    auto* cmd_classify = app.add_subcommand("classify", "periodicity classification");
    std::string classify_seq;
    cmd_classify->add_option("seq", classify_seq, "sequence name")->required();

    auto* cmd_attractor = app.add_subcommand("attractor", "render the attractor raster");
    std::string attractor_seq, attractor_method = "det", attractor_out;
    std::uint64_t attractor_points = 1000000;
    cmd_attractor->add_option("seq", attractor_seq, "sequence name")->required();
    cmd_attractor->add_option("--method", attractor_method, "det or chaos")->capture_default_str();
    cmd_attractor->add_option("--points", attractor_points, "chaos game sample count")
        ->capture_default_str();
    cmd_attractor->add_option("--out", attractor_out, "output PGM path")->required();

    auto* cmd_dimension = app.add_subcommand("dimension", "similarity dimension");
    std::string dimension_seq, dimension_op;
    double dimension_time = 0.0;
    cmd_dimension->add_option("seq", dimension_seq, "sequence name")->required();
    cmd_dimension->add_option("--operator", dimension_op, "evolution operator name");
    cmd_dimension->add_option("--time", dimension_time, "evolution time");

    auto* cmd_osc = app.add_subcommand("osc", "open set condition check");
    std::string osc_seq, osc_open_set;
    cmd_osc->add_option("seq", osc_seq, "sequence name")->required();
    cmd_osc->add_option("--open-set", osc_open_set, "candidate open set as lo1,..;hi1,..");

    auto* cmd_verify = app.add_subcommand("verify", "run the invariant suites");
    std::string verify_suite_name = "all", verify_report;
    cmd_verify->add_option("--suite", verify_suite_name, "all|metrics|shift|periodic|dimension|osc")
        ->capture_default_str();
    cmd_verify->add_option("--report", verify_report, "also write the CSV report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", one_line(e.what()).c_str());
        return 2;
    }

    try {
        std::optional<Scenario> scenario;
        if (!scenario_path.empty()) scenario.emplace(load_scenario(scenario_path));

        Settings settings = flags;
        if (scenario) {
            // Unset flags inherit the scenario defaults.
            if (!opt_seed->count()) settings.seed = scenario->defaults.seed;
            if (!opt_tol->count()) settings.tolerance = scenario->defaults.tolerance;
            if (!opt_res->count()) settings.resolution = scenario->defaults.resolution;
            if (!opt_hor->count()) settings.horizon = scenario->defaults.horizon;
        }

        auto need_scenario = [&]() -> const Scenario& {
            if (!scenario)
                throw IfsError(Errc::InvalidArgument, "this subcommand requires --scenario");
            return *scenario;
        };

        if (cmd_distance->parsed())
            return run_distance(need_scenario(), settings, seq_a, seq_b, distance_csv);
        if (cmd_shift->parsed()) return run_shift(need_scenario(), settings, shift_seq, shift_steps);
        if (cmd_evolve->parsed())
            return run_evolve(need_scenario(), settings, evolve_seq, evolve_op, evolve_time);
        if (cmd_classify->parsed()) return run_classify(need_scenario(), settings, classify_seq);
        if (cmd_attractor->parsed())
            return run_attractor(need_scenario(), settings, attractor_seq, attractor_method,
                                 attractor_points, attractor_out);
        if (cmd_dimension->parsed()) {
            if (!dimension_op.empty() && !cmd_dimension->count("--time"))
                throw IfsError(Errc::InvalidArgument, "--operator requires --time");
            return run_dimension(need_scenario(), settings, dimension_seq, dimension_op,
                                 dimension_time);
        }
        if (cmd_osc->parsed()) return run_osc(need_scenario(), settings, osc_seq, osc_open_set);
        if (cmd_verify->parsed()) return run_verify(settings, verify_suite_name, verify_report);
        throw IfsError(Errc::InvalidArgument, "no subcommand given");
    } catch (const IfsError& e) {
        std::cerr << "error: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << one_line(e.what()) << "\n";
        return 2;
    }
}
