// Command-line front end for the self-assembly planner.
// Exit codes: 0 success, 1 usage / IO error, 2 algorithmic failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sapoa/sapoa.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

int category_from_name(const std::string& stem) {
    // "cat3_map1" or "exemplar_cat3" style names carry their category.
    auto pos = stem.find("cat");
    if (pos != std::string::npos && pos + 3 < stem.size()) {
        char c = stem[pos + 3];
        if (c >= '1' && c <= '5') return c - '0';
    }
    return 1;
}

sapoa::World load_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open map file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    std::string stem = fs::path(path).stem().string();
    return sapoa::parse_world(text, category_from_name(stem), stem);
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "."
                                                      : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    out << content;
}

sapoa::StrategyKind require_strategy(const std::string& name) {
    auto kind = sapoa::parse_strategy(name);
    if (!kind)
        throw CLI::ValidationError("--strategy",
                                   "unknown strategy '" + name + "'");
    return *kind;
}

std::vector<sapoa::World> load_maps_dir(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".map")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<sapoa::World> maps;
    for (const auto& f : files) maps.push_back(load_map(f.string()));
    return maps;
}

int cmd_plan(const std::string& map_path, const std::string& strategy,
             std::uint64_t seed, const std::string& out_dir) {
    sapoa::World world = load_map(map_path);
    sapoa::StrategyKind kind = require_strategy(strategy);
    sapoa::Plan p = sapoa::plan(world, kind, seed);
    if (!p.ok) {
        std::cerr << "plan failed: " << p.fail_reason << "\n";
        return kExitFail;
    }
    fs::path out(out_dir);
    if (p.tree) {
        write_file(out / "tree.json", sapoa::tree_to_json(*p.tree).dump(2));
        write_file(out / "landmarks.json",
                   sapoa::landmarks_to_json(p.landmarks).dump(2));
    }
    nlohmann::ordered_json a;
    a["mapping"] = p.assignment.mapping;
    a["total_cost"] = p.assignment.total_cost;
    write_file(out / "assignment.json", a.dump(2));
    std::cout << "plan ok: " << (p.tree ? "tree.json landmarks.json " : "")
              << "assignment.json written to " << out_dir << "\n";
    return kExitOk;
}

int cmd_run(const std::string& map_path, const std::string& strategy,
            std::uint64_t seed, const std::string& out_dir) {
    sapoa::World world = load_map(map_path);
    sapoa::StrategyKind kind = require_strategy(strategy);
    sapoa::Trace trace;
    sapoa::RunRecord rec = sapoa::run_single(world, kind, seed, &trace);
    if (rec.outcome != "fail_plan")
        write_file(fs::path(out_dir) / "trace.json",
                   sapoa::trace_to_json(trace, world, strategy, seed).dump(2));
    std::cout << "outcome: " << rec.outcome << "\n";
    return rec.outcome == "success" ? kExitOk : kExitFail;
}

int cmd_suite(const std::string& maps_dir, int runs, std::uint64_t seed,
              const std::string& out_dir, int jobs, bool dump_maps,
              bool with_timing) {
    std::vector<sapoa::World> maps = maps_dir.empty()
                                         ? sapoa::generate_suite(seed)
                                         : load_maps_dir(maps_dir);
    if (maps.empty()) {
        std::cerr << "no maps found in " << maps_dir << "\n";
        return kExitUsage;
    }
    fs::path out(out_dir);
    if (dump_maps)
        for (const auto& w : maps)
            write_file(out / "maps" / (w.name() + ".map"), w.serialize());

    std::vector<sapoa::StrategyKind> kinds(sapoa::kAllStrategies.begin(),
                                           sapoa::kAllStrategies.end());
    auto records = sapoa::run_suite(maps, kinds, runs, seed, jobs);
    write_file(out / "results.csv", sapoa::results_csv(records, with_timing));
    write_file(out / "summary.csv",
               sapoa::summary_csv(sapoa::summarize(records)));
    std::cout << records.size() << " runs -> " << (out / "results.csv").string()
              << ", " << (out / "summary.csv").string() << "\n";
    return kExitOk;
}

int cmd_render(const std::string& trace_path, const std::string& map_path,
               const std::string& out_dir, bool animate) {
    std::ifstream in(trace_path);
    if (!in)
        throw std::ios_base::failure("cannot open trace file: " + trace_path);
    sapoa::Trace trace = sapoa::trace_from_json(nlohmann::json::parse(in));
    sapoa::World world = load_map(map_path);
    fs::path out(out_dir);
    if (animate) {
        write_file(out / "trace.svg",
                   sapoa::render_trace_animated(trace, world));
        std::cout << (out / "trace.svg").string() << "\n";
    } else {
        auto frames = sapoa::render_trace(trace, world);
        char name[32];
        for (size_t i = 0; i < frames.size(); ++i) {
            std::snprintf(name, sizeof name, "frame_%05zu.svg", i);
            write_file(out / name, frames[i]);
        }
        std::cout << frames.size() << " frames -> " << out_dir << "\n";
    }
    return kExitOk;
}

int cmd_track(const std::string& trace_path, int group_id, double cell_size,
              double gains_scale, const std::string& out_dir) {
    std::ifstream in(trace_path);
    if (!in)
        throw std::ios_base::failure("cannot open trace file: " + trace_path);
    sapoa::Trace trace = sapoa::trace_from_json(nlohmann::json::parse(in));
    if (trace.steps.empty()) {
        std::cerr << "trace has no steps\n";
        return kExitUsage;
    }
    if (group_id < 0) group_id = trace.steps.back().groups.front().id;

    // The group's anchor cell per tick is the discrete path to follow.
    std::vector<sapoa::Cell> cells;
    for (const auto& step : trace.steps)
        for (const auto& g : step.groups)
            if (g.id == group_id &&
                (cells.empty() || !(g.cells.front() == cells.back())))
                cells.push_back(g.cells.front());
    if (cells.empty()) {
        std::cerr << "group " << group_id << " not present in trace\n";
        return kExitUsage;
    }

    sapoa::TrackConfig cfg;
    cfg.cell_size = cell_size;
    cfg.gains_scale = gains_scale;
    auto waypoints = sapoa::cells_to_waypoints(cells, cell_size);
    sapoa::Pose start{waypoints.front().x, waypoints.front().y, 0.0};
    auto track = sapoa::simulate_track(waypoints, sapoa::ControllerGains{},
                                       cfg, start);
    write_file(fs::path(out_dir) / "track.json",
               sapoa::continuous_trace_to_json(track).dump(2));
    std::cout << track.samples.size() << " samples -> "
              << (fs::path(out_dir) / "track.json").string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel self-assembly planner for grid modular robots"};
    app.require_subcommand(1);

    std::string map_path, maps_dir, strategy = "sapoa", out_dir = "out";
    std::string trace_path;
    std::uint64_t seed = 0;
    int runs = 20, jobs = 0, group_id = -1;
    double cell_size = 0.25, gains_scale = 0.01;
    bool animate = false, dump_maps = false, no_timing = false;

    auto* plan_cmd = app.add_subcommand("plan", "Build tree, extension and dispatch artifacts");
    plan_cmd->add_option("--map", map_path, "Map text file")->required();
    plan_cmd->add_option("--strategy", strategy, "sapoa|sapoa-nop|sapoa-ads|apaa|naive");
    plan_cmd->add_option("--seed", seed, "RNG seed");
    plan_cmd->add_option("--out", out_dir, "Output directory");

    auto* run_cmd = app.add_subcommand("run", "Plan and simulate one run, write trace.json");
    run_cmd->add_option("--map", map_path, "Map text file")->required();
    run_cmd->add_option("--strategy", strategy, "Strategy name");
    run_cmd->add_option("--seed", seed, "RNG seed");
    run_cmd->add_option("--out", out_dir, "Output directory");

    auto* suite_cmd = app.add_subcommand("suite", "Full factorial benchmark, write CSVs");
    suite_cmd->add_option("--maps-dir", maps_dir, "Directory of .map files (default: built-in suite)");
    suite_cmd->add_option("--runs", runs, "Runs per (map, strategy)");
    suite_cmd->add_option("--seed", seed, "Base seed");
    suite_cmd->add_option("--jobs", jobs, "Worker threads (0 = hardware)");
    suite_cmd->add_option("--out", out_dir, "Output directory");
    suite_cmd->add_flag("--dump-maps", dump_maps, "Also write the map files");
    suite_cmd->add_flag("--no-timing", no_timing, "Zero the wall-time column for byte-stable output");

    auto* render_cmd = app.add_subcommand("render", "Render a trace to SVG");
    render_cmd->add_option("--trace", trace_path, "trace.json from run")->required();
    render_cmd->add_option("--map", map_path, "Map text file")->required();
    render_cmd->add_option("--out", out_dir, "Output directory");
    render_cmd->add_flag("--animate", animate, "Single animated SVG instead of frames");

    auto* track_cmd = app.add_subcommand("track", "Continuous tracking of one group's path");
    track_cmd->add_option("--trace", trace_path, "trace.json from run")->required();
    track_cmd->add_option("--group", group_id, "Group id (default: final group)");
    track_cmd->add_option("--cell-size", cell_size, "Grid pitch in meters");
    track_cmd->add_option("--gains-scale", gains_scale, "Uniform PID gain factor");
    track_cmd->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (plan_cmd->parsed())
            return cmd_plan(map_path, strategy, seed, out_dir);
        if (run_cmd->parsed())
            return cmd_run(map_path, strategy, seed, out_dir);
        if (suite_cmd->parsed())
            return cmd_suite(maps_dir, runs, seed, out_dir, jobs, dump_maps,
                             !no_timing);
        if (render_cmd->parsed())
            return cmd_render(trace_path, map_path, out_dir, animate);
        if (track_cmd->parsed())
            return cmd_track(trace_path, group_id, cell_size, gains_scale,
                             out_dir);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "bad input file: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
