#pragma once

#include <atomic>
#include <chrono>
#include <thread>

#include "sapoa/strategies.hpp"

namespace sapoa {

struct RunRecord {
    std::string map_name;
    int category = 0;
    std::string strategy;
    std::uint64_t seed = 0;
    std::string outcome;  // success / fail_* / invalid
    long extension_steps = 0;
    // Only meaningful for successful runs; failed-run steps are not counted.
    std::optional<int> makespan;
    std::optional<long> total_moves;
    long wall_time_ms = 0;
};

struct CategorySummary {
    int category = 0;
    std::string strategy;
    double success_rate = 0.0;
    double mean_extension_steps = 0.0;
    double mean_makespan = 0.0;
};

inline std::uint64_t derive_run_seed(std::uint64_t base_seed,
                                     const std::string& map_name,
                                     const std::string& strategy,
                                     int run_index) {
    std::uint64_t h = hash_string(map_name + "|" + strategy);
    return base_seed ^ mix_seed(h, static_cast<std::uint64_t>(run_index));
}

// One planning + navigation run, with the Success outcome independently
// re-validated against the safety invariants before it is counted.
inline RunRecord run_single(const World& world, StrategyKind kind,
                            std::uint64_t seed, Trace* trace_out = nullptr) {
    RunRecord rec;
    rec.map_name = world.name();
    rec.category = world.category();
    rec.strategy = strategy_name(kind);
    rec.seed = seed;

    auto t0 = std::chrono::steady_clock::now();
    Plan p = plan(world, kind, seed);
    rec.extension_steps = p.extension_steps;
    if (!p.ok) {
        rec.outcome = "fail_plan";
    } else {
        Trace trace = run_plan(world, p);
        std::string why;
        if (!validate_trace(trace, world, strategy_clearance_units(kind),
                            &why)) {
            rec.outcome = "invalid";
        } else {
            rec.outcome = outcome_name(trace.outcome);
            if (trace.outcome == Outcome::Success) {
                rec.makespan = trace.makespan;
                rec.total_moves = trace.total_moves;
            }
        }
        if (trace_out) *trace_out = std::move(trace);
    }
    auto t1 = std::chrono::steady_clock::now();
    rec.wall_time_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return rec;
}

// Full factorial protocol: every (map, strategy, run) cell, seeds derived by
// hashing so parallel scheduling cannot change any result.
inline std::vector<RunRecord> run_suite(const std::vector<World>& worlds,
                                        const std::vector<StrategyKind>& kinds,
                                        int runs_per_map,
                                        std::uint64_t base_seed,
                                        int jobs = 0) {
    if (runs_per_map < 1)
        throw std::invalid_argument("run_suite: runs_per_map < 1");
    struct Job {
        const World* world;
        StrategyKind kind;
        std::uint64_t seed;
    };
    std::vector<Job> work;
    for (const World& w : worlds)
        for (StrategyKind k : kinds)
            for (int r = 0; r < runs_per_map; ++r)
                work.push_back(
                    {&w, k,
                     derive_run_seed(base_seed, w.name(), strategy_name(k), r)});

    std::vector<RunRecord> records(work.size());
    if (jobs <= 0)
        jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= work.size()) return;
            records[i] = run_single(*work[i].world, work[i].kind, work[i].seed);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

inline std::vector<CategorySummary> summarize(
    const std::vector<RunRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("summarize: no records");
    struct Bucket {
        long runs = 0, successes = 0;
        double ext_sum = 0, makespan_sum = 0;
    };
    std::map<std::pair<int, std::string>, Bucket> buckets;
    for (const auto& r : records) {
        Bucket& b = buckets[{r.category, r.strategy}];
        ++b.runs;
        if (r.outcome == "success") {
            ++b.successes;
            b.ext_sum += static_cast<double>(r.extension_steps);
            b.makespan_sum += static_cast<double>(*r.makespan);
        }
    }
    std::vector<CategorySummary> out;
    for (const auto& [key, b] : buckets) {
        CategorySummary s;
        s.category = key.first;
        s.strategy = key.second;
        s.success_rate =
            static_cast<double>(b.successes) / static_cast<double>(b.runs);
        if (b.successes > 0) {
            s.mean_extension_steps =
                b.ext_sum / static_cast<double>(b.successes);
            s.mean_makespan = b.makespan_sum / static_cast<double>(b.successes);
        }
        out.push_back(std::move(s));
    }
    return out;
}

// CSV emission. wall_time_ms is inherently non-reproducible; pass
// include_timing = false where byte-stable output matters.
inline std::string results_csv(const std::vector<RunRecord>& records,
                               bool include_timing = true) {
    std::string out =
        "map,category,strategy,seed,outcome,extension_steps,makespan,"
        "total_moves,wall_time_ms\n";
    char buf[256];
    for (const auto& r : records) {
        std::string makespan = r.makespan ? std::to_string(*r.makespan) : "";
        std::string moves =
            r.total_moves ? std::to_string(*r.total_moves) : "";
        std::snprintf(buf, sizeof buf, "%s,%d,%s,%llu,%s,%ld,%s,%s,%ld\n",
                      r.map_name.c_str(), r.category, r.strategy.c_str(),
                      static_cast<unsigned long long>(r.seed),
                      r.outcome.c_str(), r.extension_steps, makespan.c_str(),
                      moves.c_str(), include_timing ? r.wall_time_ms : 0L);
        out += buf;
    }
    return out;
}

inline std::string summary_csv(const std::vector<CategorySummary>& summaries) {
    std::string out =
        "category,strategy,success_rate,mean_extension_steps,mean_makespan\n";
    char buf[256];
    for (const auto& s : summaries) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.4f,%.2f,%.2f\n", s.category,
                      s.strategy.c_str(), s.success_rate,
                      s.mean_extension_steps, s.mean_makespan);
        out += buf;
    }
    return out;
}

namespace detail {

inline void svg_rect(std::string& out, int x, int y, int px,
                     const char* color) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                  "fill=\"%s\"/>\n",
                  x * px, y * px, px, px, color);
    out += buf;
}

inline std::string svg_frame(const World& world,
                             const std::vector<Group>& groups) {
    constexpr int px = 12;
    char head[160];
    std::snprintf(head, sizeof head,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\">\n",
                  world.width() * px, world.height() * px);
    std::string out = head;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Cell c : world.targets()) svg_rect(out, c.x, c.y, px, "#e05050");
    for (Cell c : world.obstacles()) svg_rect(out, c.x, c.y, px, "#8a8a8a");
    for (const Group& g : groups)
        for (Cell c : g.cells) svg_rect(out, c.x, c.y, px, "#3cab54");
    out += "</svg>\n";
    return out;
}

}  // namespace detail

// One SVG document per tick, legend matching the benchmark maps: obstacles
// gray, robots green, targets red. Byte-deterministic for a fixed trace.
inline std::vector<std::string> render_trace(const Trace& trace,
                                             const World& world) {
    if (trace.steps.empty())
        throw std::invalid_argument("render_trace: empty trace");
    std::vector<std::string> frames;
    frames.reserve(trace.steps.size());
    for (const auto& step : trace.steps)
        frames.push_back(detail::svg_frame(world, step.groups));
    return frames;
}

// Single animated SVG (frame-by-frame visibility toggles).
inline std::string render_trace_animated(const Trace& trace,
                                         const World& world,
                                         double seconds_per_tick = 0.15) {
    if (trace.steps.empty())
        throw std::invalid_argument("render_trace: empty trace");
    constexpr int px = 12;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                  "height=\"%d\">\n",
                  world.width() * px, world.height() * px);
    std::string out = buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (Cell c : world.targets())
        detail::svg_rect(out, c.x, c.y, px, "#e05050");
    for (Cell c : world.obstacles())
        detail::svg_rect(out, c.x, c.y, px, "#8a8a8a");
    double total = seconds_per_tick * static_cast<double>(trace.steps.size());
    for (size_t i = 0; i < trace.steps.size(); ++i) {
        std::snprintf(buf, sizeof buf,
                      "<g display=\"none\"><animate attributeName=\"display\" "
                      "values=\"%s\" keyTimes=\"0;%.6f;%.6f;1\" dur=\"%.3fs\" "
                      "repeatCount=\"indefinite\"/>\n",
                      "none;inline;none;none",
                      static_cast<double>(i) /
                          static_cast<double>(trace.steps.size()),
                      static_cast<double>(i + 1) /
                          static_cast<double>(trace.steps.size()),
                      total);
        out += buf;
        for (const Group& g : trace.steps[i].groups)
            for (Cell c : g.cells) detail::svg_rect(out, c.x, c.y, px, "#3cab54");
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace sapoa
