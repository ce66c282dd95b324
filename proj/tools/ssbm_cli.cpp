// ssbm_cli: instance generation, batch simulation, analysis, oracles, and
// landscape export for the SSBM simulator. Exit codes: 0 ok, 2 validation or
// config error, 3 I/O error, 4 size-cap refusal.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssbm/analysis.hpp"
#include "ssbm/core.hpp"
#include "ssbm/errors.hpp"
#include "ssbm/oracle.hpp"
#include "ssbm/problems.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ssbm;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("short write to " + path);
}

std::string file_fingerprint(const std::string& path) {
    std::string bytes = read_file(path);
    return hex64(fnv1a64(bytes.data(), bytes.size()));
}

NestSchedule parse_schedule(const std::string& text) {
    NestSchedule sched;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ValidationError("bad schedule item '" + item +
                                  "' (expected n:steps)");
        try {
            int n = std::stoi(item.substr(0, colon));
            int steps = std::stoi(item.substr(colon + 1));
            sched.phases.push_back({n, steps});
        } catch (const std::exception&) {
            throw ValidationError("bad schedule item '" + item + "'");
        }
        if (sched.phases.back().n < 0 || sched.phases.back().steps <= 0)
            throw ValidationError("schedule needs n >= 0 and steps > 0, got '" +
                                  item + "'");
    }
    if (sched.phases.empty())
        throw ValidationError("schedule is empty (expected \"n:steps[,n:steps...]\")");
    return sched;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ValidationError(std::string("bad ") + what + " '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string("empty ") + what + " list");
    return out;
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RuleKind parse_rule(const std::string& name) {
    if (name == "basic") return RuleKind::Basic;
    if (name == "psi") return RuleKind::Psi;
    if (name == "composite") return RuleKind::Composite;
    if (name == "evolved") return RuleKind::Evolved;
    throw ValidationError("unknown rule '" + name +
                          "' (expected basic|psi|composite|evolved)");
}

// ---------------------------------------------------------------------- gen

struct GenArgs {
    std::string type;
    int n = 0;
    std::string offsets;
    std::string sign = "af";
    std::string weights = "random-pm1";
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    ProblemInstance inst;
    if (a.type == "circulant") {
        if (a.offsets.empty())
            throw ValidationError("circulant generator needs --offsets");
        int sign;
        if (a.sign == "af")
            sign = 1;
        else if (a.sign == "f")
            sign = -1;
        else
            throw ValidationError("unknown sign '" + a.sign + "' (expected af|f)");
        inst = gen_circulant(a.n, parse_int_list(a.offsets, "offset"), sign);
    } else if (a.type == "complete") {
        WeightMode mode;
        if (a.weights == "all-af")
            mode = WeightMode::AllAf;
        else if (a.weights == "random-pm1")
            mode = WeightMode::RandomPm1;
        else
            throw ValidationError("unknown weights '" + a.weights +
                                  "' (expected all-af|random-pm1)");
        inst = gen_complete(a.n, mode, a.seed);
    } else {
        throw ValidationError("unknown type '" + a.type +
                              "' (expected circulant|complete)");
    }
    if (a.out.empty()) throw ValidationError("gen needs --out FILE");
    save_instance(inst, a.out);
    int dmin = inst.n ? inst.degree(0) : 0, dmax = dmin;
    for (int v = 1; v < inst.n; ++v) {
        dmin = std::min(dmin, inst.degree(v));
        dmax = std::max(dmax, inst.degree(v));
    }
    std::printf("wrote %s: nodes=%d edges=%zu degree=[%d,%d] j_upper_bound=%s\n",
                a.out.c_str(), inst.n, inst.edges.size(), dmin, dmax,
                fmt17(j_upper_bound(inst)).c_str());
    return 0;
}

// ---------------------------------------------------------------------- run

struct RunArgs {
    std::string config_path;
    std::string instance;
    std::string rule = "psi";
    std::string schedule;
    double j = 0.0;
    int samples = 1;
    std::uint64_t seed = 0;
    double noise_sigma = 1e-3;
    int record_every = 10;
    bool per_step_noise = false;
    double gamma = 6.283185307179586476925286766559;
    double theta_b = 0.0;
    int workers = 0;
    std::string out;
};

// Values from --config JSON fill in every option not given on the command
// line (flags take precedence).
void merge_config_file(const CLI::App* sub, RunArgs& a) {
    json cfg;
    try {
        cfg = json::parse(read_file(a.config_path));
    } catch (const json::exception& e) {
        throw ValidationError("bad config JSON " + a.config_path + ": " + e.what());
    }
    auto absent = [&](const char* flag) { return sub->count(flag) == 0; };
    auto get = [&](const char* key, auto& var, const char* flag) {
        if (cfg.contains(key) && absent(flag)) {
            try {
                var = cfg.at(key).get<std::decay_t<decltype(var)>>();
            } catch (const json::exception& e) {
                throw ValidationError(std::string("config key '") + key +
                                      "': " + e.what());
            }
        }
    };
    get("instance", a.instance, "--instance");
    get("rule", a.rule, "--rule");
    get("schedule", a.schedule, "--schedule");
    get("j", a.j, "--j");
    get("samples", a.samples, "--samples");
    get("seed", a.seed, "--seed");
    get("noise_sigma", a.noise_sigma, "--noise-sigma");
    get("record_every", a.record_every, "--record-every");
    get("per_step_noise", a.per_step_noise, "--per-step-noise");
    get("gamma", a.gamma, "--gamma");
    get("theta_b", a.theta_b, "--theta-b");
    get("workers", a.workers, "--workers");
    get("out", a.out, "--out");
}

int cmd_run(const CLI::App* sub, RunArgs& a) {
    if (!a.config_path.empty()) merge_config_file(sub, a);
    if (a.instance.empty()) throw ValidationError("run needs --instance FILE");
    if (a.schedule.empty()) throw ValidationError("run needs --schedule");
    if (a.out.empty()) throw ValidationError("run needs --out DIR");
    if (a.samples < 1) throw ValidationError("--samples must be >= 1");

    ProblemInstance inst = load_instance(a.instance);
    RunConfig config;
    config.rule.kind = parse_rule(a.rule);
    config.rule.gamma = a.gamma;
    config.rule.theta_b = a.theta_b;
    config.schedule = parse_schedule(a.schedule);
    config.j_magnitude = a.j;
    config.noise_sigma = a.noise_sigma;
    config.seed = a.seed;
    config.record_every = a.record_every;
    config.per_step_noise = a.per_step_noise;

    int workers = a.workers > 0 ? a.workers
                                : int(std::max(1u, std::thread::hardware_concurrency()));
    auto t0 = std::chrono::steady_clock::now();
    std::string started = utc_now();
    std::vector<RunRecord> records = run_batch(inst, config, a.samples, workers);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                         .count();

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) throw IoError("cannot create directory " + a.out + ": " + ec.message());

    // Single collector, sample-index order: byte-identical for any worker count.
    std::string traj = "sample_id,step,n_active,ising_energy,cut_value\n";
    for (const RunRecord& r : records)
        for (const StepRecord& row : r.trajectory)
            traj += std::to_string(r.sample_id) + "," + std::to_string(row.step) +
                    "," + std::to_string(row.n_active) + "," + fmt17(row.energy) +
                    "," + fmt17(row.cut) + "\n";
    std::string finals = "sample_id,node,phi\n";
    for (const RunRecord& r : records)
        for (std::size_t i = 0; i < r.final_phi.size(); ++i)
            finals += std::to_string(r.sample_id) + "," + std::to_string(i) + "," +
                      fmt17(r.final_phi[i]) + "\n";
    std::string snaps = "sample_id,step,node,phi\n";
    for (const RunRecord& r : records)
        for (const auto& [step, phi] : r.snapshots)
            for (std::size_t i = 0; i < phi.size(); ++i)
                snaps += std::to_string(r.sample_id) + "," + std::to_string(step) +
                         "," + std::to_string(i) + "," + fmt17(phi[i]) + "\n";

    std::string traj_path = (fs::path(a.out) / "trajectory.csv").string();
    std::string finals_path = (fs::path(a.out) / "finals.csv").string();
    std::string snaps_path = (fs::path(a.out) / "snapshots.csv").string();
    write_file(traj_path, traj);
    write_file(finals_path, finals);
    write_file(snaps_path, snaps);

    std::string sched_text;
    for (const auto& p : config.schedule.phases) {
        if (!sched_text.empty()) sched_text += ",";
        sched_text += std::to_string(p.n) + ":" + std::to_string(p.steps);
    }
    // Extend the core config fingerprint with the sample count (it changes
    // the output set but not a single sample's stream).
    std::string fp_src = hex64(config_fingerprint(config)) +
                         ";samples=" + std::to_string(a.samples);
    json manifest;
    manifest["tool_version"] = kVersion;
    manifest["instance"] = {{"path", a.instance},
                            {"fingerprint", file_fingerprint(a.instance)}};
    manifest["config"] = {{"rule", a.rule},
                          {"gamma", config.rule.gamma},
                          {"theta_b", config.rule.theta_b},
                          {"schedule", sched_text},
                          {"j", config.j_magnitude},
                          {"noise_sigma", config.noise_sigma},
                          {"seed", config.seed},
                          {"samples", a.samples},
                          {"record_every", config.record_every},
                          {"per_step_noise", config.per_step_noise}};
    manifest["config_fingerprint"] = hex64(fnv1a64(fp_src.data(), fp_src.size()));
    manifest["master_seed"] = config.seed;
    manifest["sample_count"] = a.samples;
    manifest["wall_clock"] = {{"started_utc", started},
                              {"elapsed_seconds", elapsed},
                              {"workers", workers}};
    manifest["outputs"] = {
        {"trajectory.csv", file_fingerprint(traj_path)},
        {"finals.csv", file_fingerprint(finals_path)},
        {"snapshots.csv", file_fingerprint(snaps_path)},
    };
    write_file((fs::path(a.out) / "manifest.json").string(), manifest.dump(2) + "\n");

    double best = 0.0, mean = 0.0;
    for (std::size_t s = 0; s < records.size(); ++s) {
        double cv = records[s].trajectory.back().cut;
        best = s == 0 ? cv : std::max(best, cv);
        mean += cv;
    }
    mean /= double(records.size());
    std::printf("ran %d samples x %d steps in %.2fs: final cut best=%s mean=%s\n",
                a.samples, config.schedule.total_steps(), elapsed,
                fmt17(best).c_str(), fmt17(mean).c_str());
    std::printf("wrote %s {trajectory,finals,snapshots}.csv + manifest.json\n",
                a.out.c_str());
    return 0;
}

// ------------------------------------------------------------------ analyze

struct AnalyzeArgs {
    std::string run_dir;
    std::string steps;
    double bin_width = 1.0;
    std::string threshold = "midpoint";
    std::string out;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

int cmd_analyze(const AnalyzeArgs& a) {
    if (a.run_dir.empty()) throw ValidationError("analyze needs --run-dir DIR");
    std::string out_dir = a.out.empty() ? a.run_dir : a.out;

    ThresholdMode mode;
    if (a.threshold == "midpoint")
        mode = ThresholdMode::Midpoint;
    else if (a.threshold == "band")
        mode = ThresholdMode::Band80_20;
    else
        throw ValidationError("unknown threshold '" + a.threshold +
                              "' (expected midpoint|band)");

    // Rebuild per-sample trajectories from trajectory.csv.
    std::string traj_path = (fs::path(a.run_dir) / "trajectory.csv").string();
    std::istringstream traj_in(read_file(traj_path));
    std::string line;
    if (!std::getline(traj_in, line) ||
        line != "sample_id,step,n_active,ising_energy,cut_value")
        throw ValidationError(traj_path + ": unexpected header");
    std::vector<RunRecord> records;
    while (std::getline(traj_in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 5)
            throw ValidationError(traj_path + ": bad row '" + line + "'");
        int sid = std::stoi(cells[0]);
        if (sid < 0) throw ValidationError(traj_path + ": negative sample id");
        if (int(records.size()) <= sid) records.resize(sid + 1);
        records[sid].sample_id = sid;
        records[sid].trajectory.push_back({std::stoi(cells[1]), std::stoi(cells[2]),
                                           std::stod(cells[3]), std::stod(cells[4])});
    }
    if (records.empty()) throw ValidationError(traj_path + ": no data rows");

    // Final states from finals.csv.
    std::string finals_path = (fs::path(a.run_dir) / "finals.csv").string();
    std::istringstream finals_in(read_file(finals_path));
    if (!std::getline(finals_in, line) || line != "sample_id,node,phi")
        throw ValidationError(finals_path + ": unexpected header");
    std::vector<PseudoSpinState> finals(records.size());
    while (std::getline(finals_in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 3)
            throw ValidationError(finals_path + ": bad row '" + line + "'");
        int sid = std::stoi(cells[0]);
        int node = std::stoi(cells[1]);
        if (sid < 0 || sid >= int(finals.size()))
            throw ValidationError(finals_path + ": sample id out of range");
        auto& phi = finals[sid].phi;
        if (int(phi.size()) <= node) phi.resize(node + 1);
        phi[node] = std::stod(cells[2]);
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

    // Histograms at the requested steps (default: the final recorded step).
    std::vector<int> steps;
    if (a.steps.empty())
        steps.push_back(records[0].trajectory.back().step);
    else
        steps = parse_int_list(a.steps, "step");
    for (int step : steps) {
        CutHistogram h = cut_histogram(records, step, a.bin_width);
        std::string csv = "bin_lo,bin_hi,count\n";
        for (std::size_t b = 0; b < h.counts.size(); ++b)
            csv += fmt17(h.bin_lo[b]) + "," + fmt17(h.bin_hi[b]) + "," +
                   std::to_string(h.counts[b]) + "\n";
        write_file((fs::path(out_dir) / ("histogram_step" + std::to_string(step) +
                                         ".csv"))
                       .string(),
                   csv);
    }

    // Pattern census over thresholded final states.
    std::vector<SpinConfig> configs;
    configs.reserve(finals.size());
    for (const auto& st : finals) configs.push_back(threshold_states(st, mode));
    PatternCensus census = pattern_census(configs);
    std::string census_csv = "pattern,count\n";
    for (const auto& [pat, count] : census.table)
        census_csv += pat + "," + std::to_string(count) + "\n";
    write_file((fs::path(out_dir) / "census.csv").string(), census_csv);

    // Final-row cut summary.
    double best = 0.0, mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < records.size(); ++s) {
        double cv = records[s].trajectory.back().cut;
        best = s == 0 ? cv : std::max(best, cv);
        mean += cv;
    }
    mean /= double(records.size());
    for (const auto& r : records) {
        double d = r.trajectory.back().cut - mean;
        m2 += d * d;
    }
    double stddev = std::sqrt(m2 / double(records.size()));
    std::printf("samples=%zu best_cut=%s mean_cut=%s std_cut=%s\n", records.size(),
                fmt17(best).c_str(), fmt17(mean).c_str(), fmt17(stddev).c_str());
    std::printf("distinct_patterns=%d converged=%d/%d modal_fraction=%s\n",
                census.distinct, census.converged, census.total,
                fmt17(census.modal_fraction).c_str());
    return 0;
}

// ------------------------------------------------------------------- oracle

struct OracleArgs {
    std::string instance;
    bool exact = false;
    bool local = false;
    int starts = 20;
    std::uint64_t seed = 0;
};

int cmd_oracle(const OracleArgs& a) {
    if (a.instance.empty()) throw ValidationError("oracle needs --instance FILE");
    if (a.exact == a.local)
        throw ValidationError("pick exactly one of --exact / --local-search");
    ProblemInstance inst = load_instance(a.instance);
    OracleResult res = a.exact ? exact_best(inst)
                               : local_search_1opt(inst, a.starts, a.seed);
    std::printf("method=%s best_cut=%s best_energy=%s optimal_patterns=%zu %s=%llu\n",
                a.exact ? "exact" : "local_search_1opt", fmt17(res.best_cut).c_str(),
                fmt17(res.best_energy).c_str(), res.optimal_configs.size(),
                a.exact ? "enumerated" : "starts",
                (unsigned long long)res.enumerated_count);
    std::size_t show = std::min<std::size_t>(res.optimal_configs.size(), 16);
    for (std::size_t k = 0; k < show; ++k)
        std::printf("pattern %s\n", res.optimal_configs[k].c_str());
    if (show < res.optimal_configs.size())
        std::printf("(+%zu more)\n", res.optimal_configs.size() - show);
    return 0;
}

// ---------------------------------------------------------------- landscape

struct LandscapeArgs {
    std::string kind;
    int res = 101;
    std::string out;
};

int cmd_landscape(const LandscapeArgs& a) {
    LandscapeKind kind;
    if (a.kind == "ferro")
        kind = LandscapeKind::Ferro;
    else if (a.kind == "antiferro")
        kind = LandscapeKind::Antiferro;
    else
        throw ValidationError("unknown kind '" + a.kind +
                              "' (expected ferro|antiferro)");
    if (a.out.empty()) throw ValidationError("landscape needs --out FILE");
    LandscapeGrid g = psi_landscape(kind, a.res);
    std::string csv = "phi_i,phi_k,value\n";
    for (int i = 0; i < g.resolution; ++i)
        for (int k = 0; k < g.resolution; ++k)
            csv += fmt17(g.phi[i]) + "," + fmt17(g.phi[k]) + "," +
                   fmt17(g.value[std::size_t(i) * g.resolution + k]) + "\n";
    write_file(a.out, csv);
    std::printf("wrote %s: %dx%d grid\n", a.out.c_str(), g.resolution, g.resolution);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SSBM simulator and benchmark harness"};
    app.set_version_flag("--version", std::string("ssbm_cli ") + kVersion);
    app.require_subcommand(1);

    GenArgs gen;
    auto* sub_gen = app.add_subcommand("gen", "generate a problem instance file");
    sub_gen->add_option("--type", gen.type, "circulant|complete")->required();
    sub_gen->add_option("--n", gen.n, "node count")->required();
    sub_gen->add_option("--offsets", gen.offsets, "circulant offsets, e.g. 1,8");
    sub_gen->add_option("--sign", gen.sign, "circulant edge sign: af|f (default af)");
    sub_gen->add_option("--weights", gen.weights,
                        "complete-graph weights: all-af|random-pm1");
    sub_gen->add_option("--seed", gen.seed, "weight draw seed (complete)");
    sub_gen->add_option("--out", gen.out, "output instance file")->required();

    RunArgs run;
    auto* sub_run = app.add_subcommand("run", "simulate a batch of samples");
    sub_run->add_option("--config", run.config_path, "JSON config (flags override)");
    sub_run->add_option("--instance", run.instance, "instance file");
    sub_run->add_option("--rule", run.rule, "basic|psi|composite|evolved");
    sub_run->add_option("--schedule", run.schedule, "phases \"n:steps[,n:steps...]\"");
    sub_run->add_option("--j", run.j, "coupling magnitude");
    sub_run->add_option("--samples", run.samples, "number of independent samples");
    sub_run->add_option("--seed", run.seed, "master seed");
    sub_run->add_option("--noise-sigma", run.noise_sigma, "init noise sigma");
    sub_run->add_option("--record-every", run.record_every, "trajectory cadence");
    sub_run->add_flag("--per-step-noise", run.per_step_noise,
                      "inject noise every step (default: init only)");
    sub_run->add_option("--gamma", run.gamma, "basic-rule gamma");
    sub_run->add_option("--theta-b", run.theta_b, "basic-rule theta_B");
    sub_run->add_option("--workers", run.workers, "worker threads (0 = auto)");
    sub_run->add_option("--out", run.out, "output directory");

    AnalyzeArgs an;
    auto* sub_an = app.add_subcommand("analyze", "histograms/census from run output");
    sub_an->add_option("--run-dir", an.run_dir, "directory written by run");
    sub_an->add_option("--steps", an.steps, "histogram steps, e.g. 100,4500");
    sub_an->add_option("--bin-width", an.bin_width, "histogram bin width");
    sub_an->add_option("--threshold", an.threshold, "midpoint|band");
    sub_an->add_option("--out", an.out, "output directory (default run dir)");

    OracleArgs orc;
    auto* sub_orc = app.add_subcommand("oracle", "exact or 1-opt baseline optimum");
    sub_orc->add_option("--instance", orc.instance, "instance file");
    sub_orc->add_flag("--exact", orc.exact, "exhaustive enumeration (n <= 24)");
    sub_orc->add_flag("--local-search", orc.local, "multi-start 1-opt baseline");
    sub_orc->add_option("--starts", orc.starts, "local-search starts");
    sub_orc->add_option("--seed", orc.seed, "local-search seed");

    LandscapeArgs land;
    auto* sub_land = app.add_subcommand("landscape", "export pairwise field grid");
    sub_land->add_option("--kind", land.kind, "ferro|antiferro")->required();
    sub_land->add_option("--res", land.res, "grid resolution per axis");
    sub_land->add_option("--out", land.out, "output CSV file");

    try {
        app.parse(argc, argv);
        if (sub_gen->parsed()) return cmd_gen(gen);
        if (sub_run->parsed()) return cmd_run(sub_run, run);
        if (sub_an->parsed()) return cmd_analyze(an);
        if (sub_orc->parsed()) return cmd_oracle(orc);
        if (sub_land->parsed()) return cmd_landscape(land);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const SizeCapError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
