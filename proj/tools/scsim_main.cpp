// scsim command-line front end: single drives, Monte Carlo batches, external
// PDP analysis, and config validation.
//
// Exit codes: 0 success, 2 config error, 3 runtime error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scsim/pdp.hpp"
#include "scsim/run.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Every scalar leaf of the config JSON becomes a CLI flag whose name mirrors
// the config path (e.g. --scenario.lambda_c_per_s). Flag values override the
// file values.
void collect_scalar_paths(const json& node, const std::string& prefix,
                          std::vector<std::string>& paths) {
    for (const auto& [key, value] : node.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            collect_scalar_paths(value, path, paths);
        } else if (!value.is_array()) {
            paths.push_back(path);
        }
    }
}

void apply_override(json& config, const std::string& path, const std::string& text) {
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (dot == std::string::npos) {
            json& leaf = (*node)[key];
            if (leaf.is_string()) {
                leaf = text;
            } else if (leaf.is_boolean()) {
                leaf = text == "true" || text == "1";
            } else if (leaf.is_number_integer() || leaf.is_number_unsigned()) {
                leaf = json::parse(text);
            } else {
                leaf = std::stod(text);
            }
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

struct ConfigCli {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string output_dir_flag;
};

void add_config_options(CLI::App* cmd, ConfigCli& cc) {
    cmd->add_option("--config", cc.config_path, "run config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    std::vector<std::string> paths;
    collect_scalar_paths(scsim::config_to_json(scsim::RunConfig{}), "", paths);
    for (const std::string& path : paths) {
        cmd->add_option_function<std::string>(
            "--" + path, [&cc, path](const std::string& v) { cc.overrides[path] = v; },
            "override config value " + path);
    }
}

scsim::RunConfig resolve_config(const ConfigCli& cc) {
    std::ifstream in(cc.config_path);
    json j;
    in >> j;
    json merged = scsim::config_to_json(scsim::RunConfig{});
    merged.merge_patch(j);
    for (const auto& [path, value] : cc.overrides) {
        apply_override(merged, path, value);
    }
    scsim::RunConfig cfg = scsim::config_from_json(merged);
    if (cfg.output_dir.empty()) {
        if (const char* env = std::getenv("SCSIM_OUTPUT_DIR")) {
            cfg.output_dir = env;
        } else {
            cfg.output_dir = "out";
        }
    }
    return cfg;
}

int report_config_errors(const std::vector<std::string>& errors) {
    for (const std::string& e : errors) {
        std::cerr << "config error: " << e << "\n";
    }
    return errors.empty() ? kExitOk : kExitConfig;
}

int cmd_validate(const ConfigCli& cc) {
    const scsim::RunConfig cfg = resolve_config(cc);
    const auto errors = scsim::validate_config(cfg);
    if (errors.empty()) {
        std::cout << "config ok\n";
    }
    return report_config_errors(errors);
}

int cmd_run(const ConfigCli& cc) {
    const scsim::RunConfig cfg = resolve_config(cc);
    if (const int rc = report_config_errors(scsim::validate_config(cfg)); rc != kExitOk) {
        return rc;
    }
    for (int rep = 0; rep < cfg.replicates; ++rep) {
        const scsim::DriveResult result = scsim::run_drive(cfg, rep);
        scsim::write_drive_artifacts(result, cfg);
        const auto& last = result.log.ticks.back();
        std::cout << "replicate " << rep << ": " << result.log.ticks.size()
                  << " ticks, final distance " << last.distance_m << " m, final PL "
                  << last.path_loss_db << " dB, final clusters " << last.cluster_count
                  << "\n";
    }
    std::cout << "artifacts written to " << cfg.output_dir << "\n";
    return kExitOk;
}

int cmd_mc(const ConfigCli& cc) {
    const scsim::RunConfig cfg = resolve_config(cc);
    if (const int rc = report_config_errors(scsim::validate_config(cfg)); rc != kExitOk) {
        return rc;
    }
    const scsim::McSummary summary = scsim::run_monte_carlo(cfg);
    fs::create_directories(cfg.output_dir);
    const fs::path path = fs::path(cfg.output_dir) / "mc_summary.json";
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << scsim::mc_summary_to_json(summary, cfg).dump(2) << "\n";
    std::cout << "replicates: " << summary.replicates << "\n"
              << "pooled tick events: " << summary.total_tick_events << "\n"
              << "birth/death event rate: " << summary.event_rate << "\n"
              << "summary written to " << path.string() << "\n";
    return kExitOk;
}

struct AnalyzeCli {
    std::vector<std::string> inputs;
    double spacing_m = 5.0;
    double threshold_db = 20.0;
    double min_void_ns = 25.0;
    bool average_sweeps = false;
    std::string report_path;
    std::string omni_dir;
};

// One location = one directory of directional sweeps, or one standalone CSV.
std::vector<std::pair<std::string, std::vector<std::string>>> group_locations(
    const std::vector<std::string>& inputs) {
    std::vector<std::pair<std::string, std::vector<std::string>>> locations;
    for (const std::string& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<std::string> files;
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.path().extension() == ".csv") {
                    files.push_back(entry.path().string());
                }
            }
            std::sort(files.begin(), files.end());
            if (files.empty()) {
                throw std::runtime_error("no .csv files in directory " + input);
            }
            locations.emplace_back(fs::path(input).filename().string(), std::move(files));
        } else {
            locations.emplace_back(fs::path(input).filename().string(),
                                   std::vector<std::string>{input});
        }
    }
    return locations;
}

scsim::Pdp location_pdp(const std::vector<std::string>& files, const AnalyzeCli& ac) {
    std::vector<scsim::LoadedPdp> loaded;
    loaded.reserve(files.size());
    for (const std::string& f : files) {
        loaded.push_back(scsim::read_pdp_csv_file(f));
    }
    if (ac.average_sweeps) {
        // Repeated sweeps of the same pointing angle are averaged per bin
        // before denoising.
        std::map<long long, std::vector<scsim::DirectionalPdp>> by_angle;
        for (const auto& l : loaded) {
            const long long key =
                l.azimuth_deg ? std::llround(*l.azimuth_deg * 1000.0) : -1;
            by_angle[key].push_back({l.azimuth_deg.value_or(0.0), l.pdp});
        }
        loaded.clear();
        for (auto& [key, sweeps] : by_angle) {
            scsim::Pdp mean = scsim::synthesize_omni(sweeps);
            for (double& v : mean.powers) {
                v /= static_cast<double>(sweeps.size());
            }
            scsim::LoadedPdp l;
            if (key >= 0) {
                l.azimuth_deg = static_cast<double>(key) / 1000.0;
            }
            l.pdp = std::move(mean);
            loaded.push_back(std::move(l));
        }
    }
    std::vector<scsim::DirectionalPdp> sweeps;
    for (const auto& l : loaded) {
        sweeps.push_back(
            {l.azimuth_deg.value_or(0.0), scsim::denoise(l.pdp, ac.threshold_db)});
    }
    return scsim::synthesize_omni(sweeps);
}

int cmd_analyze(const AnalyzeCli& ac) {
    const auto locations = group_locations(ac.inputs);
    std::vector<scsim::Pdp> pdps;
    std::vector<std::string> labels;
    for (const auto& [label, files] : locations) {
        pdps.push_back(location_pdp(files, ac));
        labels.push_back(label);
    }
    if (!ac.omni_dir.empty()) {
        fs::create_directories(ac.omni_dir);
        for (std::size_t k = 0; k < pdps.size(); ++k) {
            const fs::path path = fs::path(ac.omni_dir) / ("omni_" + labels[k] + ".csv");
            scsim::write_pdp_csv_file(path.string(), pdps[k], std::nullopt);
        }
    }
    const scsim::RouteAnalysis analysis = scsim::analyze_route(
        pdps, labels, ac.spacing_m, ac.threshold_db, ac.min_void_ns * 1e-9);
    json echo = {{"spacing_m", ac.spacing_m},
                 {"threshold_db", ac.threshold_db},
                 {"min_void_ns", ac.min_void_ns},
                 {"average_sweeps", ac.average_sweeps}};
    if (ac.report_path.empty()) {
        scsim::write_analysis_report(std::cout, analysis, echo.dump());
    } else {
        std::ofstream out(ac.report_path);
        if (!out) {
            throw std::runtime_error("cannot write report: " + ac.report_path);
        }
        scsim::write_analysis_report(out, analysis, echo.dump());
        std::cout << "report written to " << ac.report_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"drive-route mmWave channel simulator with spatial consistency"};
    app.require_subcommand(1);

    ConfigCli run_cc;
    ConfigCli mc_cc;
    ConfigCli validate_cc;
    AnalyzeCli ac;

    CLI::App* run_cmd = app.add_subcommand("run", "simulate drive replicates, write artifacts");
    add_config_options(run_cmd, run_cc);
    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo batch with ensemble statistics");
    add_config_options(mc_cmd, mc_cc);
    CLI::App* validate_cmd = app.add_subcommand("validate", "check a config file");
    add_config_options(validate_cmd, validate_cc);

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "run external PDP CSVs through the analysis pipeline");
    analyze_cmd
        ->add_option("inputs", ac.inputs,
                     "PDP CSV files, or directories of directional sweeps (one per location)")
        ->required();
    analyze_cmd->add_option("--spacing-m", ac.spacing_m, "distance between locations");
    analyze_cmd->add_option("--threshold-db", ac.threshold_db, "denoise threshold below peak");
    analyze_cmd->add_option("--min-void-ns", ac.min_void_ns, "inter-cluster void");
    analyze_cmd->add_flag("--average-sweeps", ac.average_sweeps,
                          "average repeated sweeps per pointing angle before denoising");
    analyze_cmd->add_option("--report", ac.report_path, "report file (default: stdout)");
    analyze_cmd->add_option("--omni-out", ac.omni_dir, "directory for synthesized omni CSVs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return cmd_run(run_cc);
        }
        if (mc_cmd->parsed()) {
            return cmd_mc(mc_cc);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(validate_cc);
        }
        if (analyze_cmd->parsed()) {
            return cmd_analyze(ac);
        }
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
