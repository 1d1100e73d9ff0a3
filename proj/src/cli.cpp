#include "rotrack/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotrack/benchmark.hpp"
#include "rotrack/synth.hpp"
#include "rotrack/tracker.hpp"

namespace rotrack {

namespace fs = std::filesystem;

namespace {

void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

TrackerConfig load_config(const std::string& config_path, const std::string& variant) {
    TrackerConfig cfg;
    if (!config_path.empty()) cfg = config_from_json(read_file(config_path));
    if (!variant.empty()) cfg = apply_variant(cfg, variant);
    cfg.validate();
    return cfg;
}

NamedResult result_from_dir(const std::string& dir) {
    const fs::path p(dir);
    const fs::path file = fs::is_directory(p) ? p / "result.json" : p;
    nlohmann::json j = nlohmann::json::parse(read_file(file.string()));
    NamedResult r;
    r.name = j.at("sequence").get<std::string>();
    r.auc = j.at("auc").get<double>();
    r.precision_at_20 = j.at("precision_at_20").get<double>();
    return r;
}

void print_summary(const Sequence& seq, const EvalResult& result, const std::string& mode) {
    std::cout << seq.name << " [" << mode << "]: " << result.frames << " frames, AUC "
              << result.auc << ", precision@20 " << result.precision_at_20 << " ("
              << result.frames / std::max(result.seconds, 1e-9) << " fps)\n";
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
    CLI::App app{"rotation-adaptive correlation tracking toolkit"};
    app.require_subcommand(1);

    std::string t_seq, t_config, t_variant, t_out = "result.json";
    CLI::App* track = app.add_subcommand("track", "one-pass tracking run, writes result.json");
    track->add_option("--seq", t_seq, "sequence directory")->required();
    track->add_option("--config", t_config, "tracker config JSON file");
    track->add_option("--variant", t_variant, "baseline|D|DS|DSR");
    track->add_option("--out", t_out, "output file (default result.json)");

    std::string e_seq, e_config, e_variant, e_mode = "ope", e_out;
    int e_segments = 3;
    CLI::App* eval = app.add_subcommand("eval", "evaluate OPE or TRE, writes result.json + curves.csv");
    eval->add_option("--seq", e_seq, "sequence directory")->required();
    eval->add_option("--config", e_config, "tracker config JSON file");
    eval->add_option("--variant", e_variant, "baseline|D|DS|DSR");
    eval->add_option("--mode", e_mode, "ope|tre (default ope)");
    eval->add_option("--segments", e_segments, "TRE start segments (default 3)");
    eval->add_option("--out", e_out, "output directory")->required();

    std::string s_preset, s_out, s_velocity;
    int s_frames = 60;
    std::uint64_t s_seed = 1;
    double s_omega = 0.0, s_scale_rate = 1.0, s_noise = 2.0, s_jitter = 0.0;
    CLI::App* synth = app.add_subcommand("synth", "render a synthetic sequence with exact ground truth");
    synth->add_option("--preset", s_preset, "translate|rotate|scale|combined")->required();
    synth->add_option("--frames", s_frames, "frame count (default 60)");
    synth->add_option("--seed", s_seed, "random seed (default 1)");
    synth->add_option("--out", s_out, "output directory")->required();
    synth->add_option("--omega", s_omega, "rotation per frame, degrees");
    synth->add_option("--velocity", s_velocity, "VX,VY pixels per frame");
    synth->add_option("--scale-rate", s_scale_rate, "size multiplier per frame");
    synth->add_option("--noise", s_noise, "additive pixel noise sigma");
    synth->add_option("--jitter", s_jitter, "render-only centroid jitter sigma");

    std::vector<std::string> c_baseline, c_variant;
    std::string c_out = "report.json";
    CLI::App* compare = app.add_subcommand("compare", "A/B deltas and sign test over result dirs");
    compare->add_option("--baseline", c_baseline, "baseline result dirs")->required();
    compare->add_option("--variant", c_variant, "variant result dirs")->required();
    compare->add_option("--out", c_out, "output report.json path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nuse --help for usage\n";
        return 1;
    }

    try {
        if (track->parsed()) {
            const TrackerConfig cfg = load_config(t_config, t_variant);
            const Sequence seq = load_sequence(t_seq);
            const EvalResult result = run_ope(seq, cfg);
            write_atomic(t_out, eval_to_json(result, cfg, seq.name));
            print_summary(seq, result, "ope");
            return 0;
        }
        if (eval->parsed()) {
            if (e_mode != "ope" && e_mode != "tre") {
                std::cerr << "eval: unknown --mode '" << e_mode << "', expected ope or tre\n";
                return 1;
            }
            const TrackerConfig cfg = load_config(e_config, e_variant);
            const Sequence seq = load_sequence(e_seq);
            const EvalResult result =
                e_mode == "ope" ? run_ope(seq, cfg) : run_tre(seq, cfg, e_segments);
            write_atomic((fs::path(e_out) / "result.json").string(),
                         eval_to_json(result, cfg, seq.name));
            write_atomic((fs::path(e_out) / "curves.csv").string(), eval_to_csv(result));
            print_summary(seq, result, e_mode);
            return 0;
        }
        if (synth->parsed()) {
            SynthParams params = synth_preset(s_preset);
            params.frames = s_frames;
            params.seed = s_seed;
            if (synth->count("--omega") > 0) params.omega_deg = s_omega;
            if (!s_velocity.empty()) {
                std::istringstream in(s_velocity);
                char comma = 0;
                if (!(in >> params.velocity.x >> comma >> params.velocity.y) || comma != ',')
                    throw std::runtime_error("synth: --velocity expects VX,VY");
            }
            if (synth->count("--scale-rate") > 0) params.scale_rate = s_scale_rate;
            if (synth->count("--noise") > 0) params.noise_sigma = s_noise;
            if (synth->count("--jitter") > 0) params.jitter_sigma = s_jitter;
            const Sequence seq = synth_sequence(params, s_out);
            std::cout << "wrote " << seq.frame_paths.size() << " frames to " << s_out << "\n";
            return 0;
        }
        if (compare->parsed()) {
            std::vector<NamedResult> base, var;
            for (const std::string& d : c_baseline) base.push_back(result_from_dir(d));
            for (const std::string& d : c_variant) var.push_back(result_from_dir(d));
            const CompareReport report = compare_results(base, var);
            write_atomic(c_out, compare_to_json(report));
            std::cout << compare_table(report);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace rotrack
