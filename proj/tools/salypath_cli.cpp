// salypath: command line front end for omnidirectional saliency and
// scanpath tooling. Subcommands cover heatmap synthesis, the joint
// probability merge, the full prediction pipeline, metric reports,
// one-way ANOVA, synthetic scenes, training and inference.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "salypath/dataset.hpp"
#include "salypath/errors.hpp"
#include "salypath/fusion.hpp"
#include "salypath/heatmap.hpp"
#include "salypath/metrics.hpp"
#include "salypath/nn/checkpoint.hpp"
#include "salypath/nn/grad_check.hpp"
#include "salypath/nn/train.hpp"
#include "salypath/raster_io.hpp"
#include "salypath/scanpath_csv.hpp"
#include "salypath/stats.hpp"

namespace fs = std::filesystem;
using namespace salypath;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, MetricReport>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot open report file " + path);
    out << "image_id,metric,value\n";
    for (const auto& [id, report] : rows) {
        for (const auto& [name, value] : report.values) {
            out << id << "," << name << "," << format_value(value) << "\n";
        }
    }
    if (!out) throw FormatError("failed writing report file " + path);
}

Scanpath select_scanpath(const std::vector<Scanpath>& paths, const std::string& user) {
    if (user.empty()) return paths.front();
    for (const auto& sp : paths) {
        if (sp.user_id == user) return sp;
    }
    throw FormatError("no scanpath with user id '" + user + "'");
}

// Pairs of (image id, pred path [, gt path...]) for file-or-directory
// arguments; ids are file stems when directories are given.
std::vector<std::pair<std::string, fs::path>> collect_rasters(const fs::path& p) {
    std::vector<std::pair<std::string, fs::path>> out;
    if (fs::is_directory(p)) {
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.path().extension() == ".sal") {
                out.emplace_back(entry.path().stem().string(), entry.path());
            }
        }
        std::sort(out.begin(), out.end());
    } else {
        out.emplace_back(p.stem().string(), p);
    }
    return out;
}

struct CommonDims {
    int width = 64;
    int height = 32;
};

void add_dims(CLI::App* cmd, CommonDims& dims) {
    cmd->add_option("--width", dims.width, "Raster width in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--height", dims.height, "Raster height in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::string g_config_path; // consumed by the pre-pass below

void add_config(CLI::App* cmd) {
    cmd->add_option("--config", g_config_path,
                    "Flat key = value config file (# comments); explicit flags win");
}

// Precedence is flag > config file > built-in default: config entries
// are appended as extra flags only when the flag is absent from the
// command line, before CLI11 sees anything.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) {
                throw FormatError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
            }
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw FormatError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : args) {
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                given = true;
                break;
            }
        }
        if (given) continue;
        args.push_back(flag);
        std::istringstream tokens(value);
        std::string token;
        while (tokens >> token) args.push_back(token);
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Omnidirectional saliency and scanpath toolkit"};
    app.require_subcommand(1);

    // ---- scanpath2map ----------------------------------------------------
    struct {
        std::string in, out, user;
        CommonDims dims;
        double sigma_deg = 11.75;
    } s2m;
    {
        auto* cmd = app.add_subcommand("scanpath2map",
                                       "Render scanpath CSV to a saliency raster");
        cmd->add_option("--in", s2m.in, "Scanpath CSV")->required();
        cmd->add_option("--out", s2m.out, "Output raster (SAL1)")->required();
        cmd->add_option("--user", s2m.user,
                        "Render only this user's path (default: aggregate all)");
        add_dims(cmd, s2m.dims);
        cmd->add_option("--sigma-deg", s2m.sigma_deg, "Gaussian kernel width in degrees")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- equator-bias ----------------------------------------------------
    struct {
        std::string out;
        CommonDims dims;
        double sigma_lat_deg = 25.0;
    } ebias;
    {
        auto* cmd = app.add_subcommand("equator-bias", "Write the latitude bias map E");
        cmd->add_option("--out", ebias.out, "Output raster (SAL1)")->required();
        add_dims(cmd, ebias.dims);
        cmd->add_option("--sigma-lat-deg", ebias.sigma_lat_deg,
                        "Latitude Gaussian width in degrees")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- merge -------------------------------------------------------------
    struct {
        std::string t, s, bias, out;
        double alpha = 0.7;
        double k = 1.0;
    } merge;
    {
        auto* cmd = app.add_subcommand("merge", "k-norm joint probability merge of T and S");
        cmd->add_option("--t", merge.t, "Primary saliency raster T")->required();
        cmd->add_option("--s", merge.s, "Scanpath saliency raster S")->required();
        cmd->add_option("--bias", merge.bias, "Optional bias raster E; applies the unbias step");
        cmd->add_option("--out", merge.out, "Output raster")->required();
        cmd->add_option("--alpha", merge.alpha, "Weight of T in [0,1]")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd->add_option("--k", merge.k, "Power of the weighted mean, >= 1")
            ->check(CLI::Range(1.0, 1e9))
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- pipeline ----------------------------------------------------------
    struct {
        std::string t, scanpath, user, out;
        double alpha = 0.7, k = 1.0, sigma_deg = 11.75, sigma_lat_deg = 25.0;
    } pipe;
    {
        auto* cmd = app.add_subcommand(
            "pipeline", "Full merge chain: T + scanpath -> merged, unbiased map");
        cmd->add_option("--t", pipe.t, "Primary saliency raster T")->required();
        cmd->add_option("--scanpath", pipe.scanpath, "Scanpath CSV")->required();
        cmd->add_option("--user", pipe.user, "User id to select (default: first path)");
        cmd->add_option("--out", pipe.out, "Output raster")->required();
        cmd->add_option("--alpha", pipe.alpha, "Weight of T in [0,1]")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        cmd->add_option("--k", pipe.k, "Power of the weighted mean, >= 1")
            ->check(CLI::Range(1.0, 1e9))
            ->capture_default_str();
        cmd->add_option("--sigma-deg", pipe.sigma_deg, "Kernel width in degrees")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--sigma-lat-deg", pipe.sigma_lat_deg, "Bias width in degrees")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- eval-sal ----------------------------------------------------------
    struct {
        std::string pred, gt, fix, out, id;
        int splits = 100;
        std::uint64_t seed = 0;
    } esal;
    {
        auto* cmd = app.add_subcommand("eval-sal", "Saliency metric report (CSV)");
        cmd->add_option("--pred", esal.pred, "Predicted raster or directory of .sal files")
            ->required();
        cmd->add_option("--gt", esal.gt, "Ground-truth raster or directory")->required();
        cmd->add_option("--fix", esal.fix,
                        "Scanpath CSV (or directory of .csv) for fixation-based metrics");
        cmd->add_option("--out", esal.out, "Report CSV path")->required();
        cmd->add_option("--id", esal.id, "Image id for single-file mode (default: file stem)");
        cmd->add_option("--splits", esal.splits, "Random splits for the sampled-negative AUC")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--seed", esal.seed, "Seed for the sampled-negative AUC")
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- eval-scan ---------------------------------------------------------
    struct {
        std::string pred, gt, gt_map, out;
    } escan;
    {
        auto* cmd = app.add_subcommand("eval-scan", "Scanpath metric report (CSV)");
        cmd->add_option("--pred", escan.pred, "Predicted scanpath CSV")->required();
        cmd->add_option("--gt", escan.gt, "Ground-truth scanpath CSV")->required();
        cmd->add_option("--gt-map", escan.gt_map, "Ground-truth saliency raster");
        cmd->add_option("--out", escan.out, "Report CSV path")->required();
        add_config(cmd);
    }

    // ---- anova -------------------------------------------------------------
    struct {
        std::string in, out;
    } anova;
    {
        auto* cmd = app.add_subcommand("anova",
                                       "One-way ANOVA over a group,value CSV");
        cmd->add_option("--in", anova.in, "Input CSV with header 'group,value'")->required();
        cmd->add_option("--out", anova.out, "Output CSV (f_stat,p_value,df_between,df_within)");
        add_config(cmd);
    }

    // ---- synth -------------------------------------------------------------
    struct {
        std::string out_dir;
        CommonDims dims;
        std::uint64_t seed = 0;
        int blobs = 3, scanpaths = 36, fixations = 100;
        double noise_sigma = 0.05;
    } synth;
    {
        auto* cmd = app.add_subcommand("synth", "Write a synthetic scene to a directory");
        cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
        add_dims(cmd, synth.dims);
        cmd->add_option("--seed", synth.seed, "Scene seed")->capture_default_str();
        cmd->add_option("--blobs", synth.blobs, "Number of saliency blobs")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--scanpaths", synth.scanpaths, "Ground-truth scanpath count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--fixations", synth.fixations, "Fixations per scanpath")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--noise-sigma", synth.noise_sigma, "Image noise level")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- train -------------------------------------------------------------
    struct {
        std::string out, loss_csv;
        CommonDims dims{256, 128};
        std::uint64_t seed = 0;
        int scenes = 2, blobs = 3, steps1 = 200, steps2 = 200, fixations = 100;
        double lr = 1e-4;
        std::vector<int> widths{8, 16, 32, 64};
        int aux_width = 64;
        double beta = 25.0;
    } train;
    {
        auto* cmd = app.add_subcommand(
            "train", "Two-stage training on synthetic scenes, writes a checkpoint");
        cmd->add_option("--out", train.out, "Checkpoint path (SPW1)")->required();
        cmd->add_option("--loss-csv", train.loss_csv, "Optional stage,step,loss CSV");
        add_dims(cmd, train.dims);
        cmd->add_option("--seed", train.seed, "Master seed")->capture_default_str();
        cmd->add_option("--scenes", train.scenes, "Synthetic scene count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--blobs", train.blobs, "Blobs per scene")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--steps1", train.steps1, "Stage 1 steps")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--steps2", train.steps2, "Stage 2 steps")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--lr", train.lr, "Learning rate")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--widths", train.widths, "Four encoder block widths")
            ->expected(4)
            ->capture_default_str();
        cmd->add_option("--aux-width", train.aux_width, "Aux head width")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--fixations", train.fixations, "Predicted fixation count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--beta", train.beta, "SoftArgMax temperature")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    // ---- predict -----------------------------------------------------------
    struct {
        std::string model, in, out_map, out_scanpath, pgm;
    } predict;
    {
        auto* cmd = app.add_subcommand("predict",
                                       "Run a checkpoint on a raster stimulus");
        cmd->add_option("--model", predict.model, "Checkpoint path")->required();
        cmd->add_option("--in", predict.in, "Input raster (replicated to 3 channels)")
            ->required();
        cmd->add_option("--out-map", predict.out_map, "Predicted saliency raster");
        cmd->add_option("--out-scanpath", predict.out_scanpath, "Predicted scanpath CSV");
        cmd->add_option("--pgm", predict.pgm, "Optional 16-bit PGM export of the map");
        add_config(cmd);
    }

    // ---- gradcheck ---------------------------------------------------------
    struct {
        std::uint64_t seed = 0;
        int coords = 60;
    } gcheck;
    {
        auto* cmd = app.add_subcommand(
            "gradcheck", "Finite-difference validation of both loss paths");
        cmd->add_option("--seed", gcheck.seed, "Seed")->capture_default_str();
        cmd->add_option("--coords", gcheck.coords, "Parameter coordinates per path")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(cmd);
    }

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end()); // CLI11 consumes from the back
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    try {
        if (app.got_subcommand("scanpath2map")) {
            const auto parsed = load_scanpath_csv(s2m.in);
            if (parsed.scanpaths.empty()) throw FormatError("no scanpaths in " + s2m.in);
            if (parsed.clamp_warnings > 0) {
                std::cerr << "warning: clamped " << parsed.clamp_warnings
                          << " coordinates into [0,1)\n";
            }
            const KernelConfig kernel{s2m.sigma_deg};
            SaliencyMap map;
            if (s2m.user.empty()) {
                map = aggregate_scanpaths(parsed.scanpaths, s2m.dims.width, s2m.dims.height,
                                          kernel);
            } else {
                map = scanpath_to_map(select_scanpath(parsed.scanpaths, s2m.user),
                                      s2m.dims.width, s2m.dims.height, kernel);
            }
            save_raster(map, s2m.out);
        } else if (app.got_subcommand("equator-bias")) {
            save_raster(equator_bias(ebias.dims.width, ebias.dims.height,
                                     {ebias.sigma_lat_deg}),
                        ebias.out);
        } else if (app.got_subcommand("merge")) {
            const SaliencyMap t = load_raster(merge.t);
            const SaliencyMap s = load_raster(merge.s);
            SaliencyMap j = joint_merge(t, s, {merge.alpha, merge.k});
            if (!merge.bias.empty()) j = unbias(j, load_raster(merge.bias));
            save_raster(j, merge.out);
        } else if (app.got_subcommand("pipeline")) {
            const SaliencyMap t = load_raster(pipe.t);
            const auto parsed = load_scanpath_csv(pipe.scanpath);
            if (parsed.scanpaths.empty()) throw FormatError("no scanpaths in " + pipe.scanpath);
            const Scanpath sp = select_scanpath(parsed.scanpaths, pipe.user);

            // Intermediates are rounded to the raster precision so a
            // manual scanpath2map -> equator-bias -> merge chain over
            // files reproduces this output byte for byte.
            SaliencyMap s = scanpath_to_map(sp, t.width, t.height, {pipe.sigma_deg});
            quantize_to_f32(s);
            SaliencyMap e = equator_bias(t.width, t.height, {pipe.sigma_lat_deg});
            quantize_to_f32(e);
            save_raster(unbias(joint_merge(t, s, {pipe.alpha, pipe.k}), e), pipe.out);
        } else if (app.got_subcommand("eval-sal")) {
            const auto preds = collect_rasters(esal.pred);
            const bool dir_mode = fs::is_directory(esal.gt);
            std::vector<std::pair<std::string, MetricReport>> rows;
            for (const auto& [stem, pred_path] : preds) {
                const fs::path gt_path =
                    dir_mode ? fs::path(esal.gt) / (stem + ".sal") : fs::path(esal.gt);
                const SaliencyMap pred_map = load_raster(pred_path.string());
                const SaliencyMap gt_map = load_raster(gt_path.string());

                SaliencyMap fix;
                bool have_fix = false;
                if (!esal.fix.empty()) {
                    const fs::path fix_path = fs::is_directory(esal.fix)
                                                  ? fs::path(esal.fix) / (stem + ".csv")
                                                  : fs::path(esal.fix);
                    const auto paths = load_scanpath_csv(fix_path.string());
                    fix = fixation_map(paths.scanpaths, gt_map.width, gt_map.height);
                    have_fix = true;
                }
                const std::string id =
                    (!dir_mode && !esal.id.empty()) ? esal.id : stem;
                rows.emplace_back(id, evaluate_saliency(pred_map, gt_map,
                                                        have_fix ? &fix : nullptr,
                                                        esal.splits, esal.seed));
            }
            std::sort(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            write_report_csv(esal.out, rows);
        } else if (app.got_subcommand("eval-scan")) {
            const auto pred = load_scanpath_csv(escan.pred);
            const auto gt = load_scanpath_csv(escan.gt);
            if (pred.scanpaths.empty() || gt.scanpaths.empty()) {
                throw FormatError("eval-scan: empty scanpath file");
            }
            SaliencyMap gt_map;
            const bool have_map = !escan.gt_map.empty();
            if (have_map) gt_map = load_raster(escan.gt_map);

            std::vector<std::pair<std::string, MetricReport>> rows;
            for (const auto& sp : pred.scanpaths) {
                double mean_j = 0.0;
                for (const auto& ref : gt.scanpaths) mean_j += jarodzka(sp, ref);
                mean_j /= static_cast<double>(gt.scanpaths.size());
                MetricReport report;
                report.add("jarodzka", mean_j);
                if (have_map) report.add("hybrid_nss", hybrid_nss(sp, gt_map));
                rows.emplace_back(sp.user_id, std::move(report));
            }
            std::sort(rows.begin(), rows.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            write_report_csv(escan.out, rows);
        } else if (app.got_subcommand("anova")) {
            std::ifstream in(anova.in);
            if (!in) throw FormatError("cannot open " + anova.in);
            std::string line;
            if (!std::getline(in, line) || line.substr(0, 11) != "group,value") {
                throw FormatError("anova: expected header 'group,value'");
            }
            std::map<std::string, std::vector<double>> by_group;
            std::vector<std::string> order;
            int line_no = 1;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) continue;
                const auto comma = line.find(',');
                if (comma == std::string::npos) {
                    throw FormatError("anova line " + std::to_string(line_no) + ": missing comma");
                }
                const std::string group = line.substr(0, comma);
                const std::string value_str = line.substr(comma + 1);
                double value = 0.0;
                const auto* begin = value_str.data();
                const auto* end = begin + value_str.size();
                if (std::from_chars(begin, end, value).ptr != end) {
                    throw FormatError("anova line " + std::to_string(line_no) + ": bad value");
                }
                if (!by_group.count(group)) order.push_back(group);
                by_group[group].push_back(value);
            }
            std::vector<std::vector<double>> groups;
            for (const auto& g : order) groups.push_back(by_group[g]);
            const AnovaResult r = one_way_anova(groups);
            std::cout << "F = " << format_value(r.f_stat) << ", p = " << format_value(r.p_value)
                      << ", df = (" << r.df_between << ", " << r.df_within << ")\n";
            if (!anova.out.empty()) {
                std::ofstream out(anova.out, std::ios::trunc);
                if (!out) throw FormatError("cannot open " + anova.out);
                out << "f_stat,p_value,df_between,df_within\n"
                    << format_value(r.f_stat) << "," << format_value(r.p_value) << ","
                    << r.df_between << "," << r.df_within << "\n";
            }
        } else if (app.got_subcommand("synth")) {
            SceneConfig cfg;
            cfg.width = synth.dims.width;
            cfg.height = synth.dims.height;
            cfg.n_blobs = synth.blobs;
            cfg.n_scanpaths = synth.scanpaths;
            cfg.n_fixations = synth.fixations;
            cfg.noise_sigma = synth.noise_sigma;
            const Scene scene = synthesize_scene(synth.seed, cfg);

            fs::create_directories(synth.out_dir);
            const fs::path dir(synth.out_dir);
            // The image has identical channels by construction; one
            // plane represents it losslessly (clamped at 0 for storage).
            SaliencyMap plane(cfg.width, cfg.height);
            for (std::size_t i = 0; i < plane.size(); ++i) {
                plane.values[i] = std::max(0.0, scene.image.values[i]);
            }
            save_raster(plane, (dir / "image.sal").string());
            save_raster(scene.gt_map, (dir / "gt_map.sal").string());
            save_scanpath_csv(scene.gt_scanpaths, (dir / "scanpaths.csv").string());
        } else if (app.got_subcommand("train")) {
            nn::ModelConfig mcfg;
            mcfg.width = train.dims.width;
            mcfg.height = train.dims.height;
            std::copy_n(train.widths.begin(), 4, mcfg.widths.begin());
            mcfg.aux_width = train.aux_width;
            mcfg.n_fixations = train.fixations;
            mcfg.beta = train.beta;
            mcfg.validate();

            SceneConfig scfg;
            scfg.width = mcfg.width;
            scfg.height = mcfg.height;
            scfg.n_blobs = train.blobs;
            scfg.n_fixations = train.fixations;
            std::vector<Scene> scenes;
            for (int i = 0; i < train.scenes; ++i) {
                scenes.push_back(synthesize_scene(train.seed + 1 + i, scfg));
            }

            nn::SalyPathNet net(mcfg, train.seed);
            nn::OptimizerConfig ocfg;
            ocfg.lr = train.lr;
            ocfg.steps = train.steps1;
            const auto h1 = nn::train_stage1(net, scenes, ocfg);
            ocfg.steps = train.steps2;
            const auto h2 = nn::train_stage2(net, scenes, ocfg);

            nn::save_checkpoint(net, train.out);
            std::cout << "stage1 loss " << format_value(h1.losses.front()) << " -> "
                      << format_value(h1.losses.back()) << "\n";
            std::cout << "stage2 loss " << format_value(h2.losses.front()) << " -> "
                      << format_value(h2.losses.back()) << "\n";
            if (!train.loss_csv.empty()) {
                std::ofstream out(train.loss_csv, std::ios::trunc);
                if (!out) throw FormatError("cannot open " + train.loss_csv);
                out << "stage,step,loss\n";
                for (std::size_t i = 0; i < h1.losses.size(); ++i) {
                    out << "1," << i << "," << format_value(h1.losses[i]) << "\n";
                }
                for (std::size_t i = 0; i < h2.losses.size(); ++i) {
                    out << "2," << i << "," << format_value(h2.losses[i]) << "\n";
                }
            }
        } else if (app.got_subcommand("predict")) {
            nn::SalyPathNet net = nn::load_checkpoint(predict.model);
            const SaliencyMap plane = load_raster(predict.in);
            if (plane.width != net.config().width || plane.height != net.config().height) {
                throw ShapeError("predict: raster dimensions do not match the checkpoint");
            }
            const auto out = net.forward(image_from_plane(plane));
            if (!predict.out_map.empty()) {
                save_raster(net.saliency_to_map(out.saliency), predict.out_map);
            }
            if (!predict.pgm.empty()) {
                save_pgm16(net.saliency_to_map(out.saliency), predict.pgm);
            }
            if (!predict.out_scanpath.empty()) {
                save_scanpath_csv({net.coords_to_scanpath(out.coords)}, predict.out_scanpath);
            }
        } else if (app.got_subcommand("gradcheck")) {
            nn::ModelConfig mcfg;
            mcfg.width = 32;
            mcfg.height = 16;
            mcfg.widths = {4, 6, 8, 10};
            mcfg.aux_width = 8;
            mcfg.n_fixations = 12;
            SceneConfig scfg;
            scfg.width = mcfg.width;
            scfg.height = mcfg.height;
            scfg.n_scanpaths = 3;
            scfg.n_fixations = mcfg.n_fixations;
            const Scene scene = synthesize_scene(gcheck.seed + 1, scfg);
            nn::SalyPathNet net(mcfg, gcheck.seed);

            const auto l1 = nn::grad_check(net, scene, nn::LossKind::SaliencyL1, gcheck.coords,
                                           gcheck.seed + 2);
            const auto l2 = nn::grad_check(net, scene, nn::LossKind::ScanpathL2, gcheck.coords,
                                           gcheck.seed + 3);
            std::cout << "saliency-loss path: max relative error "
                      << format_value(l1.max_rel_error) << " over " << l1.n_coordinates
                      << " coordinates\n";
            std::cout << "scanpath-loss path: max relative error "
                      << format_value(l2.max_rel_error) << " over " << l2.n_coordinates
                      << " coordinates\n";
            if (l1.max_rel_error >= 1e-4 || l2.max_rel_error >= 1e-4) {
                std::cerr << "gradient check failed\n";
                return kExitData;
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
