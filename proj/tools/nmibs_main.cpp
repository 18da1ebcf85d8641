#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmibs/nmibs.hpp"
#include "nmibs/serialize.hpp"

namespace fs = std::filesystem;
using namespace nmibs;

namespace {

// argument-level problems detected after CLI11 parsing; exit code 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputArgs {
    std::string header, raw, gt, csv;
};

void add_input_options(CLI::App* cmd, InputArgs& in) {
    auto* header = cmd->add_option("--header", in.header, "ENVI-style .hdr path");
    auto* raw = cmd->add_option("--raw", in.raw, "band-sequential .raw payload");
    auto* gt = cmd->add_option("--gt", in.gt, "u16 label raster (_gt.raw)");
    auto* csv = cmd->add_option("--csv", in.csv,
                                "csv fixture (bands + trailing label column)");
    csv->excludes(header)->excludes(raw)->excludes(gt);
    header->needs(raw);
    raw->needs(header);
}

std::pair<HyperCube, GroundTruth> load_inputs(const InputArgs& in) {
    if (!in.csv.empty()) return load_csv_fixture(in.csv);
    if (in.header.empty() || in.raw.empty() || in.gt.empty())
        throw std::runtime_error(
            "provide --header/--raw/--gt or a --csv fixture");
    HyperCube cube = load_cube(in.header, in.raw);
    GroundTruth gt = load_ground_truth(in.gt, cube.header);
    if (gt.class_count < 2)
        throw std::runtime_error("need at least 2 classes");
    return {std::move(cube), std::move(gt)};
}

std::string resolve_out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("NMIBS_OUT_DIR"); env && *env)
        return env;
    return flag_value;
}

std::vector<std::string> expand_methods(const std::string& method) {
    if (method == "all") return {"nmibs", "mim", "mrmr"};
    return {method};
}

int run_select(const InputArgs& in, const std::string& method,
               const PipelineOptions& base, const std::string& out_dir) {
    auto [cube, gt] = load_inputs(in);
    fs::create_directories(out_dir);
    auto methods = expand_methods(method);
    for (const auto& m : methods) {
        PipelineOptions opt = base;
        opt.method = m;
        SelectionResult sel = run_selection(cube, gt, opt);
        SelectionConfig cfg{opt.k, opt.th, opt.bins, -1};
        std::string name = methods.size() > 1 ? "selection_" + m + ".json"
                                              : "selection.json";
        write_text((fs::path(out_dir) / name).string(),
                   to_json(sel, cfg).dump(2) + "\n");
        std::cout << m << ": selected " << sel.selected.size() << " band(s)\n";
    }
    return 0;
}

int run_pipeline_cmd(const InputArgs& in, const std::string& method,
                     const PipelineOptions& base,
                     std::vector<double> fractions,
                     const std::string& out_dir) {
    auto [cube, gt] = load_inputs(in);
    fs::create_directories(out_dir);
    if (fractions.empty()) fractions = {0.1, 0.25, 0.5};

    std::vector<ReportRow> rows;
    json reports = json::array();
    for (const auto& m : expand_methods(method)) {
        for (double frac : fractions) {
            PipelineOptions opt = base;
            opt.method = m;
            opt.train_fraction = frac;
            PipelineOutcome out = run_pipeline(cube, gt, opt);

            std::ostringstream tag;
            tag << m << "_f" << std::setfill('0') << std::setw(2)
                << int(frac * 100 + 0.5);
            write_map_pgm((fs::path(out_dir) / ("map_" + tag.str() + ".pgm"))
                              .string(),
                          out.map_labels, gt.samples, gt.lines, gt.class_count);
            write_map_csv((fs::path(out_dir) / ("map_" + tag.str() + ".csv"))
                              .string(),
                          out.map_labels, gt.samples, gt.lines);

            json entry;
            entry["method"] = m;
            entry["k"] = int(out.selection.selected.size());
            entry["selected"] = out.selection.selected;
            entry["report"] = to_json(out.report);
            reports.push_back(std::move(entry));
            rows.push_back({m, int(out.selection.selected.size()), frac,
                            out.report.oa, out.report.aa,
                            out.report.elapsed_seconds});
            std::cout << std::fixed << std::setprecision(2) << m << " k="
                      << out.selection.selected.size() << " train="
                      << int(frac * 100 + 0.5) << "%: OA "
                      << 100.0 * out.report.oa << " AA "
                      << 100.0 * out.report.aa << "\n";
        }
    }
    write_text((fs::path(out_dir) / "report.json").string(),
               reports.dump(2) + "\n");
    write_text((fs::path(out_dir) / "report.csv").string(), report_csv(rows));
    return 0;
}

int run_eval(const std::string& map_path, const std::string& header_path,
             const std::string& gt_path, const std::string& out_dir) {
    CubeHeader header = parse_header(header_path);
    GroundTruth gt = load_ground_truth(gt_path, header);
    std::size_t w = 0, h = 0;
    std::vector<int> map = read_map_csv(map_path, w, h);
    if (w != gt.samples || h != gt.lines)
        throw UsageError(
            "map/gt dimension mismatch: map " + std::to_string(w) + "x" +
            std::to_string(h) + ", gt " + std::to_string(gt.samples) + "x" +
            std::to_string(gt.lines));

    std::vector<int> truth, pred;
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        if (gt.labels[i] == 0) continue;
        truth.push_back(gt.labels[i]);
        pred.push_back(map[i]);
    }
    std::vector<int> classes(gt.class_count);
    std::iota(classes.begin(), classes.end(), 1);
    ConfusionMatrix cm = confusion(truth, pred, classes);
    EvalReport report;
    report.oa = overall_accuracy(cm);
    report.per_class = per_class_accuracy(cm);
    report.aa = average_accuracy(cm);

    std::cout << std::fixed << std::setprecision(2);
    std::cout << "OA " << 100.0 * report.oa << "\n";
    std::cout << "AA " << 100.0 * report.aa << "\n";
    for (int c = 0; c < gt.class_count; ++c)
        std::cout << "class " << c + 1 << " " << 100.0 * report.per_class[c]
                  << "\n";
    fs::create_directories(out_dir);
    write_text((fs::path(out_dir) / "eval.json").string(),
               to_json(report).dump(2) + "\n");
    return 0;
}

int run_fixtures(const std::string& name, std::uint64_t seed,
                 const std::string& out_dir) {
    PlantedCube fixture;
    if (name == "trend") {
        fixture = make_trend_cube(seed);
    } else if (name == "planted") {
        fixture = make_planted_cube(16, 16, 20, 4, 2, 5, seed);
    } else {
        throw std::runtime_error("unknown fixture: " + name);
    }
    fs::create_directories(out_dir);
    fs::path base = fs::path(out_dir) / name;
    write_cube(fixture.cube, base.string() + ".hdr", base.string() + ".raw");
    write_ground_truth(fixture.gt, base.string() + "_gt.raw");
    json j;
    j["signal_bands"] = fixture.signal_bands;
    j["duplicate_bands"] = fixture.duplicate_bands;
    write_text(base.string() + "_bands.json", j.dump(2) + "\n");
    std::cout << "wrote " << base.string() << ".hdr/.raw/_gt.raw\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalized-mutual-information band selection for "
                 "hyperspectral cubes, with SVM validation"};
    app.require_subcommand(1);

    InputArgs in;
    PipelineOptions opt;
    std::string method = "nmibs";
    std::string out_dir = ".";
    std::vector<double> fractions;
    std::string map_path, eval_header, eval_gt, fixture_name = "trend";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--method", method, "nmibs | mim | mrmr | all")
            ->check(CLI::IsMember({"nmibs", "mim", "mrmr", "all"}));
        cmd->add_option("--k", opt.k, "number of bands to select")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--th", opt.th, "redundancy threshold");
        cmd->add_option("--bins", opt.bins, "histogram bins")
            ->check(CLI::Range(2, 65536));
        cmd->add_option("--seed", opt.seed, "run seed");
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* sel = app.add_subcommand("select", "run band selection only");
    add_input_options(sel, in);
    add_common(sel);

    auto* pipe = app.add_subcommand(
        "pipeline", "select, split, train, predict, evaluate");
    add_input_options(pipe, in);
    add_common(pipe);
    pipe->add_option("--train-fraction", fractions,
                     "training fraction(s); default 0.1 0.25 0.5")
        ->check(CLI::Range(1e-6, 1.0 - 1e-6));
    pipe->add_option("--svm-c", opt.svm_c, "soft-margin penalty")
        ->check(CLI::PositiveNumber);
    pipe->add_option("--svm-gamma", opt.svm_gamma,
                     "RBF gamma (default 1/#bands)");

    auto* ev = app.add_subcommand("eval", "score a classified map against GT");
    ev->add_option("--map", map_path, "map.csv path")->required();
    ev->add_option("--header", eval_header, ".hdr path")->required();
    ev->add_option("--gt", eval_gt, "_gt.raw path")->required();
    ev->add_option("--out", out_dir, "output directory");

    auto* fix = app.add_subcommand("fixtures", "emit built-in synthetic cubes");
    fix->add_option("--name", fixture_name, "trend | planted");
    fix->add_option("--seed", opt.seed, "generator seed");
    fix->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    const std::string resolved_out = resolve_out_dir(out_dir);
    try {
        if (sel->parsed()) return run_select(in, method, opt, resolved_out);
        if (pipe->parsed())
            return run_pipeline_cmd(in, method, opt, fractions, resolved_out);
        if (ev->parsed())
            return run_eval(map_path, eval_header, eval_gt, resolved_out);
        if (fix->parsed())
            return run_fixtures(fixture_name, opt.seed, resolved_out);
    } catch (const std::exception& e) {
        const char* stage = sel->parsed() ? "select"
                            : pipe->parsed() ? "pipeline"
                            : ev->parsed() ? "eval"
                                           : "fixtures";
        std::cerr << stage << ": " << e.what() << "\n";
        return dynamic_cast<const UsageError*>(&e) ? 2 : 1;
    }
    return 0;
}
