// End-to-end checks of the command-line tool. argv[1] is the binary path.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nmibs/nmibs.hpp"
#include "nmibs/serialize.hpp"

namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::string g_cli;
fs::path g_dir;

void check(bool cond, const std::string& what) {
    if (cond) {
        std::cout << "ok: " << what << "\n";
    } else {
        std::cout << "FAILED: " << what << "\n";
        ++g_failures;
    }
}

int run(const std::string& args) {
    std::string cmd = g_cli + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args) {
    fs::path tmp = g_dir / "stdout.txt";
    std::string cmd = g_cli + " " + args + " > " + tmp.string() + " 2>&1";
    std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// report.csv minus the timing column
std::string strip_time_column(const std::string& csv) {
    std::stringstream in(csv), out;
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.rfind(',');
        out << line.substr(0, pos) << "\n";
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-nmibs-binary>\n";
        return 2;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "nmibs_cli_test";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);

    // a small scene on disk
    auto planted = nmibs::make_planted_cube(8, 8, 5, 2, 1, 3, 7);
    fs::path base = g_dir / "scene";
    nmibs::write_cube(planted.cube, base.string() + ".hdr",
                      base.string() + ".raw");
    nmibs::write_ground_truth(planted.gt, base.string() + "_gt.raw");
    const std::string inputs = "--header " + base.string() + ".hdr --raw " +
                               base.string() + ".raw --gt " + base.string() +
                               "_gt.raw";

    check(run("fixtures --name trend --seed 1 --out " +
              (g_dir / "fx").string()) == 0,
          "fixtures subcommand succeeds");
    check(fs::exists(g_dir / "fx" / "trend.hdr") &&
              fs::exists(g_dir / "fx" / "trend.raw") &&
              fs::exists(g_dir / "fx" / "trend_gt.raw"),
          "fixtures writes hdr/raw/gt files");

    // select
    fs::path sel_out = g_dir / "sel";
    check(run("select " + inputs + " --method nmibs --k 2 --bins 16 --out " +
              sel_out.string()) == 0,
          "select exits 0");
    check(fs::exists(sel_out / "selection.json"), "select writes selection.json");

    check(run("select " + inputs + " --method nmibs --k 0 --out " +
              sel_out.string()) == 2,
          "select --k 0 is a usage error (exit 2)");

    fs::path all_out = g_dir / "sel_all";
    check(run("select " + inputs + " --method all --k 2 --bins 16 --out " +
              all_out.string()) == 0,
          "select --method all exits 0");
    check(fs::exists(all_out / "selection_nmibs.json") &&
              fs::exists(all_out / "selection_mim.json") &&
              fs::exists(all_out / "selection_mrmr.json"),
          "select --method all writes one file per method");

    check(run("select --header /nonexistent.hdr --raw x --gt y --out " +
              sel_out.string()) == 1,
          "missing input is a runtime error (exit 1)");

    // pipeline
    fs::path pipe_out = g_dir / "pipe";
    check(run("pipeline " + inputs +
              " --method nmibs --k 2 --bins 16 --train-fraction 0.5 "
              "--seed 3 --out " +
              pipe_out.string()) == 0,
          "pipeline exits 0");
    check(fs::exists(pipe_out / "report.json") &&
              fs::exists(pipe_out / "report.csv") &&
              fs::exists(pipe_out / "map_nmibs_f50.pgm") &&
              fs::exists(pipe_out / "map_nmibs_f50.csv"),
          "pipeline writes report and map files");

    // determinism: identical flags + seed give identical maps and reports
    fs::path pipe_out2 = g_dir / "pipe2";
    run("pipeline " + inputs +
        " --method nmibs --k 2 --bins 16 --train-fraction 0.5 --seed 3 "
        "--out " +
        pipe_out2.string());
    check(slurp(pipe_out / "map_nmibs_f50.csv") ==
              slurp(pipe_out2 / "map_nmibs_f50.csv"),
          "map.csv is byte-identical across reruns");
    check(slurp(pipe_out / "map_nmibs_f50.pgm") ==
              slurp(pipe_out2 / "map_nmibs_f50.pgm"),
          "map.pgm is byte-identical across reruns");
    check(strip_time_column(slurp(pipe_out / "report.csv")) ==
              strip_time_column(slurp(pipe_out2 / "report.csv")),
          "report rows identical across reruns (timing aside)");

    // map.pgm gray mapping is bijective over the classes present
    {
        std::size_t w = 0, h = 0;
        auto labels = nmibs::read_map_csv(
            (pipe_out / "map_nmibs_f50.csv").string(), w, h);
        std::string pgm = slurp(pipe_out / "map_nmibs_f50.pgm");
        auto header_end = pgm.find("255\n") + 4;
        std::vector<int> gray_of(16, -1);
        bool bijective = true;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            int gray = static_cast<unsigned char>(pgm[header_end + i]);
            if (gray_of[labels[i]] < 0) {
                for (int other = 0; other < 16; ++other)
                    if (other != labels[i] && gray_of[other] == gray)
                        bijective = false;
                gray_of[labels[i]] = gray;
            } else if (gray_of[labels[i]] != gray) {
                bijective = false;
            }
        }
        check(bijective, "pgm gray mapping round-trips through map.csv");
    }

    // eval: a map equal to the ground truth scores 100/100
    {
        std::vector<int> perfect(planted.gt.labels.begin(),
                                 planted.gt.labels.end());
        nmibs::write_map_csv((g_dir / "perfect.csv").string(), perfect, 8, 8);
        std::string out = run_capture(
            "eval --map " + (g_dir / "perfect.csv").string() + " --header " +
            base.string() + ".hdr --gt " + base.string() + "_gt.raw --out " +
            (g_dir / "ev").string());
        check(out.find("OA 100.00") != std::string::npos &&
                  out.find("AA 100.00") != std::string::npos,
              "eval of a perfect map prints OA/AA 100.00");
        check(fs::exists(g_dir / "ev" / "eval.json"), "eval writes eval.json");
    }

    // eval: one flipped labeled pixel among 4 labeled pixels -> OA 75.00
    {
        std::vector<std::uint16_t> labels(4 * 4, 0);
        labels[0] = 1;
        labels[1] = 1;
        labels[2] = 2;
        labels[3] = 2;
        auto small = nmibs::make_ground_truth(4, 4, labels);
        nmibs::HyperCube cube;
        cube.header = {4, 4, 1, nmibs::DataType::U16};
        cube.values.assign(16, 0.0);
        fs::path sbase = g_dir / "small";
        nmibs::write_cube(cube, sbase.string() + ".hdr", sbase.string() + ".raw");
        nmibs::write_ground_truth(small, sbase.string() + "_gt.raw");
        std::vector<int> pred(small.labels.begin(), small.labels.end());
        pred[1] = 2;  // flip one labeled pixel
        nmibs::write_map_csv((g_dir / "flipped.csv").string(), pred, 4, 4);
        std::string out = run_capture(
            "eval --map " + (g_dir / "flipped.csv").string() + " --header " +
            sbase.string() + ".hdr --gt " + sbase.string() + "_gt.raw --out " +
            (g_dir / "ev2").string());
        check(out.find("OA 75.00") != std::string::npos,
              "eval reports OA 75.00 after one flip among 4 labeled pixels");

        // shape mismatch between map and gt
        check(run("eval --map " + (g_dir / "flipped.csv").string() +
                  " --header " + base.string() + ".hdr --gt " + base.string() +
                  "_gt.raw --out " + (g_dir / "ev3").string()) == 2,
              "eval with mismatched shapes exits 2");
    }

    // env var overrides the output directory
    {
        fs::path env_out = g_dir / "env_out";
        std::string cmd = "NMIBS_OUT_DIR=" + env_out.string() + " " + g_cli +
                          " select " + inputs +
                          " --method nmibs --k 2 --bins 16 --out " +
                          (g_dir / "ignored").string() + " >/dev/null 2>&1";
        std::system(cmd.c_str());
        check(fs::exists(env_out / "selection.json") &&
                  !fs::exists(g_dir / "ignored"),
              "NMIBS_OUT_DIR overrides --out");
    }

    if (g_failures > 0) {
        std::cout << g_failures << " cli check(s) failed\n";
        return 1;
    }
    std::cout << "all cli checks passed\n";
    return 0;
}
