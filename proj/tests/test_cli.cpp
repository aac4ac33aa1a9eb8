#include "qdcav/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace qdcav::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_text(const std::string& config, RunOptions opts = {})
{
    opts.timestamp = false;
    std::ostringstream out, err;
    const int code = run_scenario(config, opts, out, err);
    return {code, out.str(), err.str()};
}

std::string header_value(const std::string& csv, const std::string& key)
{
    std::istringstream is(csv);
    const std::string prefix = "# " + key + " = ";
    for (std::string line; std::getline(is, line);) {
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("qdcav-cli-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("indist scenario reproduces the analytic value")
{
    const auto r = run_text("command = indist\n[indist]\ngamma = 7.0711\nalpha = 1\ndelta = 100\nmodel = eq3\n");
    REQUIRE(r.code == kExitOk);
    CHECK(header_value(r.out, "command") == "indist");
    CHECK(header_value(r.out, "param.indist.gamma (1/ns)") == "7.0711000000000004");
    CHECK(header_value(r.out, "param.indist.model") == "eq3");
    std::istringstream is(r.out);
    std::string line, row;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("gamma_per_ns", 0) == 0) continue;
        row = line;
    }
    const double i = std::stod(row.substr(row.rfind(',') + 1));
    CHECK(i == doctest::Approx(0.767552).epsilon(1e-5));
}

TEST_CASE("config errors exit 2 without output")
{
    TempDir dir;
    RunOptions opts;
    opts.out = dir.path / "result.csv";
    for (const std::string cfg : {
             "command = indist\n[indist]\ngamma = 7\ngama = 3\n",
             "command = nosuch\n",
             "command = indist\n[indist]\ngamma = 7\nalpha = 1 ns\n",
             "command = indist\n[rates]\nq = 1\n",
             "command = indist\nbogus = 1\n[indist]\ngamma = 7\n",
             "command = indist\n[indist]\n",
             "command = indist\n[indist]\ngamma = 7\nmodel = eq9\n",
             "command = indist\n[indist]\ngamma = -7\n",
             "command indist\n",
         }) {
        const auto r = run_text(cfg, opts);
        CHECK(r.code == kExitConfig);
        CHECK_FALSE(r.err.empty());
        CHECK_FALSE(fs::exists(*opts.out));
    }
    const auto r = run_text("command = indist\n[indist]\ngamma = 7\ngama = 3\n", opts);
    CHECK(r.err.find("line 4") != std::string::npos);
    CHECK(run_text("command = nosuch\n").err.find("line 1") != std::string::npos);
}

TEST_CASE("numerical failures exit 3")
{
    CHECK(run_text("command = fit-spectrum\n[fit-spectrum]\namplitude = 0\nnoise_rel = 0\n").code == kExitNumerical);
    CHECK(run_text("command = mc-g2\n[mc-g2]\npulses = 200\n").code == kExitNumerical);
    CHECK(run_text("command = mc-g2\n[mc-g2]\npulses = 1000\nexcitation_prob = 0\n").code == kExitNumerical);
}

TEST_CASE("every command runs with defaults")
{
    for (const std::string cfg : {
             "command = rates\n",
             "command = rates\n[rates]\npreset = b\nq = 5000\n",
             "command = modevol\n[modevol]\nn = 24\n",
             "command = optimize\n[optimize]\nalpha = 1.25\nenhancement = 10\n",
             "command = mc-g2\n[mc-g2]\npulses = 20000\n",
             "command = mc-hom\n[mc-hom]\ngamma = 7.0711\ntrials = 500\n",
             "command = fit-spectrum\n",
             "command = cmt\n[cmt]\ninverted = true\n",
             "command = stack\n",
         }) {
        const auto r = run_text(cfg);
        CHECK_MESSAGE(r.code == kExitOk, cfg << r.err);
    }
}

TEST_CASE("output is independent of thread count")
{
    for (const std::string cfg : {
             "command = mc-g2\nseed = 5\n[mc-g2]\npulses = 60000\nmulti_excitation_prob = 0.2\n",
             "command = mc-hom\nseed = 5\n[mc-hom]\nlifetime = 141.42 ps\ntrials = 3000\n",
             "command = fit-spectrum\nseed = 5\n[fit-spectrum]\nnoise_rel = 0.02\n",
             "command = modevol\n[modevol]\nn = 40\n",
         }) {
        RunOptions one, four;
        four.threads = 4;
        const auto a = run_text(cfg, one);
        const auto b = run_text(cfg, four);
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK(a.out == run_text(cfg, one).out);
    }
}

TEST_CASE("seed override and JSON output")
{
    const std::string cfg = "command = fit-spectrum\nseed = 5\n";
    RunOptions s9;
    s9.seed = 9;
    const auto a = run_text(cfg);
    const auto b = run_text(cfg, s9);
    CHECK(header_value(a.out, "seed") == "5");
    CHECK(header_value(b.out, "seed") == "9");
    CHECK(a.out != b.out);

    RunOptions js;
    js.format = Format::json;
    const auto j = run_text("command = cmt\n[cmt]\npoints = 5\n", js);
    REQUIRE(j.code == kExitOk);
    const auto doc = nlohmann::json::parse(j.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 6);
    CHECK(doc[0]["_header"] == true);
    CHECK(doc[0]["command"] == "cmt");
    CHECK(doc[1].contains("omega_rad_per_ns"));
    CHECK(doc[1].contains("transmission"));
    CHECK(doc[3]["transmission"].get<double>() < 0.1);
}

TEST_CASE("timestamp line is optional")
{
    RunOptions with;
    with.timestamp = true;
    std::ostringstream out, err;
    REQUIRE(run_scenario("command = cmt\n", with, out, err) == kExitOk);
    CHECK(out.str().find("# generated = ") != std::string::npos);
    CHECK(run_text("command = cmt\n").out.find("# generated") == std::string::npos);
}

TEST_CASE("atomic write replaces the target")
{
    TempDir dir;
    const auto target = dir.path / "x.csv";
    write_atomically(target, "first\n");
    write_atomically(target, "second\n");
    CHECK(slurp(target) == "second\n");
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) files += e.is_regular_file();
    CHECK(files == 1);
}

TEST_CASE("report rows")
{
    ReportOptions opt;
    opt.mc_pulses = 200000;
    opt.hom_trials = 5000;
    const auto rows = reproduction_report(opt);
    CHECK(rows.size() >= 20);
    for (const auto& r : rows) {
        CHECK_MESSAGE(r.pass, r.claim << " computed " << r.computed << " vs " << r.reference);
        CHECK_FALSE(r.context.empty());
    }
}

TEST_CASE("command-line binary")
{
    TempDir dir;
    const fs::path tool = QDCAV_TOOL_PATH;
    {
        std::ofstream(dir.path / "indist.cfg") << "command = indist\nout = indist.csv\n[indist]\ngamma = 7.0711\n";
        std::ofstream(dir.path / "bad.cfg") << "command = indist\n[indist]\ngamma = 7\ntypo = 1\n";
    }
    auto invoke = [&](const std::string& args) {
        const std::string cmd = "\"" + tool.string() + "\" " + args + " > \"" + (dir.path / "stdout.txt").string()
                                + "\" 2> \"" + (dir.path / "stderr.txt").string() + "\"";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    CHECK(invoke("--config \"" + (dir.path / "indist.cfg").string() + "\" --no-timestamp") == 0);
    REQUIRE(fs::exists(dir.path / "indist.csv"));
    CHECK(slurp(dir.path / "indist.csv").find("# command = indist") == 0);

    CHECK(invoke("--config \"" + (dir.path / "bad.cfg").string() + "\" --out \"" + (dir.path / "bad.csv").string()
                 + "\"") == 2);
    CHECK_FALSE(fs::exists(dir.path / "bad.csv"));
    CHECK(slurp(dir.path / "stderr.txt").find("line 4") != std::string::npos);

    CHECK(invoke("--config \"" + (dir.path / "missing.cfg").string() + "\"") == 2);
    CHECK(invoke("") == 2);
    CHECK(invoke("--config \"" + (dir.path / "indist.cfg").string() + "\" --format xml") == 2);
    CHECK(invoke("--config \"" + (dir.path / "indist.cfg").string() + "\" --format json --out \""
                 + (dir.path / "j.json").string() + "\"") == 0);
    CHECK(nlohmann::json::parse(slurp(dir.path / "j.json")).is_array());
}
