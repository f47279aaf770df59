#include "doctest.h"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = COINCARS_CLI;
const std::string configs = COINCARS_DATA_DIR "/configs/";

struct Run {
    int code;
    std::string out;
};

fs::path scratch(const std::string& name)
{
    auto d = fs::temp_directory_path() / ("coincars-cli-" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args)
{
    const auto log = fs::temp_directory_path() / "coincars-cli-stdout.txt";
    const int status = std::system((cli + " " + args + " > " + log.string() + " 2>&1").c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, slurp(log)};
}

std::size_t file_count(const fs::path& dir)
{
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir))
        ++n;
    return n;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> r;
        std::istringstream cells(line);
        std::string c;
        while (std::getline(cells, c, ','))
            r.push_back(std::stod(c));
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST_CASE("compare verdicts and exit codes")
{
    const auto d = scratch("compare");
    const auto same = run("compare --config " + configs + "toluene-toluene.cfg --threshold 0.8 --out " + d.string());
    CHECK(same.code == 0);
    CHECK(same.out.rfind("SAME", 0) == 0);
    const auto side = json::parse(slurp(d / "compare.json"));
    CHECK(side.at("command") == "compare");
    CHECK(side.at("results").at("verdict") == "SAME");

    const auto diff = run("compare --config " + configs + "toluene-xylene.cfg --threshold 0.8 --out " + d.string());
    CHECK(diff.code == 1);
    CHECK(diff.out.rfind("DIFFERENT", 0) == 0);

    CHECK(run("compare --config " + configs + "toluene-toluene.cfg --threshold 1.5 --out " + d.string()).code == 2);
    CHECK(run("compare --config " + configs + "toluene-toluene.cfg --threshold 0 --out " + d.string()).code == 2);
    fs::remove_all(d);
}

TEST_CASE("usage and config errors write nothing")
{
    const auto d = scratch("bad");
    std::ofstream(d / "broken.cfg") << "{\n  \"sample\": {\"lines\": [[1000, 5, 5, 0]]},\n  \"bogus\": 1\n}\n";
    const auto out = d / "out";
    const auto r = run("simulate-map --config " + (d / "broken.cfg").string() + " --out " + out.string());
    CHECK(r.code == 2);
    CHECK(r.out.find("bogus") != std::string::npos);
    CHECK_FALSE(fs::exists(out));

    std::ofstream(d / "syntax.cfg") << "{\n  \"sample\": \n";
    CHECK(run("fringe-curve --config " + (d / "syntax.cfg").string() + " --out " + out.string()).code == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("simulate-map --config " + (d / "missing.cfg").string() + " --out " + out.string()).code == 2);
    CHECK(run("no-such-command").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("sweep-wrs 5 0 0.5 --out " + out.string()).code == 2);
    CHECK_FALSE(fs::exists(out));

    std::ofstream(d / "empty.cfg") << R"({
      "sample": {"lines": [], "nonresonant": 1},
      "reference": {"lines": [[1000, 5, 5, 0]]},
      "excitation": {"flat": {"a0": 1, "band_cm1": [700, 1300]}},
      "probe": {"type": "narrowband", "center_cm1": 12500},
      "grid": {"step_cm1": 0.25, "shift_cm1": [700, 1300], "probe_cm1": [12499, 12501]},
      "equal_power": true
    })";
    CHECK(run("fringe-curve --config " + (d / "empty.cfg").string() + " --out " + out.string()).code == 3);
    fs::remove_all(d);
}

TEST_CASE("sweep-wrs")
{
    const auto d = scratch("sweep");
    const auto r = run("sweep-wrs 0 5 0.5 --out " + d.string());
    CHECK(r.code == 0);
    const auto rows = csv_rows(d / "sweep.csv");
    REQUIRE(rows.size() == 11);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][1] < rows[i - 1][1]);
        CHECK(rows[i][2] < rows[i - 1][2]);
    }
    CHECK(rows[0][1] == doctest::Approx(1.0));
    fs::remove_all(d);
}

TEST_CASE("tmm-spectrum")
{
    const auto d = scratch("tmm");
    CHECK(run("tmm-spectrum " COINCARS_DATA_DIR "/stacks/empty.stack --out " + d.string()).code == 0);
    const auto rows = csv_rows(d / "tmm.csv");
    REQUIRE(rows.size() == 4001);
    for (const auto& r : rows) {
        CHECK(r[1] == 1.0);
        CHECK(r[2] == 0.0);
        CHECK(r[3] == 0.0);
    }
    CHECK(run("tmm-spectrum " COINCARS_DATA_DIR "/stacks/quarter-wave.stack --grid 12500,1,2 --out " + d.string())
              .code == 0);
    CHECK(csv_rows(d / "tmm.csv")[0][1] == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(run("tmm-spectrum " COINCARS_DATA_DIR "/stacks/quarter-wave.stack --grid 12500,1 --out " + d.string())
              .code == 2);
    fs::remove_all(d);
}

TEST_CASE("probe-preview is reproducible")
{
    const auto a = scratch("probe-a");
    const auto b = scratch("probe-b");
    CHECK(run("probe-preview --config " + configs + "layered-probe.cfg --out " + a.string()).code == 0);
    CHECK(run("probe-preview --config " + configs + "layered-probe.cfg --out " + b.string()).code == 0);
    for (const char* f : {"probe_spectrum.csv", "probe_temporal.csv"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK(fs::file_size(a / f) > 1000);
    }
    CHECK(run("probe-preview --config " + configs + "layered-probe.cfg --seed 5 --out " + b.string()).code == 0);
    CHECK(slurp(a / "probe_spectrum.csv") != slurp(b / "probe_spectrum.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("replay reproduces outputs")
{
    struct Case {
        std::string args;
        std::string sidecar;
        std::vector<std::string> files;
    };
    const std::vector<Case> cases{
        {"simulate-map --config " + configs + "toluene-toluene-dispersion.cfg --realizations 4", "map.json",
         {"map.csv"}},
        {"fringe-curve --config " + configs + "toluene-xylene.cfg --realizations 8 --seed 2", "curve.json",
         {"curve.csv"}},
        {"compare --config " + configs + "multiplex-single-line.cfg --threshold 0.5", "compare.json", {"curve.csv"}},
        {"probe-preview --config " + configs + "random-phase-probe.cfg", "probe.json",
         {"probe_spectrum.csv", "probe_temporal.csv"}},
        {"tmm-spectrum " COINCARS_DATA_DIR "/stacks/quarter-wave.stack --grid 12000,0.5,101", "tmm.json",
         {"tmm.csv"}},
        {"sweep-wrs 0 2 0.25", "sweep.json", {"sweep.csv"}},
    };
    for (const auto& c : cases) {
        CAPTURE(c.args);
        const auto first = scratch("replay-1");
        const auto second = scratch("replay-2");
        REQUIRE(run(c.args + " --out " + first.string()).code == 0);
        CHECK(run("replay " + (first / c.sidecar).string() + " --out " + second.string()).code == 0);
        for (const auto& f : c.files) {
            CAPTURE(f);
            CHECK(fs::exists(second / f));
            CHECK(slurp(first / f) == slurp(second / f));
        }
        const auto s1 = json::parse(slurp(first / c.sidecar));
        const auto s2 = json::parse(slurp(second / c.sidecar));
        CHECK(s1.value("config", json()) == s2.value("config", json()));
        CHECK(s1.at("args") == s2.at("args"));
        CHECK(s1.at("results") == s2.at("results"));
        CHECK(file_count(first) == file_count(second));
    }
    fs::remove_all(fs::temp_directory_path() / "coincars-cli-replay-1");
    fs::remove_all(fs::temp_directory_path() / "coincars-cli-replay-2");
}

TEST_CASE("thread count does not change output")
{
    const auto a = scratch("threads-a");
    const auto b = scratch("threads-b");
    const std::string args = "fringe-curve --config " + configs + "toluene-xylene.cfg --realizations 16 --out ";
    CHECK(std::system(("COINCARS_THREADS=1 " + cli + " " + args + a.string() + " > /dev/null").c_str()) == 0);
    CHECK(std::system(("COINCARS_THREADS=3 " + cli + " " + args + b.string() + " > /dev/null").c_str()) == 0);
    CHECK(slurp(a / "curve.csv") == slurp(b / "curve.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}
