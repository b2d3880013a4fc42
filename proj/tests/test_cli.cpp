#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "amtopo/report.hpp"
#include "cli.hpp"

using namespace amtopo;
namespace fs = std::filesystem;

namespace {

struct Result
{
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "amtopo");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    Result r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string fixture(const std::string& name)
{
    return std::string(AMTOPO_DATA_DIR) + "/" + name;
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("amtopo_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
}

TopologyReport report_of(const Result& r)
{
    std::istringstream in(r.out);
    return parse_report(in);
}

}  // namespace

TEST_CASE("homology of a single point")
{
    const Result r = run_cli({"homology", fixture("point.txt"), "--no-timing"});
    REQUIRE(r.code == cli::kOk);
    const TopologyReport rep = report_of(r);
    CHECK(rep.homology.betti == std::vector<Index>{1});
    CHECK(rep.generators.size() == 1);
    CHECK(!rep.timing_ms.has_value());
}

TEST_CASE("homology of the Klein bottle")
{
    const Result r = run_cli({"homology", fixture("klein_bottle.txt")});
    REQUIRE(r.code == cli::kOk);
    const TopologyReport rep = report_of(r);
    CHECK(rep.homology.betti == std::vector<Index>{1, 1});
    CHECK(rep.homology.torsion[1] == std::vector<Integer>{2});
    CHECK(rep.timing_ms.has_value());
    int torsion = 0;
    for (const auto& g : rep.generators) {
        torsion += g.order == 2 ? 1 : 0;
    }
    CHECK(torsion == 1);
}

TEST_CASE("reports without timing are deterministic")
{
    const Result a = run_cli({"cohomology", fixture("torus7.txt"), "--hb1", "--no-timing"});
    const Result b = run_cli({"cohomology", fixture("torus7.txt"), "--hb1", "--no-timing"});
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    const TopologyReport rep = report_of(a);
    REQUIRE(rep.hb1.has_value());
    CHECK(*rep.hb1 == 1);
    CHECK(rep.cohomology->betti == std::vector<Index>{1, 2, 1});
    CHECK(rep.cocycles.size() == 4);
}

TEST_CASE("parse errors give exit code 2 and a line number")
{
    const fs::path dir = scratch_dir("parse");
    write_file(dir / "empty.txt", "");
    Result r = run_cli({"homology", (dir / "empty.txt").string()});
    CHECK(r.code == cli::kParse);
    CHECK(r.err.find("empty.txt") != std::string::npos);

    write_file(dir / "bad.txt", "0 1\n0 1 q\n");
    r = run_cli({"homology", (dir / "bad.txt").string()});
    CHECK(r.code == cli::kParse);
    CHECK(r.err.find("2") != std::string::npos);

    write_file(dir / "bad.vox", "0 0 0\n1 1\n");
    r = run_cli({"homology", (dir / "bad.vox").string()});
    CHECK(r.code == cli::kParse);
}

TEST_CASE("usage errors give exit code 1")
{
    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"homology"}).code == cli::kUsage);
    CHECK(run_cli({"homology", "/nonexistent/file.txt"}).code == cli::kUsage);
    CHECK(run_cli({"setop", "xor", fixture("ring.vox"), fixture("ring.vox")}).code == cli::kUsage);
    CHECK(run_cli({"setop", "union", fixture("ring.vox")}).code == cli::kUsage);
    CHECK(run_cli({"edit", fixture("ring.vox"), "--add", "1 2"}).code == cli::kUsage);
    CHECK(run_cli({"good-cycles", fixture("torus7.txt"), "--format", "complex"}).code == cli::kUsage);
    CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("voxel files are detected by extension and magic")
{
    const fs::path dir = scratch_dir("detect");
    write_file(dir / "a.txt", "0 0 0\n5 5 5\n");
    Result r = run_cli({"homology", (dir / "a.txt").string(), "--format", "voxels", "--no-timing"});
    REQUIRE(r.code == cli::kOk);
    CHECK(report_of(r).homology.betti == std::vector<Index>{2});

    r = run_cli({"homology", fixture("hollow_cube.vox"), "--no-timing"});
    REQUIRE(r.code == cli::kOk);
    CHECK(report_of(r).homology.betti == std::vector<Index>{1, 0, 1});
}

TEST_CASE("edit sequences end where a fresh computation starts")
{
    const fs::path dir = scratch_dir("edit");
    const Result e = run_cli({"edit", fixture("cube5.vox"), "--del", "0 0 0", "--add", "0,0,0", "--del", "1 1 1",
                              "--no-timing"});
    REQUIRE(e.code == cli::kOk);
    const TopologyReport rep = report_of(e);
    REQUIRE(rep.steps.size() == 3);
    CHECK(rep.steps[0].first == "del(0,0,0)");
    CHECK(rep.steps[0].second.betti == std::vector<Index>{1, 0, 1});
    CHECK(rep.steps[1].second.betti == std::vector<Index>{1});

    write_file(dir / "expect.vox", "");
    {
        std::ifstream in(fixture("cube5.vox"));
        std::ofstream o(dir / "expect.vox");
        std::string line;
        while (std::getline(in, line)) {
            if (line != "1 1 1") {
                o << line << '\n';
            }
        }
    }
    const Result fresh = run_cli({"homology", (dir / "expect.vox").string(), "--no-timing"});
    REQUIRE(fresh.code == cli::kOk);
    CHECK(report_of(fresh).homology == rep.homology);
}

TEST_CASE("set operations from the command line")
{
    const fs::path dir = scratch_dir("setop");
    const Result d = run_cli({"setop", "diff", fixture("cube5.vox"), fixture("centre.vox"), "--save",
                              (dir / "out.vox").string(), "--no-timing"});
    REQUIRE(d.code == cli::kOk);
    CHECK(report_of(d).homology.betti == std::vector<Index>{1, 0, 1});
    const Result again = run_cli({"homology", (dir / "out.vox").string(), "--no-timing"});
    CHECK(report_of(again).homology == report_of(d).homology);

    // Disjoint inputs: the fallback result carries a note.
    write_file(dir / "far.vox", "40 40 40\n");
    const Result u = run_cli({"setop", "union", fixture("centre.vox"), (dir / "far.vox").string(), "--no-timing"});
    REQUIRE(u.code == cli::kOk);
    const TopologyReport rep = report_of(u);
    CHECK(rep.homology.betti == std::vector<Index>{2});
    REQUIRE(rep.notes.size() == 1);
    CHECK(rep.notes[0].find("trivial case") == 0);

    const Result inv = run_cli({"setop", "inverse", fixture("centre.vox"), "--no-timing"});
    REQUIRE(inv.code == cli::kOk);
    CHECK(report_of(inv).homology.betti == std::vector<Index>{1, 0, 1});
}

TEST_CASE("good cycles with OBJ export and --out")
{
    const fs::path dir = scratch_dir("good");
    const fs::path report = dir / "ring.report";
    const Result r = run_cli({"good-cycles", fixture("ring.vox"), "--export-obj", (dir / "obj").string(), "--out",
                              report.string(), "--no-timing"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    std::ifstream in(report);
    const TopologyReport rep = parse_report(in);
    CHECK(rep.homology.betti == std::vector<Index>{1, 1});
    bool elementary_loop = false;
    for (const auto& g : rep.generators) {
        elementary_loop = elementary_loop || (g.dim == 1 && g.label == "elementary");
    }
    CHECK(elementary_loop);
    CHECK(fs::exists(dir / "obj" / "generator_0_0.obj"));
    std::ifstream obj(dir / "obj" / "generator_1_0.obj");
    REQUIRE(obj);
    std::string text((std::istreambuf_iterator<char>(obj)), std::istreambuf_iterator<char>());
    CHECK(text.find("\nv ") != std::string::npos);
    CHECK(text.find("\nl ") != std::string::npos);
}

TEST_CASE("selftest passes with a fixed seed")
{
    const Result r = run_cli({"selftest", "--seed", "3", "--rounds", "16"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("selftest seed=3") == 0);
    const Result env = run_cli({"selftest", "--rounds", "8"});
    CHECK(env.code == cli::kOk);
    CHECK(env.out.find("selftest seed=7") == 0);
}
