#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "amtopo/am_model.hpp"
#include "amtopo/classical.hpp"
#include "amtopo/cohomology.hpp"
#include "amtopo/cycle_beautifier.hpp"
#include "amtopo/digital_image.hpp"
#include "amtopo/dynamic_updates.hpp"
#include "amtopo/report.hpp"

namespace amtopo::cli {

namespace {

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// A parse error tagged with the file it came from.
struct FileParseError : std::runtime_error
{
    FileParseError(const std::string& path, const ParseError& e) : std::runtime_error(path + ": " + e.what()) {}
};

struct Common
{
    std::string out;
    std::string format = "auto";
    bool no_timing = false;
    bool fast = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_format)
{
    cmd->add_option("--out,-o", c.out, "Write the report to this file instead of stdout");
    cmd->add_flag("--no-timing", c.no_timing, "Leave the timing field out of the report");
    cmd->add_flag("--fast", c.fast, "Skip validating the model before reporting");
    if (with_format) {
        cmd->add_option("--format", c.format, "Input format")->check(CLI::IsMember({"auto", "complex", "voxels"}));
    }
}

bool has_voxel_magic(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    return in.read(magic, 4) && std::string(magic, 4) == "AMV1";
}

bool is_voxel_input(const std::string& path, const std::string& format)
{
    if (format != "auto") {
        return format == "voxels";
    }
    const std::string ext = std::filesystem::path(path).extension().string();
    return ext == ".vox" || ext == ".voxels" || ext == ".amv" || has_voxel_magic(path);
}

void require_readable(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
}

DigitalImage load_voxels(const std::string& path)
{
    require_readable(path);
    try {
        return read_voxel_file(path);
    } catch (const ParseError& e) {
        throw FileParseError(path, e);
    }
}

SimplicialComplex load_complex(const std::string& path)
{
    require_readable(path);
    std::ifstream in(path);
    try {
        return parse_complex(in);
    } catch (const ParseError& e) {
        throw FileParseError(path, e);
    }
}

struct Loaded
{
    bool voxels = false;
    DigitalImage image;
    AmModel model;
};

Loaded load_model(const std::string& path, const std::string& format)
{
    Loaded l;
    l.voxels = is_voxel_input(path, format);
    if (l.voxels) {
        l.image = load_voxels(path);
        l.model = build_image_model(l.image).model;
    } else {
        l.model = build_am_model(load_complex(path));
    }
    return l;
}

void check(const AmModel& m, const Common& c)
{
    if (c.fast) {
        return;
    }
    const auto problems = validate(m);
    if (!problems.empty()) {
        std::string msg = "model failed validation:";
        for (const auto& p : problems) {
            msg += "\n  " + p;
        }
        throw InvariantError(msg);
    }
}

Chain simplex_chain(const Cochain& c)
{
    Chain out(c.dim);
    for (const auto& [s, v] : c.simplex_values) {
        out.add(s, v);
    }
    return out;
}

void add_generators(TopologyReport& r, const HomologySummary& h)
{
    for (std::size_t q = 0; q < h.dims.size(); ++q) {
        for (const auto* list : {&h.dims[q].free_generators, &h.dims[q].torsion_generators}) {
            for (const auto& g : *list) {
                r.generators.push_back(ReportChain{static_cast<int>(q), g.order, "e" + std::to_string(g.element), g.chain});
            }
        }
    }
}

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const TopologyReport& r, const Common& c, std::ostream& out)
{
    if (c.out.empty()) {
        write_report(out, r);
        return;
    }
    std::ofstream f(c.out);
    if (!f) {
        throw UsageError("cannot write " + c.out);
    }
    write_report(f, r);
}

std::string describe(const std::string& path, bool voxels)
{
    return path + (voxels ? " (voxels)" : " (complex)");
}

// ---------------------------------------------------------------------------

int cmd_homology(const std::string& path, const Common& c, std::ostream& out)
{
    const auto t0 = Clock::now();
    Loaded l = load_model(path, c.format);
    check(l.model, c);
    const HomologySummary h = homology(l.model);
    TopologyReport r;
    r.input = describe(path, l.voxels);
    r.homology = h.groups();
    add_generators(r, h);
    if (!c.no_timing) {
        r.timing_ms = elapsed_ms(t0);
    }
    emit(r, c, out);
    return kOk;
}

int cmd_cohomology(const std::string& path, bool want_hb1, const Common& c, std::ostream& out)
{
    const auto t0 = Clock::now();
    Loaded l = load_model(path, c.format);
    check(l.model, c);
    const HomologySummary h = homology(l.model);
    const CohomologySummary co = cohomology(l.model);
    TopologyReport r;
    r.input = describe(path, l.voxels);
    r.homology = h.groups();
    add_generators(r, h);
    r.cohomology = co.groups();
    for (std::size_t q = 0; q < co.dims.size(); ++q) {
        for (const auto& cc : co.dims[q].free_cocycles) {
            const Index k = cc.element_values.begin()->first;
            r.cocycles.push_back(
                ReportChain{static_cast<int>(q), 0, "e" + std::to_string(k), simplex_chain(pullback(l.model, cc))});
        }
        for (const auto& [cc, order] : co.dims[q].torsion_cocycles) {
            const Index k = cc.element_values.begin()->first;
            r.cocycles.push_back(ReportChain{static_cast<int>(q), order, "e" + std::to_string(k),
                                             simplex_chain(pullback(l.model, cc))});
        }
    }
    if (want_hb1) {
        const Hb1Details d = hb1_details(l.model);
        r.hb1 = d.rank;
        r.hb1_diagonal = d.diagonal;
    }
    if (!c.no_timing) {
        r.timing_ms = elapsed_ms(t0);
    }
    emit(r, c, out);
    return kOk;
}

void export_obj(const std::string& dir, const GoodCycleReport& rep)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create " + dir + ": " + ec.message());
    }
    for (std::size_t q = 0; q < rep.dims.size(); ++q) {
        for (std::size_t i = 0; i < rep.dims[q].size(); ++i) {
            const Chain& c = rep.dims[q][i].chain;
            const std::string file = (std::filesystem::path(dir) /
                                      ("generator_" + std::to_string(q) + "_" + std::to_string(i) + ".obj"))
                                         .string();
            std::ofstream f(file);
            if (!f) {
                throw UsageError("cannot write " + file);
            }
            std::map<Vertex, std::size_t> index;
            for (const auto& [s, k] : c.terms()) {
                for (Vertex v : s.vertices()) {
                    index.emplace(v, 0);
                }
            }
            f << "# H" << q << " generator " << i << '\n';
            std::size_t n = 0;
            for (auto& [v, idx] : index) {
                idx = ++n;
                const Point p = vertex_point(v);
                f << "v " << p.x1 << ' ' << p.x2 << ' ' << p.x3 << '\n';
            }
            for (const auto& [s, k] : c.terms()) {
                std::vector<std::size_t> ids;
                for (Vertex v : s.vertices()) {
                    ids.push_back(index.at(v));
                }
                if (k < 0 && ids.size() >= 2) {
                    std::swap(ids[0], ids[1]);
                }
                f << (q == 0 ? "p" : q == 1 ? "l" : "f");
                for (auto id : ids) {
                    f << ' ' << id;
                }
                f << '\n';
            }
        }
    }
}

int cmd_good_cycles(const std::string& path, const std::string& obj_dir, const Common& c, std::ostream& out)
{
    if (!is_voxel_input(path, c.format == "auto" ? "voxels" : c.format)) {
        throw UsageError("good-cycles needs a voxel file");
    }
    const auto t0 = Clock::now();
    const DigitalImage img = load_voxels(path);
    GoodGenerators g = good_generators(img);
    check(g.model, c);
    TopologyReport r;
    r.input = describe(path, true);
    r.homology = homology(g.model).groups();
    for (std::size_t q = 0; q < g.report.dims.size(); ++q) {
        for (const auto& gc : g.report.dims[q]) {
            std::string label = gc.elementary ? "elementary" : "plain";
            if (!gc.on_boundary_image) {
                label += ",interior";
            }
            r.generators.push_back(ReportChain{static_cast<int>(q), 0, label, gc.chain});
        }
    }
    r.notes = g.report.diagnostics;
    if (!obj_dir.empty()) {
        export_obj(obj_dir, g.report);
    }
    if (!c.no_timing) {
        r.timing_ms = elapsed_ms(t0);
    }
    emit(r, c, out);
    return kOk;
}

int cmd_setop(const std::string& op, const std::vector<std::string>& inputs, const std::string& save, const Common& c,
              std::ostream& out)
{
    const std::size_t need = op == "inverse" ? 1 : 2;
    if (inputs.size() != need) {
        throw UsageError(op + " takes " + std::to_string(need) + " voxel file(s)");
    }
    const auto t0 = Clock::now();
    std::vector<DigitalImage> imgs;
    for (const auto& p : inputs) {
        imgs.push_back(load_voxels(p));
    }
    TopologyReport r;
    r.input = op;
    for (const auto& p : inputs) {
        r.input += " " + p;
    }
    ImageModel result;
    try {
        if (op == "union") {
            result = union_model(build_image_model(imgs[0]), build_image_model(imgs[1]));
        } else if (op == "intersect") {
            result = intersection_model(build_image_model(imgs[0]), imgs[1]);
        } else if (op == "diff") {
            result = difference_model(build_image_model(imgs[0]), imgs[1]);
        } else {
            result = inverse_model(imgs[0]);
        }
    } catch (const TrivialCaseError& e) {
        DigitalImage img;
        if (op == "union") {
            img = set_union(imgs[0], imgs[1]);
        } else if (op == "intersect") {
            img = set_intersection(imgs[0], imgs[1]);
        } else if (op == "diff") {
            img = set_difference(imgs[0], imgs[1]);
        } else if (e.kind() == TrivialCase::FullCube) {
            img = set_difference(chebyshev_cube(imgs[0].chebyshev_radius() + 1), imgs[0]);
        }
        r.notes.push_back(std::string("trivial case (") + to_string(e.kind()) + "): result computed from scratch");
        result = build_image_model(img);
    }
    check(result.model, c);
    const HomologySummary h = homology(result.model);
    r.homology = h.groups();
    add_generators(r, h);
    if (!save.empty()) {
        std::ofstream f(save);
        if (!f) {
            throw UsageError("cannot write " + save);
        }
        write_voxels(f, result.image);
    }
    if (!c.no_timing) {
        r.timing_ms = elapsed_ms(t0);
    }
    emit(r, c, out);
    return kOk;
}

Point parse_point(const std::string& text)
{
    std::string s = text;
    for (char& ch : s) {
        if (ch == ',') {
            ch = ' ';
        }
    }
    std::istringstream in(s);
    long long x = 0, y = 0, z = 0;
    std::string extra;
    if (!(in >> x >> y >> z) || (in >> extra)) {
        throw UsageError("expected a voxel \"x y z\", got \"" + text + "\"");
    }
    return Point{x, y, z};
}

std::string point_label(const Point& p)
{
    std::ostringstream os;
    os << p.x1 << ',' << p.x2 << ',' << p.x3;
    return os.str();
}

int cmd_edit(const std::string& path, const std::vector<std::pair<bool, std::string>>& edits, const Common& c,
             std::ostream& out)
{
    const auto t0 = Clock::now();
    ImageModel m = build_image_model(load_voxels(path));
    check(m.model, c);
    TopologyReport r;
    r.input = describe(path, true);
    for (const auto& [add, text] : edits) {
        const Point p = parse_point(text);
        try {
            if (add) {
                add_voxel(m, p);
            } else {
                delete_voxel(m, p);
            }
        } catch (const TrivialCaseError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        check(m.model, c);
        r.steps.emplace_back((add ? "add(" : "del(") + point_label(p) + ")", homology(m.model).groups());
    }
    r.homology = homology(m.model).groups();
    if (!c.no_timing) {
        r.timing_ms = elapsed_ms(t0);
    }
    emit(r, c, out);
    return kOk;
}

// ---------------------------------------------------------------------------
// selftest: randomized comparisons against direct Smith reductions.

struct SelfTest
{
    std::mt19937_64 rng;
    std::ostream& out;
    int failures = 0;

    void report(const std::string& name, bool ok, const std::string& detail = {})
    {
        out << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) {
            out << ": " << detail;
        }
        out << '\n';
        failures += ok ? 0 : 1;
    }

    SimplicialComplex random_complex(int vertices, int top, int count)
    {
        std::vector<Simplex> s;
        std::uniform_int_distribution<int> vd(0, vertices - 1);
        for (int i = 0; i < count; ++i) {
            std::vector<Vertex> v;
            while (static_cast<int>(v.size()) < top + 1) {
                Vertex x = vd(rng);
                if (std::find(v.begin(), v.end(), x) == v.end()) {
                    v.push_back(x);
                }
            }
            s.emplace_back(v);
        }
        return SimplicialComplex::from_simplices(s);
    }

    DigitalImage random_image(int side, int count)
    {
        std::uniform_int_distribution<int> c(0, side - 1);
        std::vector<Point> p;
        for (int i = 0; i < count; ++i) {
            p.push_back({c(rng), c(rng), c(rng)});
        }
        return DigitalImage(p);
    }

    static std::string str(const GroupSummary& g)
    {
        std::ostringstream os;
        os << g;
        return os.str();
    }

    void complexes(int rounds)
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < rounds && ok; ++i) {
            const SimplicialComplex K = random_complex(7, 2 + i % 2, 8 + i % 7);
            const AmModel m = build_am_model(K);
            const auto v = validate(m);
            const GroupSummary a = homology(m).groups();
            const GroupSummary b = classical_homology(K);
            if (!v.empty() || !(a == b)) {
                ok = false;
                detail = "round " + std::to_string(i) + ": " + str(a) + " vs " + str(b);
            } else if (!(cohomology(m).groups().betti == a.betti)) {
                ok = false;
                detail = "round " + std::to_string(i) + ": cohomology ranks differ";
            }
        }
        report("am-model homology matches direct reduction", ok, detail);
    }

    void updates(int rounds)
    {
        bool ok = true;
        std::string detail;
        std::uniform_int_distribution<int> c(0, 4);
        for (int i = 0; i < rounds && ok; ++i) {
            ImageModel m = build_image_model(random_image(5, 40));
            for (int step = 0; step < 10 && ok; ++step) {
                const Point p{c(rng), c(rng), c(rng)};
                if (m.image.contains(p)) {
                    if (m.image.size() == 1) {
                        continue;
                    }
                    delete_voxel(m, p);
                } else {
                    add_voxel(m, p);
                }
                const GroupSummary a = homology(m.model).groups();
                const GroupSummary b = classical_homology(simplicial_representation(m.image));
                if (!validate(m.model).empty() || !(a == b)) {
                    ok = false;
                    detail = "round " + std::to_string(i) + " step " + std::to_string(step) + ": " + str(a) + " vs " + str(b);
                }
            }
        }
        report("voxel edits match recomputation", ok, detail);
    }

    void setops(int rounds)
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; i < rounds && ok; ++i) {
            const DigitalImage I = random_image(5, 35);
            const DigitalImage J = random_image(5, 35);
            const ImageModel mI = build_image_model(I);
            const std::vector<std::pair<std::string, std::function<ImageModel()>>> ops = {
                {"union", [&] { return union_model(mI, build_image_model(J)); }},
                {"intersect", [&] { return intersection_model(mI, J); }},
                {"diff", [&] { return difference_model(mI, J); }},
                {"inverse", [&] { return inverse_model(I); }},
            };
            const std::vector<DigitalImage> expect = {set_union(I, J), set_intersection(I, J), set_difference(I, J),
                                                      inverse_image(I)};
            for (std::size_t k = 0; k < ops.size() && ok; ++k) {
                ImageModel r;
                try {
                    r = ops[k].second();
                } catch (const TrivialCaseError&) {
                    continue;
                }
                const GroupSummary a = homology(r.model).groups();
                const GroupSummary b = classical_homology(simplicial_representation(expect[k]));
                if (!(r.image == expect[k]) || !validate(r.model).empty() || !(a == b)) {
                    ok = false;
                    detail = ops[k].first + " round " + std::to_string(i) + ": " + str(a) + " vs " + str(b);
                }
            }
        }
        report("set operations match recomputation", ok, detail);
    }

    void reports(int rounds)
    {
        bool ok = true;
        for (int i = 0; i < rounds && ok; ++i) {
            const SimplicialComplex K = random_complex(6, 2, 6);
            const AmModel m = build_am_model(K);
            TopologyReport r;
            r.input = "random " + std::to_string(i);
            r.homology = homology(m).groups();
            add_generators(r, homology(m));
            r.timing_ms = 0.125 * i;
            std::istringstream in(to_text(r));
            ok = parse_report(in) == r;
        }
        report("reports round-trip", ok);
    }
};

int cmd_selftest(std::optional<std::uint64_t> seed_flag, int rounds, std::ostream& out)
{
    std::uint64_t seed = 1;
    if (seed_flag) {
        seed = *seed_flag;
    } else if (const char* env = std::getenv("AMTOPO_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("AMTOPO_SEED is not a number: ") + env);
        }
    }
    out << "selftest seed=" << seed << '\n';
    SelfTest t{std::mt19937_64(seed), out};
    t.complexes(rounds);
    t.updates(std::max(1, rounds / 4));
    t.setops(std::max(1, rounds / 8));
    t.reports(rounds);
    return t.failures == 0 ? kOk : kInvariant;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Homology, cohomology and voxel-image updates through AM-models", "amtopo"};
    app.require_subcommand(1);

    Common common;
    std::string input;

    auto* hom = app.add_subcommand("homology", "Homology groups and generators");
    hom->add_option("input", input, "Complex or voxel file")->required();
    add_common(hom, common, true);

    bool want_hb1 = false;
    auto* coh = app.add_subcommand("cohomology", "Cohomology groups, cocycles and HB1");
    coh->add_option("input", input, "Complex or voxel file")->required();
    coh->add_flag("--hb1", want_hb1, "Also compute HB1");
    add_common(coh, common, true);

    std::string obj_dir;
    auto* good = app.add_subcommand("good-cycles", "Boundary-supported elementary generators of a voxel image");
    good->add_option("input", input, "Voxel file")->required();
    good->add_option("--export-obj", obj_dir, "Write one OBJ mesh per generator into this directory");
    add_common(good, common, true);

    std::string op;
    std::vector<std::string> inputs;
    std::string save;
    auto* setop = app.add_subcommand("setop", "Set operations on voxel images");
    setop->add_option("op", op, "union, intersect, diff or inverse")
        ->required()
        ->check(CLI::IsMember({"union", "intersect", "diff", "inverse"}));
    setop->add_option("inputs", inputs, "Voxel files")->required();
    setop->add_option("--save", save, "Write the resulting image as a voxel file");
    add_common(setop, common, false);

    auto* edit = app.add_subcommand("edit", "Add and delete voxels one at a time");
    edit->add_option("input", input, "Voxel file")->required();
    std::vector<std::string> adds;
    std::vector<std::string> dels;
    auto* add_opt = edit->add_option("--add", adds, "Voxel \"x y z\" to add (repeatable)");
    auto* del_opt = edit->add_option("--del", dels, "Voxel \"x y z\" to delete (repeatable)");
    add_opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    del_opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_common(edit, common, false);

    std::optional<std::uint64_t> seed;
    int rounds = 40;
    auto* self = app.add_subcommand("selftest", "Randomized checks against direct computations");
    self->add_option("--seed", seed, "Random seed (default: AMTOPO_SEED or 1)");
    self->add_option("--rounds", rounds, "Number of random instances")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*hom) {
            return cmd_homology(input, common, out);
        }
        if (*coh) {
            return cmd_cohomology(input, want_hb1, common, out);
        }
        if (*good) {
            return cmd_good_cycles(input, obj_dir, common, out);
        }
        if (*setop) {
            return cmd_setop(op, inputs, save, common, out);
        }
        if (*edit) {
            std::vector<std::pair<bool, std::string>> edits;
            std::size_t ai = 0;
            std::size_t di = 0;
            for (const CLI::Option* o : edit->parse_order()) {
                if (o == add_opt) {
                    edits.emplace_back(true, adds.at(ai++));
                } else if (o == del_opt) {
                    edits.emplace_back(false, dels.at(di++));
                }
            }
            return cmd_edit(input, edits, common, out);
        }
        return cmd_selftest(seed, rounds, out);
    } catch (const FileParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const InvariantError& e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const TrivialCaseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
}

}  // namespace amtopo::cli
