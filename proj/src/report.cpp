#include "amtopo/report.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace amtopo {

namespace {

std::string token(std::string s)
{
    if (s.empty()) {
        return "-";
    }
    for (char& c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            c = '_';
        }
    }
    return s;
}

std::string one_line(std::string s)
{
    for (char& c : s) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    return s;
}

std::string format_chain(const Chain& c)
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, k] : c.terms()) {
        os << (first ? "" : " ") << k << ':';
        for (std::size_t i = 0; i < s.vertices().size(); ++i) {
            os << (i ? "," : "") << s[i];
        }
        first = false;
    }
    return os.str();
}

std::string format_entry(const ReportChain& r)
{
    std::ostringstream os;
    os << r.dim << ' ' << r.order << ' ' << token(r.label) << " |";
    std::string chain = format_chain(r.chain);
    if (!chain.empty()) {
        os << ' ' << chain;
    }
    return os.str();
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        return {};
    }
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Integer parse_integer(const std::string& s)
{
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) {
        throw std::invalid_argument("bad integer '" + s + "'");
    }
    for (std::size_t j = i; j < s.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
            throw std::invalid_argument("bad integer '" + s + "'");
        }
    }
    return Integer(s[0] == '+' ? s.substr(1) : s);
}

long long parse_small(const std::string& s)
{
    Integer v = parse_integer(s);
    if (v > Integer(std::numeric_limits<long long>::max()) || v < Integer(std::numeric_limits<long long>::min())) {
        throw std::invalid_argument("integer out of range '" + s + "'");
    }
    return static_cast<long long>(v);
}

ReportChain parse_entry(const std::string& text)
{
    const auto bar = text.find('|');
    if (bar == std::string::npos) {
        throw std::invalid_argument("missing '|'");
    }
    std::istringstream head(text.substr(0, bar));
    std::string d, o, label, extra;
    if (!(head >> d >> o >> label) || (head >> extra)) {
        throw std::invalid_argument("expected '<dim> <order> <label> |'");
    }
    ReportChain r;
    r.dim = static_cast<int>(parse_small(d));
    r.order = parse_integer(o);
    r.label = label;
    r.chain = Chain(r.dim);
    std::istringstream body(text.substr(bar + 1));
    std::string term;
    while (body >> term) {
        const auto colon = term.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("bad chain term '" + term + "'");
        }
        std::vector<Vertex> vs;
        for (const auto& v : split(term.substr(colon + 1), ',')) {
            vs.push_back(static_cast<Vertex>(parse_small(v)));
        }
        Simplex s(vs);
        if (s.dim() != r.dim) {
            throw std::invalid_argument("chain term of the wrong dimension");
        }
        r.chain.add(s, parse_integer(term.substr(0, colon)));
    }
    return r;
}

}  // namespace

std::string format_groups(const GroupSummary& g)
{
    std::ostringstream os;
    os << "betti=";
    for (std::size_t q = 0; q < g.betti.size(); ++q) {
        os << (q ? "," : "") << g.betti[q];
    }
    os << " torsion=";
    bool first = true;
    for (std::size_t q = 0; q < g.torsion.size(); ++q) {
        if (g.torsion[q].empty()) {
            continue;
        }
        os << (first ? "" : ";") << q << ':';
        for (std::size_t i = 0; i < g.torsion[q].size(); ++i) {
            os << (i ? "," : "") << g.torsion[q][i];
        }
        first = false;
    }
    return os.str();
}

GroupSummary parse_groups(const std::string& text)
{
    std::istringstream in(text);
    std::string b, t, extra;
    if (!(in >> b) || b.rfind("betti=", 0) != 0) {
        throw std::invalid_argument("expected betti=");
    }
    if (!(in >> t)) {
        t = "torsion=";
    }
    if (t.rfind("torsion=", 0) != 0 || (in >> extra)) {
        throw std::invalid_argument("expected torsion=");
    }
    GroupSummary g;
    const std::string bl = b.substr(6);
    if (!bl.empty()) {
        for (const auto& x : split(bl, ',')) {
            g.betti.push_back(static_cast<Index>(parse_small(x)));
        }
    }
    g.torsion.resize(g.betti.size());
    const std::string tl = t.substr(8);
    if (!tl.empty()) {
        for (const auto& part : split(tl, ';')) {
            const auto colon = part.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument("bad torsion entry '" + part + "'");
            }
            const long long q = parse_small(part.substr(0, colon));
            if (q < 0 || q >= static_cast<long long>(g.betti.size())) {
                throw std::invalid_argument("torsion dimension out of range");
            }
            for (const auto& x : split(part.substr(colon + 1), ',')) {
                g.torsion[static_cast<std::size_t>(q)].push_back(parse_integer(x));
            }
        }
    }
    return g;
}

void write_report(std::ostream& out, const TopologyReport& r)
{
    out << kReportHeader << '\n';
    out << "input: " << one_line(r.input) << '\n';
    out << "homology: " << format_groups(r.homology) << '\n';
    for (const auto& g : r.generators) {
        out << "generator: " << format_entry(g) << '\n';
    }
    if (r.cohomology) {
        out << "cohomology: " << format_groups(*r.cohomology) << '\n';
    }
    for (const auto& c : r.cocycles) {
        out << "cocycle: " << format_entry(c) << '\n';
    }
    if (r.hb1) {
        out << "hb1: " << *r.hb1 << '\n';
        out << "hb1.diagonal:";
        for (const auto& d : r.hb1_diagonal) {
            out << ' ' << d;
        }
        out << '\n';
    }
    for (const auto& [label, g] : r.steps) {
        out << "step: " << token(label) << ' ' << format_groups(g) << '\n';
    }
    for (const auto& n : r.notes) {
        out << "note: " << one_line(n) << '\n';
    }
    if (r.timing_ms) {
        out << "timing_ms: " << format_double(*r.timing_ms) << '\n';
    }
}

std::string to_text(const TopologyReport& r)
{
    std::ostringstream os;
    write_report(os, r);
    return os.str();
}

TopologyReport parse_report(std::istream& in)
{
    TopologyReport r;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty report", 1);
    }
    ++lineno;
    if (trim(line) != kReportHeader) {
        throw ParseError("expected header " + std::string(kReportHeader), lineno);
    }
    bool have_input = false;
    bool have_homology = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw ParseError("expected 'key: value'", lineno);
        }
        const std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        if (!value.empty() && value[0] == ' ') {
            value.erase(0, 1);
        }
        try {
            if (key == "input") {
                r.input = value;
                have_input = true;
            } else if (key == "homology") {
                r.homology = parse_groups(value);
                have_homology = true;
            } else if (key == "generator") {
                r.generators.push_back(parse_entry(value));
            } else if (key == "cohomology") {
                r.cohomology = parse_groups(value);
            } else if (key == "cocycle") {
                r.cocycles.push_back(parse_entry(value));
            } else if (key == "hb1") {
                r.hb1 = static_cast<Index>(parse_small(trim(value)));
            } else if (key == "hb1.diagonal") {
                std::istringstream vs(value);
                std::string x;
                while (vs >> x) {
                    r.hb1_diagonal.push_back(parse_integer(x));
                }
            } else if (key == "step") {
                const std::string v = trim(value);
                const auto sp = v.find(' ');
                if (sp == std::string::npos) {
                    throw std::invalid_argument("step needs a label and groups");
                }
                r.steps.emplace_back(v.substr(0, sp), parse_groups(v.substr(sp + 1)));
            } else if (key == "note") {
                r.notes.push_back(value);
            } else if (key == "timing_ms") {
                const std::string v = trim(value);
                double d = 0;
                auto res = std::from_chars(v.data(), v.data() + v.size(), d);
                if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
                    throw std::invalid_argument("bad timing");
                }
                r.timing_ms = d;
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!have_input || !have_homology) {
        throw ParseError("report lacks input or homology", lineno);
    }
    return r;
}

}  // namespace amtopo
