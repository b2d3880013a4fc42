// The "amtopo/1" text report written by the command line tool.
//
//   amtopo/1
//   input: <free text>
//   homology: betti=1,1 torsion=1:2
//   generator: <dim> <order> <label> | <coef>:<v0>,<v1> ...
//   cohomology: betti=1,1,0 torsion=2:2
//   cocycle: <dim> <order> <label> | <coef>:<v0>,<v1> ...
//   hb1: 0
//   hb1.diagonal: 1 2
//   step: <label> betti=... torsion=...
//   note: <free text>
//   timing_ms: 1.25
//
// Labels are single tokens; free text runs to the end of the line.

#ifndef AMTOPO_REPORT_HPP
#define AMTOPO_REPORT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amtopo/classical.hpp"
#include "amtopo/simplicial.hpp"

namespace amtopo {

inline constexpr const char* kReportHeader = "amtopo/1";

struct ReportChain
{
    int dim = 0;
    Integer order = 0;      // 0 for free classes
    std::string label = "-";
    Chain chain;            // cocycles use the same form: simplex -> value

    friend bool operator==(const ReportChain&, const ReportChain&) = default;
};

struct TopologyReport
{
    std::string input;
    GroupSummary homology;
    std::vector<ReportChain> generators;
    std::optional<GroupSummary> cohomology;
    std::vector<ReportChain> cocycles;
    std::optional<Index> hb1;
    std::vector<Integer> hb1_diagonal;
    std::vector<std::pair<std::string, GroupSummary>> steps;
    std::vector<std::string> notes;
    std::optional<double> timing_ms;

    friend bool operator==(const TopologyReport&, const TopologyReport&) = default;
};

/// Whitespace inside labels becomes '_', newlines in free text become spaces.
void write_report(std::ostream& out, const TopologyReport& r);
std::string to_text(const TopologyReport& r);

/// Throws ParseError (with a line number) on malformed input.
TopologyReport parse_report(std::istream& in);

/// "betti=1,1 torsion=1:2" and back.
std::string format_groups(const GroupSummary& g);
GroupSummary parse_groups(const std::string& text);

}  // namespace amtopo

#endif
