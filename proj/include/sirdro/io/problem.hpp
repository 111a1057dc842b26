#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sirdro/io/serialize.hpp"
#include "sirdro/momentdro/moment_set.hpp"
#include "sirdro/sir/first_stage.hpp"
#include "sirdro/sir/value_functions.hpp"
#include "sirdro/wassdro/dual.hpp"

namespace sirdro {

// Problem file with bracketed sections:
//
//   [cost]            one line per dimension: <q+> <q->
//   [distribution]    marginal blocks in the serialize.hpp format
//   [ball]            p <order> / eps <radius>
//   [moments]         dim <i> support <L> <U> | mean <M> | mad <c> <M> | poly <M> <c0> ...
//   [first-stage]     c <v1> ... <vm> and one box line per dimension: box <lo> <hi>
//
// Exactly one of [ball] / [moments] must be present.
struct ProblemFile {
    CostVector cost;
    ProductDistribution distribution;
    std::optional<WassersteinBall> ball;    // reference = distribution
    std::optional<MomentAmbiguitySet> moments;
    std::optional<FirstStageProblem> first_stage;

    std::size_t dim() const { return cost.dim(); }
};

namespace io {

struct Section {
    std::string name;
    int line_no = 0;  // line of the header
    std::vector<std::string> lines;
};

inline std::vector<Section> split_sections(std::istream& in) {
    std::vector<Section> sections;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string stripped = raw;
        std::size_t h = stripped.find('#');
        if (h != std::string::npos) stripped = stripped.substr(0, h);
        std::size_t b = stripped.find_first_not_of(" \t\r");
        if (b == std::string::npos) {
            if (!sections.empty()) sections.back().lines.push_back("");
            continue;
        }
        std::size_t e = stripped.find_last_not_of(" \t\r");
        stripped = stripped.substr(b, e - b + 1);
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ParseError(line_no, "malformed section header: " + stripped);
            sections.push_back({stripped.substr(1, stripped.size() - 2), line_no, {}});
            continue;
        }
        if (sections.empty())
            throw ParseError(line_no, "content before any [section] header");
        sections.back().lines.push_back(raw);
    }
    return sections;
}

}  // namespace io

inline MomentAmbiguitySet parse_moment_lines(const std::vector<std::string>& lines,
                                             std::size_t dims, int line_base) {
    MomentAmbiguitySet set;
    set.dims.resize(dims);
    std::vector<bool> has_support(dims, false);
    int line_no = line_base;
    for (const auto& raw : lines) {
        ++line_no;
        auto tok = io::tokenize(raw);
        if (tok.empty()) continue;
        if (tok[0] != "dim" || tok.size() < 3)
            throw ParseError(line_no, "moment lines start with: dim <i> <kind> ...");
        long i = static_cast<long>(io::parse_number(tok[1], line_no));
        if (i < 1 || std::size_t(i) > dims)
            throw ParseError(line_no, "dimension index out of range");
        auto& d = set.dims[std::size_t(i - 1)];
        const std::string& kind = tok[2];
        if (kind == "support") {
            if (tok.size() != 5) throw ParseError(line_no, "support expects <L> <U>");
            d.lo = io::parse_number(tok[3], line_no);
            d.hi = io::parse_number(tok[4], line_no);
            has_support[std::size_t(i - 1)] = true;
        } else if (kind == "mean") {
            if (tok.size() != 4) throw ParseError(line_no, "mean expects <M>");
            d.specs.push_back(MomentFunctionSpec::mean(io::parse_number(tok[3], line_no)));
        } else if (kind == "mad") {
            if (tok.size() != 5) throw ParseError(line_no, "mad expects <center> <M>");
            d.specs.push_back(MomentFunctionSpec::mad(io::parse_number(tok[3], line_no),
                                                      io::parse_number(tok[4], line_no)));
        } else if (kind == "poly") {
            if (tok.size() < 5) throw ParseError(line_no, "poly expects <M> <c0> ...");
            double target = io::parse_number(tok[3], line_no);
            std::vector<double> coeffs;
            for (std::size_t k = 4; k < tok.size(); ++k)
                coeffs.push_back(io::parse_number(tok[k], line_no));
            if (coeffs.size() > 4) throw ParseError(line_no, "poly degree exceeds 3");
            set.dims[std::size_t(i - 1)].specs.push_back(
                MomentFunctionSpec::poly(Polynomial(std::move(coeffs)), target));
        } else {
            throw ParseError(line_no, "unknown moment kind: " + kind);
        }
    }
    for (std::size_t i = 0; i < dims; ++i)
        if (!has_support[i])
            throw ParseError(line_base, "missing support bounds for dimension " +
                                            std::to_string(i + 1));
    return set;
}

inline ProblemFile parse_problem(std::istream& in) {
    std::vector<io::Section> sections = io::split_sections(in);
    ProblemFile pf;
    bool have_cost = false, have_dist = false;
    std::optional<io::Section> ball_sec, moment_sec, fs_sec;
    for (const auto& sec : sections) {
        if (sec.name == "cost") {
            std::vector<CostVector::Pair> pairs;
            int ln = sec.line_no;
            for (const auto& raw : sec.lines) {
                ++ln;
                auto tok = io::tokenize(raw);
                if (tok.empty()) continue;
                if (tok.size() != 2)
                    throw ParseError(ln, "cost lines are: <q+> <q->");
                pairs.push_back({io::parse_number(tok[0], ln), io::parse_number(tok[1], ln)});
            }
            if (pairs.empty()) throw ParseError(sec.line_no, "[cost] section is empty");
            pf.cost = CostVector(std::move(pairs));
            have_cost = true;
        } else if (sec.name == "distribution") {
            pf.distribution = parse_distribution(sec.lines, sec.line_no);
            have_dist = true;
        } else if (sec.name == "ball") {
            ball_sec = sec;
        } else if (sec.name == "moments") {
            moment_sec = sec;
        } else if (sec.name == "first-stage") {
            fs_sec = sec;
        } else {
            throw ParseError(sec.line_no, "unknown section [" + sec.name + "]");
        }
    }
    if (!have_cost) throw ParseError(0, "missing [cost] section");
    if (!have_dist) throw ParseError(0, "missing [distribution] section");
    if (pf.cost.dim() != pf.distribution.dim())
        throw ParseError(0, "cost and distribution dimensions differ");
    if (ball_sec.has_value() == moment_sec.has_value())
        throw ParseError(0, "exactly one of [ball] / [moments] is required");

    if (ball_sec) {
        WassersteinBall ball;
        ball.reference = pf.distribution;
        int ln = ball_sec->line_no;
        for (const auto& raw : ball_sec->lines) {
            ++ln;
            auto tok = io::tokenize(raw);
            if (tok.empty()) continue;
            if (tok[0] == "p" && tok.size() == 2)
                ball.p = io::parse_number(tok[1], ln);
            else if (tok[0] == "eps" && tok.size() == 2)
                ball.eps = io::parse_number(tok[1], ln);
            else
                throw ParseError(ln, "ball lines are: p <order> | eps <radius>");
        }
        ball.validate();
        pf.ball = std::move(ball);
    }
    if (moment_sec)
        pf.moments = parse_moment_lines(moment_sec->lines, pf.cost.dim(), moment_sec->line_no);

    if (fs_sec) {
        FirstStageProblem fs;
        int ln = fs_sec->line_no;
        for (const auto& raw : fs_sec->lines) {
            ++ln;
            auto tok = io::tokenize(raw);
            if (tok.empty()) continue;
            if (tok[0] == "c") {
                for (std::size_t k = 1; k < tok.size(); ++k)
                    fs.c.push_back(io::parse_number(tok[k], ln));
            } else if (tok[0] == "box" && tok.size() == 3) {
                fs.box.push_back(
                    {io::parse_number(tok[1], ln), io::parse_number(tok[2], ln)});
            } else {
                throw ParseError(ln, "first-stage lines are: c <v...> | box <lo> <hi>");
            }
        }
        if (fs.c.size() != pf.cost.dim() || fs.box.size() != pf.cost.dim())
            throw ParseError(fs_sec->line_no, "first-stage dimensions differ from cost");
        fs.validate();
        pf.first_stage = std::move(fs);
    }
    return pf;
}

inline ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    SIRDRO_REQUIRE(in.good(), "cannot open problem file: " + path);
    return parse_problem(in);
}

inline std::string dump_problem(const ProblemFile& pf) {
    std::string out = "[cost]\n";
    for (const auto& p : pf.cost.q)
        out += io::format_double(p.plus) + " " + io::format_double(p.minus) + "\n";
    out += "[distribution]\n" + serialize_distribution(pf.distribution);
    if (pf.ball) {
        out += "[ball]\np " + io::format_double(pf.ball->p) + "\neps " +
               io::format_double(pf.ball->eps) + "\n";
    }
    if (pf.moments) {
        out += "[moments]\n";
        for (std::size_t i = 0; i < pf.moments->dims.size(); ++i) {
            const auto& d = pf.moments->dims[i];
            std::string tag = "dim " + std::to_string(i + 1) + " ";
            out += tag + "support " + io::format_double(d.lo) + " " + io::format_double(d.hi) +
                   "\n";
            for (const auto& spec : d.specs) {
                switch (spec.kind) {
                    case MomentFunctionSpec::Kind::kPower:
                        if (spec.degree == 1) {
                            out += tag + "mean " + io::format_double(spec.target) + "\n";
                        } else {
                            out += tag + "poly " + io::format_double(spec.target);
                            for (int k = 0; k < spec.degree; ++k) out += " 0";
                            out += " 1\n";
                        }
                        break;
                    case MomentFunctionSpec::Kind::kAbsDeviation:
                        out += tag + "mad " + io::format_double(spec.center) + " " +
                               io::format_double(spec.target) + "\n";
                        break;
                    case MomentFunctionSpec::Kind::kCustomPoly: {
                        out += tag + "poly " + io::format_double(spec.target);
                        for (double c : spec.custom.pieces.front().coeffs)
                            out += " " + io::format_double(c);
                        out += "\n";
                        break;
                    }
                }
            }
        }
    }
    if (pf.first_stage) {
        out += "[first-stage]\nc";
        for (double v : pf.first_stage->c) out += " " + io::format_double(v);
        out += "\n";
        for (const auto& [lo, hi] : pf.first_stage->box)
            out += "box " + io::format_double(lo) + " " + io::format_double(hi) + "\n";
    }
    return out;
}

}  // namespace sirdro
