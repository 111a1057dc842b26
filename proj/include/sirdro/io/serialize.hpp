#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "sirdro/common.hpp"
#include "sirdro/distributions/product.hpp"

namespace sirdro {

struct ParseError : Error {
    int line;
    ParseError(int line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

namespace io {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        if (!tok.empty() && tok[0] == '#') break;  // trailing comment
        out.push_back(tok);
    }
    return out;
}

inline double parse_number(const std::string& tok, int line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw ParseError(line_no, "trailing characters in number: " + tok);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError(line_no, "expected a number, got: " + tok);
    }
}

}  // namespace io

// Plain-text marginal blocks:
//   atom <loc> <mass>
//   segment <a> <b> <c0> <c1> ...
// one marginal per block, blocks separated by a line `---`.
inline std::string serialize_distribution(const ProductDistribution& P) {
    std::string out;
    for (std::size_t i = 0; i < P.dim(); ++i) {
        if (i > 0) out += "---\n";
        const Distribution1D& d = P.marginal(i);
        for (const auto& a : d.atoms())
            out += "atom " + io::format_double(a.loc) + " " + io::format_double(a.mass) + "\n";
        const PiecewisePolynomial& f = d.density();
        for (std::size_t k = 0; k < f.pieces.size(); ++k) {
            out += "segment " + io::format_double(f.breaks[k]) + " " +
                   io::format_double(f.breaks[k + 1]);
            const auto& c = f.pieces[k].coeffs;
            if (c.empty()) out += " 0";
            for (double v : c) out += " " + io::format_double(v);
            out += "\n";
        }
    }
    return out;
}

// Parses the block format above; `line_base` offsets reported line numbers
// when the block is embedded in a larger file.
inline ProductDistribution parse_distribution(const std::vector<std::string>& lines,
                                              int line_base = 0) {
    std::vector<Distribution1D> marginals;
    std::vector<Atom> atoms;
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    auto flush = [&](int line_no) {
        if (atoms.empty() && pieces.empty())
            throw ParseError(line_no, "empty marginal block");
        PiecewisePolynomial density;
        if (!pieces.empty()) density = PiecewisePolynomial(breaks, pieces);
        marginals.emplace_back(atoms, density);
        atoms.clear();
        breaks.clear();
        pieces.clear();
    };
    int line_no = line_base;
    for (const auto& raw : lines) {
        ++line_no;
        std::vector<std::string> tok = io::tokenize(raw);
        if (tok.empty()) continue;
        if (tok[0] == "---") {
            flush(line_no);
            continue;
        }
        if (tok[0] == "atom") {
            if (tok.size() != 3) throw ParseError(line_no, "atom expects: atom <loc> <mass>");
            atoms.push_back(
                {io::parse_number(tok[1], line_no), io::parse_number(tok[2], line_no)});
        } else if (tok[0] == "segment") {
            if (tok.size() < 4)
                throw ParseError(line_no, "segment expects: segment <a> <b> <c0> ...");
            double a = io::parse_number(tok[1], line_no);
            double b = io::parse_number(tok[2], line_no);
            if (!(a < b)) throw ParseError(line_no, "segment requires a < b");
            if (!breaks.empty() && std::abs(breaks.back() - a) > 1e-12)
                throw ParseError(line_no, "segments must be listed contiguously");
            std::vector<double> coeffs;
            for (std::size_t k = 3; k < tok.size(); ++k)
                coeffs.push_back(io::parse_number(tok[k], line_no));
            if (coeffs.size() > 5)
                throw ParseError(line_no, "segment polynomial degree exceeds 4");
            if (breaks.empty()) breaks.push_back(a);
            breaks.push_back(b);
            pieces.emplace_back(std::move(coeffs));
        } else {
            throw ParseError(line_no, "unknown directive: " + tok[0]);
        }
    }
    flush(line_no);
    return ProductDistribution(std::move(marginals));
}

}  // namespace sirdro
