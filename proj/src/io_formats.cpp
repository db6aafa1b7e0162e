#include "phaseret/io_formats.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace phaseret {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail_at(const std::string &path, long line,
                          const std::string &what) {
    throw std::runtime_error(path + ": line " + std::to_string(line) + ": " +
                             what);
}

// Parses a full double (including nan/inf spellings); the whole token must
// be consumed. Underflow to denormals is accepted, overflow is not.
bool parse_double(const std::string &tok, double &out) {
    if (tok.empty() || std::isspace(static_cast<unsigned char>(tok[0])))
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
        return false;
    return !(errno == ERANGE && std::abs(out) == HUGE_VAL);
}

bool parse_long(const std::string &tok, long long &out) {
    if (tok.empty())
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtoll(tok.c_str(), &end, 10);
    return end == tok.c_str() + tok.size() && errno != ERANGE;
}

bool parse_u64(const std::string &tok, unsigned long long &out) {
    if (tok.empty() || tok[0] == '-')
        return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtoull(tok.c_str(), &end, 10);
    return end == tok.c_str() + tok.size() && errno != ERANGE;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Strips one trailing carriage return so CRLF input still parses.
void chomp(std::string &line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

constexpr char kResultsHeader[] =
    "algo,n,m,sigma_n2,trial,seed,correlation,iterations,runtime_ms,"
    "sigma_n2_hat";

}  // namespace

void write_cplx(const std::string &path, const CMatrix &mat) {
    if (!mat.allFinite())
        throw std::invalid_argument("write_cplx: non-finite entry");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_cplx: cannot open " + path);
    out << "#cplx-csv v1 rows=" << mat.rows() << " cols=" << mat.cols()
        << "\n";
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            if (c)
                out << ',';
            out << fmt_double(mat(r, c).real()) << ':'
                << fmt_double(mat(r, c).imag());
        }
        out << '\n';
    }
    if (!out)
        throw std::runtime_error("write_cplx: write failed on " + path);
}

CMatrix read_cplx(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_cplx: cannot open " + path);

    std::string line;
    long lineno = 1;
    if (!std::getline(in, line))
        fail_at(path, 1, "missing header");
    chomp(line);
    long long rows = 0, cols = 0;
    {
        std::istringstream hs(line);
        std::string tag, ver, rtok, ctok;
        hs >> tag >> ver >> rtok >> ctok;
        const bool ok = tag == "#cplx-csv" && ver == "v1" &&
                        rtok.rfind("rows=", 0) == 0 &&
                        ctok.rfind("cols=", 0) == 0 &&
                        parse_long(rtok.substr(5), rows) &&
                        parse_long(ctok.substr(5), cols) && rows >= 1 &&
                        cols >= 1 && hs.eof();
        if (!ok)
            fail_at(path, 1, "malformed header '" + line + "'");
    }

    CMatrix mat(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        ++lineno;
        if (!std::getline(in, line))
            fail_at(path, lineno,
                    "expected " + std::to_string(rows) +
                        " data lines, file ends after " + std::to_string(r));
        chomp(line);
        const std::vector<std::string> fields = split(line, ',');
        if (static_cast<long long>(fields.size()) != cols)
            fail_at(path, lineno,
                    "expected " + std::to_string(cols) + " fields, found " +
                        std::to_string(fields.size()));
        for (long long c = 0; c < cols; ++c) {
            const std::string &f = fields[c];
            const std::size_t colon = f.find(':');
            double re = 0.0, im = 0.0;
            if (colon == std::string::npos ||
                !parse_double(f.substr(0, colon), re) ||
                !parse_double(f.substr(colon + 1), im))
                fail_at(path, lineno, "unparsable field '" + f + "'");
            mat(r, c) = cplx(re, im);
        }
    }
    while (std::getline(in, line)) {
        ++lineno;
        chomp(line);
        if (!line.empty())
            fail_at(path, lineno,
                    "expected " + std::to_string(rows) +
                        " data lines, found extra data");
    }
    return mat;
}

void write_results(const std::string &path, std::vector<TrialResult> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const TrialResult &a, const TrialResult &b) {
                  return std::tie(a.algo, a.m, a.sigma_n2, a.trial) <
                         std::tie(b.algo, b.m, b.sigma_n2, b.trial);
              });
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_results: cannot open " + path);
    out << kResultsHeader << "\n";
    for (const TrialResult &r : rows) {
        out << r.algo << ',' << r.n << ',' << r.m << ','
            << fmt_double(r.sigma_n2) << ',' << r.trial << ',' << r.seed
            << ',' << fmt_double(r.correlation) << ',' << r.iterations << ','
            << fmt_double(r.runtime_ms) << ',' << fmt_double(r.sigma_n2_hat)
            << '\n';
    }
    if (!out)
        throw std::runtime_error("write_results: write failed on " + path);
}

std::vector<TrialResult> read_results(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_results: cannot open " + path);
    std::string line;
    long lineno = 1;
    if (!std::getline(in, line))
        fail_at(path, 1, "missing header");
    chomp(line);
    if (line != kResultsHeader)
        fail_at(path, 1, "unexpected header '" + line + "'");

    std::vector<TrialResult> rows;
    while (std::getline(in, line)) {
        ++lineno;
        chomp(line);
        if (line.empty())
            continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 10)
            fail_at(path, lineno,
                    "expected 10 fields, found " + std::to_string(f.size()));
        TrialResult r;
        long long n = 0, m = 0, trial = 0, iters = 0;
        unsigned long long seed = 0;
        const bool ok = parse_long(f[1], n) && parse_long(f[2], m) &&
                        parse_double(f[3], r.sigma_n2) &&
                        parse_long(f[4], trial) && parse_u64(f[5], seed) &&
                        parse_double(f[6], r.correlation) &&
                        parse_long(f[7], iters) &&
                        parse_double(f[8], r.runtime_ms) &&
                        parse_double(f[9], r.sigma_n2_hat);
        if (!ok || f[0].empty())
            fail_at(path, lineno, "unparsable row '" + line + "'");
        r.algo = f[0];
        r.n = static_cast<int>(n);
        r.m = static_cast<int>(m);
        r.trial = static_cast<int>(trial);
        r.seed = seed;
        r.iterations = static_cast<int>(iters);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace phaseret
