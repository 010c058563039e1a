#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "../error.hpp"
#include "../montecarlo.hpp"

namespace cbandit {

inline constexpr std::string_view kCsvHeader =
    "instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed";

/// Shortest decimal that parses back to the same double; infinities as inf / -inf.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const std::vector<ErrorEstimate>& rows) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.instance_id << ',' << r.algorithm << ',' << r.T << ',' << r.runs << ',' << r.errors << ','
           << format_double(r.e_hat) << ',' << format_double(r.log_e_hat) << ',' << format_double(r.ci_lo) << ','
           << format_double(r.ci_hi) << ',' << r.seed << '\n';
    }
}

inline std::string to_csv(const std::vector<ErrorEstimate>& rows) {
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::size_t line, const char* field) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": bad " + field + " value '" + std::string(s) + "'");
    return v;
}

} // namespace detail

inline std::vector<ErrorEstimate> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw Error(ErrorCode::ParseError, "line 1: missing or unexpected CSV header");
    std::vector<ErrorEstimate> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 10)
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 10 fields");
        ErrorEstimate e;
        e.instance_id = std::string(f[0]);
        e.algorithm = std::string(f[1]);
        e.T = detail::parse_number<std::uint64_t>(f[2], lineno, "T");
        e.runs = detail::parse_number<std::uint64_t>(f[3], lineno, "runs");
        e.errors = detail::parse_number<std::uint64_t>(f[4], lineno, "errors");
        e.e_hat = detail::parse_number<double>(f[5], lineno, "e_hat");
        e.log_e_hat = detail::parse_number<double>(f[6], lineno, "log_e_hat");
        e.ci_lo = detail::parse_number<double>(f[7], lineno, "ci_lo");
        e.ci_hi = detail::parse_number<double>(f[8], lineno, "ci_hi");
        e.seed = detail::parse_number<std::uint64_t>(f[9], lineno, "seed");
        rows.push_back(std::move(e));
    }
    return rows;
}

} // namespace cbandit
