#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "resil/error.hpp"
#include "resil/format.hpp"
#include "resil/service.hpp"

namespace resil::io {

/// Reads a `t,s` CSV service trace.
inline ServiceTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw InvalidInput("trace file is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF)
        line.erase(0, 3);  // UTF-8 BOM
    if (line != "t,s")
        throw InvalidInput("trace header must be 't,s'");

    std::vector<double> times, values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw InvalidInput("trace line " + std::to_string(lineno) + ": expected two fields");
        times.push_back(parse_number(std::string_view(line).substr(0, comma)));
        values.push_back(parse_number(std::string_view(line).substr(comma + 1)));
    }
    return ServiceTrace(std::move(times), std::move(values));
}

inline ServiceTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open trace file " + path);
    return read_trace_csv(in);
}

inline void write_trace_csv(std::ostream& out, const ServiceTrace& trace) {
    out << "t,s\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << format_number(trace.times()[i]) << ',' << format_number(trace.values()[i]) << '\n';
}

} // namespace resil::io
