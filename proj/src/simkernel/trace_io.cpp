// Trace file: CSV with header
//   t,x,y,psi,yaw_setpoint,s_d,P_1,...,P_M,min_clearance,cross_track,latency_s
// and 9 significant digits per floating-point field.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "foam/simkernel.hpp"

namespace foam {

namespace {

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

void write_trace(const std::filesystem::path& path, const Trace& trace, int sectors) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "t,x,y,psi,yaw_setpoint,s_d";
    for (int i = 1; i <= sectors; ++i) out << ",P_" << i;
    out << ",min_clearance,cross_track,latency_s\n";
    for (const TraceRow& r : trace) {
        out << fmt9(r.t) << ',' << fmt9(r.x) << ',' << fmt9(r.y) << ',' << fmt9(r.psi) << ','
            << fmt9(r.yaw_setpoint) << ',' << r.s_d;
        for (int i = 0; i < sectors; ++i) {
            out << ',' << fmt9(static_cast<std::size_t>(i) < r.pom.size() ? r.pom[static_cast<std::size_t>(i)] : 0.0);
        }
        out << ',' << fmt9(r.min_clearance) << ',' << fmt9(r.cross_track) << ',' << fmt9(r.latency_s) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

Trace read_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace '" + path.string() + "' is empty");
    const auto header = split_csv(line);
    if (header.size() < 10 || header[0] != "t" || header[5] != "s_d" ||
        header[header.size() - 1] != "latency_s") {
        throw std::runtime_error("trace '" + path.string() + "' has an unexpected header");
    }
    const std::size_t sectors = header.size() - 9;
    for (std::size_t i = 0; i < sectors; ++i) {
        if (header[6 + i] != "P_" + std::to_string(i + 1)) {
            throw std::runtime_error("trace header: expected P_" + std::to_string(i + 1));
        }
    }

    Trace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size()) {
            throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        }
        TraceRow r;
        r.t = parse_number(f[0], line_no);
        r.x = parse_number(f[1], line_no);
        r.y = parse_number(f[2], line_no);
        r.psi = parse_number(f[3], line_no);
        r.yaw_setpoint = parse_number(f[4], line_no);
        r.s_d = static_cast<int>(parse_number(f[5], line_no));
        for (std::size_t i = 0; i < sectors; ++i) r.pom.push_back(parse_number(f[6 + i], line_no));
        r.min_clearance = parse_number(f[6 + sectors], line_no);
        r.cross_track = parse_number(f[7 + sectors], line_no);
        r.latency_s = parse_number(f[8 + sectors], line_no);
        // The file does not say which rows had vision; latency stats then span all rows.
        r.vision_active = true;
        trace.push_back(std::move(r));
    }
    return trace;
}

}  // namespace foam
