#include "pistonlab/spectrum_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace pistonlab {

namespace {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string flags_to_string(std::uint8_t flags) {
    if (flags == ModeFlagNone) return "-";
    std::string s;
    if (flags & ModeFlagZero) s = "zero";
    if (flags & ModeFlagDegenerate) s += s.empty() ? "degenerate" : "+degenerate";
    return s;
}

std::uint8_t flags_from_string(const std::string& s) {
    if (s == "-") return ModeFlagNone;
    std::uint8_t flags = ModeFlagNone;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find('+', pos);
        if (next == std::string::npos) next = s.size();
        const std::string token = s.substr(pos, next - pos);
        if (token == "zero")
            flags |= ModeFlagZero;
        else if (token == "degenerate")
            flags |= ModeFlagDegenerate;
        else
            throw invalid_input("unknown mode flag '" + token + "'");
        pos = next + 1;
    }
    return flags;
}

} // namespace

void write_spectrum(std::ostream& out, const Spectrum& spectrum) {
    out << "# geometry=" << (spectrum.geometry_tag.empty() ? "unknown" : spectrum.geometry_tag)
        << " omega_max=" << format_full(spectrum.omega_max);
    if (spectrum.tail.kind == TailDescriptor::Kind::Linear) {
        out << " tail=linear slope=" << format_full(spectrum.tail.slope)
            << " window_const=" << format_full(spectrum.tail.window_const);
    } else {
        out << " tail=box volume=" << format_full(spectrum.tail.box_volume)
            << " diag=" << format_full(spectrum.tail.box_diag);
    }
    out << "\n";
    for (const Mode& m : spectrum.modes)
        out << format_full(m.omega) << ',' << m.multiplicity << ','
            << flags_to_string(m.flags) << "\n";
}

std::string spectrum_to_text(const Spectrum& spectrum) {
    std::ostringstream oss;
    write_spectrum(oss, spectrum);
    return oss.str();
}

Spectrum read_spectrum(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# geometry=", 0) != 0)
        throw invalid_input("spectrum text must start with '# geometry=...'");

    Spectrum s;
    std::istringstream hs(header.substr(2));
    std::string token;
    std::string tail_kind;
    while (hs >> token) {
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos)
            throw invalid_input("malformed spectrum header token '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "geometry") s.geometry_tag = value;
        else if (key == "omega_max") s.omega_max = std::stod(value);
        else if (key == "tail") tail_kind = value;
        else if (key == "slope") s.tail.slope = std::stod(value);
        else if (key == "window_const") s.tail.window_const = std::stod(value);
        else if (key == "volume") s.tail.box_volume = std::stod(value);
        else if (key == "diag") s.tail.box_diag = std::stod(value);
        else throw invalid_input("unknown spectrum header key '" + key + "'");
    }
    if (tail_kind == "box")
        s.tail.kind = TailDescriptor::Kind::Box;
    else if (tail_kind == "linear" || tail_kind.empty())
        s.tail.kind = TailDescriptor::Kind::Linear;
    else
        throw invalid_input("unknown tail kind '" + tail_kind + "'");

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = (c1 == std::string::npos) ? c1 : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw invalid_input("malformed spectrum row '" + line + "'");
        Mode m;
        m.omega = std::stod(line.substr(0, c1));
        m.multiplicity = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
        m.flags = flags_from_string(line.substr(c2 + 1));
        s.modes.push_back(m);
    }
    s.validate();
    return s;
}

Spectrum spectrum_from_text(const std::string& text) {
    std::istringstream iss(text);
    return read_spectrum(iss);
}

} // namespace pistonlab
