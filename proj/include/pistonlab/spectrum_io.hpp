#pragma once

#include <iosfwd>
#include <string>

#include "pistonlab/spectra.hpp"

namespace pistonlab {

/// Columnar text form of a spectrum:
///   # geometry=<tag> omega_max=<v> tail=<kind> <tail fields...>
///   omega,multiplicity,flags
/// with rows in strictly increasing omega. Flags: "-", "zero", "degenerate"
/// or "zero+degenerate".
void write_spectrum(std::ostream& out, const Spectrum& spectrum);
[[nodiscard]] std::string spectrum_to_text(const Spectrum& spectrum);

/// Inverse of write_spectrum; validates ordering and multiplicities.
[[nodiscard]] Spectrum read_spectrum(std::istream& in);
[[nodiscard]] Spectrum spectrum_from_text(const std::string& text);

} // namespace pistonlab
