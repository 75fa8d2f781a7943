#pragma once

#include <string>

#include <json.hpp>

#include "pistonlab/piston.hpp"

namespace pistonlab {

/// Fixed 12-significant-digit float rendering used by every CLI output so
/// identical configs produce byte-identical files.
[[nodiscard]] std::string format_double(double v);

/// RFC-style CSV field quoting (quotes fields containing comma, quote, or
/// newline; doubles embedded quotes).
[[nodiscard]] std::string csv_escape(const std::string& field);

[[nodiscard]] nlohmann::json to_json(const ForceReport& report);
[[nodiscard]] nlohmann::json to_json(const FinitePartFit& fit);
[[nodiscard]] nlohmann::json to_json(const PistonAssembly3D& assembly);
[[nodiscard]] nlohmann::json to_json(const CubeVerdict& verdict);

/// Machine-readable sign-table fixture: the paper's qualitative force-sign
/// claims as one JSON object per scenario.
[[nodiscard]] nlohmann::json sign_table_fixture();

} // namespace pistonlab
