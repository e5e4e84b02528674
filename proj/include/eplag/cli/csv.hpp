#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace eplag::cli {

/// Empty optionals print as empty fields.
using Cell = std::variant<double, std::optional<double>, long long, std::size_t, bool, std::string>;
using Row = std::vector<Cell>;

/// Shortest round-trip-safe form: 17 significant digits, %g style.
std::string format_real(double v);

std::string format_row(const Row& row);

/// Header plus rows, LF line endings. Every row must match the header width.
/// Returns the number of data rows; throws IoFailure.
std::size_t emit_csv(const std::vector<std::string>& header, const std::vector<Row>& rows, const std::string& path);

}  // namespace eplag::cli
