#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sfp/hilbert.hpp"

namespace sfp::harness {

/// One published reference row, digits exactly as printed.
struct ReferenceRow {
    std::size_t n;
    std::array<std::string_view, 5> entries;
};

/// Reference iterates for the 5x5 example started at (1,1,1,1,1):
/// rows n = 0..15, 20, 32, 33.
std::span<const ReferenceRow> table1_rows();

/// Parsed numeric value of a reference row.
Vector reference_values(const ReferenceRow& row);

/// Half a unit in the sixth printed decimal.
inline constexpr double kTable1Tolerance = 5e-7;

struct Table1RowComparison {
    std::size_t n;
    bool present = false;       // the run produced iterate n
    double max_deviation = 0.0;  // max componentwise |x_n - reference|, when present
    bool matched = false;       // present and max_deviation <= kTable1Tolerance
};

struct Table1Report {
    std::vector<Table1RowComparison> rows;

    bool row0_matches() const;
    /// Every reference row with n >= 1 is present and matched.
    bool all_later_rows_match() const;
    std::size_t matched_count() const;
};

/// Compares iterates (iterates[0] is the start point) against the reference rows.
/// Throws InvalidInput if iterates is empty or not 5-dimensional.
Table1Report compare_to_table1(std::span<const Vector> iterates);

} // namespace sfp::harness
