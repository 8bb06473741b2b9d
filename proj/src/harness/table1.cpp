#include "sfp/harness/table1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfp/errors.hpp"
#include "sfp/numeric_text.hpp"

namespace sfp::harness {

namespace {

constexpr std::array<ReferenceRow, 19> kRows{{
    {0, {"1", "1", "1", "1", "1"}},
    {1, {"0.766667", "0.766667", "0.766667", "0.766667", "1"}},
    {2, {"0.587778", "0.587778", "0.587778", "0.642222", "1"}},
    {3, {"0.450630", "0.450630", "0.463333", "0.575852", "1"}},
    {4, {"0.345483", "0.348447", "0.381477", "0.540454", "1"}},
    {5, {"0.265562", "0.274850", "0.329560", "0.521576", "1"}},
    {6, {"0.205764", "0.223484", "0.297466", "0.511507", "1"}},
    {7, {"0.161887", "0.188600", "0.278000", "0.506137", "1"}},
    {8, {"0.130347", "0.165454", "0.266366", "0.503273", "1"}},
    {9, {"0.108124", "0.150394", "0.259492", "0.501746", "1"}},
    {10, {"0.092758", "0.140758", "0.255470", "0.500931", "1"}},
    {11, {"0.082315", "0.134681", "0.253134", "0.500497", "1"}},
    {12, {"0.075327", "0.130894", "0.251788", "0.500265", "1"}},
    {13, {"0.070716", "0.128561", "0.251015", "0.500141", "1"}},
    {14, {"0.067713", "0.127136", "0.250574", "0.500075", "1"}},
    {15, {"0.065779", "0.126273", "0.250324", "0.500040", "1"}},
    {20, {"0.062790", "0.125089", "0.250018", "0.500002", "1"}},
    {32, {"0.062501", "0.125000", "0.250000", "0.500000", "1"}},
    {33, {"0.062500", "0.125000", "0.250000", "0.500000", "1"}},
}};

} // namespace

std::span<const ReferenceRow> table1_rows() { return kRows; }

Vector reference_values(const ReferenceRow& row) {
    std::array<double, 5> v{};
    for (std::size_t i = 0; i < 5; ++i) v[i] = parse_real(row.entries[i]);
    return Vector(v);
}

bool Table1Report::row0_matches() const {
    return !rows.empty() && rows.front().n == 0 && rows.front().present && rows.front().max_deviation == 0.0;
}

bool Table1Report::all_later_rows_match() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const Table1RowComparison& r) { return r.n == 0 || r.matched; });
}

std::size_t Table1Report::matched_count() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const Table1RowComparison& r) { return r.matched; }));
}

Table1Report compare_to_table1(std::span<const Vector> iterates) {
    if (iterates.empty()) throw InvalidInput("compare_to_table1: no iterates");
    for (const auto& x : iterates) {
        if (x.dim() != 5) {
            throw InvalidInput("compare_to_table1: iterates must be 5-dimensional, got " + std::to_string(x.dim()));
        }
    }
    Table1Report report;
    for (const auto& row : kRows) {
        Table1RowComparison cmp{row.n};
        if (row.n < iterates.size()) {
            cmp.present = true;
            cmp.max_deviation = max_abs_diff(iterates[row.n], reference_values(row));
            cmp.matched = cmp.max_deviation <= kTable1Tolerance;
        }
        report.rows.push_back(cmp);
    }
    return report;
}

} // namespace sfp::harness
