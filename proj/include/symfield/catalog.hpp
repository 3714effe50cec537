#pragma once

// Reference grid for the additive families: recorded degree-one counts,
// genus values per family member, and the published genus lower bound for
// each row. Two recorded genus entries fail the Hurwitz identity for their
// family (no integer different exponent produces them); the corrected
// values carried alongside are the ones the closed forms and the Hurwitz
// identity agree on.

#include <cstdint>
#include <optional>
#include <vector>

namespace symfield {

struct CatalogGenusCell {
    std::uint32_t i;                         // family member index
    std::uint64_t recorded;                  // published value
    std::optional<std::uint64_t> corrected;  // set when the published value is inconsistent
};

struct CatalogRow {
    std::uint32_t n;
    std::uint64_t q;
    std::uint64_t n1;                     // q^(2n-1) + 1
    std::vector<CatalogGenusCell> genus;  // descending i: n, n-1, ..., 2
    std::uint64_t genus_lower_bound;      // ceiling of the lower bound for (q^n, n1)
    bool subcover = false;                // row describes the degree-q subcover with i = 2
};

inline const std::vector<CatalogRow>& catalog_rows() {
    static const std::vector<CatalogRow> rows = {
        {3, 2, 17, {{2, 2, {}}}, 2, true},
        {3, 2, 33, {{3, 9, {}}, {2, 6, {}}}, 6, false},
        {3, 4, 1025, {{3, 150, {}}, {2, 120, {}}}, 74, false},
        {3, 8, 32769, {{3, 2268, {}}, {2, 2016, {}}}, 903, false},
        {3, 3, 244, {{3, 48, {}}, {2, 36, {}}}, 26, false},
        {3, 9, 59050, {{3, 3600, {}}, {2, 3240, {}}}, 1374, false},
        {3, 5, 3126, {{3, 360, {}}, {2, 300, {}}}, 167, false},
        {3, 7, 16808, {{3, 1344, {}}, {2, 1176, {}}}, 560, false},
        // recorded 7620 fails the Hurwitz identity for degree 121; the
        // closed form gives 7260
        {3, 11, 161052, {{3, 7920, {}}, {2, 7620, 7260}}, 2808, false},
        {4, 2, 129, {{4, 49, {}}, {3, 42, {}}, {2, 28, {}}}, 18, false},
        // recorded 2560 is not of the form 63*(m-1)/2 for any integer m;
        // the closed form gives 2520
        {4, 4, 16385, {{4, 2646, {}}, {3, 2560, 2520}, {2, 2016, {}}}, 667, false},
        {4, 3, 2188, {{4, 507, {}}, {3, 468, {}}, {2, 351, {}}}, 152, false},
        {4, 5, 78126, {{4, 9610, {}}, {3, 9300, {}}, {2, 7750, {}}}, 2071, false},
        {5, 2, 513, {{5, 225, {}}, {4, 210, {}}, {3, 180, {}}, {2, 120, {}}}, 57, false},
    };
    return rows;
}

}  // namespace symfield
