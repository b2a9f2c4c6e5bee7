#ifndef MLCD_CONLEY_HPP
#define MLCD_CONLEY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlcd/cubical.hpp"

namespace mlcd {

/// Expected Betti vectors keyed by region tag ("N0".."Nk" and "U").
/// Vectors of different lengths compare equal up to trailing zeros.
using ExpectedBetti = std::map<std::string, std::vector<long>>;

/// Reference table per catalog system.
ExpectedBetti expected_betti_table(const std::string& system_name);

ExpectedBetti expected_betti_from_json(const std::string& text);
std::string expected_betti_to_json(const ExpectedBetti& table);

bool betti_matches(const BettiVector& computed, const std::vector<long>& expected);

struct TagResult {
    std::string tag;
    bool empty = false;
    BettiVector computed;
    std::vector<long> expected;
    bool matches = false;
};

struct ConleyCheck {
    bool success = false;
    std::vector<TagResult> per_tag;
    std::string failure;  // first mismatch, when any
};

/// Verify every labeled region and the uncertain region against the expected
/// table. An empty region is an automatic failure.
ConleyCheck conley_check(const RegionAssignment& assignment, const ExpectedBetti& expected);

/// Poset of the recovered invariant sets: one minimal node per label, whose
/// index is the homology of its region, below a single maximal node carrying
/// the uncertain region's homology. The matching attractor lattice has
/// 2^L + 1 elements.
struct MorseReport {
    std::vector<BettiVector> minimal;  // per label
    BettiVector top;                   // uncertain region
    std::vector<std::pair<int, int>> order;  // (k, top) covers, top encoded as -1
    long lattice_elements = 0;
};

MorseReport morse_report(const ConleyCheck& check);

std::string conley_result_to_json(const ConleyCheck& check, const MorseReport& report);

}  // namespace mlcd

#endif
