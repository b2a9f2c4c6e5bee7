#include "mlcd/conley.hpp"

#include <stdexcept>

#include "json.hpp"

namespace mlcd {

ExpectedBetti expected_betti_table(const std::string& system_name) {
    if (system_name == "linear_separatrix")
        return {{"U", {1, 0}}, {"N0", {1, 0}}, {"N1", {1, 0}}};
    if (system_name == "radial_bistable")
        return {{"U", {1, 1}}, {"N0", {1, 1}}, {"N1", {1, 0}}};
    if (system_name == "radial_tristable")
        return {{"U", {2, 2}}, {"N0", {1, 1}}, {"N1", {1, 1}}, {"N2", {1, 0}}};
    if (system_name == "nonlinear_separatrix")
        return {{"U", {1, 0, 0, 0}}, {"N0", {1, 0, 0, 0}}, {"N1", {1, 0, 0, 0}}};
    if (system_name == "hill_periodic_3d")
        return {{"U", {1, 0, 0}},
                {"N0", {1, 0, 0}},
                {"N1", {1, 0, 0}},
                {"N2", {1, 0, 0}},
                {"N3", {1, 0, 0}}};
    if (system_name == "emt_hill_6d")
        return {{"U", {1, 0, 0, 0, 0, 0}},
                {"N0", {1, 0, 0, 0, 0, 0}},
                {"N1", {1, 0, 0, 0, 0, 0}}};
    if (system_name == "ellipsoidal_2d")
        return {{"U", {1, 1}}, {"N0", {1, 1}}, {"N1", {1, 0}}};
    if (system_name == "ellipsoidal_3d")
        return {{"U", {1, 0, 1}}, {"N0", {1, 0, 1}}, {"N1", {1, 0, 0}}};
    if (system_name == "ellipsoidal_4d")
        return {{"U", {1, 0, 0, 1}}, {"N0", {1, 0, 0, 1}}, {"N1", {1, 0, 0, 0}}};
    if (system_name == "ellipsoidal_5d")
        return {{"U", {1, 0, 0, 0, 1}}, {"N0", {1, 0, 0, 0, 1}}, {"N1", {1, 0, 0, 0, 0}}};
    throw std::invalid_argument("expected_betti_table: unknown system '" + system_name + "'");
}

ExpectedBetti expected_betti_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExpectedBetti table;
    for (const auto& [tag, vec] : j.items()) table[tag] = vec.get<std::vector<long>>();
    return table;
}

std::string expected_betti_to_json(const ExpectedBetti& table) {
    nlohmann::json j;
    for (const auto& [tag, vec] : table) j[tag] = vec;
    return j.dump(2);
}

bool betti_matches(const BettiVector& computed, const std::vector<long>& expected) {
    const std::size_t n = std::max(computed.betti.size(), expected.size());
    for (std::size_t k = 0; k < n; ++k) {
        const long a = k < computed.betti.size() ? computed.betti[k] : 0;
        const long b = k < expected.size() ? expected[k] : 0;
        if (a != b) return false;
    }
    return true;
}

ConleyCheck conley_check(const RegionAssignment& assignment, const ExpectedBetti& expected) {
    ConleyCheck out;
    out.success = true;

    std::vector<std::pair<std::string, int>> tags;
    for (int k = 0; k < assignment.num_labels; ++k) tags.emplace_back("N" + std::to_string(k), k);
    tags.emplace_back("U", kUncertain);

    for (const auto& [tag_name, tag] : tags) {
        TagResult result;
        result.tag = tag_name;
        const auto it = expected.find(tag_name);
        if (it == expected.end())
            throw std::invalid_argument("conley_check: expected table lacks tag " + tag_name);
        result.expected = it->second;

        const CubicalComplex cx = to_cubical(assignment, tag);
        if (cx.empty()) {
            result.empty = true;
            result.matches = false;
            if (out.success) out.failure = "region " + tag_name + " is empty";
            out.success = false;
        } else {
            result.computed = betti(cx);
            result.matches = betti_matches(result.computed, result.expected);
            if (!result.matches && out.success) {
                out.failure = "region " + tag_name + " has wrong homology";
                out.success = false;
            }
        }
        out.per_tag.push_back(std::move(result));
    }
    return out;
}

MorseReport morse_report(const ConleyCheck& check) {
    MorseReport report;
    for (const auto& result : check.per_tag) {
        if (result.tag == "U")
            report.top = result.computed;
        else
            report.minimal.push_back(result.computed);
    }
    const auto n_min = static_cast<int>(report.minimal.size());
    for (int k = 0; k < n_min; ++k) report.order.emplace_back(k, -1);
    report.lattice_elements = (1L << n_min) + 1;
    return report;
}

std::string conley_result_to_json(const ConleyCheck& check, const MorseReport& report) {
    nlohmann::json j;
    j["success"] = check.success;
    if (!check.failure.empty()) j["failure"] = check.failure;
    for (const auto& result : check.per_tag) {
        nlohmann::json entry;
        entry["empty"] = result.empty;
        entry["expected"] = result.expected;
        if (!result.empty) entry["betti"] = result.computed.betti;
        entry["matches"] = result.matches;
        j["per_tag_betti"][result.tag] = entry;
    }
    nlohmann::json poset;
    for (std::size_t k = 0; k < report.minimal.size(); ++k) {
        nlohmann::json node;
        node["name"] = "M" + std::to_string(k);
        node["conley_index"] = report.minimal[k].betti;
        poset["minimal"].push_back(node);
    }
    poset["top"] = {{"name", "M"}, {"betti", report.top.betti}};
    poset["order"] = nlohmann::json::array();
    for (const auto& [k, top] : report.order)
        poset["order"].push_back({"M" + std::to_string(k), "M"});
    poset["lattice_elements"] = report.lattice_elements;
    j["morse_poset"] = poset;
    return j.dump(2);
}

}  // namespace mlcd
