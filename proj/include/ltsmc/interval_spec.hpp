#pragma once

#include "local_spec.hpp"
#include "taxinet.hpp"

namespace ltsmc {

/// A local spec translated back to continuous DNN outputs: intervals over
/// cte* / he* imply a disjunction of interval boxes over (cte, he).
struct IntervalSpec {
    taxinet::Interval cte_actual, he_actual;
    std::vector<std::pair<taxinet::Interval, taxinet::Interval>> allowed_boxes; // (cte, he)
};

inline taxinet::SystemState spec_actual_state(const LocalSpec& s, const taxinet::DiscretizationConfig& cfg) {
    if (s.actual.indices.size() != 2) throw std::invalid_argument("actual action is not of the form base[cte][he]");
    int c = s.actual.indices[0], h = s.actual.indices[1];
    if (c < 0 || c > cfg.max_cte || h < 0 || h >= taxinet::kHeBins)
        throw taxinet::OutOfRange("discrete value out of range in " + s.actual.str());
    return {c, h};
}

/// Replaces each discrete value by its bin interval, preserving the
/// configured endpoint openness.
inline IntervalSpec concretize(const LocalSpec& s, const taxinet::DiscretizationConfig& cfg) {
    IntervalSpec out;
    auto st = spec_actual_state(s, cfg);
    out.cte_actual = cfg.cte_bins[static_cast<size_t>(st.cte)];
    out.he_actual = cfg.he_by_index[static_cast<size_t>(st.he)];
    for (const auto& a : s.allowed) {
        if (a.indices.size() != 2) throw std::invalid_argument("estimate action is not of the form base[cte][he]");
        int c = a.indices[0], h = a.indices[1];
        if (c < 0 || c > cfg.max_cte || h < 0 || h >= taxinet::kHeBins)
            throw taxinet::OutOfRange("discrete value out of range in " + a.str());
        out.allowed_boxes.emplace_back(cfg.cte_bins[static_cast<size_t>(c)],
                                       cfg.he_by_index[static_cast<size_t>(h)]);
    }
    return out;
}

/// Discrete rendering, e.g.
/// (cte*=2 ∧ he*=2) ⇒ ((cte=1 ∧ he=2) ∨ (cte=2 ∧ he=0) ∨ (cte=2 ∧ he=2))
inline std::string render_discrete(const LocalSpec& s) {
    std::string out = "(cte*=" + std::to_string(s.actual.indices.at(0)) +
                      " ∧ he*=" + std::to_string(s.actual.indices.at(1)) + ") ⇒ (";
    if (s.allowed.empty()) out += "false";
    for (size_t i = 0; i < s.allowed.size(); ++i) {
        if (i) out += " ∨ ";
        out += "(cte=" + std::to_string(s.allowed[i].indices.at(0)) +
               " ∧ he=" + std::to_string(s.allowed[i].indices.at(1)) + ")";
    }
    out += ")";
    return out;
}

/// Continuous rendering, e.g.
/// (cte* ∈ [2.7,8) ∧ he* ∈ (11.66,35.0]) ⇒ ((cte∈[-2.7,2.7] ∧ he∈(11.66,35.0]) ∨ ...)
inline std::string render_intervals(const IntervalSpec& s) {
    std::string out = "(cte* ∈ " + s.cte_actual.str() + " ∧ he* ∈ " + s.he_actual.str() +
                      ") ⇒ (";
    if (s.allowed_boxes.empty()) out += "false";
    for (size_t i = 0; i < s.allowed_boxes.size(); ++i) {
        if (i) out += " ∨ ";
        out += "(cte∈" + s.allowed_boxes[i].first.str() + " ∧ he∈" +
               s.allowed_boxes[i].second.str() + ")";
    }
    out += ")";
    return out;
}

} // namespace ltsmc
