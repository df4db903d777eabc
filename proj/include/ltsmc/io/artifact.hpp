#pragma once

#include <json.hpp>

#include "../assumption.hpp"
#include "../interval_spec.hpp"
#include "aut.hpp"

namespace ltsmc::io {

struct RunStats {
    size_t states = 0;
    size_t transitions = 0;
    long long wall_time_ms = 0;
    long long peak_mem_kb = 0;
};

/// JSON artifact for an assumption run; the aut texts embed the automata,
/// stats mirror the usual size/time/memory reporting. wall_time_ms and
/// peak_mem_kb are informational and excluded from golden comparisons.
inline nlohmann::json assumption_artifact(const AssumptionResult& res, const InterfaceAlphabet& iface,
                                          const RunStats& stats) {
    nlohmann::json j;
    j["alphabet"] = nlohmann::json::array();
    j["tags"] = nlohmann::json::object();
    for (size_t i = 0; i < iface.sigma.size(); ++i) {
        j["alphabet"].push_back(iface.sigma[i].str());
        j["tags"][iface.sigma[i].str()] = iface.is_actual[i] ? "actual" : "estimate";
    }
    j["assumption"] = {
        {"aut", to_aut(res.assumption)},
        {"states", res.assumption.num_states},
        {"transitions", res.assumption.transitions.size()},
        {"initial", res.assumption.initial},
    };
    j["err_automaton"] = {
        {"aut", to_aut(res.err_automaton)},
        {"states", res.err_automaton.num_states},
        {"transitions", res.err_automaton.transitions.size()},
        {"initial", res.err_automaton.initial},
        {"err_state", res.err_automaton.has_err ? nlohmann::json(Lts::kErr) : nlohmann::json()},
    };
    j["no_safe_context"] = res.no_safe_context;
    j["stats"] = {
        {"states", stats.states},
        {"transitions", stats.transitions},
        {"wall_time_ms", stats.wall_time_ms},
        {"peak_mem_kb", stats.peak_mem_kb},
    };
    return j;
}

inline std::string q_name(StateId s, const Lts& m) {
    if (m.is_err(s)) return "ERROR";
    // err holds slot 0; visible states are numbered from Q0
    return "Q" + std::to_string(m.has_err ? s - 1 : s);
}

/// Local specification export: one entry per spec, with the discrete and
/// interval renderings attached.
inline nlohmann::json localspec_artifact(const std::vector<LocalSpec>& specs, const Lts& a_err,
                                         const taxinet::DiscretizationConfig& cfg) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : specs) {
        nlohmann::json e;
        e["actual"] = {{"cte", s.actual.indices.at(0)}, {"he", s.actual.indices.at(1)}};
        e["allowed"] = nlohmann::json::array();
        for (const auto& a : s.allowed)
            e["allowed"].push_back({{"cte", a.indices.at(0)}, {"he", a.indices.at(1)}});
        e["provenance"] = nlohmann::json::array();
        for (StateId q : s.provenance) e["provenance"].push_back(q_name(q, a_err));
        e["fully_blocked"] = s.fully_blocked;
        auto iv = concretize(s, cfg);
        e["text_discrete"] = render_discrete(s);
        e["text_interval"] = render_intervals(iv);
        nlohmann::json boxes = nlohmann::json::array();
        for (const auto& [ci, hi] : iv.allowed_boxes) boxes.push_back({{"cte", ci.str()}, {"he", hi.str()}});
        e["intervals"] = {
            {"antecedent", {{"cte", iv.cte_actual.str()}, {"he", iv.he_actual.str()}}},
            {"consequent", boxes},
        };
        arr.push_back(std::move(e));
    }
    return arr;
}

} // namespace ltsmc::io
