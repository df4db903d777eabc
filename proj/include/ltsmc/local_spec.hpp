#pragma once

#include <map>
#include <set>
#include <stdexcept>

#include "assumption.hpp"

namespace ltsmc {

/// Raised when the err-automaton does not have the alternating
/// actual/estimate shape the mining step relies on.
struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One mined obligation: when the actual system state is `actual`, any
/// estimate outside `allowed` drives the monitored system into err.
struct LocalSpec {
    Action actual;
    std::vector<Action> allowed;       // sorted
    std::vector<StateId> provenance;   // err-adjacent states this came from
    bool fully_blocked = false;        // allowed is empty

    bool operator==(const LocalSpec& o) const {
        return actual == o.actual && allowed == o.allowed;
    }
};

/// Algorithm: for every state q with estimate transitions into err, collect
/// E = {a | (q,a,err)}, set E' = Est − E, and emit one spec per incoming
/// actual-labeled transition (q', a', q). Identical (actual, allowed) pairs
/// are deduplicated; provenance keeps every source state.
inline std::vector<LocalSpec> synthesize_local_specs(const Lts& a_err, const InterfaceAlphabet& iface) {
    const auto est = iface.estimates();

    std::map<StateId, std::set<Action>> err_sets;
    for (const auto& t : a_err.transitions) {
        if (!a_err.is_err(t.dst)) continue;
        const Action& a = a_err.action_of(t.label);
        if (iface.actual(a))
            throw StructureError("actual-labeled transition into err from state " + std::to_string(t.src) +
                                 " on " + a.str());
        err_sets[t.src].insert(a);
    }

    std::vector<LocalSpec> specs;
    for (const auto& [q, E] : err_sets) {
        std::vector<Action> allowed;
        std::set_difference(est.begin(), est.end(), E.begin(), E.end(), std::back_inserter(allowed));
        bool found_incoming = false;
        for (const auto& t : a_err.transitions) {
            if (t.dst != q || a_err.is_err(t.src)) continue;
            const Action& incoming = a_err.action_of(t.label);
            if (!iface.actual(incoming)) {
                if (std::binary_search(est.begin(), est.end(), incoming))
                    throw StructureError("estimate-labeled transition into err-adjacent state " +
                                         std::to_string(q) + " on " + incoming.str());
                continue; // action outside the tagged interface
            }
            found_incoming = true;
            LocalSpec s{incoming, allowed, {q}, allowed.empty()};
            auto it = std::find(specs.begin(), specs.end(), s);
            if (it == specs.end())
                specs.push_back(std::move(s));
            else if (std::find(it->provenance.begin(), it->provenance.end(), q) == it->provenance.end())
                it->provenance.push_back(q);
        }
        (void)found_incoming;
    }

    std::sort(specs.begin(), specs.end(), [](const LocalSpec& a, const LocalSpec& b) {
        if (a.actual.indices != b.actual.indices) return a.actual.indices < b.actual.indices;
        if (a.actual != b.actual) return a.actual < b.actual;
        return a.provenance < b.provenance;
    });
    return specs;
}

/// Conjunction view: one obligation per actual, intersecting allowed sets
/// that different err-adjacent states impose on the same actual.
inline std::vector<LocalSpec> merge_specs_by_actual(const std::vector<LocalSpec>& specs) {
    std::map<Action, LocalSpec> merged;
    for (const auto& s : specs) {
        auto it = merged.find(s.actual);
        if (it == merged.end()) {
            merged.emplace(s.actual, s);
            continue;
        }
        std::vector<Action> inter;
        std::set_intersection(it->second.allowed.begin(), it->second.allowed.end(), s.allowed.begin(),
                              s.allowed.end(), std::back_inserter(inter));
        it->second.allowed = std::move(inter);
        it->second.fully_blocked = it->second.allowed.empty();
        for (StateId q : s.provenance)
            if (std::find(it->second.provenance.begin(), it->second.provenance.end(), q) ==
                it->second.provenance.end())
                it->second.provenance.push_back(q);
    }
    std::vector<LocalSpec> out;
    for (auto& [k, v] : merged) {
        std::sort(v.provenance.begin(), v.provenance.end());
        out.push_back(std::move(v));
    }
    return out;
}

/// True iff every reachable actual-then-estimate step of m2 obeys every
/// spec for that actual: for all specs with actual = a', the following
/// estimate must be allowed. Estimates reachable through tau after the
/// actual count as "followed by".
inline bool satisfies_specs(const Lts& m2, const std::vector<LocalSpec>& specs,
                            const InterfaceAlphabet& iface) {
    if (specs.empty()) return true;
    std::map<Action, std::vector<const LocalSpec*>> by_actual;
    for (const auto& s : specs) by_actual[s.actual].push_back(&s);

    detail::TauClosure clo(m2);
    auto out = m2.out_edges();
    std::vector<char> reachable(m2.num_states, 0);
    for (StateId s : m2.reachable_states()) reachable[s] = 1;

    const auto est = iface.estimates();
    for (const auto& t : m2.transitions) {
        if (t.label == Lts::kTau || !reachable[t.src]) continue;
        auto it = by_actual.find(m2.action_of(t.label));
        if (it == by_actual.end()) continue;
        for (StateId y : clo.of(t.dst)) {
            for (const auto& e : out[y]) {
                if (e.label == Lts::kTau) continue;
                const Action& follower = m2.action_of(e.label);
                if (!std::binary_search(est.begin(), est.end(), follower)) continue;
                for (const LocalSpec* sp : it->second)
                    if (!std::binary_search(sp->allowed.begin(), sp->allowed.end(), follower)) return false;
            }
        }
    }
    return true;
}

} // namespace ltsmc
