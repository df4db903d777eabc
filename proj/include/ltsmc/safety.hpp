#pragma once

#include <deque>
#include <optional>

#include "compose.hpp"
#include "determinize.hpp"

namespace ltsmc {

struct SafetyVerdict {
    bool safe = true;
    std::optional<Trace> counterexample; // present iff unsafe; shortest, tau-free
};

/// Reachability of err in m ∥ p_err. The counterexample is the observable
/// projection of a BFS-shortest error path of the product, so repeated runs
/// report the same trace.
inline SafetyVerdict check_safety(const Lts& m, const Lts& p_err) {
    Lts prod = compose(m, p_err);
    if (!prod.has_err) return {true, std::nullopt};

    auto out = prod.out_edges();
    struct Parent {
        StateId prev;
        std::int32_t label;
    };
    std::vector<Parent> parent(prod.num_states, {UINT32_MAX, Lts::kTau});
    std::vector<char> seen(prod.num_states, 0);
    std::deque<StateId> q{prod.initial};
    seen[prod.initial] = 1;

    if (prod.initial == Lts::kErr) return {false, Trace{}};
    while (!q.empty()) {
        StateId s = q.front();
        q.pop_front();
        for (const auto& t : out[s]) {
            if (seen[t.dst]) continue;
            seen[t.dst] = 1;
            parent[t.dst] = {s, t.label};
            if (t.dst == Lts::kErr) {
                Trace tr;
                for (StateId cur = t.dst; cur != prod.initial; cur = parent[cur].prev)
                    if (parent[cur].label != Lts::kTau) tr.push_back(prod.action_of(parent[cur].label));
                std::reverse(tr.begin(), tr.end());
                return {false, std::move(tr)};
            }
            q.push_back(t.dst);
        }
    }
    return {true, std::nullopt};
}

struct AcceptResult {
    bool accepted = false;
    // set when some trace action is not in the alphabet at all; the monitor
    // use case must tell "rejected" apart from "not in vocabulary"
    bool out_of_alphabet = false;
};

/// Language membership t ∈ L(m), by on-the-fly subset simulation (handles
/// nondeterminism and tau).
inline AcceptResult accepts(const Lts& m, const Trace& t) {
    detail::TauClosure clo(m);
    std::vector<std::vector<std::pair<std::int32_t, StateId>>> out(m.num_states);
    for (const auto& tr : m.transitions)
        if (tr.label != Lts::kTau) out[tr.src].emplace_back(tr.label, tr.dst);

    std::vector<StateId> cur = clo.of(m.initial);
    for (const auto& a : t) {
        std::int32_t l = m.label_of(a);
        if (l < 0) return {false, true};
        std::vector<StateId> nxt;
        for (StateId s : cur)
            for (auto [lab, d] : out[s])
                if (lab == l) nxt.push_back(d);
        if (nxt.empty()) return {false, false};
        std::sort(nxt.begin(), nxt.end());
        nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
        cur = clo.of_set(nxt);
    }
    return {true, false};
}

/// Replays an observable trace on m and reports whether it can end in err.
inline bool trace_reaches_err(const Lts& m, const Trace& t) {
    if (!m.has_err) return false;
    detail::TauClosure clo(m);
    std::vector<std::vector<std::pair<std::int32_t, StateId>>> out(m.num_states);
    for (const auto& tr : m.transitions)
        if (tr.label != Lts::kTau) out[tr.src].emplace_back(tr.label, tr.dst);
    std::vector<StateId> cur = clo.of(m.initial);
    auto has_err_state = [&](const std::vector<StateId>& ss) {
        return !ss.empty() && ss.front() == Lts::kErr;
    };
    if (t.empty()) return has_err_state(cur);
    for (const auto& a : t) {
        std::int32_t l = m.label_of(a);
        if (l < 0) return false;
        std::vector<StateId> nxt;
        for (StateId s : cur)
            for (auto [lab, d] : out[s])
                if (lab == l) nxt.push_back(d);
        if (nxt.empty()) return false;
        std::sort(nxt.begin(), nxt.end());
        nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
        cur = clo.of_set(nxt);
    }
    return has_err_state(cur);
}

} // namespace ltsmc
