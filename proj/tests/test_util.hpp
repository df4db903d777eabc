#pragma once

// Shared test helpers: independent oracles (brute-force product, path
// enumeration, trace-language comparison), an isomorphism checker, and
// small hand-built machines. The oracles stay independent of the library
// code paths they check.

#include <functional>
#include <map>
#include <set>

#include "ltsmc/compose.hpp"
#include "ltsmc/random_models.hpp"
#include "ltsmc/safety.hpp"

namespace tutil {

using namespace ltsmc;

// Brute-force parallel composition straight from the two inference rules,
// over *all* state pairs (no reachability): interleave unshared/tau moves,
// synchronize shared actions. Returns the transition set over pair-states.
struct BruteProduct {
    std::set<std::tuple<std::pair<StateId, StateId>, std::string, std::pair<StateId, StateId>>> transitions;
    std::pair<StateId, StateId> initial;
};

inline BruteProduct brute_force_product(const Lts& a, const Lts& b) {
    BruteProduct out;
    out.initial = {a.initial, b.initial};
    auto shared = alphabet_intersection(a.alphabet, b.alphabet);
    auto is_shared = [&](const Action& x) { return std::binary_search(shared.begin(), shared.end(), x); };
    for (StateId s1 = 0; s1 < a.num_states; ++s1)
        for (StateId s2 = 0; s2 < b.num_states; ++s2) {
            for (const auto& t : a.transitions) {
                if (t.src != s1) continue;
                if (t.label != Lts::kTau && is_shared(a.action_of(t.label))) continue;
                out.transitions.insert({{s1, s2}, t.label == Lts::kTau ? "tau" : a.action_of(t.label).str(),
                                        {t.dst, s2}});
            }
            for (const auto& t : b.transitions) {
                if (t.src != s2) continue;
                if (t.label != Lts::kTau && is_shared(b.action_of(t.label))) continue;
                out.transitions.insert({{s1, s2}, t.label == Lts::kTau ? "tau" : b.action_of(t.label).str(),
                                        {s1, t.dst}});
            }
            for (const auto& t1 : a.transitions) {
                if (t1.src != s1 || t1.label == Lts::kTau) continue;
                const Action& x = a.action_of(t1.label);
                if (!is_shared(x)) continue;
                for (const auto& t2 : b.transitions) {
                    if (t2.src != s2 || t2.label == Lts::kTau) continue;
                    if (b.action_of(t2.label) != x) continue;
                    out.transitions.insert({{s1, s2}, x.str(), {t1.dst, t2.dst}});
                }
            }
        }
    return out;
}

// reachable transition set of the brute product, as (pairs, label, pairs)
inline std::set<std::tuple<std::string, std::string, std::string>> brute_reachable_edges(const Lts& a,
                                                                                         const Lts& b) {
    auto bp = brute_force_product(a, b);
    std::map<std::pair<StateId, StateId>, std::vector<std::pair<std::string, std::pair<StateId, StateId>>>> adj;
    for (const auto& [s, l, d] : bp.transitions) adj[s].emplace_back(l, d);
    std::set<std::pair<StateId, StateId>> seen{bp.initial};
    std::vector<std::pair<StateId, StateId>> q{bp.initial};
    std::set<std::tuple<std::string, std::string, std::string>> edges;
    auto pname = [](std::pair<StateId, StateId> p) {
        return std::to_string(p.first) + "." + std::to_string(p.second);
    };
    while (!q.empty()) {
        auto s = q.back();
        q.pop_back();
        for (const auto& [l, d] : adj[s]) {
            edges.insert({pname(s), l, pname(d)});
            if (seen.insert(d).second) q.push_back(d);
        }
    }
    return edges;
}

// All traces of m up to the given length, by path enumeration.
inline std::set<Trace> enumerate_traces(const Lts& m, size_t max_len) {
    std::set<Trace> out;
    // DFS over (state, trace) with tau moves not extending the trace
    struct Item {
        StateId s;
        Trace t;
    };
    auto adj = m.out_edges();
    std::vector<Item> stack{{m.initial, {}}};
    std::set<std::pair<StateId, std::string>> visited; // cut runaway tau loops
    out.insert(Trace{});
    while (!stack.empty()) {
        auto [s, t] = stack.back();
        stack.pop_back();
        if (!visited.insert({s, trace_str(t)}).second) continue;
        for (const auto& e : adj[s]) {
            Trace nt = t;
            if (e.label != Lts::kTau) {
                if (t.size() == max_len) continue;
                nt.push_back(m.action_of(e.label));
                out.insert(nt);
            }
            stack.push_back({e.dst, nt});
        }
    }
    return out;
}

// Traces of m (up to max_len) that can end in err.
inline std::set<Trace> enumerate_err_traces(const Lts& m, size_t max_len) {
    std::set<Trace> out;
    if (!m.has_err) return out;
    auto adj = m.out_edges();
    struct Item {
        StateId s;
        Trace t;
    };
    std::vector<Item> stack{{m.initial, {}}};
    std::set<std::pair<StateId, std::string>> visited;
    while (!stack.empty()) {
        auto [s, t] = stack.back();
        stack.pop_back();
        if (m.is_err(s)) {
            out.insert(t);
            continue;
        }
        if (!visited.insert({s, trace_str(t)}).second) continue;
        for (const auto& e : adj[s]) {
            Trace nt = t;
            if (e.label != Lts::kTau) {
                if (t.size() == max_len) continue;
                nt.push_back(m.action_of(e.label));
            }
            stack.push_back({e.dst, nt});
        }
    }
    return out;
}

// Exact graph isomorphism (labels, initial, err) by backtracking with
// degree-signature pruning. Intended for small machines.
inline bool isomorphic(const Lts& a, const Lts& b) {
    if (a.num_states != b.num_states || a.has_err != b.has_err) return false;
    if (a.transitions.size() != b.transitions.size()) return false;

    auto sig = [](const Lts& m) {
        std::vector<std::multiset<std::string>> outsig(m.num_states), insig(m.num_states);
        for (const auto& t : m.transitions) {
            outsig[t.src].insert(m.label_str(t.label));
            insig[t.dst].insert(m.label_str(t.label));
        }
        std::vector<std::string> s(m.num_states);
        for (StateId i = 0; i < m.num_states; ++i) {
            for (const auto& x : outsig[i]) s[i] += ">" + x;
            for (const auto& x : insig[i]) s[i] += "<" + x;
        }
        return s;
    };
    auto siga = sig(a), sigb = sig(b);

    std::map<StateId, std::vector<std::pair<std::string, StateId>>> adja, adjb;
    for (const auto& t : a.transitions) adja[t.src].emplace_back(a.label_str(t.label), t.dst);
    for (const auto& t : b.transitions) adjb[t.src].emplace_back(b.label_str(t.label), t.dst);
    for (auto& [k, v] : adja) std::sort(v.begin(), v.end());
    for (auto& [k, v] : adjb) std::sort(v.begin(), v.end());

    std::vector<std::int64_t> map_ab(a.num_states, -1), map_ba(b.num_states, -1);

    std::function<bool(StateId)> assign = [&](StateId sa) -> bool {
        if (sa == a.num_states) {
            // verify all edges both ways
            std::set<std::tuple<StateId, std::string, StateId>> ea, eb;
            for (const auto& t : a.transitions)
                ea.insert({static_cast<StateId>(map_ab[t.src]), a.label_str(t.label),
                           static_cast<StateId>(map_ab[t.dst])});
            for (const auto& t : b.transitions) eb.insert({t.src, b.label_str(t.label), t.dst});
            return ea == eb;
        }
        if (map_ab[sa] != -1) return assign(sa + 1);
        for (StateId sb = 0; sb < b.num_states; ++sb) {
            if (map_ba[sb] != -1 || siga[sa] != sigb[sb]) continue;
            if ((sa == a.initial) != (sb == b.initial)) continue;
            if (a.has_err && ((sa == Lts::kErr) != (sb == Lts::kErr))) continue;
            map_ab[sa] = sb;
            map_ba[sb] = sa;
            if (assign(sa + 1)) return true;
            map_ab[sa] = -1;
            map_ba[sb] = -1;
        }
        return false;
    };
    return assign(0);
}

// language equality on sampled traces plus short exhaustive prefixes
inline bool language_equal_sampled(const Lts& a, const Lts& b, testgen::Rng& rng, int samples = 200,
                                   int max_len = 6) {
    for (const auto& t : enumerate_traces(a, 3))
        if (!accepts(b, t).accepted) return false;
    for (const auto& t : enumerate_traces(b, 3))
        if (!accepts(a, t).accepted) return false;
    for (int i = 0; i < samples; ++i) {
        // random words over the union alphabet
        auto alpha = alphabet_union(a.alphabet, b.alphabet);
        if (alpha.empty()) return true;
        Trace t;
        int len = static_cast<int>(rng.pick(0, max_len));
        for (int k = 0; k < len; ++k)
            t.push_back(alpha[static_cast<size_t>(rng.pick(0, static_cast<long>(alpha.size()) - 1))]);
        if (accepts(a, t).accepted != accepts(b, t).accepted) return false;
    }
    return true;
}

// tiny hand-built helpers
inline Lts single_state_selfloop(const Action& a) {
    LtsBuilder b({a});
    StateId s = b.new_state();
    b.add(s, a, s);
    return b.finish(s);
}

inline Lts forbid_action_property(const Action& a) {
    // property err automaton: the action leads straight to err
    LtsBuilder b({a}, /*reserve_err=*/true);
    StateId s = b.new_state();
    b.add(s, a, b.err());
    return b.finish(s);
}

} // namespace tutil
