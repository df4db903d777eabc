#pragma once

#include <deque>
#include <unordered_map>

#include "lts.hpp"

namespace ltsmc {

/// Parallel composition: shared non-tau actions synchronize, the rest
/// interleave. The result is the reachable part of the product; any pair
/// with an err coordinate collapses into the single err state. Exploration
/// is BFS with successors ordered by (label, partner state id), so state
/// numbering is reproducible.
inline Lts compose(const Lts& m1, const Lts& m2) {
    const auto shared = alphabet_intersection(m1.alphabet, m2.alphabet);
    const auto alpha = alphabet_union(m1.alphabet, m2.alphabet);

    Lts r;
    r.alphabet = alpha;
    r.has_err = m1.has_err || m2.has_err;

    // label maps component alphabets into the union
    auto map_labels = [&](const Lts& m) {
        std::vector<std::int32_t> lm(m.alphabet.size());
        for (size_t i = 0; i < m.alphabet.size(); ++i) {
            auto it = std::lower_bound(alpha.begin(), alpha.end(), m.alphabet[i]);
            lm[i] = static_cast<std::int32_t>(it - alpha.begin());
        }
        return lm;
    };
    const auto lm1 = map_labels(m1);
    const auto lm2 = map_labels(m2);
    std::vector<char> is_shared(alpha.size(), 0);
    for (const auto& a : shared) {
        auto it = std::lower_bound(alpha.begin(), alpha.end(), a);
        is_shared[static_cast<size_t>(it - alpha.begin())] = 1;
    }

    const auto out1 = m1.out_edges();
    const auto out2 = m2.out_edges();

    std::unordered_map<std::uint64_t, StateId> ids;
    auto key = [](StateId a, StateId b) { return (std::uint64_t(a) << 32) | b; };

    StateId next = r.has_err ? 1 : 0;
    std::vector<std::pair<StateId, StateId>> origin;
    if (r.has_err) origin.emplace_back(UINT32_MAX, UINT32_MAX);
    bool err_reached = false;

    auto intern = [&](StateId a, StateId b) -> StateId {
        if ((m1.has_err && a == Lts::kErr) || (m2.has_err && b == Lts::kErr)) {
            err_reached = true;
            return Lts::kErr;
        }
        auto [it, fresh] = ids.try_emplace(key(a, b), next);
        if (fresh) {
            ++next;
            origin.emplace_back(a, b);
        }
        return it->second;
    };

    std::deque<std::pair<StateId, StateId>> work;
    StateId init = intern(m1.initial, m2.initial);
    if (init != Lts::kErr || !r.has_err) work.emplace_back(m1.initial, m2.initial);
    r.initial = init;

    while (!work.empty()) {
        auto [s1, s2] = work.front();
        work.pop_front();
        StateId src = ids.at(key(s1, s2));

        // ordered successor generation: walk the union alphabet implicitly
        // via the components' sorted edges; taus first (label -1).
        struct Succ {
            std::int32_t label;
            StateId a, b;
        };
        std::vector<Succ> succ;
        for (const auto& t : out1[s1]) {
            std::int32_t ul = t.label == Lts::kTau ? Lts::kTau : lm1[static_cast<size_t>(t.label)];
            if (ul != Lts::kTau && is_shared[static_cast<size_t>(ul)]) continue;
            succ.push_back({ul, t.dst, s2});
        }
        for (const auto& t : out2[s2]) {
            std::int32_t ul = t.label == Lts::kTau ? Lts::kTau : lm2[static_cast<size_t>(t.label)];
            if (ul != Lts::kTau && is_shared[static_cast<size_t>(ul)]) continue;
            succ.push_back({ul, s1, t.dst});
        }
        for (const auto& t1 : out1[s1]) {
            if (t1.label == Lts::kTau) continue;
            std::int32_t ul = lm1[static_cast<size_t>(t1.label)];
            if (!is_shared[static_cast<size_t>(ul)]) continue;
            for (const auto& t2 : out2[s2]) {
                if (t2.label == Lts::kTau) continue;
                if (m2.alphabet[static_cast<size_t>(t2.label)] != m1.alphabet[static_cast<size_t>(t1.label)]) continue;
                succ.push_back({ul, t1.dst, t2.dst});
            }
        }
        std::sort(succ.begin(), succ.end(), [](const Succ& x, const Succ& y) {
            return std::tie(x.label, x.a, x.b) < std::tie(y.label, y.a, y.b);
        });
        for (const auto& s : succ) {
            bool existed_before = (m1.has_err && s.a == Lts::kErr) || (m2.has_err && s.b == Lts::kErr) ||
                                  ids.contains(key(s.a, s.b));
            StateId dst = intern(s.a, s.b);
            r.transitions.push_back({src, s.label, dst});
            if (!existed_before && !(r.has_err && dst == Lts::kErr)) work.emplace_back(s.a, s.b);
        }
    }

    r.num_states = next;
    if (r.has_err && !err_reached) {
        r.has_err = false;
        r.num_states -= 1;
        r.initial -= 1;
        for (auto& t : r.transitions) {
            t.src -= 1;
            t.dst -= 1;
        }
        origin.erase(origin.begin());
    }
    r.origin = std::move(origin);
    std::sort(r.transitions.begin(), r.transitions.end());
    r.transitions.erase(std::unique(r.transitions.begin(), r.transitions.end()), r.transitions.end());
    return r;
}

inline Lts compose_all(std::span<const Lts> parts) {
    assert(!parts.empty());
    Lts acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = compose(acc, parts[i]);
    return acc;
}

} // namespace ltsmc
