#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "action.hpp"

namespace ltsmc {

using StateId = std::uint32_t;

/// Finite labeled transition system. States are opaque dense ids
/// 0..num_states-1. When the LTS has a distinguished error state it is
/// always state 0 and has no outgoing transitions. Values are immutable
/// once built; all operations are pure functions.
struct Lts {
    static constexpr StateId kErr = 0;
    static constexpr std::int32_t kTau = -1;

    struct Transition {
        StateId src;
        std::int32_t label; // index into alphabet, or kTau
        StateId dst;
        auto operator<=>(const Transition&) const = default;
    };

    std::vector<Action> alphabet; // sorted, unique
    std::vector<Transition> transitions;
    StateId num_states = 0;
    StateId initial = 0;
    bool has_err = false;
    // Pair decode of composed states, for diagnostics. Empty unless produced
    // by compose().
    std::vector<std::pair<StateId, StateId>> origin;

    bool is_err(StateId s) const { return has_err && s == kErr; }

    const Action& action_of(std::int32_t label) const {
        assert(label >= 0 && static_cast<size_t>(label) < alphabet.size());
        return alphabet[static_cast<size_t>(label)];
    }

    /// Index of `a` in the alphabet, or -2 when absent (kTau is reserved).
    std::int32_t label_of(const Action& a) const {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), a);
        if (it == alphabet.end() || *it != a) return -2;
        return static_cast<std::int32_t>(it - alphabet.begin());
    }

    bool in_alphabet(const Action& a) const { return label_of(a) >= 0; }

    std::string label_str(std::int32_t label) const {
        return label == kTau ? std::string("tau") : action_of(label).str();
    }

    /// Outgoing adjacency, transitions sorted by (src, label, dst).
    std::vector<std::vector<Transition>> out_edges() const {
        std::vector<std::vector<Transition>> out(num_states);
        for (const auto& t : transitions) out[t.src].push_back(t);
        for (auto& v : out)
            std::sort(v.begin(), v.end(), [](const Transition& a, const Transition& b) {
                return std::tie(a.label, a.dst) < std::tie(b.label, b.dst);
            });
        return out;
    }

    std::vector<StateId> reachable_states() const {
        std::vector<char> seen(num_states, 0);
        std::vector<StateId> order;
        order.reserve(num_states);
        auto out = out_edges();
        std::vector<StateId> queue{initial};
        seen[initial] = 1;
        size_t qi = 0;
        while (qi < queue.size()) {
            StateId s = queue[qi++];
            order.push_back(s);
            for (const auto& t : out[s])
                if (!seen[t.dst]) {
                    seen[t.dst] = 1;
                    queue.push_back(t.dst);
                }
        }
        return order;
    }

    size_t reachable_count() const { return reachable_states().size(); }

    /// States excluding err, the convention used when reporting composed
    /// model sizes (the error state is not counted).
    size_t state_count_sans_err() const {
        return num_states - (has_err ? 1u : 0u);
    }
};

inline std::vector<Action> sorted_unique(std::vector<Action> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::vector<Action> alphabet_union(const std::vector<Action>& a, const std::vector<Action>& b) {
    std::vector<Action> u;
    u.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

inline std::vector<Action> alphabet_intersection(const std::vector<Action>& a, const std::vector<Action>& b) {
    std::vector<Action> u;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return u;
}

/// Incremental construction with the err-is-state-0 convention. States are
/// numbered in creation order; err, when declared, occupies slot 0 and the
/// finished LTS drops it again if nothing ever reached it.
class LtsBuilder {
public:
    explicit LtsBuilder(std::vector<Action> alphabet, bool reserve_err = false)
        : alphabet_(sorted_unique(std::move(alphabet))), err_reserved_(reserve_err) {
        if (err_reserved_) next_ = 1;
    }

    StateId new_state() { return next_++; }
    StateId err() const {
        assert(err_reserved_);
        return Lts::kErr;
    }
    bool has_err_slot() const { return err_reserved_; }

    void add(StateId src, const Action& a, StateId dst) {
        std::int32_t l = label_index(a);
        assert(l >= 0 && "action must be in the alphabet");
        add_label(src, l, dst);
    }
    void add_tau(StateId src, StateId dst) { add_label(src, Lts::kTau, dst); }
    void add_label(StateId src, std::int32_t label, StateId dst) {
        assert(!(err_reserved_ && src == Lts::kErr) && "err has no outgoing transitions");
        trans_.push_back({src, label, dst});
        err_used_ = err_used_ || (err_reserved_ && dst == Lts::kErr);
    }

    std::int32_t label_index(const Action& a) const {
        auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
        if (it == alphabet_.end() || *it != a) return -2;
        return static_cast<std::int32_t>(it - alphabet_.begin());
    }

    Lts finish(StateId initial) {
        Lts m;
        m.alphabet = alphabet_;
        m.initial = initial;
        m.num_states = next_;
        m.has_err = err_reserved_;
        m.transitions = std::move(trans_);
        if (err_reserved_ && !err_used_ && initial != Lts::kErr) {
            // err slot never targeted: shift ids down by one.
            m.has_err = false;
            m.num_states -= 1;
            m.initial -= 1;
            for (auto& t : m.transitions) {
                t.src -= 1;
                t.dst -= 1;
            }
        }
        std::sort(m.transitions.begin(), m.transitions.end());
        m.transitions.erase(std::unique(m.transitions.begin(), m.transitions.end()), m.transitions.end());
        return m;
    }

private:
    std::vector<Action> alphabet_;
    std::vector<Lts::Transition> trans_;
    StateId next_ = 0;
    bool err_reserved_ = false;
    bool err_used_ = false;
};

/// Universal (always-true) safety property: one state, empty alphabet.
/// Neutral element of composition; use it when the model carries its own
/// err encoding.
inline Lts universal_property() {
    Lts m;
    m.num_states = 1;
    m.initial = 0;
    return m;
}

/// Restriction to the reachable part, renumbering states in BFS discovery
/// order (err keeps slot 0 when still reachable).
inline Lts prune_unreachable(const Lts& m) {
    auto order = m.reachable_states();
    std::vector<StateId> remap(m.num_states, UINT32_MAX);
    bool err_kept = false;
    StateId next = 0;
    for (StateId s : order)
        if (m.is_err(s)) err_kept = true;
    if (err_kept) remap[Lts::kErr] = next++;
    for (StateId s : order) {
        if (m.is_err(s)) continue;
        remap[s] = next++;
    }
    Lts r;
    r.alphabet = m.alphabet;
    r.num_states = next;
    r.initial = remap[m.initial];
    r.has_err = err_kept;
    for (const auto& t : m.transitions) {
        if (remap[t.src] == UINT32_MAX || remap[t.dst] == UINT32_MAX) continue;
        r.transitions.push_back({remap[t.src], t.label, remap[t.dst]});
    }
    std::sort(r.transitions.begin(), r.transitions.end());
    if (!m.origin.empty()) {
        r.origin.resize(next);
        for (StateId s = 0; s < m.num_states; ++s)
            if (remap[s] != UINT32_MAX && s < m.origin.size()) r.origin[remap[s]] = m.origin[s];
    }
    return r;
}

/// Projection onto sigma: actions outside sigma become tau, the alphabet
/// shrinks to alphabet(m) ∩ sigma. Actions in sigma absent from m are
/// ignored. States are unchanged.
inline Lts hide(const Lts& m, const std::vector<Action>& sigma) {
    auto keep = alphabet_intersection(m.alphabet, sorted_unique(sigma));
    Lts r;
    r.alphabet = keep;
    r.num_states = m.num_states;
    r.initial = m.initial;
    r.has_err = m.has_err;
    r.transitions.reserve(m.transitions.size());
    for (const auto& t : m.transitions) {
        std::int32_t nl = Lts::kTau;
        if (t.label != Lts::kTau) nl = r.label_of(m.action_of(t.label));
        if (nl == -2) nl = Lts::kTau;
        r.transitions.push_back({t.src, nl, t.dst});
    }
    std::sort(r.transitions.begin(), r.transitions.end());
    r.transitions.erase(std::unique(r.transitions.begin(), r.transitions.end()), r.transitions.end());
    return r;
}

} // namespace ltsmc
