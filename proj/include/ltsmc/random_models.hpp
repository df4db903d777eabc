#pragma once

#include <random>

#include "assumption.hpp"

namespace ltsmc::testgen {

/// Deterministic pseudo-random model generators for the property harnesses.
/// All draws go through std::mt19937_64 so a seed pins the whole run.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    long pick(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng); }
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(eng) < p; }
};

inline std::vector<Action> letters(int n, const std::string& prefix) {
    std::vector<Action> v;
    for (int i = 0; i < n; ++i) v.push_back(Action(prefix, {i}));
    return v;
}

/// Arbitrary LTS over the given alphabet, possibly nondeterministic and
/// with tau edges; every state gets at least one outgoing edge.
inline Lts random_lts(Rng& rng, int max_states, const std::vector<Action>& alphabet, bool allow_tau) {
    int n = static_cast<int>(rng.pick(1, max_states));
    LtsBuilder b(alphabet);
    std::vector<StateId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(b.new_state());
    for (int s = 0; s < n; ++s) {
        int degree = static_cast<int>(rng.pick(1, 3));
        for (int k = 0; k < degree; ++k) {
            StateId dst = ids[static_cast<size_t>(rng.pick(0, n - 1))];
            if (allow_tau && rng.chance(0.15))
                b.add_tau(ids[static_cast<size_t>(s)], dst);
            else
                b.add(ids[static_cast<size_t>(s)],
                      alphabet[static_cast<size_t>(rng.pick(0, static_cast<long>(alphabet.size()) - 1))], dst);
        }
    }
    return b.finish(ids[0]);
}

/// Deterministic safety property over `alpha`: a random partial DFA. Its
/// err complement is complement_trap(P).
inline Lts random_property(Rng& rng, const std::vector<Action>& alpha, int max_states = 3) {
    int n = static_cast<int>(rng.pick(1, max_states));
    LtsBuilder b(alpha);
    std::vector<StateId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(b.new_state());
    for (int s = 0; s < n; ++s)
        for (const auto& a : alpha)
            if (rng.chance(0.7)) b.add(ids[static_cast<size_t>(s)], a, ids[static_cast<size_t>(rng.pick(0, n - 1))]);
    return prune_unreachable(b.finish(ids[0]));
}

/// Context over the interface: actual-receptive (self-loop on every actual
/// at every state, the context reads actuals without constraining them),
/// estimates restricted at random.
inline Lts random_context(Rng& rng, const InterfaceAlphabet& iface, int max_states = 4) {
    int n = static_cast<int>(rng.pick(1, max_states));
    std::vector<Action> alpha = iface.sigma;
    LtsBuilder b(alpha);
    std::vector<StateId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(b.new_state());
    const auto acts = iface.actuals();
    const auto ests = iface.estimates();
    for (int s = 0; s < n; ++s) {
        for (const auto& a : acts) b.add(ids[static_cast<size_t>(s)], a, ids[static_cast<size_t>(s)]);
        for (const auto& e : ests)
            if (rng.chance(0.6)) b.add(ids[static_cast<size_t>(s)], e, ids[static_cast<size_t>(rng.pick(0, n - 1))]);
    }
    return b.finish(ids[0]);
}

/// One random assume-guarantee trial: model M over sigma plus one private
/// action, random property over a subset of sigma, random tagging.
struct TrialInstance {
    Lts m;
    Lts p_err;
    InterfaceAlphabet iface;
};

inline TrialInstance random_trial(Rng& rng, int max_states = 6, int max_alpha = 4) {
    int na = static_cast<int>(rng.pick(2, max_alpha));
    auto sigma = letters(na, "s");
    // tag a random nonempty subset as actuals (possibly empty estimates too)
    std::vector<Action> acts, ests;
    for (const auto& a : sigma)
        (rng.chance(0.4) ? acts : ests).push_back(a);
    if (ests.empty()) {
        ests.push_back(acts.back());
        acts.pop_back();
    }
    auto iface = InterfaceAlphabet::make(acts, ests);

    // model alphabet: sigma plus a private action the projection will hide
    std::vector<Action> malpha = sigma;
    malpha.push_back(Action("w", {0}));
    Lts m = random_lts(rng, max_states, sorted_unique(malpha), /*allow_tau=*/true);

    // property over a subset of sigma (guarantees the direct oracle checks
    // the same thing after projection)
    std::vector<Action> palpha;
    for (const auto& a : sigma)
        if (rng.chance(0.7)) palpha.push_back(a);
    if (palpha.empty()) palpha.push_back(sigma[0]);
    Lts p = random_property(rng, palpha);
    Lts p_err = complement_trap(p);

    return {std::move(m), std::move(p_err), std::move(iface)};
}

/// Random alternating perception abstraction over Act ∪ Est: from every
/// state, reads any actual, then emits one of a random nonempty estimate
/// subset.
inline Lts random_alternating_context(Rng& rng, const InterfaceAlphabet& iface, int max_states = 3) {
    const auto acts = iface.actuals();
    const auto ests = iface.estimates();
    int n = static_cast<int>(rng.pick(1, max_states));
    LtsBuilder b(iface.sigma);
    // read states r0..r_{n-1}; emit states one per (read state, actual)
    std::vector<StateId> reads;
    for (int i = 0; i < n; ++i) reads.push_back(b.new_state());
    for (int s = 0; s < n; ++s)
        for (const auto& a : acts) {
            StateId emit = b.new_state();
            b.add(reads[static_cast<size_t>(s)], a, emit);
            bool any = false;
            for (const auto& e : ests)
                if (rng.chance(0.5)) {
                    b.add(emit, e, reads[static_cast<size_t>(rng.pick(0, n - 1))]);
                    any = true;
                }
            if (!any)
                b.add(emit, ests[static_cast<size_t>(rng.pick(0, static_cast<long>(ests.size()) - 1))],
                      reads[static_cast<size_t>(rng.pick(0, n - 1))]);
        }
    return b.finish(reads[0]);
}

/// Uniformly random trace of a deterministic automaton, following enabled
/// transitions; length at most `max_len`.
inline Trace sample_trace(Rng& rng, const Lts& d, int max_len) {
    auto out = d.out_edges();
    Trace t;
    StateId cur = d.initial;
    int len = static_cast<int>(rng.pick(0, max_len));
    for (int i = 0; i < len; ++i) {
        if (out[cur].empty()) break;
        const auto& e = out[cur][static_cast<size_t>(rng.pick(0, static_cast<long>(out[cur].size()) - 1))];
        t.push_back(d.action_of(e.label));
        cur = e.dst;
        if (d.is_err(cur)) break;
    }
    return t;
}

} // namespace ltsmc::testgen
