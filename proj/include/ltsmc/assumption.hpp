#pragma once

#include <stdexcept>

#include "determinize.hpp"
#include "safety.hpp"

namespace ltsmc {

/// The interface alphabet with its actual/estimate partition. The tagging
/// is an explicit input rather than inferred from label names: the extended
/// backward error propagation depends on it.
struct InterfaceAlphabet {
    std::vector<Action> sigma;   // sorted, unique
    std::vector<char> is_actual; // parallel to sigma

    static InterfaceAlphabet make(std::vector<Action> actuals, std::vector<Action> estimates) {
        actuals = sorted_unique(std::move(actuals));
        estimates = sorted_unique(std::move(estimates));
        std::vector<Action> both;
        std::set_intersection(actuals.begin(), actuals.end(), estimates.begin(), estimates.end(),
                              std::back_inserter(both));
        if (!both.empty())
            throw std::invalid_argument("interface alphabet: actual and estimate sets overlap at " + both[0].str());
        InterfaceAlphabet ia;
        ia.sigma = alphabet_union(actuals, estimates);
        ia.is_actual.resize(ia.sigma.size(), 0);
        for (const auto& a : actuals) {
            auto it = std::lower_bound(ia.sigma.begin(), ia.sigma.end(), a);
            ia.is_actual[static_cast<size_t>(it - ia.sigma.begin())] = 1;
        }
        return ia;
    }

    bool actual(const Action& a) const {
        auto it = std::lower_bound(sigma.begin(), sigma.end(), a);
        if (it == sigma.end() || *it != a) return false;
        return is_actual[static_cast<size_t>(it - sigma.begin())] != 0;
    }

    std::vector<Action> actuals() const {
        std::vector<Action> v;
        for (size_t i = 0; i < sigma.size(); ++i)
            if (is_actual[i]) v.push_back(sigma[i]);
        return v;
    }
    std::vector<Action> estimates() const {
        std::vector<Action> v;
        for (size_t i = 0; i < sigma.size(); ++i)
            if (!is_actual[i]) v.push_back(sigma[i]);
        return v;
    }
};

/// Least fixpoint of: a state with a tau- or actual-labeled transition into
/// the err set joins the err set. The set collapses to the single err state;
/// the context only controls estimates, so such states are already lost.
inline Lts backward_error_propagation(const Lts& m, const std::vector<Action>& actuals) {
    if (!m.has_err) return m;
    std::vector<char> is_act_label(m.alphabet.size(), 0);
    for (const auto& a : sorted_unique(actuals)) {
        std::int32_t l = m.label_of(a);
        if (l >= 0) is_act_label[static_cast<size_t>(l)] = 1;
    }
    std::vector<char> in_err(m.num_states, 0);
    in_err[Lts::kErr] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : m.transitions) {
            if (in_err[t.src] || !in_err[t.dst]) continue;
            if (t.label == Lts::kTau || is_act_label[static_cast<size_t>(t.label)]) {
                in_err[t.src] = 1;
                changed = true;
            }
        }
    }

    Lts r;
    r.alphabet = m.alphabet;
    r.num_states = m.num_states;
    r.has_err = true;
    r.initial = in_err[m.initial] ? Lts::kErr : m.initial;
    for (const auto& t : m.transitions) {
        if (in_err[t.src]) continue; // the collapsed set keeps no outgoing edges
        r.transitions.push_back({t.src, t.label, in_err[t.dst] ? Lts::kErr : t.dst});
    }
    std::sort(r.transitions.begin(), r.transitions.end());
    r.transitions.erase(std::unique(r.transitions.begin(), r.transitions.end()), r.transitions.end());
    return prune_unreachable(r);
}

/// Adds the sink state and one transition per missing (state, action) from
/// every non-err state; the sink self-loops on all of sigma. Unreachable
/// states are pruned afterwards.
inline Lts complete_with_sink(const Lts& d) {
    Lts r = d;
    StateId sink = r.num_states++;
    std::vector<std::vector<char>> defined(r.num_states, std::vector<char>(r.alphabet.size(), 0));
    for (const auto& t : r.transitions) defined[t.src][static_cast<size_t>(t.label)] = 1;
    for (StateId s = 0; s < r.num_states; ++s) {
        if (r.is_err(s)) continue;
        for (size_t l = 0; l < r.alphabet.size(); ++l)
            if (!defined[s][l]) r.transitions.push_back({s, static_cast<std::int32_t>(l), sink});
    }
    std::sort(r.transitions.begin(), r.transitions.end());
    return prune_unreachable(r);
}

/// Drops err and every transition into it, then prunes.
inline Lts error_removal(const Lts& d) {
    if (!d.has_err) return d;
    Lts r;
    r.alphabet = d.alphabet;
    r.num_states = d.num_states;
    r.initial = d.initial;
    r.has_err = true; // temporarily, so ids stay aligned for pruning
    for (const auto& t : d.transitions)
        if (t.dst != Lts::kErr) r.transitions.push_back(t);
    Lts pruned = prune_unreachable(r);
    pruned.has_err = false;
    return pruned;
}

struct AssumptionResult {
    Lts assumption;    // deterministic, over sigma, no err
    Lts err_automaton; // deterministic, completed; err transitions kept
    // set when the determinized initial state already contains err: no
    // context over sigma can keep M safe, and L(assumption) is empty
    bool no_safe_context = false;
};

/// Weakest assumption for m with respect to p_err and the interface
/// alphabet: M' = (m ∥ p_err) ↾ sigma, backward error propagation over tau
/// and actuals, determinization with err absorption, completion with sink,
/// and error removal. The deterministic automata are reduced to their
/// canonical minimal form before being returned, so state counts are
/// comparable across runs and machines.
inline AssumptionResult build_assume(const Lts& m, const Lts& p_err, const InterfaceAlphabet& iface) {
    Lts composed = compose(m, p_err);
    Lts projected = hide(composed, iface.sigma);
    Lts propagated = backward_error_propagation(projected, iface.actuals());
    Lts det = determinize(propagated);
    Lts completed = complete_with_sink(det);
    Lts err_automaton = minimize(completed);

    AssumptionResult res;
    res.no_safe_context = err_automaton.has_err && err_automaton.initial == Lts::kErr;
    res.err_automaton = std::move(err_automaton);
    res.assumption = error_removal(res.err_automaton);
    return res;
}

/// Deterministic complement trap: every action of alpha(a) missing from a
/// state leads to a fresh err state.
inline Lts complement_trap(const Lts& a) {
    assert(!a.has_err);
    Lts r;
    r.alphabet = a.alphabet;
    r.num_states = a.num_states + 1;
    r.initial = a.initial + 1;
    r.has_err = true;
    for (const auto& t : a.transitions) r.transitions.push_back({t.src + 1, t.label, t.dst + 1});
    std::vector<std::vector<char>> defined(r.num_states, std::vector<char>(r.alphabet.size(), 0));
    for (const auto& t : r.transitions) defined[t.src][static_cast<size_t>(t.label)] = 1;
    for (StateId s = 1; s < r.num_states; ++s)
        for (size_t l = 0; l < r.alphabet.size(); ++l)
            if (!defined[s][l]) r.transitions.push_back({s, static_cast<std::int32_t>(l), Lts::kErr});
    std::sort(r.transitions.begin(), r.transitions.end());
    return r;
}

/// Discharge check of the assume-guarantee premise: L(n ↾ alpha(a)) ⊆ L(a),
/// decided as err-unreachability of n ↾ alpha(a) ∥ complement(a).
inline bool check_context(const Lts& n, const Lts& assumption) {
    Lts projected = hide(n, assumption.alphabet);
    Lts trap = complement_trap(assumption);
    return check_safety(projected, trap).safe;
}

} // namespace ltsmc
