#pragma once

#include "../lts.hpp"
#include "syntax.hpp"

namespace ltsmc::fsp {

/// Canonical FSP-subset rendering of a ground LTS: one equation per state,
/// the initial state as the head. parse(print(m)) elaborates to an LTS
/// isomorphic to m. Tau transitions have no FSP syntax here; dead states
/// print as STOP references.
inline std::string print_lts(const Lts& m, const std::string& name = "P") {
    for (const auto& t : m.transitions)
        if (t.label == Lts::kTau)
            throw FspError(ErrKind::Unsupported, 0, 0, "cannot print an LTS with tau transitions");
    if (m.num_states == 0 || (m.num_states == 1 && m.has_err))
        throw FspError(ErrKind::Unsupported, 0, 0, "cannot print an empty LTS");

    auto out = m.out_edges();
    auto state_name = [&](StateId s) {
        if (s == m.initial) return name;
        return std::string("S") + std::to_string(s);
    };

    // emission order: the initial state first, then remaining states by id
    std::vector<StateId> order{m.initial};
    for (StateId s = 0; s < m.num_states; ++s) {
        if (s == m.initial || m.is_err(s)) continue;
        if (out[s].empty()) continue; // dead states become STOP references
        order.push_back(s);
    }

    std::string s;
    for (size_t i = 0; i < order.size(); ++i) {
        StateId st = order[i];
        s += (i == 0 ? "" : ",\n");
        s += state_name(st) + " = (";
        if (out[st].empty()) {
            // initial state with no transitions: keep it well-formed
            throw FspError(ErrKind::Unsupported, 0, 0, "cannot print an LTS whose initial state is dead");
        }
        for (size_t k = 0; k < out[st].size(); ++k) {
            const auto& t = out[st][k];
            if (k) s += " | ";
            s += m.action_of(t.label).str() + " -> ";
            if (m.is_err(t.dst))
                s += "ERROR";
            else if (out[t.dst].empty())
                s += "STOP";
            else
                s += state_name(t.dst);
        }
        s += ")";
    }
    s += ".\n";
    return s;
}

} // namespace ltsmc::fsp
