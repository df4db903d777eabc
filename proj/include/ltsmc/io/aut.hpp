#pragma once

#include <istream>
#include <ostream>
#include <sstream>

#include "../lts.hpp"

namespace ltsmc::io {

struct AutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Aldebaran format: header `des (initial, #transitions, #states)` followed
/// by `(src, "label", dst)` lines. Tau is written "tau". State ids are the
/// internal ones (err = 0 when the LTS has an err state).
inline void write_aut(std::ostream& os, const Lts& m) {
    os << "des (" << m.initial << ", " << m.transitions.size() << ", " << m.num_states << ")\n";
    for (const auto& t : m.transitions)
        os << "(" << t.src << ", \"" << m.label_str(t.label) << "\", " << t.dst << ")\n";
}

inline std::string to_aut(const Lts& m) {
    std::ostringstream ss;
    write_aut(ss, m);
    return ss.str();
}

/// Reads an .aut file. The label "tau" becomes the internal action; err-ness
/// is not part of the format, so pass `err_state` when state 0 of the file
/// is known to be an error state.
inline Lts read_aut(std::istream& is, bool err_state_zero = false) {
    std::string line;
    if (!std::getline(is, line)) throw AutError("empty .aut input");
    unsigned long init = 0, ntr = 0, nst = 0;
    if (std::sscanf(line.c_str(), "des (%lu, %lu, %lu)", &init, &ntr, &nst) != 3 &&
        std::sscanf(line.c_str(), "des(%lu,%lu,%lu)", &init, &ntr, &nst) != 3)
        throw AutError("bad .aut header: " + line);

    std::vector<std::tuple<StateId, std::string, StateId>> raw;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        auto l = line.find('(');
        auto q1 = line.find('"');
        auto q2 = line.rfind('"');
        auto r = line.rfind(')');
        if (l == std::string::npos || q1 == std::string::npos || q2 <= q1 || r == std::string::npos)
            throw AutError("bad .aut transition: " + line);
        StateId src = static_cast<StateId>(std::stoul(line.substr(l + 1, q1 - l - 1)));
        std::string label = line.substr(q1 + 1, q2 - q1 - 1);
        std::string rest = line.substr(q2 + 1, r - q2 - 1); // `, 5`
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw AutError("bad .aut transition: " + line);
        StateId dst = static_cast<StateId>(std::stoul(rest.substr(comma + 1)));
        raw.emplace_back(src, label, dst);
    }
    if (raw.size() != ntr) throw AutError("transition count mismatch");

    std::vector<Action> alpha;
    for (const auto& [s, l, d] : raw)
        if (l != "tau") alpha.push_back(Action::parse(l));
    Lts m;
    m.alphabet = sorted_unique(std::move(alpha));
    m.num_states = static_cast<StateId>(nst);
    m.initial = static_cast<StateId>(init);
    m.has_err = err_state_zero;
    for (const auto& [s, l, d] : raw) {
        if (s >= m.num_states || d >= m.num_states) throw AutError("state id out of bounds");
        std::int32_t lab = l == "tau" ? Lts::kTau : m.label_of(Action::parse(l));
        m.transitions.push_back({s, lab, d});
    }
    std::sort(m.transitions.begin(), m.transitions.end());
    return m;
}

} // namespace ltsmc::io
