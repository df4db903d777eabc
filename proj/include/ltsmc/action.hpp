#pragma once

#include <compare>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltsmc {

/// An observable event label: an identifier plus optional integer indices,
/// e.g. `est[1][0]`. The internal action tau is not an Action; transition
/// labels represent it out-of-band (see Lts).
struct Action {
    std::string base;
    std::vector<int> indices;

    Action() = default;
    explicit Action(std::string b) : base(std::move(b)) {}
    Action(std::string b, std::vector<int> idx) : base(std::move(b)), indices(std::move(idx)) {}

    bool operator==(const Action& o) const = default;
    // Canonical ordering everywhere: lexicographic on (base, indices).
    auto operator<=>(const Action& o) const = default;

    std::string str() const {
        std::string s = base;
        for (int i : indices) {
            s += '[';
            s += std::to_string(i);
            s += ']';
        }
        return s;
    }

    /// Parses `base[i][j]...`; a string without well-formed index suffixes
    /// is taken verbatim as the base.
    static Action parse(const std::string& text) {
        auto lb = text.find('[');
        if (lb == std::string::npos) return Action(text);
        Action a(text.substr(0, lb));
        size_t pos = lb;
        while (pos < text.size()) {
            if (text[pos] != '[') return Action(text);
            auto rb = text.find(']', pos);
            if (rb == std::string::npos) return Action(text);
            const std::string num = text.substr(pos + 1, rb - pos - 1);
            try {
                size_t used = 0;
                int v = std::stoi(num, &used);
                if (used != num.size()) return Action(text);
                a.indices.push_back(v);
            } catch (const std::exception&) {
                return Action(text);
            }
            pos = rb + 1;
        }
        return a;
    }
};

using Trace = std::vector<Action>;

inline std::string trace_str(const Trace& t, const char* sep = ",") {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += sep;
        s += t[i].str();
    }
    return s;
}

} // namespace ltsmc

template <>
struct std::hash<ltsmc::Action> {
    size_t operator()(const ltsmc::Action& a) const noexcept {
        size_t h = std::hash<std::string>{}(a.base);
        for (int i : a.indices) h = h * 1000003u ^ std::hash<int>{}(i);
        return h;
    }
};
