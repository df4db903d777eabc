#pragma once

#include <ostream>
#include <sstream>

#include "../lts.hpp"

namespace ltsmc::io {

/// Graphviz rendering; the err node is drawn as a filled octagon, the
/// initial state is marked by an arrow from a phantom node.
inline void write_dot(std::ostream& os, const Lts& m, const std::string& name = "lts") {
    os << "digraph " << name << " {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=circle];\n";
    os << "  __init [shape=point, style=invis];\n";
    for (StateId s = 0; s < m.num_states; ++s) {
        if (m.is_err(s))
            os << "  n" << s << " [label=\"ERR\", shape=octagon, style=filled, fillcolor=\"#d62728\"];\n";
        else
            os << "  n" << s << " [label=\"" << s << "\"];\n";
    }
    os << "  __init -> n" << m.initial << ";\n";
    for (const auto& t : m.transitions)
        os << "  n" << t.src << " -> n" << t.dst << " [label=\"" << m.label_str(t.label) << "\"];\n";
    os << "}\n";
}

inline std::string to_dot(const Lts& m, const std::string& name = "lts") {
    std::ostringstream ss;
    write_dot(ss, m, name);
    return ss.str();
}

} // namespace ltsmc::io
