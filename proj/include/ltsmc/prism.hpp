#pragma once

#include <iomanip>
#include <ostream>
#include <sstream>

#include "dtmc.hpp"

namespace ltsmc::dtmc {

/// PRISM-compatible textual module for the monitored system. The encoding
/// mirrors the pc/cte/he/cte_est/he_est/Q variable scheme: pc=0 updates the
/// estimate variables jointly (the per-actual confusion distribution, with
/// the monitor stepping on the same tick), pc=1 applies the deterministic
/// controller/dynamics response. Q=-1 is the absorbing abort state.
inline void write_prism(std::ostream& os, const MonitoredDtmc& d, const taxinet::DiscretizationConfig& cfg,
                        int monitor_states) {
    os << "// monitored perception abstraction, MaxCTE = " << cfg.max_cte << "\n";
    os << "dtmc\n\n";
    os << "module perception_with_monitor\n";
    const auto& init = d.meta[d.initial];
    os << "  pc : [0..1] init 0;\n";
    os << "  cte : [0.." << cfg.max_cte << "] init " << init.actual.cte << ";\n";
    os << "  he : [0..2] init " << init.actual.he << ";\n";
    os << "  cte_est : [0.." << cfg.max_cte << "] init " << init.actual.cte << ";\n";
    os << "  he_est : [0..2] init " << init.actual.he << ";\n";
    os << "  Q : [-1.." << monitor_states - 1 << "] init " << init.monitor_q << ";\n";
    os << "  crash : bool init false;\n\n";

    os << std::setprecision(17);
    for (StateId s = 0; s < d.num_states(); ++s) {
        const auto& m = d.meta[s];
        if (m.abort || m.safety_err) continue;
        if (m.pc == 0) {
            // estimate update: guard on (actual, Q); joint distribution
            os << "  [] pc=0 & cte=" << m.actual.cte << " & he=" << m.actual.he << " & Q=" << m.monitor_q
               << " & !crash -> ";
            bool first = true;
            for (const auto& [dst, p] : d.rows[s]) {
                const auto& dm = d.meta[dst];
                if (!first) os << " + ";
                first = false;
                if (dm.abort) {
                    os << p << " : (Q'=-1) & (pc'=0)";
                } else {
                    os << p << " : (cte_est'=" << dm.est_cte << ") & (he_est'=" << dm.est_he << ") & (Q'="
                       << dm.monitor_q << ") & (pc'=1)";
                }
            }
            os << ";\n";
        } else {
            // actual update: deterministic response to the estimate
            const auto& [dst, p] = d.rows[s][0];
            const auto& dm = d.meta[dst];
            os << "  [] pc=1 & cte=" << m.actual.cte << " & he=" << m.actual.he << " & cte_est=" << m.est_cte
               << " & he_est=" << m.est_he << " & Q=" << m.monitor_q << " & !crash -> 1 : ";
            if (dm.safety_err)
                os << "(crash'=true) & (pc'=0)";
            else
                os << "(cte'=" << dm.actual.cte << ") & (he'=" << dm.actual.he << ") & (pc'=0)";
            os << ";\n";
        }
    }
    os << "  [] Q=-1 -> 1 : (Q'=-1);\n";
    os << "  [] crash -> 1 : (crash'=true);\n";
    os << "endmodule\n\n";
    os << "// permissiveness query: P=? [ F (Q=-1) ]\n";
    os << "// safety check:        P=? [ F crash ]   (expected 0)\n";
}

inline std::string to_prism(const MonitoredDtmc& d, const taxinet::DiscretizationConfig& cfg,
                            int monitor_states) {
    std::ostringstream ss;
    write_prism(ss, d, cfg, monitor_states);
    return ss.str();
}

} // namespace ltsmc::dtmc
