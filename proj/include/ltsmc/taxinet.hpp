#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "assumption.hpp"
#include "compose.hpp"

namespace ltsmc::taxinet {

/// he bin coding is fixed: index 1 is the leftmost bin [-35,-11.67),
/// 0 the centered bin [-11.67,11.66], 2 the rightmost (11.66,35.0].
inline constexpr int kHeBins = 3;

struct Interval {
    double lo = 0, hi = 0;
    bool lo_closed = true, hi_closed = true;
    std::string lo_str, hi_str; // rendered verbatim in spec output

    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !lo_closed) return false;
        if (x == hi && !hi_closed) return false;
        return true;
    }
    std::string str() const {
        return std::string(lo_closed ? "[" : "(") + lo_str + "," + hi_str + (hi_closed ? "]" : ")");
    }
};

struct SystemState {
    int cte = 0; // 0..max_cte
    int he = 0;  // he bin index in {0,1,2}
    auto operator<=>(const SystemState&) const = default;
};

struct OutOfRange : std::domain_error {
    using std::domain_error::domain_error;
};

/// Discretization over cte ∈ [-8,8] m and he ∈ [-35,35] deg. MaxCTE = 2
/// uses the published bin edges (±2.7); larger grids partition [-8,8]
/// uniformly into max_cte+1 bins.
struct DiscretizationConfig {
    int max_cte = 2;
    std::vector<Interval> cte_bins;      // index 0..max_cte, left to right
    std::array<Interval, 3> he_by_index; // by he bin index

    int center_cte() const { return max_cte / 2; } // lower-middle for odd max_cte

    static DiscretizationConfig make(int max_cte) {
        if (max_cte < 1) throw std::invalid_argument("MaxCTE must be >= 1");
        DiscretizationConfig cfg;
        cfg.max_cte = max_cte;
        if (max_cte == 2) {
            cfg.cte_bins = {
                {-8.0, -2.7, true, false, "-8", "-2.7"},
                {-2.7, 2.7, true, true, "-2.7", "2.7"},
                {2.7, 8.0, true, false, "2.7", "8"}, // rendered [2.7,8); membership treats 8 as in-range
            };
        } else {
            const double w = 16.0 / (max_cte + 1);
            for (int i = 0; i <= max_cte; ++i) {
                Interval b;
                b.lo = -8.0 + i * w;
                b.hi = (i == max_cte) ? 8.0 : -8.0 + (i + 1) * w;
                b.lo_closed = true;
                b.hi_closed = (i == max_cte);
                b.lo_str = fmt_num(b.lo);
                b.hi_str = fmt_num(b.hi);
                cfg.cte_bins.push_back(b);
            }
        }
        cfg.he_by_index = {{
            {-11.67, 11.66, true, true, "-11.67", "11.66"}, // index 0
            {-35.0, -11.67, true, false, "-35", "-11.67"},  // index 1
            {11.66, 35.0, false, true, "11.66", "35.0"},    // index 2
        }};
        return cfg;
    }

    static std::string fmt_num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", v);
        return buf;
    }
};

/// Bin lookup honoring endpoint openness; out-of-range input is a safety
/// violation, not a bin.
inline SystemState discretize(double cte_m, double he_deg, const DiscretizationConfig& cfg) {
    if (cte_m < -8.0 || cte_m > 8.0)
        throw OutOfRange("cte " + std::to_string(cte_m) + " outside [-8,8]");
    if (he_deg < -35.0 || he_deg > 35.0)
        throw OutOfRange("he " + std::to_string(he_deg) + " outside [-35,35]");
    SystemState s;
    s.cte = -1;
    for (int i = 0; i <= cfg.max_cte; ++i)
        if (cfg.cte_bins[static_cast<size_t>(i)].contains(cte_m)) {
            s.cte = i;
            break;
        }
    if (s.cte < 0) s.cte = cte_m <= -8.0 + 1e-12 ? 0 : cfg.max_cte; // boundary openness fallback
    if (he_deg < -11.67)
        s.he = 1;
    else if (he_deg <= 11.66)
        s.he = 0;
    else
        s.he = 2;
    return s;
}

inline Action act_label(int c, int h) { return Action("act", {c, h}); }
inline Action est_label(int c, int h) { return Action("est", {c, h}); }
inline Action cmd_label(int k) { return Action("cmd", {k}); }
inline Action turn_label() { return Action("turn"); }

inline std::vector<Action> est_alphabet(const DiscretizationConfig& cfg) {
    std::vector<Action> v;
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < kHeBins; ++h) v.push_back(est_label(c, h));
    return v;
}
inline std::vector<Action> act_alphabet(const DiscretizationConfig& cfg) {
    std::vector<Action> v;
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < kHeBins; ++h) v.push_back(act_label(c, h));
    return v;
}

inline int he_signed(int h) { return h == 1 ? -1 : (h == 2 ? 1 : 0); }
inline int he_index(int s) { return s == -1 ? 1 : (s == 1 ? 2 : 0); }

/// Control law: GoStraight (cmd[0]) when centered-and-aligned or when the
/// cte deviation and heading cancel; TurnLeft (cmd[1]) when the net
/// deviation points right; TurnRight (cmd[2]) symmetric.
inline int controller_cmd(const DiscretizationConfig& cfg, int est_cte, int est_he) {
    const int center = cfg.center_cte();
    const int dc = (est_cte > center) - (est_cte < center);
    const int net = dc + he_signed(est_he);
    if (net == 0) return 0;
    return net > 0 ? 1 : 2;
}

/// One dynamics step: the turn command moves the heading one bin
/// (saturating past |he| bounds into an error), then cte moves one bin in
/// the direction of the updated heading. Returns nullopt on a safety
/// violation (off the taxiway or over-rotation).
inline std::optional<SystemState> dynamics_step(const DiscretizationConfig& cfg, SystemState s, int cmd) {
    const int dk = cmd == 1 ? -1 : (cmd == 2 ? 1 : 0);
    const int hs = he_signed(s.he) + dk;
    if (hs < -1 || hs > 1) return std::nullopt;
    const int c2 = s.cte + hs;
    if (c2 < 0 || c2 > cfg.max_cte) return std::nullopt;
    return SystemState{c2, he_index(hs)};
}

/// Controller LTS. Reads any estimate (the open, pessimistic reading),
/// decides a command, and re-synchronizes with the dynamics on three
/// `turn` ticks per control cycle before the next read.
inline Lts gen_controller(const DiscretizationConfig& cfg) {
    std::vector<Action> alpha = est_alphabet(cfg);
    alpha.push_back(turn_label());
    for (int k = 0; k < 3; ++k) alpha.push_back(cmd_label(k));

    LtsBuilder b(sorted_unique(alpha));
    // cycle: SYNC -turn-> W2 -turn-> W1 ... wait: initial is mid-chain.
    StateId w2 = b.new_state(); // initial: two ticks remain before the first read
    StateId w1 = b.new_state();
    StateId read = b.new_state();
    StateId sync = b.new_state();
    b.add(w2, turn_label(), w1);
    b.add(w1, turn_label(), read);
    b.add(sync, turn_label(), w2);
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < kHeBins; ++h) {
            StateId dec = b.new_state();
            b.add(read, est_label(c, h), dec);
            b.add(dec, cmd_label(controller_cmd(cfg, c, h)), sync);
        }
    return b.finish(w2);
}

/// Dynamics LTS with the two safety properties encoded as err: the initial
/// state is announced first (act[center][0]), each accepted command either
/// steps the state or violates a bound.
inline Lts gen_dynamics(const DiscretizationConfig& cfg) {
    std::vector<Action> alpha = act_alphabet(cfg);
    alpha.push_back(turn_label());
    for (int k = 0; k < 3; ++k) alpha.push_back(cmd_label(k));

    LtsBuilder b(sorted_unique(alpha), /*reserve_err=*/true);
    const int m = cfg.max_cte;
    // per-(c,h) phase states
    struct Ph {
        StateId announce, settle, lock, await, move;
    };
    std::vector<Ph> ph(static_cast<size_t>((m + 1) * kHeBins));
    auto at = [&](int c, int h) -> Ph& { return ph[static_cast<size_t>(c * kHeBins + h)]; };
    for (int c = 0; c <= m; ++c)
        for (int h = 0; h < kHeBins; ++h)
            at(c, h) = {b.new_state(), b.new_state(), b.new_state(), b.new_state(), b.new_state()};
    StateId init = b.new_state();

    for (int c = 0; c <= m; ++c)
        for (int h = 0; h < kHeBins; ++h) {
            const Ph& p = at(c, h);
            b.add(p.announce, act_label(c, h), p.settle);
            b.add(p.settle, turn_label(), p.lock);
            b.add(p.lock, turn_label(), p.await);
            for (int k = 0; k < 3; ++k) {
                auto nxt = dynamics_step(cfg, {c, h}, k);
                if (!nxt)
                    b.add(p.await, cmd_label(k), b.err());
                else
                    b.add(p.await, cmd_label(k), at(nxt->cte, nxt->he).move);
            }
            b.add(p.move, turn_label(), p.announce);
        }
    b.add(init, act_label(cfg.center_cte(), 0), at(cfg.center_cte(), 0).settle);
    Lts d = b.finish(init);
    return prune_unreachable(d);
}

/// Perfect perception: every actual is followed by the identical estimate.
inline Lts perfect_perception(const DiscretizationConfig& cfg) {
    std::vector<Action> alpha = est_alphabet(cfg);
    auto acts = act_alphabet(cfg);
    alpha.insert(alpha.end(), acts.begin(), acts.end());
    LtsBuilder b(sorted_unique(alpha));
    StateId p = b.new_state();
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < kHeBins; ++h) {
            StateId q = b.new_state();
            b.add(p, act_label(c, h), q);
            b.add(q, est_label(c, h), p);
        }
    return b.finish(p);
}

/// Worst-case perception: every actual may be followed by any estimate.
inline Lts worst_perception(const DiscretizationConfig& cfg) {
    std::vector<Action> alpha = est_alphabet(cfg);
    auto acts = act_alphabet(cfg);
    alpha.insert(alpha.end(), acts.begin(), acts.end());
    LtsBuilder b(sorted_unique(alpha));
    StateId p = b.new_state();
    StateId q = b.new_state();
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < kHeBins; ++h) {
            b.add(p, act_label(c, h), q);
            b.add(q, est_label(c, h), p);
        }
    return b.finish(p);
}

inline Lts compose_m1(const DiscretizationConfig& cfg) {
    return compose(gen_controller(cfg), gen_dynamics(cfg));
}

inline InterfaceAlphabet interface_est_only(const DiscretizationConfig& cfg) {
    return InterfaceAlphabet::make({}, est_alphabet(cfg));
}
inline InterfaceAlphabet interface_full(const DiscretizationConfig& cfg) {
    return InterfaceAlphabet::make(act_alphabet(cfg), est_alphabet(cfg));
}

/// FSP source for the generated models; parsing this text elaborates to
/// LTSs isomorphic to the builders above.
inline std::string fsp_source(const DiscretizationConfig& cfg) {
    const int m = cfg.max_cte;
    const int center = cfg.center_cte();
    std::string s;
    s += "// TaxiNet discrete models, MaxCTE = " + std::to_string(m) + "\n";
    s += "// he bins: 0 aligned, 1 heading-left, 2 heading-right\n";
    s += "const MaxCTE = " + std::to_string(m) + "\n";
    s += "const Center = " + std::to_string(center) + "\n";
    s += "range CTER = 0..MaxCTE\n";
    s += "range HER = 0..2\n\n";
    s += "Controller = (turn -> turn -> est[c:CTER][h:HER] -> DECIDE[c][h]),\n";
    s += "DECIDE[c:CTER][h:HER] = (\n";
    s += "    when ((c == Center && h == 0) || (c < Center && h == 2) || (c > Center && h == 1)) cmd[0] -> SYNC\n";
    s += "  | when ((c > Center && h != 1) || (c == Center && h == 2)) cmd[1] -> SYNC\n";
    s += "  | when ((c < Center && h != 2) || (c == Center && h == 1)) cmd[2] -> SYNC),\n";
    s += "SYNC = (turn -> Controller).\n\n";
    s += "Dynamics = (act[Center][0] -> SETTLE[Center][0]),\n";
    s += "SETTLE[c:CTER][h:HER] = (turn -> LOCK[c][h]),\n";
    s += "LOCK[c:CTER][h:HER] = (turn -> AWAIT[c][h]),\n";
    s += "AWAIT[c:CTER][h:HER] = (\n";
    s += "    when (h == 0) cmd[0] -> MOVE[c][0]\n";
    s += "  | when (h == 2 && c < MaxCTE) cmd[0] -> MOVE[c+1][2]\n";
    s += "  | when (h == 2 && c == MaxCTE) cmd[0] -> ERROR\n";
    s += "  | when (h == 1 && c > 0) cmd[0] -> MOVE[c-1][1]\n";
    s += "  | when (h == 1 && c == 0) cmd[0] -> ERROR\n";
    s += "  | when (h == 2) cmd[1] -> MOVE[c][0]\n";
    s += "  | when (h == 0 && c > 0) cmd[1] -> MOVE[c-1][1]\n";
    s += "  | when (h == 0 && c == 0) cmd[1] -> ERROR\n";
    s += "  | when (h == 1) cmd[1] -> ERROR\n";
    s += "  | when (h == 1) cmd[2] -> MOVE[c][0]\n";
    s += "  | when (h == 0 && c < MaxCTE) cmd[2] -> MOVE[c+1][2]\n";
    s += "  | when (h == 0 && c == MaxCTE) cmd[2] -> ERROR\n";
    s += "  | when (h == 2) cmd[2] -> ERROR),\n";
    s += "MOVE[c:CTER][h:HER] = (turn -> AN[c][h]),\n";
    s += "AN[c:CTER][h:HER] = (act[c][h] -> SETTLE[c][h]).\n\n";
    s += "PerfectPerception = (act[c:CTER][h:HER] -> est[c][h] -> PerfectPerception).\n\n";
    s += "WorstPerception = (act[c:CTER][h:HER] -> est[e:CTER][f:HER] -> WorstPerception).\n\n";
    s += "||M1 = (Controller || Dynamics).\n";
    s += "||ClosedPerfect = (Controller || Dynamics || PerfectPerception).\n";
    s += "||ClosedWorst = (Controller || Dynamics || WorstPerception).\n";
    return s;
}

} // namespace ltsmc::taxinet
