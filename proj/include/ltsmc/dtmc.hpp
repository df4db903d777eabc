#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include "determinize.hpp"
#include "taxinet.hpp"

namespace ltsmc::dtmc {

struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProfileRow {
    int actual_cte = 0, actual_he = 0, est_cte = 0, est_he = 0;
    long long count = 0;
};

/// Empirical perception abstraction: per actual state, a distribution over
/// estimated states. Raw sample counts are retained.
struct ConfusionProfile {
    std::map<taxinet::SystemState, std::vector<std::pair<taxinet::SystemState, double>>> dist;
    std::map<taxinet::SystemState, long long> totals;

    const std::vector<std::pair<taxinet::SystemState, double>>* find(taxinet::SystemState s) const {
        auto it = dist.find(s);
        return it == dist.end() ? nullptr : &it->second;
    }
};

/// Relative frequencies per actual. Rows with negative counts are
/// malformed; an actual whose counts sum to zero has no distribution.
inline ConfusionProfile estimate_profile(const std::vector<ProfileRow>& rows) {
    std::map<taxinet::SystemState, std::map<taxinet::SystemState, long long>> acc;
    for (const auto& r : rows) {
        if (r.count < 0) throw ProfileError("malformed row: negative count");
        acc[{r.actual_cte, r.actual_he}][{r.est_cte, r.est_he}] += r.count;
    }
    ConfusionProfile p;
    for (const auto& [a, m] : acc) {
        long long total = 0;
        for (const auto& [e, c] : m) total += c;
        if (total == 0)
            throw ProfileError("zero total count for actual [" + std::to_string(a.cte) + "][" +
                               std::to_string(a.he) + "]");
        auto& d = p.dist[a];
        for (const auto& [e, c] : m)
            if (c > 0) d.emplace_back(e, static_cast<double>(c) / static_cast<double>(total));
        p.totals[a] = total;
        double sum = 0;
        for (const auto& [e, q] : d) sum += q;
        if (std::abs(sum - 1.0) > 1e-9) throw ProfileError("row does not normalize");
    }
    return p;
}

/// CSV with header actual_cte,actual_he,est_cte,est_he,count.
inline std::vector<ProfileRow> parse_profile_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ProfileError("empty profile");
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\r' || c == '\t'; }),
                s.end());
        return s;
    };
    if (strip(line) != "actual_cte,actual_he,est_cte,est_he,count")
        throw ProfileError("bad header: " + line);
    std::vector<ProfileRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip(line);
        if (t.empty()) continue;
        ProfileRow r;
        char c1, c2, c3, c4;
        std::istringstream ss(t);
        if (!(ss >> r.actual_cte >> c1 >> r.actual_he >> c2 >> r.est_cte >> c3 >> r.est_he >> c4 >> r.count) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
            throw ProfileError("malformed row at line " + std::to_string(lineno) + ": " + line);
        if (r.count < 0) throw ProfileError("malformed row at line " + std::to_string(lineno) + ": negative count");
        rows.push_back(r);
    }
    return rows;
}

inline ConfusionProfile identity_profile(const taxinet::DiscretizationConfig& cfg) {
    std::vector<ProfileRow> rows;
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < taxinet::kHeBins; ++h) rows.push_back({c, h, c, h, 1});
    return estimate_profile(rows);
}

/// Identity estimate with probability `accuracy`, the rest spread uniformly
/// over the other bins. Used for permissiveness studies.
inline ConfusionProfile noisy_profile(const taxinet::DiscretizationConfig& cfg, double accuracy,
                                      long long scale = 1000000) {
    std::vector<ProfileRow> rows;
    const int nbins = (cfg.max_cte + 1) * taxinet::kHeBins;
    for (int c = 0; c <= cfg.max_cte; ++c)
        for (int h = 0; h < taxinet::kHeBins; ++h) {
            long long correct = static_cast<long long>(accuracy * static_cast<double>(scale));
            long long rest = (scale - correct) / (nbins - 1);
            for (int c2 = 0; c2 <= cfg.max_cte; ++c2)
                for (int h2 = 0; h2 < taxinet::kHeBins; ++h2)
                    rows.push_back({c, h, c2, h2, (c2 == c && h2 == h) ? correct : rest});
        }
    return estimate_profile(rows);
}

struct DtmcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Product of the profiled perception, the deterministic closed-loop
/// response of M1, and the est-alphabet safety monitor. One control cycle
/// is two DTMC steps: the estimate update (pc=0, where the monitor also
/// steps) and the actual update (pc=1).
struct MonitoredDtmc {
    struct StateMeta {
        int pc = 0;                         // 0: estimate pending, 1: actual update pending
        taxinet::SystemState actual{};      //
        int est_cte = -1, est_he = -1;      // -1 before any estimate / at pc=0
        int monitor_q = 0;                  // -1 encodes abort
        bool abort = false, safety_err = false;
    };
    std::vector<std::vector<std::pair<StateId, double>>> rows; // sparse, row-stochastic
    std::vector<StateMeta> meta;
    StateId initial = 0;
    StateId abort_state = 0;
    StateId safety_err_state = 0;
    bool has_safety_err = false;

    size_t num_states() const { return rows.size(); }
};

inline MonitoredDtmc build_monitored_dtmc(const Lts& m1, const ConfusionProfile& profile, const Lts& monitor,
                                          const taxinet::DiscretizationConfig& cfg) {
    const auto est = taxinet::est_alphabet(cfg);
    const auto acts = taxinet::act_alphabet(cfg);
    for (const auto& e : est)
        if (!monitor.in_alphabet(e)) throw DtmcError("monitor alphabet mismatch: missing " + e.str());

    // deterministic view of M1 over the interface
    std::vector<Action> sigma = alphabet_union(sorted_unique(est), sorted_unique(acts));
    Lts det = determinize(hide(m1, sigma));
    auto out = det.out_edges();

    // monitor must be deterministic over Est
    if (!is_deterministic(monitor)) throw DtmcError("monitor is not deterministic");
    std::map<std::pair<StateId, std::int32_t>, StateId> mon_delta;
    for (const auto& t : monitor.transitions) mon_delta[{t.src, t.label}] = t.dst;

    // initial announce: exactly one act edge from the determinized initial
    auto classify = [&](const Lts& l, std::int32_t label) {
        return l.action_of(label).base; // "act" / "est" by construction of taxinet models
    };
    if (out[det.initial].size() != 1 || classify(det, out[det.initial][0].label) != "act")
        throw DtmcError("m1 does not announce a unique initial actual");
    const auto& init_edge = out[det.initial][0];
    auto state_of = [&](const Action& a) {
        return taxinet::SystemState{a.indices.at(0), a.indices.at(1)};
    };

    std::map<StateId, taxinet::SystemState> actual_of; // est-wait det-state -> actual
    actual_of[init_edge.dst] = state_of(det.action_of(init_edge.label));

    // est-step table: est-wait-state x estimate -> (crash | next est-wait)
    struct Step {
        bool crash = false;
        StateId next = 0;
    };
    std::map<std::pair<StateId, std::int32_t>, Step> steps; // key: (est-wait, det est label)
    std::vector<StateId> work{init_edge.dst};
    std::vector<char> seen(det.num_states, 0);
    seen[init_edge.dst] = 1;
    std::vector<taxinet::SystemState> missing;
    for (size_t qi = 0; qi < work.size(); ++qi) {
        StateId w = work[qi];
        for (const auto& t : out[w]) {
            if (classify(det, t.label) != "est")
                throw DtmcError("expected estimate transitions at state " + std::to_string(w));
            if (det.is_err(t.dst)) {
                steps[{w, t.label}] = {true, 0};
                continue;
            }
            // deterministic actual response
            const auto& succ = out[t.dst];
            if (succ.size() != 1 || classify(det, succ[0].label) != "act")
                throw DtmcError("nondeterministic or missing actual response after " +
                                det.action_of(t.label).str() + " at state " + std::to_string(t.dst));
            StateId w2 = succ[0].dst;
            auto s2 = state_of(det.action_of(succ[0].label));
            auto it = actual_of.find(w2);
            if (it == actual_of.end()) actual_of[w2] = s2;
            steps[{w, t.label}] = {false, w2};
            if (!seen[w2]) {
                seen[w2] = 1;
                work.push_back(w2);
            }
        }
    }
    for (const auto& [w, s] : actual_of)
        if (!profile.find(s)) missing.push_back(s);
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        std::string msg = "profile missing reachable actuals:";
        for (auto s : missing) msg += " [" + std::to_string(s.cte) + "][" + std::to_string(s.he) + "]";
        throw DtmcError(msg);
    }

    MonitoredDtmc d;
    auto add_state = [&](MonitoredDtmc::StateMeta m) {
        d.meta.push_back(m);
        d.rows.emplace_back();
        return static_cast<StateId>(d.meta.size() - 1);
    };
    // absorbing states first: stable ids independent of exploration order
    d.abort_state = add_state({.pc = 0, .actual = {}, .monitor_q = -1, .abort = true});
    d.rows[d.abort_state].emplace_back(d.abort_state, 1.0);
    d.safety_err_state = add_state({.pc = 0, .actual = {}, .monitor_q = 0, .safety_err = true});
    d.rows[d.safety_err_state].emplace_back(d.safety_err_state, 1.0);

    std::map<std::pair<StateId, StateId>, StateId> est_phase;           // (est-wait, monq)
    std::map<std::tuple<StateId, std::int32_t, StateId>, StateId> act_phase; // (est-wait, est label, monq)
    std::vector<std::pair<StateId, StateId>> todo;
    auto intern_est = [&](StateId w, StateId mq) {
        auto [it, fresh] = est_phase.try_emplace({w, mq}, 0);
        if (fresh) {
            it->second = add_state({.pc = 0, .actual = actual_of.at(w), .monitor_q = static_cast<int>(mq)});
            todo.emplace_back(w, mq);
        }
        return it->second;
    };

    d.initial = intern_est(init_edge.dst, monitor.initial);
    for (size_t qi = 0; qi < todo.size(); ++qi) {
        auto [w, mq] = todo[qi];
        StateId src = est_phase.at({w, mq});
        const auto s = actual_of.at(w);
        for (const auto& [e, p] : *profile.find(s)) {
            Action ea = taxinet::est_label(e.cte, e.he);
            std::int32_t det_l = det.label_of(ea);
            std::int32_t mon_l = monitor.label_of(ea);
            if (det_l < 0) throw DtmcError("profile estimate outside model alphabet: " + ea.str());
            if (mon_l < 0) throw DtmcError("monitor alphabet mismatch: missing " + ea.str());
            auto mit = mon_delta.find({mq, mon_l});
            if (mit == mon_delta.end()) throw DtmcError("monitor incomplete at " + ea.str());
            if (monitor.is_err(mit->second)) {
                d.rows[src].emplace_back(d.abort_state, p);
                continue;
            }
            auto key = std::make_tuple(w, det_l, mit->second);
            auto [ait, fresh] = act_phase.try_emplace(key, 0);
            if (fresh) {
                ait->second = add_state({.pc = 1,
                                         .actual = s,
                                         .est_cte = e.cte,
                                         .est_he = e.he,
                                         .monitor_q = static_cast<int>(mit->second)});
                auto stp = steps.find({w, det_l});
                if (stp == steps.end()) throw DtmcError("model does not accept estimate " + ea.str());
                if (stp->second.crash) {
                    d.rows[ait->second].emplace_back(d.safety_err_state, 1.0);
                    d.has_safety_err = true;
                } else {
                    d.rows[ait->second].emplace_back(intern_est(stp->second.next, mit->second), 1.0);
                }
            }
            d.rows[src].emplace_back(ait->second, p);
        }
        double sum = 0;
        for (const auto& [_, p] : d.rows[src]) sum += p;
        if (std::abs(sum - 1.0) > 1e-9) throw DtmcError("row is not stochastic");
    }
    return d;
}

/// Exact probability of reaching `target` within n steps: backward value
/// iteration over the sparse rows, summation in ascending state order.
inline double bounded_reachability(const MonitoredDtmc& d, const std::vector<char>& target, int n) {
    const size_t N = d.num_states();
    std::vector<double> v(N, 0.0);
    for (size_t i = 0; i < N; ++i) v[i] = target[i] ? 1.0 : 0.0;
    for (int step = 0; step < n; ++step) {
        std::vector<double> nv(N, 0.0);
        for (size_t i = 0; i < N; ++i) {
            if (target[i]) {
                nv[i] = 1.0;
                continue;
            }
            double acc = 0;
            for (const auto& [j, p] : d.rows[i]) acc += p * v[j];
            nv[i] = acc;
        }
        v = std::move(nv);
    }
    return v[d.initial];
}

inline std::vector<char> abort_target(const MonitoredDtmc& d) {
    std::vector<char> t(d.num_states(), 0);
    t[d.abort_state] = 1;
    return t;
}
inline std::vector<char> safety_err_target(const MonitoredDtmc& d) {
    std::vector<char> t(d.num_states(), 0);
    t[d.safety_err_state] = 1;
    return t;
}

/// Probability of abort within each horizon 0..n, one control cycle = two
/// DTMC steps (estimate update, actual update).
inline std::vector<double> abort_curve(const MonitoredDtmc& d, int horizon) {
    std::vector<double> out;
    auto t = abort_target(d);
    for (int n = 0; n <= horizon; ++n) out.push_back(bounded_reachability(d, t, 2 * n));
    return out;
}

} // namespace ltsmc::dtmc
