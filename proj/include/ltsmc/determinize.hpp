#pragma once

#include <deque>
#include <map>
#include <unordered_map>

#include "lts.hpp"

namespace ltsmc {

namespace detail {

struct SubsetHash {
    size_t operator()(const std::vector<StateId>& v) const noexcept {
        size_t h = 14695981039346656037ull;
        for (StateId s : v) {
            h ^= s;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Forward tau-closure of each state, memoized across queries.
class TauClosure {
public:
    explicit TauClosure(const Lts& m) : n_(m.num_states) {
        tau_succ_.resize(n_);
        for (const auto& t : m.transitions)
            if (t.label == Lts::kTau) tau_succ_[t.src].push_back(t.dst);
        cache_.resize(n_);
    }

    const std::vector<StateId>& of(StateId s) {
        auto& c = cache_[s];
        if (!c.empty()) return c;
        std::vector<char> seen(n_, 0);
        std::vector<StateId> stack{s};
        seen[s] = 1;
        std::vector<StateId> out;
        while (!stack.empty()) {
            StateId x = stack.back();
            stack.pop_back();
            out.push_back(x);
            for (StateId d : tau_succ_[x])
                if (!seen[d]) {
                    seen[d] = 1;
                    stack.push_back(d);
                }
        }
        std::sort(out.begin(), out.end());
        c = std::move(out);
        return c;
    }

    std::vector<StateId> of_set(const std::vector<StateId>& set) {
        std::vector<StateId> acc;
        for (StateId s : set) {
            const auto& c = of(s);
            std::vector<StateId> merged;
            std::set_union(acc.begin(), acc.end(), c.begin(), c.end(), std::back_inserter(merged));
            acc = std::move(merged);
        }
        return acc;
    }

private:
    StateId n_;
    std::vector<std::vector<StateId>> tau_succ_;
    std::vector<std::vector<StateId>> cache_;
};

} // namespace detail

/// Tau elimination + subset construction. Language-preserving, and unlike
/// the textbook construction any subset containing err *is* the err state
/// of the result: a sequence whose outcome could be err counts as an error
/// trace. Result states are numbered in BFS discovery order (err = 0 when
/// present), actions explored in alphabet order.
inline Lts determinize(const Lts& m) {
    detail::TauClosure clo(m);

    // per-state, per-label successor lists
    std::vector<std::vector<std::pair<std::int32_t, StateId>>> out(m.num_states);
    for (const auto& t : m.transitions)
        if (t.label != Lts::kTau) out[t.src].emplace_back(t.label, t.dst);
    for (auto& v : out) std::sort(v.begin(), v.end());

    LtsBuilder b(m.alphabet, m.has_err);
    std::unordered_map<std::vector<StateId>, StateId, detail::SubsetHash> ids;
    std::deque<std::vector<StateId>> work;

    auto contains_err = [&](const std::vector<StateId>& ss) {
        return m.has_err && !ss.empty() && ss.front() == Lts::kErr;
    };
    auto intern = [&](std::vector<StateId> ss) -> StateId {
        if (contains_err(ss)) return b.err();
        auto it = ids.find(ss);
        if (it != ids.end()) return it->second;
        StateId id = b.new_state();
        work.push_back(ss);
        ids.emplace(std::move(ss), id);
        return id;
    };

    std::vector<StateId> init = clo.of(m.initial);
    StateId init_id = intern(init);

    const auto nlabels = static_cast<std::int32_t>(m.alphabet.size());
    while (!work.empty()) {
        std::vector<StateId> ss = std::move(work.front());
        work.pop_front();
        StateId src = ids.at(ss);
        std::vector<std::vector<StateId>> per_label(static_cast<size_t>(nlabels));
        for (StateId s : ss)
            for (auto [l, d] : out[s]) per_label[static_cast<size_t>(l)].push_back(d);
        for (std::int32_t l = 0; l < nlabels; ++l) {
            auto& dsts = per_label[static_cast<size_t>(l)];
            if (dsts.empty()) continue;
            std::sort(dsts.begin(), dsts.end());
            dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
            StateId dst = intern(clo.of_set(dsts));
            b.add_label(src, l, dst);
        }
    }
    return b.finish(init_id);
}

/// True iff the LTS has no tau transition and at most one successor per
/// (state, action).
inline bool is_deterministic(const Lts& m) {
    std::map<std::pair<StateId, std::int32_t>, StateId> seen;
    for (const auto& t : m.transitions) {
        if (t.label == Lts::kTau) return false;
        auto [it, fresh] = seen.try_emplace({t.src, t.label}, t.dst);
        if (!fresh && it->second != t.dst) return false;
    }
    return true;
}

/// Moore partition refinement on a deterministic automaton. Missing
/// transitions are treated as leading to an implicit reject sink, err is
/// observably distinct, and the quotient is renumbered in BFS order
/// (err = 0 when present). Language- and err-trace-preserving.
inline Lts minimize(const Lts& m_in) {
    Lts m = prune_unreachable(m_in);
    assert(is_deterministic(m));
    const auto n = m.num_states;
    const auto nl = static_cast<std::int32_t>(m.alphabet.size());
    const StateId bottom = n; // implicit sink for missing edges

    std::vector<std::vector<StateId>> delta(n + 1, std::vector<StateId>(static_cast<size_t>(nl), bottom));
    for (const auto& t : m.transitions) delta[t.src][static_cast<size_t>(t.label)] = t.dst;
    for (std::int32_t l = 0; l < nl; ++l) delta[bottom][static_cast<size_t>(l)] = bottom;

    std::vector<StateId> block(n + 1, 0);
    if (m.has_err) block[Lts::kErr] = 1;
    // bottom starts with the plain states; refinement separates it as needed
    size_t nblocks = m.has_err ? 2 : 1;

    std::vector<std::uint64_t> sig(n + 1);
    while (true) {
        std::map<std::vector<StateId>, StateId> fresh;
        std::vector<StateId> next(n + 1);
        std::vector<StateId> keybuf(static_cast<size_t>(nl) + 1);
        for (StateId s = 0; s <= n; ++s) {
            keybuf[0] = block[s];
            for (std::int32_t l = 0; l < nl; ++l) keybuf[static_cast<size_t>(l) + 1] = block[delta[s][static_cast<size_t>(l)]];
            auto [it, ins] = fresh.try_emplace(keybuf, static_cast<StateId>(fresh.size()));
            next[s] = it->second;
        }
        bool stable = fresh.size() == nblocks;
        nblocks = fresh.size();
        block = std::move(next);
        if (stable) break;
    }

    // quotient, dropping the block that contains only `bottom`
    std::vector<char> real_block(nblocks, 0);
    for (StateId s = 0; s < n; ++s) real_block[block[s]] = 1;

    LtsBuilder b(m.alphabet, m.has_err);
    std::unordered_map<StateId, StateId> ids; // block -> new id
    std::vector<StateId> bfs;
    auto intern = [&](StateId blk) {
        if (m.has_err && blk == block[Lts::kErr]) return b.err();
        auto it = ids.find(blk);
        if (it != ids.end()) return it->second;
        StateId id = b.new_state();
        ids.emplace(blk, id);
        bfs.push_back(blk);
        return id;
    };
    StateId init_id = intern(block[m.initial]);
    std::vector<StateId> rep(nblocks, UINT32_MAX);
    for (StateId s = n; s-- > 0;) rep[block[s]] = s; // lowest-id representative
    for (size_t i = 0; i < bfs.size(); ++i) {
        StateId blk = bfs[i];
        StateId s = rep[blk];
        StateId src = ids.at(blk);
        for (std::int32_t l = 0; l < nl; ++l) {
            StateId d = delta[s][static_cast<size_t>(l)];
            if (d == bottom) continue;
            if (!real_block[block[d]]) continue;
            b.add_label(src, l, intern(block[d]));
        }
    }
    return b.finish(init_id);
}

} // namespace ltsmc
