#pragma once

#include <deque>
#include <map>

#include "../compose.hpp"
#include "syntax.hpp"

namespace ltsmc::fsp {

namespace detail {

struct Env {
    const std::map<std::string, long>* globals = nullptr;
    std::map<std::string, long> locals; // params and binders

    long lookup(const std::string& n, const Pos& pos) const {
        auto it = locals.find(n);
        if (it != locals.end()) return it->second;
        auto gt = globals->find(n);
        if (gt != globals->end()) return gt->second;
        throw FspError(ErrKind::Unbound, pos.line, pos.col, "unbound identifier '" + n + "'");
    }
};

inline long eval(const ExprPtr& e, const Env& env) {
    switch (e->op) {
        case Expr::Op::Lit: return e->value;
        case Expr::Op::Var: return env.lookup(e->name, e->pos);
        case Expr::Op::Neg: return -eval(e->a, env);
        case Expr::Op::Not: return eval(e->a, env) == 0 ? 1 : 0;
        case Expr::Op::Add: return eval(e->a, env) + eval(e->b, env);
        case Expr::Op::Sub: return eval(e->a, env) - eval(e->b, env);
        case Expr::Op::Mul: return eval(e->a, env) * eval(e->b, env);
        case Expr::Op::Div: {
            long d = eval(e->b, env);
            if (d == 0) throw FspError(ErrKind::Eval, e->pos.line, e->pos.col, "division by zero");
            return eval(e->a, env) / d; // truncates toward zero
        }
        case Expr::Op::Mod: {
            long d = eval(e->b, env);
            if (d == 0) throw FspError(ErrKind::Eval, e->pos.line, e->pos.col, "division by zero");
            return eval(e->a, env) % d;
        }
        case Expr::Op::Eq: return eval(e->a, env) == eval(e->b, env);
        case Expr::Op::Ne: return eval(e->a, env) != eval(e->b, env);
        case Expr::Op::Lt: return eval(e->a, env) < eval(e->b, env);
        case Expr::Op::Le: return eval(e->a, env) <= eval(e->b, env);
        case Expr::Op::Gt: return eval(e->a, env) > eval(e->b, env);
        case Expr::Op::Ge: return eval(e->a, env) >= eval(e->b, env);
        case Expr::Op::And: return (eval(e->a, env) != 0 && eval(e->b, env) != 0) ? 1 : 0;
        case Expr::Op::Or: return (eval(e->a, env) != 0 || eval(e->b, env) != 0) ? 1 : 0;
        case Expr::Op::Cond: return eval(e->a, env) != 0 ? eval(e->b, env) : eval(e->c, env);
    }
    throw FspError(ErrKind::Eval, e->pos.line, e->pos.col, "bad expression");
}

} // namespace detail

/// Elaborates one top-level process (with its local equations) into a
/// ground LTS: parameters substituted, ranges expanded, guards evaluated
/// per binding, ERROR mapped to err. State ids follow discovery order.
class Elaborator {
public:
    explicit Elaborator(const Module& mod) : mod_(mod) {
        detail::Env genv;
        genv.globals = &globals_;
        for (const auto& c : mod.consts) {
            if (globals_.count(c.name))
                throw FspError(ErrKind::Duplicate, c.pos.line, c.pos.col, "duplicate const '" + c.name + "'");
            globals_[c.name] = detail::eval(c.value, genv);
        }
        for (const auto& r : mod.ranges) {
            if (ranges_.count(r.name))
                throw FspError(ErrKind::Duplicate, r.pos.line, r.pos.col, "duplicate range '" + r.name + "'");
            long lo = detail::eval(r.lo, genv), hi = detail::eval(r.hi, genv);
            if (lo > hi)
                throw FspError(ErrKind::OutOfRange, r.pos.line, r.pos.col,
                               "empty range " + std::to_string(lo) + ".." + std::to_string(hi));
            ranges_[r.name] = {lo, hi};
        }
        for (size_t pi = 0; pi < mod.processes.size(); ++pi) {
            const auto& p = mod.processes[pi];
            if (proc_index_.count(p.name))
                throw FspError(ErrKind::Duplicate, p.pos.line, p.pos.col,
                               "duplicate process '" + p.name + "'");
            proc_index_[p.name] = pi;
            std::map<std::string, size_t> locals;
            for (size_t li = 0; li < p.locals.size(); ++li) {
                const auto& l = p.locals[li];
                if (locals.count(l.name))
                    throw FspError(ErrKind::Duplicate, l.pos.line, l.pos.col,
                                   "duplicate local process '" + l.name + "'");
                locals[l.name] = li;
            }
            local_index_.push_back(std::move(locals));
        }
    }

    /// All top-level processes plus composites, by name.
    std::map<std::string, Lts> elaborate_all() {
        std::map<std::string, Lts> out;
        for (const auto& p : mod_.processes) out[p.name] = elaborate(p.name);
        for (const auto& c : mod_.composites) {
            if (out.count(c.name))
                throw FspError(ErrKind::Duplicate, c.pos.line, c.pos.col,
                               "duplicate process '" + c.name + "'");
            std::vector<Lts> parts;
            for (const auto& n : c.parts) {
                auto it = out.find(n);
                if (it == out.end())
                    throw FspError(ErrKind::Unbound, c.pos.line, c.pos.col, "unknown process '" + n + "'");
                parts.push_back(it->second);
            }
            out[c.name] = compose_all(parts);
        }
        return out;
    }

    Lts elaborate(const std::string& name) {
        auto it = proc_index_.find(name);
        if (it == proc_index_.end())
            throw FspError(ErrKind::Unbound, 0, 0, "unknown process '" + name + "'");
        work_ = Work{};
        const auto& top = mod_.processes[it->second];
        StateId init = intern_instance(it->second, 0, {}, top.pos);
        while (!work_.queue.empty()) {
            auto key = work_.queue.front();
            work_.queue.pop_front();
            expand_instance(key);
        }

        // assemble; err slot 0 was reserved from the start
        Lts m;
        std::vector<Action> alpha;
        alpha.reserve(work_.transitions.size());
        for (const auto& [s, a, d] : work_.transitions) alpha.push_back(a);
        m.alphabet = sorted_unique(std::move(alpha));
        m.num_states = work_.next;
        m.initial = init;
        m.has_err = work_.err_used;
        for (const auto& [s, a, d] : work_.transitions)
            m.transitions.push_back({s, m.label_of(a), d});
        if (!work_.err_used) {
            m.num_states -= 1;
            m.initial -= 1;
            for (auto& t : m.transitions) {
                t.src -= 1;
                t.dst -= 1;
            }
        }
        std::sort(m.transitions.begin(), m.transitions.end());
        m.transitions.erase(std::unique(m.transitions.begin(), m.transitions.end()), m.transitions.end());
        return m;
    }

private:
    using InstanceKey = std::tuple<size_t, size_t, std::vector<long>>; // top, local, args

    struct Work {
        std::map<InstanceKey, StateId> instances;
        std::deque<InstanceKey> queue;
        std::vector<std::tuple<StateId, Action, StateId>> transitions;
        StateId next = 1; // 0 reserved for err
        bool err_used = false;
        std::optional<StateId> stop_state;
    };

    // const parameters of the top-level def owning the instance
    detail::Env base_env(size_t top) const {
        detail::Env env;
        env.globals = &globals_;
        for (const auto& [n, v] : mod_.processes[top].const_params) env.locals[n] = v;
        return env;
    }

    std::pair<long, long> range_of(const std::string& name, const ExprPtr& lo, const ExprPtr& hi,
                                   const detail::Env& env, const Pos& pos) {
        if (!name.empty()) {
            auto it = ranges_.find(name);
            if (it == ranges_.end())
                throw FspError(ErrKind::Unbound, pos.line, pos.col, "unknown range '" + name + "'");
            return it->second;
        }
        long l = detail::eval(lo, env), h = detail::eval(hi, env);
        if (l > h)
            throw FspError(ErrKind::OutOfRange, pos.line, pos.col,
                           "empty range " + std::to_string(l) + ".." + std::to_string(h));
        return {l, h};
    }

    StateId intern_instance(size_t top, size_t local, std::vector<long> args, const Pos& pos) {
        const auto& def = mod_.processes[top].locals[local];
        if (args.size() != def.params.size())
            throw FspError(ErrKind::Arity, pos.line, pos.col,
                           "process '" + def.name + "' expects " + std::to_string(def.params.size()) +
                               " indices, got " + std::to_string(args.size()));
        detail::Env env = base_env(top);
        for (size_t i = 0; i < args.size(); ++i) {
            auto [lo, hi] = range_of(def.params[i].range_name, def.params[i].range_lo,
                                     def.params[i].range_hi, env, def.params[i].pos);
            if (args[i] < lo || args[i] > hi)
                throw FspError(ErrKind::OutOfRange, pos.line, pos.col,
                               "index " + std::to_string(args[i]) + " outside " + std::to_string(lo) +
                                   ".." + std::to_string(hi) + " for '" + def.name + "'");
        }
        InstanceKey key{top, local, std::move(args)};
        auto it = work_.instances.find(key);
        if (it != work_.instances.end()) return it->second;
        StateId id = work_.next++;
        work_.instances.emplace(key, id);
        work_.queue.push_back(key);
        return id;
    }

    void expand_instance(const InstanceKey& key) {
        auto& [top, local, args] = key;
        const auto& def = mod_.processes[top].locals[local];
        StateId src = work_.instances.at(key);
        detail::Env env = base_env(top);
        for (size_t i = 0; i < def.params.size(); ++i) env.locals[def.params[i].name] = args[i];
        for (const auto& t : def.terms) expand_label(top, t, 0, env, src);
    }

    void expand_label(size_t top, const Term& term, size_t pos, detail::Env env, StateId src) {
        const auto& label = term.labels[pos];
        std::vector<int> indices(label.indices.size(), 0);
        expand_slots(top, term, pos, label, 0, indices, env, src);
    }

    void expand_slots(size_t top, const Term& term, size_t pos, const ActionLabelSyntax& label,
                      size_t slot, std::vector<int>& indices, detail::Env& env, StateId src) {
        if (slot == label.indices.size()) {
            // all slots ground; first label carries the guard
            if (pos == 0 && term.guard && detail::eval(term.guard, env) == 0) return;
            Action a(label.base, std::vector<int>(indices.begin(), indices.end()));
            StateId dst;
            if (pos + 1 == term.labels.size()) {
                dst = resolve_target(top, term.target, env);
            } else {
                dst = work_.next++; // anonymous chain state
            }
            work_.transitions.emplace_back(src, std::move(a), dst);
            if (pos + 1 < term.labels.size()) expand_label(top, term, pos + 1, env, dst);
            return;
        }
        const auto& it = label.indices[slot];
        if (!it.is_binder) {
            indices[slot] = static_cast<int>(detail::eval(it.expr, env));
            expand_slots(top, term, pos, label, slot + 1, indices, env, src);
            return;
        }
        auto [lo, hi] = range_of(it.range_name, it.range_lo, it.range_hi, env, it.pos);
        for (long v = lo; v <= hi; ++v) {
            indices[slot] = static_cast<int>(v);
            auto saved = env.locals.find(it.binder_name);
            bool had = saved != env.locals.end();
            long old = had ? saved->second : 0;
            env.locals[it.binder_name] = v;
            expand_slots(top, term, pos, label, slot + 1, indices, env, src);
            if (had)
                env.locals[it.binder_name] = old;
            else
                env.locals.erase(it.binder_name);
        }
    }

    StateId resolve_target(size_t top, const TargetRef& t, const detail::Env& env) {
        if (t.kind == TargetRef::Kind::Error) {
            work_.err_used = true;
            return Lts::kErr;
        }
        if (t.kind == TargetRef::Kind::Stop) {
            if (!work_.stop_state) work_.stop_state = work_.next++;
            return *work_.stop_state;
        }
        std::vector<long> args;
        for (const auto& e : t.args) args.push_back(detail::eval(e, env));
        auto& locals = local_index_[top];
        auto lit = locals.find(t.name);
        if (lit != locals.end()) return intern_instance(top, lit->second, std::move(args), t.pos);
        auto pit = proc_index_.find(t.name);
        if (pit != proc_index_.end()) {
            if (!args.empty())
                throw FspError(ErrKind::Arity, t.pos.line, t.pos.col,
                               "top-level process '" + t.name + "' takes no indices");
            return intern_instance(pit->second, 0, {}, t.pos);
        }
        throw FspError(ErrKind::Unbound, t.pos.line, t.pos.col, "unknown process '" + t.name + "'");
    }

    const Module& mod_;
    std::map<std::string, long> globals_;
    std::map<std::string, std::pair<long, long>> ranges_;
    std::map<std::string, size_t> proc_index_;
    std::vector<std::map<std::string, size_t>> local_index_;
    Work work_;
};

/// Parses and elaborates every top-level process and composite.
inline std::map<std::string, Lts> parse_processes(const std::string& text) {
    Module mod = parse_module(text);
    return Elaborator(mod).elaborate_all();
}

} // namespace ltsmc::fsp
