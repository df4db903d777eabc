#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace ltsmc;

namespace {
Action a(const std::string& base, std::vector<int> idx = {}) { return Action(base, std::move(idx)); }
}

TEST_CASE("deterministic tau-free input is isomorphic after determinize") {
    LtsBuilder b({a("x"), a("y")});
    StateId s0 = b.new_state(), s1 = b.new_state();
    b.add(s0, a("x"), s1);
    b.add(s1, a("y"), s0);
    Lts m = b.finish(s0);
    CHECK(tutil::isomorphic(m, determinize(m)));
}

TEST_CASE("subset construction on a tau + fork NFA matches the trace language") {
    // s0 -x-> s1, s0 -x-> s2, s1 -tau-> s2, s2 -y-> s0
    LtsBuilder b({a("x"), a("y")});
    StateId s0 = b.new_state(), s1 = b.new_state(), s2 = b.new_state();
    b.add(s0, a("x"), s1);
    b.add(s0, a("x"), s2);
    b.add_tau(s1, s2);
    b.add(s2, a("y"), s0);
    Lts m = b.finish(s0);
    Lts d = determinize(m);
    CHECK(is_deterministic(d));
    auto lm = tutil::enumerate_traces(m, 6);
    auto ld = tutil::enumerate_traces(d, 6);
    CHECK(lm == ld);
    // hand-computed subset construction: {s0} -x-> {s1,s2} -y-> {s0}
    CHECK(d.num_states == 2);
}

TEST_CASE("determinize absorbs subsets containing err") {
    // fork: on x, one branch survives, one reaches err; absorption wins
    LtsBuilder b({a("x"), a("y")}, /*reserve_err=*/true);
    StateId s0 = b.new_state(), s1 = b.new_state();
    b.add(s0, a("x"), s1);
    b.add(s0, a("x"), b.err());
    b.add(s1, a("y"), s1);
    Lts m = b.finish(s0);
    Lts d = determinize(m);
    REQUIRE(d.has_err);
    size_t to_err = 0;
    for (const auto& t : d.transitions) {
        if (t.dst == Lts::kErr) {
            ++to_err;
            CHECK(d.action_of(t.label) == a("x"));
            CHECK(t.src == d.initial);
        }
    }
    CHECK(to_err == 1);
    // absorbed: the trace x now counts as an err trace, and y is gone
    CHECK(tutil::enumerate_err_traces(d, 3).count({a("x")}) == 1);
    CHECK_FALSE(accepts(d, {a("x"), a("y")}).accepted);
}

TEST_CASE("determinize preserves language and err traces on random machines") {
    testgen::Rng rng(29);
    for (int i = 0; i < 40; ++i) {
        auto alpha = testgen::letters(3, "a");
        Lts m = testgen::random_lts(rng, 5, alpha, true);
        Lts d = determinize(m);
        CHECK(is_deterministic(d));
        CHECK(tutil::language_equal_sampled(m, d, rng, 100));
    }
    // with err: sampled trace classification must agree under absorption
    for (int i = 0; i < 40; ++i) {
        auto trial = testgen::random_trial(rng, 5, 3);
        Lts prod = hide(compose(trial.m, trial.p_err), trial.iface.sigma);
        Lts d = determinize(prod);
        auto derr = tutil::enumerate_err_traces(d, 5);
        for (const auto& t : derr) CHECK(tutil::trace_reaches_err(prod, t));
        // absorption direction: every product err trace is an err trace of d
        for (const auto& t : tutil::enumerate_err_traces(prod, 5)) {
            CHECK(tutil::trace_reaches_err(d, t));
        }
    }
}

TEST_CASE("minimize is language-preserving and canonical") {
    testgen::Rng rng(31);
    for (int i = 0; i < 30; ++i) {
        auto alpha = testgen::letters(2, "a");
        Lts m = testgen::random_lts(rng, 6, alpha, false);
        Lts d = determinize(m);
        Lts mini = minimize(d);
        CHECK(is_deterministic(mini));
        CHECK(mini.num_states <= d.num_states);
        CHECK(tutil::language_equal_sampled(d, mini, rng, 150));
        // idempotent and canonical on the nose
        Lts again = minimize(mini);
        CHECK(again.num_states == mini.num_states);
        CHECK(again.transitions == mini.transitions);
        CHECK(again.initial == mini.initial);
    }
}

TEST_CASE("minimize keeps err observably distinct") {
    LtsBuilder b({a("x")}, /*reserve_err=*/true);
    StateId s0 = b.new_state(), s1 = b.new_state();
    b.add(s0, a("x"), s1);
    b.add(s1, a("x"), b.err());
    Lts m = minimize(complete_with_sink(determinize(b.finish(s0))));
    REQUIRE(m.has_err);
    // x then x must still err, one x must not
    CHECK(tutil::trace_reaches_err(m, {a("x"), a("x")}));
    CHECK_FALSE(tutil::trace_reaches_err(m, {a("x")}));
}
