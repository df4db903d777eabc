// ltsmc — compositional LTS verification toolkit.
//
// Subcommands: check, assume, localspec, taxinet-gen, monitor-prob,
// export, randcheck. Exit codes: 0 ok/safe, 1 unsafe (or property
// violations found), 2 usage/parse/IO error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <sys/resource.h>

#include "ltsmc/assumption.hpp"
#include "ltsmc/dtmc.hpp"
#include "ltsmc/fsp/elaborate.hpp"
#include "ltsmc/fsp/print.hpp"
#include "ltsmc/interval_spec.hpp"
#include "ltsmc/io/artifact.hpp"
#include "ltsmc/io/dot.hpp"
#include "ltsmc/prism.hpp"
#include "ltsmc/random_models.hpp"
#include "ltsmc/taxinet.hpp"

namespace fs = std::filesystem;
using namespace ltsmc;

namespace {

long long peak_mem_kb() {
    struct rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    return ru.ru_maxrss; // KiB on Linux
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::map<std::string, Lts> load_models(const fs::path& file) {
    if (file.extension() == ".aut") {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open " + file.string());
        return {{file.stem().string(), io::read_aut(in)}};
    }
    return fsp::parse_processes(read_file(file));
}

Lts pick_composition(const std::map<std::string, Lts>& models, const std::string& compose_list) {
    if (compose_list.empty()) {
        if (models.size() == 1) return models.begin()->second;
        throw std::runtime_error("--compose required when the file defines several processes");
    }
    std::vector<Lts> parts;
    for (const auto& name : split_csv(compose_list)) {
        auto it = models.find(name);
        if (it == models.end()) throw std::runtime_error("unknown process '" + name + "'");
        parts.push_back(it->second);
    }
    return compose_all(parts);
}

std::vector<Action> actions_by_base(const Lts& m, const std::vector<std::string>& bases) {
    std::vector<Action> out;
    for (const auto& a : m.alphabet)
        for (const auto& b : bases)
            if (a.base == b) out.push_back(a);
    return out;
}

struct AssumeOutputs {
    AssumptionResult result;
    InterfaceAlphabet iface;
    io::RunStats stats;
};

void write_assume_artifacts(const fs::path& dir, const AssumeOutputs& out) {
    fs::create_directories(dir);
    write_file(dir / "assumption.aut", io::to_aut(out.result.assumption));
    write_file(dir / "assumption.dot", io::to_dot(out.result.assumption, "assumption"));
    write_file(dir / "err_automaton.aut", io::to_aut(out.result.err_automaton));
    write_file(dir / "err_automaton.dot", io::to_dot(out.result.err_automaton, "err_automaton"));
    write_file(dir / "artifact.json",
               io::assumption_artifact(out.result, out.iface, out.stats).dump(2) + "\n");
}

int cmd_check(const std::string& file, const std::string& compose_list, const std::string& property) {
    auto models = load_models(file);
    Lts system = pick_composition(models, compose_list);
    Lts p_err = universal_property();
    if (!property.empty()) {
        auto it = models.find(property);
        if (it == models.end()) throw std::runtime_error("unknown property process '" + property + "'");
        p_err = it->second;
    }
    if (!system.has_err && !p_err.has_err)
        throw std::runtime_error("neither the composition nor the property encodes an error state");
    auto verdict = check_safety(system, p_err);
    if (verdict.safe) {
        std::cout << "safe\n";
        return 0;
    }
    std::cout << "unsafe\ncounterexample: " << trace_str(*verdict.counterexample, " ") << "\n";
    return 1;
}

int cmd_assume_taxinet(int max_cte, const std::string& alphabet, const std::string& out_dir,
                       bool exclude_sink) {
    auto t0 = std::chrono::steady_clock::now();
    auto cfg = taxinet::DiscretizationConfig::make(max_cte);
    Lts m1 = taxinet::compose_m1(cfg);
    InterfaceAlphabet iface =
        alphabet == "est" ? taxinet::interface_est_only(cfg) : taxinet::interface_full(cfg);
    auto res = build_assume(m1, universal_property(), iface);
    auto t1 = std::chrono::steady_clock::now();

    size_t states = res.assumption.num_states;
    if (exclude_sink) {
        // the sink, when present, is the unique state with a self-loop on
        // every action of sigma and no other behavior
        auto out = res.assumption.out_edges();
        for (StateId s = 0; s < res.assumption.num_states; ++s) {
            bool all_self = out[s].size() == res.assumption.alphabet.size();
            for (const auto& e : out[s]) all_self = all_self && e.dst == s;
            if (all_self && out[s].size() == res.assumption.alphabet.size()) {
                states -= 1;
                break;
            }
        }
    }
    io::RunStats stats;
    stats.states = states;
    stats.transitions = res.assumption.transitions.size();
    stats.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    stats.peak_mem_kb = peak_mem_kb();
    if (!out_dir.empty()) write_assume_artifacts(out_dir, {res, iface, stats});
    if (res.no_safe_context)
        std::cout << "warning: no safe context exists for this alphabet (empty assumption language)\n";
    std::cout << "m=" << max_cte << " states=" << stats.states << " time_ms=" << stats.wall_time_ms
              << " mem_kb=" << stats.peak_mem_kb << "\n";
    return 0;
}

int cmd_assume_general(const std::string& file, const std::string& compose_list, const std::string& property,
                       const std::string& sigma_bases, const std::string& actual_bases,
                       const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    auto models = load_models(file);
    Lts m = pick_composition(models, compose_list);
    Lts p_err = universal_property();
    if (!property.empty()) {
        auto it = models.find(property);
        if (it == models.end()) throw std::runtime_error("unknown property process '" + property + "'");
        p_err = it->second;
    }
    auto sigma = actions_by_base(m, split_csv(sigma_bases));
    if (sigma.empty()) throw std::runtime_error("--sigma selected no actions of the model");
    auto acts = actions_by_base(m, split_csv(actual_bases));
    std::vector<Action> ests;
    auto sorted_acts = sorted_unique(acts);
    for (const auto& a : sorted_unique(sigma))
        if (!std::binary_search(sorted_acts.begin(), sorted_acts.end(), a)) ests.push_back(a);
    auto iface = InterfaceAlphabet::make(sorted_acts, ests);
    auto res = build_assume(m, p_err, iface);
    auto t1 = std::chrono::steady_clock::now();

    io::RunStats stats;
    stats.states = res.assumption.num_states;
    stats.transitions = res.assumption.transitions.size();
    stats.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    stats.peak_mem_kb = peak_mem_kb();
    if (!out_dir.empty()) write_assume_artifacts(out_dir, {res, iface, stats});
    if (res.no_safe_context)
        std::cout << "warning: no safe context exists for this alphabet (empty assumption language)\n";
    std::cout << "states=" << stats.states << " time_ms=" << stats.wall_time_ms
              << " mem_kb=" << stats.peak_mem_kb << "\n";
    return 0;
}

int cmd_localspec(int max_cte, bool merge, const std::string& out_file) {
    auto cfg = taxinet::DiscretizationConfig::make(max_cte);
    Lts m1 = taxinet::compose_m1(cfg);
    auto iface = taxinet::interface_full(cfg);
    auto res = build_assume(m1, universal_property(), iface);
    auto specs = synthesize_local_specs(res.err_automaton, iface);
    if (merge) specs = merge_specs_by_actual(specs);
    for (const auto& s : specs) {
        std::cout << render_discrete(s) << "\n";
        std::cout << render_intervals(concretize(s, cfg)) << "\n";
    }
    if (!out_file.empty())
        write_file(out_file, io::localspec_artifact(specs, res.err_automaton, cfg).dump(2) + "\n");
    return 0;
}

int cmd_taxinet_gen(int max_cte, const std::string& out_dir) {
    auto cfg = taxinet::DiscretizationConfig::make(max_cte);
    fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / ("taxinet_m" + std::to_string(max_cte) + ".fsp"), taxinet::fsp_source(cfg));
    write_file(dir / "controller.aut", io::to_aut(taxinet::gen_controller(cfg)));
    // the dynamics carries the error encoding of the two safety properties
    write_file(dir / "dynamics.aut", io::to_aut(taxinet::gen_dynamics(cfg)));
    write_file(dir / "perfect_perception.aut", io::to_aut(taxinet::perfect_perception(cfg)));
    write_file(dir / "worst_perception.aut", io::to_aut(taxinet::worst_perception(cfg)));
    write_file(dir / "m1.aut", io::to_aut(taxinet::compose_m1(cfg)));
    std::cout << "wrote models for MaxCTE=" << max_cte << " to " << dir.string() << "\n";
    return 0;
}

int cmd_monitor_prob(int max_cte, const std::string& profile_file, int horizon, const std::string& out_file,
                     const std::string& prism_file) {
    auto cfg = taxinet::DiscretizationConfig::make(max_cte);
    std::ifstream in(profile_file);
    if (!in) throw std::runtime_error("cannot open " + profile_file);
    auto profile = dtmc::estimate_profile(dtmc::parse_profile_csv(in));

    Lts m1 = taxinet::compose_m1(cfg);
    auto res = build_assume(m1, universal_property(), taxinet::interface_est_only(cfg));
    auto d = dtmc::build_monitored_dtmc(m1, profile, res.err_automaton, cfg);

    double p_safety_err = dtmc::bounded_reachability(d, dtmc::safety_err_target(d), 2 * horizon);
    auto curve = dtmc::abort_curve(d, horizon);

    std::ostringstream csv;
    csv << "n,probability\n";
    csv << std::setprecision(17);
    for (int n = 0; n <= horizon; ++n) csv << n << "," << curve[static_cast<size_t>(n)] << "\n";
    if (!out_file.empty())
        write_file(out_file, csv.str());
    else
        std::cout << csv.str();
    std::cout << "P[F safety-err] at horizon " << horizon << " = " << p_safety_err << "\n";
    std::cout << "P[F<=n abort] at n=" << horizon << " = " << curve.back() << "\n";
    if (!prism_file.empty())
        write_file(prism_file, dtmc::to_prism(d, cfg, static_cast<int>(res.err_automaton.num_states)));
    return 0;
}

int cmd_export(const std::string& file, const std::string& process, const std::string& format,
               const std::string& out_file, bool err0) {
    Lts m;
    fs::path p(file);
    if (p.extension() == ".aut") {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open " + file);
        m = io::read_aut(in, err0);
    } else {
        auto models = load_models(p);
        if (process.empty()) {
            if (models.size() != 1) throw std::runtime_error("--process required (file defines several)");
            m = models.begin()->second;
        } else {
            auto it = models.find(process);
            if (it == models.end()) throw std::runtime_error("unknown process '" + process + "'");
            m = it->second;
        }
    }
    std::string text;
    if (format == "aut") {
        text = io::to_aut(m);
    } else if (format == "dot") {
        text = io::to_dot(m, process.empty() ? "lts" : process);
    } else if (format == "fsp") {
        text = fsp::print_lts(m, process.empty() ? "P" : process);
    } else if (format == "json") {
        nlohmann::json j;
        j["alphabet"] = nlohmann::json::array();
        for (const auto& a : m.alphabet) j["alphabet"].push_back(a.str());
        j["states"] = m.num_states;
        j["initial"] = m.initial;
        j["err_state"] = m.has_err ? nlohmann::json(Lts::kErr) : nlohmann::json();
        j["transitions"] = nlohmann::json::array();
        for (const auto& t : m.transitions)
            j["transitions"].push_back({{"src", t.src}, {"label", m.label_str(t.label)}, {"dst", t.dst}});
        text = j.dump(2) + "\n";
    } else {
        throw std::runtime_error("unknown format '" + format + "'");
    }
    if (out_file.empty())
        std::cout << text;
    else
        write_file(out_file, text);
    return 0;
}

int cmd_randcheck(int instances, int contexts, std::uint64_t seed, int max_states, int max_alpha) {
    testgen::Rng rng(seed);
    long agree = 0, total = 0, safety_violations = 0;
    for (int i = 0; i < instances; ++i) {
        auto trial = testgen::random_trial(rng, max_states, max_alpha);
        auto res = build_assume(trial.m, trial.p_err, trial.iface);
        // by-construction safety of the assumption
        if (!check_safety(compose(res.assumption, trial.m), trial.p_err).safe) ++safety_violations;
        for (int k = 0; k < contexts; ++k) {
            Lts n = testgen::random_context(rng, trial.iface);
            bool via_assumption = check_context(n, res.assumption);
            bool direct = check_safety(compose(hide(trial.m, trial.iface.sigma), n), trial.p_err).safe;
            agree += (via_assumption == direct);
            ++total;
        }
    }
    std::cout << "instances=" << instances << " contexts=" << total << " agreement=" << agree << "/" << total
              << " assumption_safety_violations=" << safety_violations << "\n";
    return (agree == total && safety_violations == 0) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ltsmc — compositional LTS verification toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized harnesses");

    // check
    auto* check = app.add_subcommand("check", "model-check err reachability of a composition");
    std::string check_file, check_compose, check_property;
    check->add_option("file", check_file, "FSP (or .aut) input")->required();
    check->add_option("--compose", check_compose, "comma-separated process names");
    check->add_option("--property", check_property, "property process (err automaton)");

    // assume
    auto* assume = app.add_subcommand("assume", "generate the weakest assumption");
    int assume_m = 0;
    std::string assume_alpha = "est", assume_file, assume_compose, assume_property, assume_sigma,
                assume_actuals, assume_out;
    bool assume_exclude_sink = false;
    assume->add_option("--taxinet", assume_m, "use the generated TaxiNet models with MaxCTE=M");
    assume->add_option("--alphabet", assume_alpha, "est | est+act (taxinet mode)")
        ->check(CLI::IsMember({"est", "est+act"}));
    assume->add_option("file", assume_file, "FSP input (general mode)");
    assume->add_option("--compose", assume_compose, "comma-separated process names");
    assume->add_option("--property", assume_property, "property process");
    assume->add_option("--sigma", assume_sigma, "interface label bases, comma-separated");
    assume->add_option("--actuals", assume_actuals, "actual-tagged label bases");
    assume->add_option("--out", assume_out, "artifact output directory");
    assume->add_flag("--exclude-sink", assume_exclude_sink, "exclude the sink from the reported state count");

    // localspec
    auto* lspec = app.add_subcommand("localspec", "synthesize local DNN specifications");
    int lspec_m = 2;
    bool lspec_merge = false;
    std::string lspec_out;
    lspec->add_option("--taxinet", lspec_m, "MaxCTE")->required();
    lspec->add_flag("--merge", lspec_merge, "merge specs of the same actual by intersection");
    lspec->add_option("--out", lspec_out, "JSON output file");

    // taxinet-gen
    auto* tgen = app.add_subcommand("taxinet-gen", "generate the TaxiNet models");
    int tgen_m = 2;
    std::string tgen_out = ".";
    tgen->add_option("--max-cte", tgen_m, "cte granularity MaxCTE")->required();
    tgen->add_option("--out", tgen_out, "output directory")->required();

    // monitor-prob
    auto* mprob = app.add_subcommand("monitor-prob", "bounded-horizon monitor permissiveness");
    int mprob_m = 2, mprob_h = 50;
    std::string mprob_profile, mprob_out, mprob_prism;
    mprob->add_option("--taxinet", mprob_m, "MaxCTE")->required();
    mprob->add_option("--profile", mprob_profile, "confusion profile CSV")->required();
    mprob->add_option("--horizon", mprob_h, "horizon in control cycles")->required();
    mprob->add_option("--out", mprob_out, "output CSV of (n, probability)");
    mprob->add_option("--prism", mprob_prism, "also write a PRISM module mirror");

    // export
    auto* exp = app.add_subcommand("export", "convert between model formats");
    std::string exp_file, exp_process, exp_format = "aut", exp_out;
    bool exp_err0 = false;
    exp->add_option("file", exp_file, "FSP or .aut input")->required();
    exp->add_option("--process", exp_process, "process name to export");
    exp->add_option("--format", exp_format, "aut|dot|json|fsp")
        ->check(CLI::IsMember({"aut", "dot", "json", "fsp"}));
    exp->add_option("--out", exp_out, "output file (default stdout)");
    exp->add_flag("--err0", exp_err0, "treat state 0 of an .aut input as err");

    // randcheck
    auto* rcheck = app.add_subcommand("randcheck", "random-instance weakest-assumption agreement harness");
    int rc_instances = 200, rc_contexts = 50, rc_states = 6, rc_alpha = 4;
    rcheck->add_option("--instances", rc_instances, "number of random (M,P,Sigma) instances");
    rcheck->add_option("--contexts", rc_contexts, "random contexts per instance");
    rcheck->add_option("--max-states", rc_states, "max states of M");
    rcheck->add_option("--max-alpha", rc_alpha, "max interface alphabet size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(check_file, check_compose, check_property);
        if (assume->parsed()) {
            if (assume_m > 0) return cmd_assume_taxinet(assume_m, assume_alpha, assume_out, assume_exclude_sink);
            if (assume_file.empty()) throw std::runtime_error("either --taxinet or an input file is required");
            return cmd_assume_general(assume_file, assume_compose, assume_property, assume_sigma,
                                      assume_actuals, assume_out);
        }
        if (lspec->parsed()) return cmd_localspec(lspec_m, lspec_merge, lspec_out);
        if (tgen->parsed()) return cmd_taxinet_gen(tgen_m, tgen_out);
        if (mprob->parsed()) return cmd_monitor_prob(mprob_m, mprob_profile, mprob_h, mprob_out, mprob_prism);
        if (exp->parsed()) return cmd_export(exp_file, exp_process, exp_format, exp_out, exp_err0);
        if (rcheck->parsed()) return cmd_randcheck(rc_instances, rc_contexts, seed, rc_states, rc_alpha);
    } catch (const fsp::FspError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
