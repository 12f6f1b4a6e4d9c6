// hk: command-line surface for the handlekit library. Every subcommand
// emits a deterministic report (schema "rpt-1") with a config echo and the
// theorem/figure anchors it relies on.
//
// Exit codes: 0 success/yes, 1 bad input, 2 internal assertion,
// 3 notGuaranteed verdict.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "handlekit/braid.hpp"
#include "handlekit/chain.hpp"
#include "handlekit/invariants.hpp"
#include "handlekit/oracle.hpp"
#include "handlekit/sl2z.hpp"
#include "handlekit/theorem.hpp"
#include "handlekit/unlink.hpp"

namespace {

struct RunConfig {
    std::string format = "text";
    std::int64_t seed = 0;
    std::size_t max_depth = 25;
    std::size_t max_states = 5'000'000;
};

nlohmann::json config_echo(const RunConfig& cfg) {
    return {{"format", cfg.format},
            {"seed", cfg.seed},
            {"max_depth", cfg.max_depth},
            {"max_states", cfg.max_states}};
}

void print_text(const nlohmann::json& j, const std::string& prefix = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) print_text(*it, key);
        else std::cout << key << ": " << it->dump() << "\n";
    }
}

void emit(const RunConfig& cfg, nlohmann::json report) {
    report["schema"] = "rpt-1";
    report["config"] = config_echo(cfg);
    if (cfg.format == "json") std::cout << report.dump(2) << "\n";
    else print_text(report);
}

int run(int argc, char** argv) {
    CLI::App app{"handlekit: exact-integer Kirby calculus at the linking-matrix level"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("HK_MEMORY_BUDGET")) cfg.max_states = std::stoull(env);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", cfg.seed, "Seed for randomized suites (echoed in reports)");
    app.add_option("--max-depth", cfg.max_depth, "Search depth budget");
    app.add_option("--max-states", cfg.max_states, "Search memory budget in stored states");

    // verify-monodromy
    std::int64_t vm_n = 1;
    auto* vm = app.add_subcommand("verify-monodromy", "Check the monodromy word identity (Eq. (1))");
    vm->add_option("n", vm_n, "Fiber-sum parameter n")->required();

    // build-chain
    std::int64_t bc_k = 2;
    bool bc_verify = false;
    auto* bc = app.add_subcommand("build-chain", "Slide k parallel -1-cycles into a -2-chain (Fig. chain)");
    bc->add_option("k", bc_k, "Number of parallel cycles")->required();
    bc->add_flag("--verify", bc_verify, "Cross-validate against the search oracle (small k only)");

    // unlink
    std::int64_t ul_m = 1;
    bool ul_emit = false;
    auto* ul = app.add_subcommand("unlink", "Untie a -m-linked pair over a -2-chain (Fig. handlecal2)");
    ul->add_option("m", ul_m, "Linking magnitude")->required();
    ul->add_flag("--emit-script", ul_emit, "Include the slide script in the report");

    // check-knot-surgery
    std::int64_t ks_n = 1, ks_bridge = 0;
    std::vector<std::int64_t> ks_torus;
    auto* ks = app.add_subcommand("check-knot-surgery", "Feasibility of a 1-handle-free E(n)_K (Thm 1.2)");
    ks->add_option("--n", ks_n, "Elliptic surface parameter n")->required();
    auto* ks_b = ks->add_option("--bridge", ks_bridge, "Bridge number of K");
    auto* ks_t = ks->add_option("--torus", ks_torus, "Torus knot parameters p q")->expected(2);
    ks_b->excludes(ks_t);

    // check-log-transform
    std::int64_t lt_n = 1, lt_p = 2, lt_q = 3;
    auto* lt = app.add_subcommand("check-log-transform", "Feasibility of a 1-handle-free E(n)_{p,q} (Thm 1.4)");
    lt->add_option("--n", lt_n)->required();
    lt->add_option("--p", lt_p)->required();
    lt->add_option("--q", lt_q)->required();

    // invariants
    std::string inv_file;
    auto* inv = app.add_subcommand("invariants", "Invariant summary of a JSON link file (flk-1)");
    inv->add_option("file", inv_file, "Path to a flk-1 JSON file")->required();

    // oracle-bench
    std::int64_t ob_m = 3;
    auto* ob = app.add_subcommand("oracle-bench", "Benchmark the search oracle on an unlink instance");
    ob->add_option("m", ob_m, "Linking magnitude of the benchmark instance");

    CLI11_PARSE(app, argc, argv);

    if (vm->parsed()) {
        hk::Eq1Report rep = hk::verify_eq1(vm_n);
        nlohmann::json j = hk::to_json(rep);
        j["command"] = "verify-monodromy";
        j["citation"] = "Eq. (1): \"$(a^3ba^3ba^3b)^n$\"";
        emit(cfg, j);
        if (!rep.pass()) return 2;
        return 0;
    }

    if (bc->parsed()) {
        hk::ChainResult res = hk::build_chain(bc_k);
        nlohmann::json j{{"command", "build-chain"},
                         {"k", bc_k},
                         {"citation", "Fig. chain: slides producing the -2-chain with the residual -1"},
                         {"final", hk::to_json(res.link)},
                         {"script", hk::to_json(res.script)},
                         {"residual_framing", res.link.framing(res.residual)},
                         {"residual_chain_linking", res.link.linking(res.residual, res.chain.back())}};
        if (bc_verify) {
            hk::SearchProblem problem;
            problem.initial = hk::parallel_cycles(bc_k, -1);
            problem.goal = hk::MatrixEquals{res.link};
            for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(bc_k); ++i) {
                problem.move_pairs.push_back({i, i + 1});
                problem.move_pairs.push_back({i + 1, i});
            }
            problem.max_depth = std::min<std::size_t>(cfg.max_depth, static_cast<std::size_t>(bc_k - 1));
            problem.max_states = cfg.max_states;
            hk::CrossValidation cv = hk::cross_validate(res.script, problem);
            j["cross_validation"] = hk::to_json(cv);
            emit(cfg, j);
            if (!cv.pass()) return 2;
            return 0;
        }
        emit(cfg, j);
        return 0;
    }

    if (ul->parsed()) {
        if (ul_m < 1) throw std::invalid_argument("unlink: m must be >= 1");
        hk::FramedLink link;
        link.add_two_handle(-ul_m, "h0");
        link.add_two_handle(-ul_m, "h1");
        link.set_linking(0, 1, -ul_m);
        std::vector<std::size_t> chain;
        for (std::int64_t i = 0; i <= ul_m; ++i)
            chain.push_back(link.add_two_handle(-2, "chain-" + std::to_string(i + 1)));
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) link.set_linking(chain[i], chain[i + 1], 1);
        hk::UnlinkResult res = hk::unlink_pair(link, {0, 1}, chain);
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& s : res.stages)
            stages.push_back({{"linking_magnitude", s.linking_magnitude}, {"components", s.components}, {"base", s.base}});
        nlohmann::json j{{"command", "unlink"},
                         {"m", ul_m},
                         {"citation", "Sec. 3.3: \"we can untie the $-n$-linking\""},
                         {"framings", {res.framings.first, res.framings.second}},
                         {"final_pair_linking", res.link.linking(0, 1)},
                         {"stages", stages}};
        if (ul_emit) {
            j["initial"] = hk::to_json(link);
            j["script"] = hk::to_json(res.script);
        }
        emit(cfg, j);
        return 0;
    }

    if (ks->parsed()) {
        std::int64_t bridge;
        if (!ks_torus.empty()) bridge = hk::torus_bridge_number(ks_torus[0], ks_torus[1]);
        else if (ks_b->count()) bridge = ks_bridge;
        else throw std::invalid_argument("check-knot-surgery: provide --bridge or --torus");
        hk::FeasibilityReport rep = hk::check_knot_surgery(ks_n, bridge);
        nlohmann::json j = hk::to_json(rep);
        j["command"] = "check-knot-surgery";
        j["n"] = ks_n;
        j["bridge"] = bridge;
        emit(cfg, j);
        return rep.feasible() ? 0 : 3;
    }

    if (lt->parsed()) {
        hk::FeasibilityReport rep = hk::check_log_transform(lt_n, lt_p, lt_q);
        hk::BudgetLedger bl = hk::budget_ledger(lt_n);
        nlohmann::json j = hk::to_json(rep);
        j["command"] = "check-log-transform";
        j["n"] = lt_n;
        j["p"] = lt_p;
        j["q"] = lt_q;
        j["budget"] = std::to_string(bl.stage2_need) + "/" + std::to_string(bl.remainder);
        emit(cfg, j);
        return rep.feasible() ? 0 : 3;
    }

    if (inv->parsed()) {
        std::ifstream in(inv_file);
        if (!in) throw std::invalid_argument("invariants: cannot open " + inv_file);
        nlohmann::json doc = nlohmann::json::parse(in);
        hk::FramedLink link = hk::link_from_json(doc);
        hk::InvariantSummary s = hk::invariants(link);
        emit(cfg, {{"command", "invariants"},
                   {"file", inv_file},
                   {"rank", s.rank},
                   {"signature", s.signature},
                   {"abs_determinant", s.abs_determinant},
                   {"divisors", s.divisors}});
        return 0;
    }

    if (ob->parsed()) {
        if (ob_m < 1) throw std::invalid_argument("oracle-bench: m must be >= 1");
        hk::FramedLink link;
        link.add_two_handle(-ob_m, "h0");
        link.add_two_handle(-ob_m, "h1");
        link.set_linking(0, 1, -ob_m);
        std::vector<std::size_t> chain;
        for (std::int64_t i = 0; i <= ob_m; ++i) chain.push_back(link.add_two_handle(-2));
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) link.set_linking(chain[i], chain[i + 1], 1);
        hk::SearchProblem problem;
        problem.initial = link;
        problem.goal = hk::MutualLinkingZero{0, 1};
        for (std::size_t h : {std::size_t{0}, std::size_t{1}})
            for (auto c : chain) problem.move_pairs.push_back({h, c});
        problem.max_depth = cfg.max_depth;
        problem.max_states = cfg.max_states;
        auto t0 = std::chrono::steady_clock::now();
        hk::SearchResult res = hk::search(problem);
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        nlohmann::json j = hk::to_json(res);
        j["command"] = "oracle-bench";
        j["m"] = ob_m;
        j["seconds"] = dt;
        j["states_per_second"] = dt > 0 ? static_cast<double>(res.states_explored) / dt : 0.0;
        j["dedup_hit_rate"] =
            static_cast<double>(res.dedup_hits) / static_cast<double>(res.states_explored + res.dedup_hits);
        emit(cfg, j);
        return res.found ? 0 : 3;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const hk::parse_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal assertion: " << e.what() << "\n";
        return 2;
    }
}
