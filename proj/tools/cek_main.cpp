#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cek/errors.hpp"
#include "cek/generate.hpp"
#include "cek/io.hpp"
#include "cek/kernelize.hpp"
#include "cek/lemma_lab.hpp"
#include "cek/rng.hpp"
#include "cek/solver.hpp"
#include "cek/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// exit codes: 0 success/yes, 1 no, 2 usage/parse, 3 guard refusal
constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

uint64_t default_seed() {
    if (const char* env = std::getenv("CEK_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

struct InputStats {
    int n = 0;
    long m = 0;
    cek::Weight total_weight;
};

InputStats input_stats(const cek::Instance& g) {
    InputStats s;
    s.n = g.alive_count();
    auto ids = g.vertices();
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j)
            if (g.present(ids[i], ids[j])) {
                ++s.m;
                s.total_weight += g.weight(ids[i], ids[j]);
            }
    return s;
}

std::string pair_list(const std::vector<cek::VertexPair>& pairs) {
    std::ostringstream ss;
    for (size_t i = 0; i < pairs.size(); ++i)
        ss << (i ? "," : "") << pairs[i].a + 1 << ":" << pairs[i].b + 1;
    return ss.str();
}

std::string id_list(const std::vector<cek::VertexId>& ids) {
    std::ostringstream ss;
    for (size_t i = 0; i < ids.size(); ++i) ss << (i ? "," : "") << ids[i] + 1;
    return ss.str();
}

void write_trace(const cek::ReductionTrace& trace, const std::string& path) {
    std::ofstream out(path);
    for (const auto& s : trace.steps) {
        out << "rule=" << cek::rule_name(s.rule) << " app=" << s.application << " pivot=";
        if (s.pivot >= 0)
            out << s.pivot + 1;
        else
            out << "-";
        out << " cost=" << s.cost.str();
        if (!s.inserted.empty()) out << " ins=" << pair_list(s.inserted);
        if (!s.deleted.empty()) out << " del=" << pair_list(s.deleted);
        if (!s.removed.empty()) out << " removed=" << id_list(s.removed);
        if (!s.created.empty()) out << " created=" << id_list(s.created);
        out << "\n";
    }
}

void write_vertex_map(const std::vector<cek::VertexFate>& map, const std::string& path) {
    std::ofstream out(path);
    for (size_t o = 0; o < map.size(); ++o) {
        out << o + 1 << " ";
        switch (map[o].kind) {
            case cek::VertexFate::Representative: out << map[o].representative + 1; break;
            case cek::VertexFate::Deleted: out << "deleted"; break;
            case cek::VertexFate::Replaced: out << "replaced"; break;
        }
        out << "\n";
    }
}

void write_clustering(const cek::Clustering& c, const std::string& path) {
    std::ofstream out(path);
    for (const auto& block : c.blocks) {
        for (size_t i = 0; i < block.size(); ++i) out << (i ? " " : "") << block[i] + 1;
        out << "\n";
    }
}

int cmd_kernelize(const std::string& input, cek::Mode mode, const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    cek::Instance g = cek::load_instance(input, mode);
    double parse_ms = ms_since(t0);
    InputStats in = input_stats(g);

    auto t1 = std::chrono::steady_clock::now();
    cek::KernelResult r = cek::kernelize(g);
    double kernelize_ms = ms_since(t1);

    fs::create_directories(out_dir);
    cek::save_instance(r.kernel, out_dir + (mode == cek::Mode::Unit ? "/kernel.cep" : "/kernel.cew"));
    write_trace(r.trace, out_dir + "/trace.txt");
    write_vertex_map(r.vertex_map, out_dir + "/vertex_map.txt");

    std::cout << "input: n=" << in.n << " m=" << in.m
              << " total_weight=" << in.total_weight.str() << "\n";
    std::cout << "kernel: n=" << r.kernel.alive_count() << " spent=" << r.spent.str()
              << " steps=" << r.trace.steps.size() << "\n";
    std::cout << "time: parse=" << parse_ms << "ms kernelize=" << kernelize_ms << "ms\n";
    return kExitYes;
}

int cmd_decide(const std::string& input, cek::Mode mode, const std::string& k_text) {
    cek::Weight k = cek::Weight::parse(k_text);
    if (k.infinite()) throw cek::UsageError("k must be finite");
    cek::Instance g = cek::load_instance(input, mode);
    InputStats in = input_stats(g);
    cek::DecideResult d = cek::decide(g, k);

    std::cout << "input: n=" << in.n << " m=" << in.m
              << " total_weight=" << in.total_weight.str() << "\n";
    std::cout << "kernel: n=" << d.result.kernel.alive_count()
              << " spent=" << d.result.spent.str() << "\n";
    switch (d.answer) {
        case cek::DecideResult::Yes:
            std::cout << "residual: " << d.residual.str() << "\n";
            std::cout << "answer: yes\n";
            return kExitYes;
        case cek::DecideResult::No:
            std::cout << "answer: no\n";
            return kExitNo;
        case cek::DecideResult::KernelOnly:
            std::cout << "residual: " << d.residual.str() << "\n";
            std::cout << "answer: kernel-only\n";
            if (d.result.kernel.alive_count() <= cek::kBruteForceLimit)
                std::cout << "hint: kernel fits the exact solver, run the solve command on it\n";
            return kExitYes;
    }
    return kExitUsage;
}

int cmd_solve(const std::string& input, cek::Mode mode, const std::string& engine,
              bool via_kernel, const std::string& out_path) {
    cek::Instance g = cek::load_instance(input, mode);

    cek::Weight opt;
    cek::Clustering clusters;
    uint64_t nodes = 0;

    auto run_engine = [&](const cek::Instance& target) {
        return engine == "brute" ? cek::brute_force_opt(target) : cek::branch_opt(target);
    };

    if (via_kernel) {
        cek::KernelResult r = cek::kernelize(g);
        cek::OptResult k = run_engine(r.kernel);
        if (!k.witness) throw cek::UsageError("kernel has no feasible solution");
        cek::EditSet edits = cek::lift_solution(g, r, *k.witness);
        opt = edits.weight;
        nodes = k.nodes_explored;
        cek::Instance solved = cek::apply_edits(g, edits);
        clusters.blocks = cek::connected_components(solved);
        clusters.canonicalize();
    } else {
        cek::OptResult direct = run_engine(g);
        opt = direct.opt_weight;
        nodes = direct.nodes_explored;
        if (direct.witness) clusters = *direct.witness;
    }

    json record;
    record["opt_weight"] = opt.str();
    record["node_count_explored"] = nodes;
    record["clusters"] = json::array();
    for (const auto& block : clusters.blocks) {
        json b = json::array();
        for (cek::VertexId v : block) b.push_back(v + 1);
        record["clusters"].push_back(b);
    }
    std::cout << record.dump(2) << "\n";
    if (!out_path.empty()) write_clustering(clusters, out_path);
    return kExitYes;
}

int cmd_verify_lemmas(const cek::CorpusOptions& opts) {
    if (opts.trials == 0)
        std::cerr << "warning: trials=0, every lemma passes vacuously\n";
    auto reports = cek::run_lemma_corpus(opts);
    bool ok = true;
    std::cout << "lemma            trials checked violations\n";
    for (const auto& rep : reports) {
        std::cout << rep.lemma_id;
        for (size_t i = rep.lemma_id.size(); i < 17; ++i) std::cout << ' ';
        std::cout << opts.trials << "    " << rep.instances_checked << "    "
                  << rep.violations.size() << "\n";
        for (size_t i = 0; i < rep.violations.size() && i < 3; ++i) {
            const auto& v = rep.violations[i];
            std::cerr << "violation[" << rep.lemma_id << "] " << v.witness << " lhs=" << v.lhs
                      << " rhs=" << v.rhs << "\n"
                      << v.instance;
        }
        ok = ok && rep.pass();
    }
    return ok ? kExitYes : kExitNo;
}

int cmd_gen(const std::string& kind, int n, int clusters, int budget, double p, int64_t wmax,
            cek::Mode mode, uint64_t seed, const std::string& out,
            const std::string& partition_out) {
    if (kind == "planted") {
        cek::PlantedSpec spec{n, clusters, budget, wmax, mode, seed};
        auto [g, planted] = cek::gen_planted(spec);
        cek::save_instance(g, out);
        if (!partition_out.empty()) write_clustering(planted, partition_out);
    } else {
        cek::Instance g = cek::gen_random(n, p, wmax, mode, seed);
        cek::save_instance(g, out);
    }
    std::cout << "wrote " << out << "\n";
    return kExitYes;
}

int cmd_bench(const std::vector<int>& sizes, double budget_frac, int cluster_size, int64_t wmax,
              cek::Mode mode, uint64_t seed) {
    for (int n : sizes) {
        cek::PlantedSpec spec{n, std::max(2, n / std::max(1, cluster_size)),
                              static_cast<int>(budget_frac * n), wmax, mode,
                              cek::SplitMix64::mix(seed, static_cast<uint64_t>(n))};
        auto [g, planted] = cek::gen_planted(spec);
        (void)planted;

        auto t0 = std::chrono::steady_clock::now();
        auto serial = cek::scan_stats_serial(g);
        double serial_ms = ms_since(t0);

        auto t1 = std::chrono::steady_clock::now();
        auto parallel = cek::scan_stats(g);
        double parallel_ms = ms_since(t1);

        bool agree = true;
        for (cek::VertexId v = 0; v < g.vertex_limit(); ++v)
            agree = agree && serial[v].stable_cost == parallel[v].stable_cost &&
                    serial[v].size == parallel[v].size;

        auto t2 = std::chrono::steady_clock::now();
        cek::KernelResult r = cek::kernelize(g);
        double kernelize_ms = ms_since(t2);

        std::cout << "bench n=" << n << " kernelize_ms=" << kernelize_ms
                  << " kernel_n=" << r.kernel.alive_count() << " spent=" << r.spent.str()
                  << " scan_serial_ms=" << serial_ms << " scan_omp_ms=" << parallel_ms
                  << " scans_agree=" << (agree ? 1 : 0) << "\n";
        if (!agree) return kExitNo;
    }
    return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted cluster editing: 2k kernelization, exact solvers, lemma lab"};
    app.require_subcommand(1);
    app.fallthrough();  // --mode may come before or after the subcommand

    std::string mode_name = "int";
    app.add_option("--mode", mode_name, "weight mode: int, unit or real")
        ->check(CLI::IsMember({"int", "unit", "real"}));

    auto* kern = app.add_subcommand("kernelize", "reduce an instance to its kernel");
    std::string kern_input, kern_out = "out";
    kern->add_option("input", kern_input, "instance file")->required();
    kern->add_option("--out-dir", kern_out, "directory for kernel, trace and vertex map");

    auto* dec = app.add_subcommand("decide", "answer the parameterized decision");
    std::string dec_input, dec_k;
    dec->add_option("input", dec_input, "instance file")->required();
    dec->add_option("--k", dec_k, "edit budget")->required();

    auto* sol = app.add_subcommand("solve", "compute an optimal solution");
    std::string sol_input, sol_engine = "brute", sol_out;
    bool sol_via_kernel = false;
    sol->add_option("input", sol_input, "instance file")->required();
    sol->add_option("--engine", sol_engine, "brute or branch")
        ->check(CLI::IsMember({"brute", "branch"}));
    sol->add_flag("--via-kernel", sol_via_kernel, "kernelize first, solve the kernel, lift");
    sol->add_option("--out", sol_out, "write the witness clustering here");

    auto* ver = app.add_subcommand("verify-lemmas", "run the cutting-lemma property suite");
    cek::CorpusOptions corpus;
    corpus.seed = 0xCE17;
    ver->add_option("--trials", corpus.trials, "trials per lemma");
    ver->add_option("--seed", corpus.seed, "corpus seed");
    ver->add_option("--n-min", corpus.n_min);
    ver->add_option("--n-max", corpus.n_max)->check(CLI::Range(1, 10));
    ver->add_option("--wmax", corpus.weight_max);
    ver->add_option("--inject-oracle-bias", corpus.lab.oracle_bias_units)->group("");

    auto* gen = app.add_subcommand("gen", "generate instances");
    std::string gen_kind = "planted", gen_out = "instance.cew", gen_partition;
    int gen_n = 20, gen_clusters = 4, gen_budget = 0;
    double gen_p = 0.5;
    int64_t gen_wmax = 1;
    uint64_t gen_seed = default_seed();
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"planted", "random"}));
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--clusters", gen_clusters);
    gen->add_option("--budget", gen_budget);
    gen->add_option("--p", gen_p);
    gen->add_option("--wmax", gen_wmax);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out);
    gen->add_option("--partition-out", gen_partition, "planted partition sidecar");

    auto* bench = app.add_subcommand("bench", "kernelization timing on planted instances");
    std::vector<int> bench_sizes{1000, 2000, 4000};
    double bench_budget_frac = 0.05;
    int bench_cluster_size = 32;
    int64_t bench_wmax = 1;
    uint64_t bench_seed = default_seed();
    bench->add_option("--sizes", bench_sizes, "vertex counts");
    bench->add_option("--budget-frac", bench_budget_frac, "flips per vertex");
    bench->add_option("--cluster-size", bench_cluster_size);
    bench->add_option("--wmax", bench_wmax);
    bench->add_option("--seed", bench_seed);

    try {
        app.parse(argc, argv);
        cek::Mode mode = cek::parse_mode(mode_name);
        if (*kern) return cmd_kernelize(kern_input, mode, kern_out);
        if (*dec) return cmd_decide(dec_input, mode, dec_k);
        if (*sol) return cmd_solve(sol_input, mode, sol_engine, sol_via_kernel, sol_out);
        if (*ver) return cmd_verify_lemmas(corpus);
        if (*gen)
            return cmd_gen(gen_kind, gen_n, gen_clusters, gen_budget, gen_p, gen_wmax, mode,
                           gen_seed, gen_out, gen_partition);
        if (*bench)
            return cmd_bench(bench_sizes, bench_budget_frac, bench_cluster_size, bench_wmax, mode,
                             bench_seed);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const cek::GuardError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitGuard;
    } catch (const cek::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cek::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
