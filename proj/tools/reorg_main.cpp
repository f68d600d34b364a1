// reorg: feasibility, cost and detectability of malicious reorgs in a
// Tezos-style longest-chain proof-of-stake protocol.
//
// Subcommands: estimate, sweep, simulate, health, compare. Primary output
// goes to stdout or --out and is byte-identical for a given seed regardless
// of --threads; the run manifest (including wall-clock duration) goes to
// stderr, plus a .manifest.json sidecar next to --out files.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reorg/estimators.hpp"
#include "reorg/health.hpp"
#include "reorg/sweep.hpp"

namespace {

using namespace reorg;

std::string fmt_g10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct Out {
    std::string path;  // empty = stdout
    std::ostringstream buf;

    void flush_primary() {
        if (path.empty()) {
            std::cout << buf.str();
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write " + path);
            f << buf.str();
        }
    }
};

void emit_manifest(const std::string& subcommand, const std::vector<std::string>& argv,
                   std::uint64_t seed, int threads, double duration_s,
                   const std::string& out_path) {
    std::ostringstream m;
    m << "{\"tool\":\"reorg\",\"version\":\"0.1.0\",\"subcommand\":\"" << subcommand << "\",";
    m << "\"argv\":[";
    for (std::size_t i = 0; i < argv.size(); ++i) {
        if (i) m << ",";
        m << "\"" << argv[i] << "\"";
    }
    m << "],\"seed\":" << seed << ",\"threads\":" << threads;
    char dur[32];
    std::snprintf(dur, sizeof(dur), "%.3f", duration_s);
    m << ",\"duration_seconds\":" << dur << "}";
    std::cerr << m.str() << "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path + ".manifest.json");
        if (f) f << m.str() << "\n";
    }
}

std::vector<double> parse_beta_list(const std::string& spec) {
    double lo = 0, hi = 0, step = 0;
    char trailing = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &trailing) == 3 && step > 0) {
        std::vector<double> betas;
        for (int i = 0;; ++i) {
            const double b = lo + i * step;
            if (b > hi + 1e-9) break;
            betas.push_back(b);
        }
        return betas;
    }
    // also accept a comma-separated list
    std::vector<double> betas;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) betas.push_back(std::stod(tok));
    if (betas.empty()) throw CLI::ValidationError("--beta-list", "expects LO:HI:STEP");
    return betas;
}

std::vector<std::array<int, 3>> parse_candidates(const std::string& spec) {
    std::vector<std::array<int, 3>> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        const ProtocolParams p = parse_params(tok);
        out.push_back({p.initial_endorsers, p.delay_endorse, p.delay_priority});
    }
    if (out.empty()) throw CLI::ValidationError("--candidates", "expects EI,DE,DP[;EI,DE,DP...]");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"malicious-reorg feasibility, cost and health analysis for Tezos-style PoS"};
    app.require_subcommand(1);
    app.fallthrough();  // --params / --threads are accepted after the subcommand too

    std::string params_spec = "24,8,40";
    int threads = 0;
    app.add_option("--params", params_spec, "protocol parameters EI,DE,DP")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (0 = machine parallelism)")
        ->capture_default_str();

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate an attack probability or mean cost");
    est->fallthrough();
    double e_alpha = 0.3;
    int e_length = 1;
    std::uint64_t e_samples = 1'000'000, e_seed = 1;
    std::string e_method = "mc", e_target = "feasible";
    double e_alpha_q = -1.0;
    est->add_option("--alpha", e_alpha, "attacker stake fraction, in (0, 0.5)")->required();
    est->add_option("--length", e_length, "reorg length: public blocks deleted (fork spans length+1 slots)")
        ->required();
    est->add_option("--samples", e_samples, "sample count (mc/is)")->capture_default_str();
    est->add_option("--method", e_method, "enum | mc | is")->capture_default_str();
    est->add_option("--target", e_target, "feasible | profitable | mean-cost")
        ->capture_default_str();
    est->add_option("--seed", e_seed, "RNG seed")->capture_default_str();
    est->add_option("--alpha-q", e_alpha_q, "IS proposal stake (default: heuristic)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "evaluate the design objective over a parameter grid");
    sw->fallthrough();
    double s_alpha = 0.45, s_beta = 0.5, s_sigma = 0.0;
    int s_n1 = 20, s_n2 = 3;
    std::uint64_t s_samples = 100'000, s_seed = 1;
    std::string s_grid = "ei=0:32:4,de=4:20:4,dp=0:60:10", s_out;
    bool s_smooth_given = false;
    sw->add_option("--alpha", s_alpha, "attacker stake fraction")->capture_default_str();
    sw->add_option("--beta", s_beta, "objective weight on the selfish-mine term")
        ->capture_default_str();
    sw->add_option("--n1", s_n1, "deep-reorg fork blocks")->capture_default_str();
    sw->add_option("--n2", s_n2, "selfish-mine fork blocks")->capture_default_str();
    sw->add_option("--grid", s_grid, "ei=LO:HI:STEP,de=LO:HI:STEP,dp=LO:HI:STEP")
        ->capture_default_str();
    sw->add_option("--samples", s_samples, "samples per cell")->capture_default_str();
    sw->add_option("--seed", s_seed, "RNG seed")->capture_default_str();
    sw->add_option("--smooth", s_sigma, "Gaussian sigma in grid cells; adds a smoothed column")
        ->each([&](const std::string&) { s_smooth_given = true; });
    sw->add_option("--out", s_out, "output CSV path (default stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a chain with an embedded attacker");
    sim->fallthrough();
    double m_alpha = 0.375;
    std::uint64_t m_seed = 1;
    std::int64_t m_blocks = 968;
    int m_min = 2, m_max = 39, m_window = 40;
    std::string m_out, m_events;
    sim->add_option("--alpha", m_alpha, "attacker stake fraction, in [0, 0.5)")->required();
    sim->add_option("--blocks", m_blocks, "blocks to simulate")->required();
    sim->add_option("--min-attack", m_min, "smallest fork executed (blocks)")
        ->capture_default_str();
    sim->add_option("--max-attack", m_max, "largest fork considered (blocks)")
        ->capture_default_str();
    sim->add_option("--window", m_window, "health window")->capture_default_str();
    sim->add_option("--seed", m_seed, "RNG seed")->capture_default_str();
    sim->add_option("--out", m_out, "chain record file (line-delimited JSON)")->required();
    sim->add_option("--events", m_events, "attack event file (line-delimited JSON)");

    // health
    auto* he = app.add_subcommand("health", "chain health per block from a record file");
    he->fallthrough();
    std::string h_chain, h_out;
    int h_window = 40;
    he->add_option("--chain", h_chain, "chain record file")->required();
    he->add_option("--window", h_window, "security window")->capture_default_str();
    he->add_option("--out", h_out, "output CSV path (default stdout)");

    // compare
    auto* cp = app.add_subcommand("compare", "ratio-to-optimum of candidate designs");
    cp->fallthrough();
    std::string c_from, c_cand = "24,8,40;15,5,8", c_betas = "0.1:0.9:0.1", c_out;
    cp->add_option("--from", c_from, "sweep CSV")->required();
    cp->add_option("--candidates", c_cand, "EI,DE,DP[;EI,DE,DP...]")->capture_default_str();
    cp->add_option("--beta-list", c_betas, "LO:HI:STEP or comma list")->capture_default_str();
    cp->add_option("--out", c_out, "output CSV path (default stdout)");

    std::vector<std::string> raw_args(argv, argv + argc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto seconds_since = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    try {
        const ProtocolParams params = parse_params(params_spec);

        if (est->parsed()) {
            if (!(e_alpha > 0.0 && e_alpha < 0.5)) {
                std::cerr << "error: --alpha must be in (0, 0.5)\n";
                return 2;
            }
            if (e_length < 1) {
                std::cerr << "error: --length must be >= 1\n";
                return 2;
            }
            SamplingConfig cfg;
            cfg.alpha = e_alpha;
            cfg.seed = e_seed;
            const Target target = parse_target(e_target);
            EstimateResult r;
            if (e_method == "enum") {
                r = enumerate_probability(params, cfg, e_length, target);
            } else if (e_method == "mc") {
                r = mc_estimate(params, cfg, e_length, e_samples, target, threads);
            } else if (e_method == "is") {
                ISConfig is_cfg;
                is_cfg.alpha_q = e_alpha_q > 0.0 ? e_alpha_q : choose_alpha_q(e_alpha, e_length);
                r = is_estimate(params, cfg, is_cfg, e_length, e_samples, target, threads);
            } else {
                std::cerr << "error: --method must be enum, mc or is\n";
                return 2;
            }
            std::cout << to_json_line(r) << "\n";
            emit_manifest("estimate", raw_args, e_seed, threads, seconds_since(), "");
            return 0;
        }

        if (sw->parsed()) {
            if (!(s_alpha > 0.0 && s_alpha < 0.5)) {
                std::cerr << "error: --alpha must be in (0, 0.5)\n";
                return 2;
            }
            if (s_beta < 0.0 || s_beta > 1.0) {
                std::cerr << "error: --beta must be in [0, 1]\n";
                return 2;
            }
            SweepGrid grid;
            grid.alpha = s_alpha;
            grid.beta = s_beta;
            grid.n1 = s_n1;
            grid.n2 = s_n2;
            grid.samples_per_cell = s_samples;
            grid.seed = s_seed;
            grid.threads = threads;
            {
                std::stringstream ss(s_grid);
                std::string part;
                while (std::getline(ss, part, ',')) {
                    const auto eq = part.find('=');
                    if (eq == std::string::npos)
                        throw CLI::ValidationError("--grid", "expects ei=...,de=...,dp=...");
                    const std::string key = part.substr(0, eq);
                    const GridRange r = parse_grid_range(part.substr(eq + 1));
                    if (key == "ei")
                        grid.ei = r;
                    else if (key == "de")
                        grid.de = r;
                    else if (key == "dp")
                        grid.dp = r;
                    else
                        throw CLI::ValidationError("--grid", "unknown axis " + key);
                }
            }
            const auto cells = run_sweep(grid);
            std::vector<double> objective;
            objective.reserve(cells.size());
            for (const auto& c : cells) objective.push_back(c.objective);
            std::vector<double> smoothed;
            if (s_smooth_given)
                smoothed = smooth_grid(objective, grid.ei.count(), grid.de.count(),
                                       grid.dp.count(), s_sigma);
            Out out;
            out.path = s_out;
            out.buf << "ei,de,dp,o1,o1_lo,o1_hi,o2,o2_lo,o2_hi,objective"
                    << (s_smooth_given ? ",smoothed" : "") << "\n";
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const auto& c = cells[i];
                if (c.failed) {
                    out.buf << c.params.initial_endorsers << "," << c.params.delay_endorse << ","
                            << c.params.delay_priority << ",error,,,,,,\n";
                    continue;
                }
                out.buf << c.params.initial_endorsers << "," << c.params.delay_endorse << ","
                        << c.params.delay_priority << "," << fmt_g10(c.o1.p_hat) << ","
                        << fmt_g10(c.o1.ci_low) << "," << fmt_g10(c.o1.ci_high) << ","
                        << fmt_g10(c.o2.p_hat) << "," << fmt_g10(c.o2.ci_low) << ","
                        << fmt_g10(c.o2.ci_high) << "," << fmt_g10(c.objective);
                if (s_smooth_given) out.buf << "," << fmt_g10(smoothed[i]);
                out.buf << "\n";
            }
            out.flush_primary();
            emit_manifest("sweep", raw_args, s_seed, threads, seconds_since(), s_out);
            return 0;
        }

        if (sim->parsed()) {
            SimulateConfig cfg;
            cfg.alpha = m_alpha;
            cfg.seed = m_seed;
            cfg.blocks = m_blocks;
            cfg.min_attack = m_min;
            cfg.max_attack = m_max;
            cfg.window = m_window;
            if (!(m_alpha >= 0.0 && m_alpha < 0.5)) {
                std::cerr << "error: --alpha must be in [0, 0.5)\n";
                return 2;
            }
            const SimulationResult res = simulate_chain(params, cfg);
            {
                std::ofstream f(m_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + m_out);
                write_chain_jsonl(res.chain, f);
            }
            if (!m_events.empty()) {
                std::ofstream f(m_events, std::ios::binary);
                if (!f) throw std::runtime_error("cannot write " + m_events);
                for (const auto& ev : res.events)
                    f << "{\"executed_at\": " << ev.executed_at
                      << ", \"fork_length\": " << ev.fork_length << "}\n";
            }
            emit_manifest("simulate", raw_args, m_seed, threads, seconds_since(), m_out);
            return 0;
        }

        if (he->parsed()) {
            if (h_window < 2) {
                std::cerr << "error: --window must be >= 2\n";
                return 2;
            }
            const ChainHistory hist = read_chain_file(h_chain, h_window);
            Out out;
            out.path = h_out;
            out.buf << "slot,health\n";
            ChainHistory prefix;
            prefix.window = h_window;
            for (const auto& r : hist.records) {
                prefix.records.push_back(r);
                if (prefix.records.size() < 2) continue;
                out.buf << r.slot << "," << fmt_g10(health(params, prefix)) << "\n";
            }
            out.flush_primary();
            emit_manifest("health", raw_args, 0, threads, seconds_since(), h_out);
            return 0;
        }

        if (cp->parsed()) {
            std::ifstream f(c_from);
            if (!f) throw std::runtime_error("cannot open " + c_from);
            std::vector<CompareCell> cells;
            std::string line;
            bool header = true;
            while (std::getline(f, line)) {
                if (header) {
                    header = false;
                    continue;
                }
                CompareCell c{};
                double o1lo, o1hi, o2lo, o2hi, obj;
                if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &c.xi[0],
                                &c.xi[1], &c.xi[2], &c.o1, &o1lo, &o1hi, &c.o2, &o2lo, &o2hi,
                                &obj) >= 7)
                    cells.push_back(c);
            }
            const auto rows =
                compare_designs(cells, parse_candidates(c_cand), parse_beta_list(c_betas));
            Out out;
            out.path = c_out;
            out.buf << "beta,candidate,ratio\n";
            for (const auto& r : rows)
                out.buf << fmt_g10(r.beta) << ",\"" << r.xi[0] << "," << r.xi[1] << "," << r.xi[2]
                        << "\"," << fmt_g10(r.ratio) << "\n";
            out.flush_primary();
            emit_manifest("compare", raw_args, 0, threads, seconds_since(), c_out);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
