#include "reorg/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>
#include <vector>

#include "reorg/stats.hpp"

namespace reorg {

namespace {

constexpr std::uint64_t kChunkSize = 1u << 16;

int worker_count(int threads, std::uint64_t chunks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned n = threads > 0 ? static_cast<unsigned>(threads) : hw;
    return static_cast<int>(std::min<std::uint64_t>(n, chunks));
}

std::string fmt_g10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Per-slot delay/reward quantities used by both sampling paths. Slot 1 of a
// fork is special: the attacker block carries all 32 endorsements.
struct SlotTerms {
    std::int64_t margin_first;  // honest delay - attacker delay, fork block 1
    std::int64_t margin_rest;   // same for fork blocks >= 2
    xtz7 money_first;           // attack reward - honest reward, fork block 1
    xtz7 money_rest;
};

SlotTerms slot_terms(const ProtocolParams& p, const SlotConfig& s) {
    constexpr int kAll = ProtocolParams::kEndorsersPerBlock;
    SlotTerms t;
    const std::int64_t dh = delay(p, s.honest_priority, kAll - s.endorsements);
    t.margin_first = dh - delay(p, s.attacker_priority, kAll);
    t.margin_rest = dh - delay(p, s.attacker_priority, s.endorsements);
    const xtz7 honest = (s.attacker_priority == 0 ? baker_reward(p, 0, kAll) : 0) +
                        s.endorsements * endorser_reward(p, 0);
    t.money_first = baker_reward(p, s.attacker_priority, kAll) +
                    s.endorsements * endorser_reward(p, s.attacker_priority) - honest;
    t.money_rest = baker_reward(p, s.attacker_priority, s.endorsements) +
                   s.endorsements * endorser_reward(p, s.attacker_priority) - honest;
    return t;
}

struct ChunkAccum {
    std::uint64_t hits = 0;           // target predicate count
    std::uint64_t feasible = 0;       // feasibility count (mean_cost)
    std::int64_t cost_sum = 0;        // xtz7 over feasible states
    double w_sum = 0.0;               // IS: likelihood-ratio mass of predicate hits
    double w2_sum = 0.0;
    double wf_sum = 0.0;              // IS: ratio mass of feasible states
    double wc_sum = 0.0;              // IS: ratio-weighted cost of feasible states
    std::uint64_t lr_floor_hits = 0;
};

// One sampled state, reduced on the fly.
template <bool kImportance>
void accumulate_sample(const ProtocolParams& params, const SlotSampler& sampler,
                       const SlotSampler* p_sampler, double lr_floor, int fork_blocks,
                       Target target, SplitMix64& rng, ChunkAccum& acc) {
    std::int64_t margin = 0;
    xtz7 money = 0;
    double log_lr = 0.0;
    for (int i = 0; i < fork_blocks; ++i) {
        const SlotConfig s = sampler.sample(rng);
        const SlotTerms t = slot_terms(params, s);
        margin += i == 0 ? t.margin_first : t.margin_rest;
        money += i == 0 ? t.money_first : t.money_rest;
        if constexpr (kImportance)
            log_lr += p_sampler->slot_log_prob(s) - sampler.slot_log_prob(s);
    }
    const bool feas = margin >= 0;
    const bool hit = target == Target::profitable ? (feas && money > 0) : feas;
    if constexpr (!kImportance) {
        acc.hits += hit;
        if (feas) {
            ++acc.feasible;
            acc.cost_sum += -money;  // cost = phi_h - phi_a
        }
    } else {
        const double w = std::exp(log_lr);
        if (w < lr_floor) ++acc.lr_floor_hits;
        if (hit) {
            acc.hits += 1;
            acc.w_sum += w;
            acc.w2_sum += w * w;
        }
        if (feas) {
            acc.wf_sum += w;
            acc.wc_sum += w * xtz_to_double(-money);
        }
    }
}

template <bool kImportance>
std::vector<ChunkAccum> run_chunks(const ProtocolParams& params, double sample_alpha,
                                   double target_alpha, double lr_floor, std::uint64_t seed,
                                   std::uint64_t samples, int fork_blocks, Target target,
                                   int threads) {
    const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
    std::vector<ChunkAccum> results(chunks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        const SlotSampler sampler(sample_alpha);
        const SlotSampler p_sampler(target_alpha);
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            SplitMix64 rng(derive_stream_seed(seed, c));
            const std::uint64_t lo = c * kChunkSize;
            const std::uint64_t hi = std::min(samples, lo + kChunkSize);
            ChunkAccum acc;
            for (std::uint64_t i = lo; i < hi; ++i)
                accumulate_sample<kImportance>(params, sampler, &p_sampler, lr_floor,
                                               fork_blocks, target, rng, acc);
            results[c] = acc;
        }
    };
    const int nw = worker_count(threads, chunks);
    if (nw <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        for (int i = 0; i < nw; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return results;
}

}  // namespace

const char* target_name(Target t) {
    switch (t) {
        case Target::feasible: return "feasible";
        case Target::profitable: return "profitable";
        case Target::mean_cost: return "mean-cost";
    }
    return "?";
}

Target parse_target(const std::string& name) {
    if (name == "feasible") return Target::feasible;
    if (name == "profitable") return Target::profitable;
    if (name == "mean-cost" || name == "mean_cost") return Target::mean_cost;
    throw std::invalid_argument("unknown target: " + name);
}

double choose_alpha_q(double alpha, int length) {
    const double shift = length <= 35 ? 0.05 : 0.03;
    return std::min(alpha + shift, 0.4999);
}

std::string to_json_line(const EstimateResult& r) {
    std::string out = "{";
    out += "\"method\":\"" + r.method + "\"";
    out += ",\"target\":\"" + std::string(target_name(r.target)) + "\"";
    out += ",\"alpha\":" + fmt_g10(r.alpha);
    out += ",\"length\":" + std::to_string(r.length);
    out += ",\"fork_blocks\":" + std::to_string(r.fork_blocks);
    out += ",\"params\":{\"ei\":" + std::to_string(r.params.initial_endorsers) +
           ",\"de\":" + std::to_string(r.params.delay_endorse) +
           ",\"dp\":" + std::to_string(r.params.delay_priority) + "}";
    out += ",\"samples\":" + std::to_string(r.samples);
    out += ",\"seed\":" + std::to_string(r.seed);
    out += ",\"p_hat\":" + fmt_g10(r.p_hat);
    out += ",\"ci_low\":" + fmt_g10(r.ci_low);
    out += ",\"ci_high\":" + fmt_g10(r.ci_high);
    out += ",\"hits\":" + std::to_string(r.hits);
    out += ",\"mean_cost\":";
    if (r.has_mean_cost) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.7f", r.mean_cost_xtz);
        out += buf;
    } else {
        out += "null";
    }
    if (r.method == "enum") out += ",\"truncated_mass\":" + fmt_g10(r.truncated_mass);
    if (r.method == "is") {
        out += ",\"alpha_q\":" + fmt_g10(r.alpha_q);
        out += ",\"lr_floor_hits\":" + std::to_string(r.lr_floor_hits);
    }
    out += "}";
    return out;
}

EstimateResult enumerate_probability(const ProtocolParams& params, const SamplingConfig& cfg,
                                     int length, Target target, const EnumConfig& enum_cfg) {
    params.validate();
    cfg.validate();
    const int n = fork_blocks_for_length(length);

    // Per-slot tuple table over the truncated, pruned domain.
    struct Tuple {
        SlotTerms t;
        double p;
    };
    const SlotSampler sampler(cfg.alpha);
    std::vector<Tuple> tuples;
    double kept_mass = 0.0;
    auto push_pairs = [&](int a, int h, double prio_p) {
        for (int e = 0; e <= 32; ++e) {
            const double p = prio_p * sampler.binomial_pmf(e);
            if (p < enum_cfg.prune_threshold) continue;
            const SlotConfig s{a, h, e};
            tuples.push_back({slot_terms(params, s), p});
            kept_mass += p;
        }
    };
    double prio = cfg.alpha * (1.0 - cfg.alpha);  // Pr[a=0, h=1]
    for (int h = 1; h <= cfg.priority_cap; ++h, prio *= cfg.alpha) push_pairs(0, h, prio);
    prio = (1.0 - cfg.alpha) * cfg.alpha;  // Pr[a=1, h=0]
    for (int a = 1; a <= cfg.priority_cap; ++a, prio *= 1.0 - cfg.alpha) push_pairs(a, 0, prio);

    const double combos = std::pow(static_cast<double>(tuples.size()), n);
    if (combos > static_cast<double>(enum_cfg.budget))
        throw EnumBudgetExceeded("enumeration needs " + std::to_string(combos) +
                                 " slot tuples, over the budget of " +
                                 std::to_string(enum_cfg.budget) + "; use mc or is");

    EstimateResult r;
    r.method = "enum";
    r.samples = static_cast<std::uint64_t>(combos);
    r.seed = cfg.seed;
    r.alpha = cfg.alpha;
    r.length = length;
    r.fork_blocks = n;
    r.target = target;
    r.params = params;
    r.truncated_mass = 1.0 - std::pow(kept_mass, n);

    double p_acc = 0.0;       // probability of the target event
    double pf_acc = 0.0;      // probability of feasibility (mean_cost)
    double pc_acc = 0.0;      // sum of p * cost over feasible states
    std::uint64_t hit_acc = 0;

    if (target == Target::feasible) {
        // Last slot resolved through a margin-sorted suffix table; identical
        // to the plain product sum, factored.
        std::vector<std::pair<std::int64_t, double>> last;
        last.reserve(tuples.size());
        for (const auto& t : tuples)
            last.emplace_back(n == 1 ? t.t.margin_first : t.t.margin_rest, t.p);
        std::sort(last.begin(), last.end());
        std::vector<double> suffix_p(last.size() + 1, 0.0);
        std::vector<std::uint64_t> suffix_c(last.size() + 1, 0);
        for (std::size_t i = last.size(); i-- > 0;) {
            suffix_p[i] = suffix_p[i + 1] + last[i].second;
            suffix_c[i] = suffix_c[i + 1] + 1;
        }
        auto resolve = [&](std::int64_t margin, double p, std::uint64_t mult) {
            const auto it = std::lower_bound(
                last.begin(), last.end(),
                std::make_pair(-margin, -std::numeric_limits<double>::infinity()));
            const std::size_t idx = static_cast<std::size_t>(it - last.begin());
            p_acc += p * suffix_p[idx];
            hit_acc += mult * suffix_c[idx];
        };
        // DFS over the first n-1 slots.
        auto dfs = [&](auto&& self, int depth, std::int64_t margin, double p) -> void {
            if (depth == n - 1) {
                resolve(margin, p, 1);
                return;
            }
            for (const auto& t : tuples)
                self(self, depth + 1, margin + (depth == 0 ? t.t.margin_first : t.t.margin_rest),
                     p * t.p);
        };
        if (n == 1)
            resolve(0, 1.0, 1);
        else
            dfs(dfs, 0, 0, 1.0);
    } else {
        auto dfs = [&](auto&& self, int depth, std::int64_t margin, xtz7 money, double p) -> void {
            if (depth == n) {
                if (margin >= 0) {
                    pf_acc += p;
                    pc_acc += p * xtz_to_double(-money);
                    if (target == Target::profitable) {
                        if (money > 0) {
                            p_acc += p;
                            ++hit_acc;
                        }
                    } else {
                        ++hit_acc;  // mean_cost counts feasible states
                    }
                }
                return;
            }
            for (const auto& t : tuples)
                self(self, depth + 1, margin + (depth == 0 ? t.t.margin_first : t.t.margin_rest),
                     money + (depth == 0 ? t.t.money_first : t.t.money_rest), p * t.p);
        };
        dfs(dfs, 0, 0, 0, 1.0);
    }

    if (target == Target::feasible) {
        r.p_hat = p_acc;
    } else if (target == Target::profitable) {
        r.p_hat = p_acc;
    } else {
        r.p_hat = pf_acc;
        if (pf_acc > 0.0) {
            r.has_mean_cost = true;
            r.mean_cost_xtz = pc_acc / pf_acc;
        }
    }
    r.hits = hit_acc;
    r.ci_low = r.p_hat;
    r.ci_high = r.p_hat;
    return r;
}

EstimateResult mc_estimate(const ProtocolParams& params, const SamplingConfig& cfg, int length,
                           std::uint64_t samples, Target target, int threads) {
    params.validate();
    cfg.validate();
    if (samples == 0) throw std::invalid_argument("samples must be >= 1");
    const int n = fork_blocks_for_length(length);
    const auto chunks = run_chunks<false>(params, cfg.alpha, cfg.alpha, 0.0, cfg.seed, samples,
                                          n, target, threads);
    std::uint64_t hits = 0, feasible = 0;
    std::int64_t cost_sum = 0;
    for (const auto& c : chunks) {
        hits += c.hits;
        feasible += c.feasible;
        cost_sum += c.cost_sum;
    }
    EstimateResult r;
    r.method = "mc";
    r.samples = samples;
    r.seed = cfg.seed;
    r.alpha = cfg.alpha;
    r.length = length;
    r.fork_blocks = n;
    r.target = target;
    r.params = params;
    const std::uint64_t phits = target == Target::mean_cost ? feasible : hits;
    r.hits = phits;
    r.p_hat = static_cast<double>(phits) / static_cast<double>(samples);
    const Interval iv = clopper_pearson(phits, samples);
    r.ci_low = iv.low;
    r.ci_high = iv.high;
    if (target == Target::mean_cost && feasible > 0) {
        r.has_mean_cost = true;
        r.mean_cost_xtz = xtz_to_double(cost_sum) / static_cast<double>(feasible);
    }
    return r;
}

EstimateResult is_estimate(const ProtocolParams& params, const SamplingConfig& cfg,
                           const ISConfig& is_cfg, int length, std::uint64_t samples,
                           Target target, int threads) {
    params.validate();
    cfg.validate();
    if (samples == 0) throw std::invalid_argument("samples must be >= 1");
    if (is_cfg.alpha_q < cfg.alpha)
        throw std::invalid_argument("alpha_q below alpha would inflate the variance");
    if (!(is_cfg.alpha_q < 0.5)) throw std::invalid_argument("alpha_q must be < 0.5");
    if (!(is_cfg.lr_floor > 0.0)) throw std::invalid_argument("lr_floor must be > 0");
    const int n = fork_blocks_for_length(length);
    const auto chunks = run_chunks<true>(params, is_cfg.alpha_q, cfg.alpha, is_cfg.lr_floor,
                                         cfg.seed, samples, n, target, threads);
    EstimateResult r;
    r.method = "is";
    r.samples = samples;
    r.seed = cfg.seed;
    r.alpha = cfg.alpha;
    r.alpha_q = is_cfg.alpha_q;
    r.length = length;
    r.fork_blocks = n;
    r.target = target;
    r.params = params;
    double w_sum = 0.0, w2_sum = 0.0, wf_sum = 0.0, wc_sum = 0.0;
    for (const auto& c : chunks) {  // fixed chunk order: thread-count independent
        r.hits += c.hits;
        r.lr_floor_hits += c.lr_floor_hits;
        w_sum += c.w_sum;
        w2_sum += c.w2_sum;
        wf_sum += c.wf_sum;
        wc_sum += c.wc_sum;
    }
    const double nn = static_cast<double>(samples);
    // For mean_cost the predicate mass accumulated is the feasibility mass
    // (w_sum == wf_sum), so p_hat is Pr[feasible] in every case.
    r.p_hat = (target == Target::mean_cost ? wf_sum : w_sum) / nn;
    const double sigma = std::sqrt(std::max(0.0, w2_sum / nn - r.p_hat * r.p_hat));
    r.ci_low = std::max(0.0, r.p_hat - 2.58 * sigma / std::sqrt(nn));
    r.ci_high = std::min(1.0, r.p_hat + 2.58 * sigma / std::sqrt(nn));
    if (target == Target::mean_cost && wf_sum > 0.0) {
        r.has_mean_cost = true;
        r.mean_cost_xtz = wc_sum / wf_sum;  // self-normalized ratio estimate
    }
    return r;
}

}  // namespace reorg
