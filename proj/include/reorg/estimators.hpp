#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "reorg/attack.hpp"
#include "reorg/protocol.hpp"
#include "reorg/state.hpp"

namespace reorg {

enum class Target { feasible, profitable, mean_cost };

const char* target_name(Target t);
Target parse_target(const std::string& name);  // "feasible" | "profitable" | "mean-cost"

// A reorg of length L deletes L public blocks; the attacker fork spans L + 1
// block slots. All estimator entry points take the reorg length.
inline int fork_blocks_for_length(int length) {
    if (length < 1) throw std::invalid_argument("reorg length must be >= 1");
    return length + 1;
}

struct EstimateResult {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::string method;          // "enum" | "mc" | "is"
    std::uint64_t samples = 0;   // MC/IS: sample count; enum: states enumerated
    std::uint64_t seed = 0;
    double alpha = 0.0;
    int length = 0;              // reorg length (deleted blocks)
    int fork_blocks = 0;         // length + 1
    Target target = Target::feasible;
    std::uint64_t hits = 0;      // predicate count (mean_cost: feasible count)
    bool has_mean_cost = false;
    double mean_cost_xtz = 0.0;  // average cost conditional on feasibility
    double truncated_mass = 0.0; // enum: probability mass outside the domain
    double alpha_q = 0.0;        // is only
    std::uint64_t lr_floor_hits = 0;  // is: samples with likelihood ratio < floor
    ProtocolParams params;
};

// Single-line JSON with fixed key order and fixed numeric formatting
// (probabilities to 10 significant digits, XTZ to 7 decimals).
std::string to_json_line(const EstimateResult& r);

struct EnumConfig {
    double prune_threshold = 1e-8;        // drop slot tuples below this probability
    std::uint64_t budget = 1'000'000'000; // max slot-tuple combinations
};

struct ISConfig {
    double alpha_q = 0.0;
    double lr_floor = 1e-16;
};

class EnumBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Proposal-stake heuristic: alpha + 0.05 for lengths up to 35, alpha + 0.03
// beyond, clipped below 0.4999.
double choose_alpha_q(double alpha, int length);

// Exact sum of state probabilities over the truncated per-slot domain
// (priorities up to cfg.priority_cap, tuples above the prune threshold).
// A certified lower bound: the mass outside the domain is reported in
// truncated_mass. Throws EnumBudgetExceeded when the combination count
// exceeds enum_cfg.budget.
EstimateResult enumerate_probability(const ProtocolParams& params, const SamplingConfig& cfg,
                                     int length, Target target, const EnumConfig& enum_cfg = {});

// Standard Monte Carlo with an exact 99% Clopper-Pearson interval.
// Sampling is chunked (2^16 samples per chunk, one derived substream each),
// so results are byte-identical for any thread count.
EstimateResult mc_estimate(const ProtocolParams& params, const SamplingConfig& cfg, int length,
                           std::uint64_t samples, Target target, int threads = 0);

// Importance sampling at proposal stake is_cfg.alpha_q, likelihood-ratio
// weighted in log space, normal-approximation 99% interval. alpha_q below
// alpha is rejected; alpha_q == alpha degenerates to plain MC.
EstimateResult is_estimate(const ProtocolParams& params, const SamplingConfig& cfg,
                           const ISConfig& is_cfg, int length, std::uint64_t samples,
                           Target target, int threads = 0);

}  // namespace reorg
