#include "reorg/state.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace reorg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Failures before the first success, success probability `p`, by inversion.
int geometric_draw(SplitMix64& rng, double p) {
    if (p >= 1.0) return 0;
    const double u = rng.uniform01();
    if (u == 1.0) return 0;
    return static_cast<int>(std::log(u) / std::log1p(-p));
}
}  // namespace

SlotConfig make_slot_config(int attacker_priority, int honest_priority, int endorsements) {
    SlotConfig s{attacker_priority, honest_priority, endorsements};
    if (!slot_config_valid(s))
        throw std::invalid_argument(
            "slot config: need exactly one of (a, h) zero, both >= 0, e in [0, 32]");
    return s;
}

bool slot_config_valid(const SlotConfig& s) {
    if (s.attacker_priority < 0 || s.honest_priority < 0) return false;
    if ((s.attacker_priority == 0) == (s.honest_priority == 0)) return false;
    if (s.endorsements < 0 || s.endorsements > 32) return false;
    return true;
}

AttackState make_attack_state(std::vector<SlotConfig> slots) {
    if (slots.empty()) throw std::invalid_argument("attack state needs at least one slot");
    for (const auto& s : slots)
        if (!slot_config_valid(s)) throw std::invalid_argument("attack state: invalid slot");
    return AttackState{std::move(slots)};
}

void SamplingConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("alpha must be in (0, 0.5)");
    if (priority_cap < 1) throw std::invalid_argument("priority_cap must be >= 1");
}

SlotSampler::SlotSampler(double alpha) : alpha_(alpha) {
    // The estimators restrict alpha to (0, 0.5); the distribution machinery
    // itself is well defined on [0, 1).
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("sampler alpha must be in [0, 1)");
    log_alpha_ = alpha > 0.0 ? std::log(alpha) : kNegInf;
    log_1malpha_ = std::log1p(-alpha);
    // Binomial(32, alpha) pmf by the multiplicative recurrence.
    double p = std::pow(1.0 - alpha, 32);
    double cum = 0.0;
    for (int k = 0; k <= 32; ++k) {
        pmf_[k] = p;
        log_pmf_[k] = p > 0.0 ? std::log(p) : kNegInf;
        cum += p;
        cdf_[k] = cum;
        if (k < 32) p *= alpha / (1.0 - alpha) * (32 - k) / (k + 1);
    }
    cdf_[32] = 1.0;
}

SlotConfig SlotSampler::sample(SplitMix64& rng) const {
    SlotConfig s;
    if (alpha_ == 0.0) {
        s.honest_priority = 0;
        s.attacker_priority = kUnreachablePriority;
        s.endorsements = 0;
        return s;
    }
    s.honest_priority = geometric_draw(rng, 1.0 - alpha_);
    if (s.honest_priority == 0)
        s.attacker_priority = geometric_draw(rng, alpha_) + 1;  // a cannot also be 0
    else
        s.attacker_priority = 0;
    const double u = rng.uniform01();
    int e = 0;
    while (e < 32 && cdf_[e] < u) ++e;
    s.endorsements = e;
    return s;
}

double SlotSampler::slot_log_prob(const SlotConfig& s) const {
    if (!slot_config_valid(s)) return kNegInf;
    double lp;
    if (s.attacker_priority == 0)
        lp = s.honest_priority * log_alpha_ + log_1malpha_;
    else
        lp = s.attacker_priority * log_1malpha_ + log_alpha_;
    return lp + log_pmf_[static_cast<std::size_t>(s.endorsements)];
}

AttackState sample_state(const SlotSampler& sampler, int fork_blocks, SplitMix64& rng) {
    if (fork_blocks < 1) throw std::invalid_argument("fork_blocks must be >= 1");
    AttackState st;
    st.slots.reserve(static_cast<std::size_t>(fork_blocks));
    for (int i = 0; i < fork_blocks; ++i) st.slots.push_back(sampler.sample(rng));
    return st;
}

double slot_probability(const SamplingConfig& cfg, const SlotConfig& s) {
    if (!slot_config_valid(s)) return 0.0;
    const SlotSampler sampler(cfg.alpha);
    return std::exp(sampler.slot_log_prob(s));
}

double state_probability(const SamplingConfig& cfg, const AttackState& state) {
    const SlotSampler sampler(cfg.alpha);
    double lp = 0.0;
    for (const auto& s : state.slots) lp += sampler.slot_log_prob(s);
    return std::exp(lp);
}

}  // namespace reorg
