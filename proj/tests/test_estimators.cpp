#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "reorg/estimators.hpp"

using namespace reorg;

namespace {
SamplingConfig cfg_at(double alpha, std::uint64_t seed = 1) {
    SamplingConfig cfg;
    cfg.alpha = alpha;
    cfg.seed = seed;
    return cfg;
}
}  // namespace

TEST_CASE("enumeration reproduces the exact length-1 feasibility values") {
    // independently computed over the same pruned domain (cutoff 1e-8, cap 152)
    const struct {
        double alpha;
        double expect;
    } rows[] = {
        {0.10, 0.000142189}, {0.30, 0.081156428}, {0.45, 0.504533774},
    };
    ProtocolParams p;
    for (const auto& row : rows) {
        const EstimateResult r = enumerate_probability(p, cfg_at(row.alpha), 1, Target::feasible);
        CHECK(r.p_hat == doctest::Approx(row.expect).epsilon(1e-6));
        CHECK(r.ci_low == r.p_hat);
        CHECK(r.ci_high == r.p_hat);
        CHECK(r.truncated_mass < 1e-5);
        CHECK(r.truncated_mass > 0.0);
        CHECK(r.fork_blocks == 2);
    }
}

TEST_CASE("enumeration budget gate") {
    ProtocolParams p;
    EnumConfig tight;
    tight.budget = 1000;
    CHECK_THROWS_AS(enumerate_probability(p, cfg_at(0.3), 1, Target::feasible, tight),
                    EnumBudgetExceeded);
}

TEST_CASE("mc estimate is deterministic and thread-count independent") {
    ProtocolParams p;
    const EstimateResult a = mc_estimate(p, cfg_at(0.3, 77), 1, 200000, Target::feasible, 1);
    const EstimateResult b = mc_estimate(p, cfg_at(0.3, 77), 1, 200000, Target::feasible, 7);
    CHECK(a.hits == b.hits);
    CHECK(a.p_hat == b.p_hat);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(to_json_line(a) == to_json_line(b));
}

TEST_CASE("mc agrees with enumeration at length 1") {
    ProtocolParams p;
    const EstimateResult ex = enumerate_probability(p, cfg_at(0.3), 1, Target::feasible);
    const EstimateResult mc = mc_estimate(p, cfg_at(0.3, 5), 1, 500000, Target::feasible);
    const double half = (mc.ci_high - mc.ci_low) / 2.0;
    CHECK(std::fabs(mc.p_hat - ex.p_hat) < 4.0 * half);
    CHECK(mc.ci_low <= ex.p_hat);
    CHECK(mc.ci_high >= ex.p_hat);
}

TEST_CASE("mc zero-hit mean cost reports no data") {
    ProtocolParams p;
    // a length-4 reorg at alpha=0.1 from 50 samples: hits are overwhelmingly unlikely
    const EstimateResult r = mc_estimate(p, cfg_at(0.1, 3), 4, 50, Target::mean_cost);
    CHECK(r.hits == 0);
    CHECK_FALSE(r.has_mean_cost);
    CHECK(r.p_hat == 0.0);
    CHECK(r.ci_high == doctest::Approx(1.0 - std::pow(0.005, 1.0 / 50)).epsilon(1e-9));
    const std::string json = to_json_line(r);
    CHECK(json.find("\"mean_cost\":null") != std::string::npos);
}

TEST_CASE("is with identity proposal reproduces mc exactly") {
    ProtocolParams p;
    ISConfig is_cfg;
    is_cfg.alpha_q = 0.3;
    const EstimateResult mc = mc_estimate(p, cfg_at(0.3, 11), 1, 300000, Target::feasible);
    const EstimateResult is = is_estimate(p, cfg_at(0.3, 11), is_cfg, 1, 300000, Target::feasible);
    CHECK(is.hits == mc.hits);
    CHECK(is.p_hat == mc.p_hat);  // all likelihood ratios are exactly 1
    CHECK(is.lr_floor_hits == 0);
}

TEST_CASE("is interval contains the exact value") {
    ProtocolParams p;
    ISConfig is_cfg;
    is_cfg.alpha_q = 0.35;
    const EstimateResult ex = enumerate_probability(p, cfg_at(0.3), 1, Target::feasible);
    const EstimateResult is = is_estimate(p, cfg_at(0.3, 21), is_cfg, 1, 1'000'000,
                                          Target::feasible);
    CHECK(is.ci_low <= ex.p_hat);
    CHECK(is.ci_high >= ex.p_hat);
    CHECK(is.method == "is");
}

TEST_CASE("is rejects a proposal below alpha") {
    ProtocolParams p;
    ISConfig is_cfg;
    is_cfg.alpha_q = 0.25;
    CHECK_THROWS_AS(is_estimate(p, cfg_at(0.3), is_cfg, 1, 100, Target::feasible),
                    std::invalid_argument);
}

TEST_CASE("alpha_q heuristic") {
    CHECK(choose_alpha_q(0.30, 20) == doctest::Approx(0.35));
    CHECK(choose_alpha_q(0.30, 55) == doctest::Approx(0.33));
    CHECK(choose_alpha_q(0.48, 20) == doctest::Approx(0.4999));
}

TEST_CASE("profitable target is a subset of feasible") {
    ProtocolParams p;
    const EstimateResult f = mc_estimate(p, cfg_at(0.45, 4), 2, 200000, Target::feasible);
    const EstimateResult pr = mc_estimate(p, cfg_at(0.45, 4), 2, 200000, Target::profitable);
    CHECK(pr.hits <= f.hits);
}

TEST_CASE("enumeration and mc agree on the profitable target at length 1") {
    ProtocolParams p;
    const EstimateResult ex = enumerate_probability(p, cfg_at(0.45), 1, Target::profitable);
    const EstimateResult mc = mc_estimate(p, cfg_at(0.45, 9), 1, 500000, Target::profitable);
    CHECK(mc.ci_low <= ex.p_hat + 1e-5);
    CHECK(mc.ci_high >= ex.p_hat - 1e-5);
}

TEST_CASE("json line has fixed shape") {
    ProtocolParams p;
    const EstimateResult r = mc_estimate(p, cfg_at(0.3, 1), 1, 1000, Target::feasible);
    const std::string s = to_json_line(r);
    CHECK(s.find("\"method\":\"mc\"") != std::string::npos);
    CHECK(s.find("\"length\":1") != std::string::npos);
    CHECK(s.find("\"fork_blocks\":2") != std::string::npos);
    CHECK(s.find("\"params\":{\"ei\":24,\"de\":8,\"dp\":40}") != std::string::npos);
    CHECK(s.front() == '{');
    CHECK(s.back() == '}');
}
