#include "c2r/workload.hpp"

#include <cmath>
#include <numbers>

namespace c2r {

double SplitMix64::next_normal() {
    const double u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 rng(seed ^ (stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL));
    return rng.next();
}

void WorkloadSpec::validate() const {
    if (num_tokens < 1) throw ConfigError("workload: num_tokens must be >= 1");
    if (num_experts < 1) throw ConfigError("workload: num_experts must be >= 1");
    if (hidden_dim < 1) throw ConfigError("workload: hidden_dim must be >= 1");
    if (num_groups < 1 || num_experts % num_groups != 0)
        throw ConfigError("workload: num_groups must divide num_experts");
    if (!std::isfinite(cluster_strength) || cluster_strength < 0.0)
        throw ConfigError("workload: cluster_strength must be finite and >= 0");
    if (!std::isfinite(noise_scale) || noise_scale < 0.0)
        throw ConfigError("workload: noise_scale must be finite and >= 0");
}

int group_of(int expert, int num_groups) {
    return expert % num_groups;
}

std::vector<RouterLogits> generate(const WorkloadSpec& spec) {
    spec.validate();
    std::vector<RouterLogits> tokens;
    tokens.reserve(static_cast<size_t>(spec.num_tokens));
    for (std::int64_t t = 0; t < spec.num_tokens; ++t) {
        // Counter-based stream per token, splittable by token index.
        SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t)));
        const int group = static_cast<int>(rng.next() % static_cast<std::uint64_t>(spec.num_groups));
        RouterLogits logits(spec.num_experts);
        for (int e = 0; e < spec.num_experts; ++e) {
            double v = spec.noise_scale * rng.next_normal();
            if (group_of(e, spec.num_groups) == group) v += spec.cluster_strength;
            logits[e] = v;
        }
        tokens.push_back(std::move(logits));
    }
    return tokens;
}

} // namespace c2r
