#pragma once

#include <cstdint>
#include <vector>

#include "c2r/routing.hpp"

namespace c2r {

// splitmix64: the fixed, portable generator behind all synthetic workloads.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1).
    double next_double() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (one draw per call, pairs cached not
    // used so streams stay counter-addressable).
    double next_normal();
};

// Derive an independent stream seed (per layer, per shard).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Synthetic clustered workload. Experts are partitioned into num_groups
// groups by residue: expert e belongs to group e % num_groups. Each token
// samples a latent group uniformly and its logits are
//   noise_scale * normal + cluster_strength * [expert in latent group].
struct WorkloadSpec {
    std::int64_t num_tokens = 0;
    int num_experts = 0;
    int hidden_dim = 1;
    int num_groups = 1;
    double cluster_strength = 0.0;
    double noise_scale = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

int group_of(int expert, int num_groups);

std::vector<RouterLogits> generate(const WorkloadSpec& spec);

} // namespace c2r
