#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "c2r/profiler.hpp"

namespace c2r {

// Expert -> device assignment. Balanced: every device hosts exactly N/EP
// experts (N divisible by EP enforced at construction).
struct PlacementMap {
    int num_experts = 0;
    int ep = 1;
    std::vector<int> device; // length N, values in [0, ep)

    int capacity() const { return num_experts / ep; }
};

struct PlacementScore {
    std::int64_t intra_mass = 0;
    std::int64_t total_mass = 0;
    double locality = 1.0; // intra/total, 1.0 when there is no mass to cut
};

PlacementMap place_identity(int num_experts, int ep);

// Greedy agglomerative grouping: seed each device with the unassigned expert
// of largest remaining row mass, fill with the unassigned experts most
// collaborating with the current group, then refine with pairwise swaps
// (fixed 10 sweeps). Deterministic, ties by lower index.
PlacementMap place_greedy(const CollaborationMatrix& matrix, int ep);

PlacementScore score(const CollaborationMatrix& matrix, const PlacementMap& placement);

// Line-delimited placement files: "expert_id device_id" per line.
void write_placement(const PlacementMap& placement, const std::string& path);
PlacementMap read_placement(const std::string& path);

} // namespace c2r
