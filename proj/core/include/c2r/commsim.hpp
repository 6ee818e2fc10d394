#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "c2r/placement.hpp"
#include "c2r/routing.hpp"

namespace c2r {

// Message counts for one dispatch all-to-all. The combine pass is symmetric,
// so round-trip copies are exactly double these figures.
struct DispatchAccount {
    std::int64_t naive_copies = 0; // K copies per token
    std::int64_t dedup_copies = 0; // one copy per distinct destination device
    std::vector<std::int64_t> per_device_recv;
    std::int64_t tokens = 0;
};

struct SpeedupModel {
    int ep = 1;
    double comm_fraction = 0.0;    // P^EP
    double redundancy = 0.0;       // r^EP
    double estimated_speedup = 0.0; // P^EP * r^EP
    std::int64_t naive_copies = 0;
    std::int64_t dedup_copies = 0;
};

// Map from EP degree to the all-to-all wall-clock fraction P^EP. The paper
// default covers EP in {1..6} (EP=1 has no all-to-all, fraction 0).
struct CommFractionTable {
    std::map<int, double> fractions;
    std::string source = "paper-default";

    static CommFractionTable paper_default();
    static CommFractionTable load(const std::string& path);

    double at(int ep) const;
};

DispatchAccount account_dispatch(const std::vector<RoutingDecision>& decisions,
                                 const PlacementMap& placement);

DispatchAccount merge_accounts(const DispatchAccount& a, const DispatchAccount& b);

double redundancy_ratio(const DispatchAccount& account);

double estimate_speedup(double redundancy, double comm_fraction);

// For each EP degree: greedy placement from the matrix, dispatch accounting,
// redundancy and estimated speedup. EP values not dividing N are skipped.
std::vector<SpeedupModel> sweep_ep(const std::vector<RoutingDecision>& decisions,
                                   const CollaborationMatrix& matrix,
                                   const std::vector<int>& ep_values,
                                   const CommFractionTable& fractions);

} // namespace c2r
