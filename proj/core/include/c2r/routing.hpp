#pragma once

#include <cstdint>
#include <vector>

#include "c2r/errors.hpp"

namespace c2r {

using TokenEmbedding = std::vector<double>;
using RouterLogits = std::vector<double>;

struct MoEConfig {
    int num_experts = 0; // N
    int top_k = 0;       // K
    int hidden_dim = 0;  // d
    int num_layers = 1;  // L

    void validate() const;
};

// Gate projection, column-major access: data[r * num_experts + c] is the
// weight of input dim r for expert c.
struct GateWeights {
    int hidden_dim = 0;
    int num_experts = 0;
    std::vector<double> data;

    double at(int row, int col) const { return data[static_cast<size_t>(row) * num_experts + col]; }
};

struct ExpertChoice {
    int expert = -1;
    double weight = 0.0;

    bool operator==(const ExpertChoice&) const = default;
};

// Result of routing one token: exactly K (expert, weight) pairs ordered by
// descending logit (ties by lower expert index). Weights are a softmax over
// the K selected logits and sum to 1.
struct RoutingDecision {
    std::vector<ExpertChoice> selected;

    bool operator==(const RoutingDecision&) const = default;
};

// Per-expert list of its T most frequent collaborators, descending by
// collaboration count, ties by lower index. Row i never contains i.
struct TopTTable {
    int num_experts = 0;
    int t = 0;
    std::vector<std::vector<int>> rows;
};

// Two-layer MLP expert: y = W2 * relu(W1 * x + b1) + b2.
// w1 is ff_dim x hidden_dim (row-major), w2 is hidden_dim x ff_dim.
struct ExpertParams {
    int hidden_dim = 0;
    int ff_dim = 0;
    std::vector<double> w1, b1, w2, b2;
};

RouterLogits gate_scores(const TokenEmbedding& x, const GateWeights& w);

RoutingDecision route_topk(const RouterLogits& logits, int k);

// Collaboration-constrained routing: the top-1 expert is picked freely, the
// remaining k-1 slots are filled with the highest-logit experts from the
// top-1 expert's collaborator row.
RoutingDecision route_c2r(const RouterLogits& logits, int k, const TopTTable& table);

TokenEmbedding expert_forward(const TokenEmbedding& x, const ExpertParams& e);

TokenEmbedding moe_forward(const TokenEmbedding& x, const RoutingDecision& decision,
                           const std::vector<ExpertParams>& experts);

} // namespace c2r
