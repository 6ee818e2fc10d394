#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "c2r/routing.hpp"

namespace c2r {

// Per-layer co-activation counts. Symmetric, zero diagonal, exact integers.
struct CollaborationMatrix {
    int num_experts = 0;
    int layer_id = 0;
    std::int64_t tokens_seen = 0;
    std::vector<std::int64_t> counts; // N x N row-major

    explicit CollaborationMatrix(int n = 0, int layer = 0)
        : num_experts(n), layer_id(layer),
          counts(static_cast<size_t>(n) * n, 0) {}

    std::int64_t at(int i, int j) const { return counts[static_cast<size_t>(i) * num_experts + j]; }
    std::int64_t& at(int i, int j) { return counts[static_cast<size_t>(i) * num_experts + j]; }

    std::int64_t upper_triangle_sum() const;
    std::int64_t row_sum(int i) const;
};

struct CollaborationProfile {
    int num_experts = 0;
    std::vector<double> frequencies; // N x N row-major, rows of inactive experts are all zero
    std::vector<double> degrees;     // entropy per expert, 0 for inactive experts
    std::vector<bool> active;        // false for experts that never co-activated
    double layer_degree = 0.0;       // mean degree over active experts
    int num_active = 0;

    double freq(int i, int j) const { return frequencies[static_cast<size_t>(i) * num_experts + j]; }
};

void accumulate(CollaborationMatrix& matrix, const RoutingDecision& decision);

CollaborationProfile profile(const CollaborationMatrix& matrix);

TopTTable extract_top_t(const CollaborationMatrix& matrix, int t);

CollaborationMatrix merge(const CollaborationMatrix& a, const CollaborationMatrix& b);

// CSV grid: comment line with tokens_seen metadata, header "layer,i,j,count",
// one row per (i, j) cell in row-major order.
void export_heatmap(const CollaborationMatrix& matrix, std::ostream& out);
void export_heatmap(const CollaborationMatrix& matrix, const std::string& path);

} // namespace c2r
