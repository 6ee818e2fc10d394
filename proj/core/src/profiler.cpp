#include "c2r/profiler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace c2r {

std::int64_t CollaborationMatrix::upper_triangle_sum() const {
    std::int64_t sum = 0;
    for (int i = 0; i < num_experts; ++i)
        for (int j = i + 1; j < num_experts; ++j)
            sum += at(i, j);
    return sum;
}

std::int64_t CollaborationMatrix::row_sum(int i) const {
    std::int64_t sum = 0;
    for (int j = 0; j < num_experts; ++j)
        if (j != i) sum += at(i, j);
    return sum;
}

void accumulate(CollaborationMatrix& matrix, const RoutingDecision& decision) {
    const int n = matrix.num_experts;
    for (const auto& s : decision.selected)
        if (s.expert < 0 || s.expert >= n)
            throw InternalError("accumulate: expert id out of range");

    const auto& sel = decision.selected;
    for (size_t a = 0; a < sel.size(); ++a) {
        for (size_t b = a + 1; b < sel.size(); ++b) {
            matrix.at(sel[a].expert, sel[b].expert) += 1;
            matrix.at(sel[b].expert, sel[a].expert) += 1;
        }
    }
    matrix.tokens_seen += 1;
}

CollaborationProfile profile(const CollaborationMatrix& matrix) {
    const int n = matrix.num_experts;
    CollaborationProfile p;
    p.num_experts = n;
    p.frequencies.assign(static_cast<size_t>(n) * n, 0.0);
    p.degrees.assign(n, 0.0);
    p.active.assign(n, false);

    double degree_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::int64_t total = matrix.row_sum(i);
        if (total == 0) continue; // never co-activated: flagged, not normalized
        p.active[i] = true;
        p.num_active += 1;
        double entropy = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double pij = static_cast<double>(matrix.at(i, j)) / static_cast<double>(total);
            p.frequencies[static_cast<size_t>(i) * n + j] = pij;
            if (pij > 0.0) entropy -= pij * std::log(pij);
        }
        p.degrees[i] = entropy;
        degree_sum += entropy;
    }
    p.layer_degree = p.num_active > 0 ? degree_sum / p.num_active : 0.0;
    return p;
}

TopTTable extract_top_t(const CollaborationMatrix& matrix, int t) {
    const int n = matrix.num_experts;
    if (t < 1 || t > n - 1) throw ConfigError("extract_top_t: t must satisfy 1 <= t <= N-1");

    TopTTable table;
    table.num_experts = n;
    table.t = t;
    table.rows.resize(n);
    std::vector<int> others;
    for (int i = 0; i < n; ++i) {
        others.clear();
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
            if (matrix.at(i, a) != matrix.at(i, b)) return matrix.at(i, a) > matrix.at(i, b);
            return a < b;
        });
        table.rows[i].assign(others.begin(), others.begin() + t);
    }
    return table;
}

CollaborationMatrix merge(const CollaborationMatrix& a, const CollaborationMatrix& b) {
    if (a.num_experts != b.num_experts)
        throw ConfigError("merge: expert counts differ");
    if (a.layer_id != b.layer_id)
        throw ConfigError("merge: layer ids differ");
    CollaborationMatrix out = a;
    for (size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += b.counts[k];
    out.tokens_seen += b.tokens_seen;
    return out;
}

void export_heatmap(const CollaborationMatrix& matrix, std::ostream& out) {
    out << "# tokens_seen=" << matrix.tokens_seen << "\n";
    out << "layer,i,j,count\n";
    for (int i = 0; i < matrix.num_experts; ++i)
        for (int j = 0; j < matrix.num_experts; ++j)
            out << matrix.layer_id << ',' << i << ',' << j << ',' << matrix.at(i, j) << '\n';
}

void export_heatmap(const CollaborationMatrix& matrix, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("export_heatmap: cannot open " + path);
    export_heatmap(matrix, out);
    if (!out) throw IoError("export_heatmap: write failed for " + path);
}

} // namespace c2r
