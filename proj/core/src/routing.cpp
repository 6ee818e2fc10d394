#include "c2r/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace c2r {

void MoEConfig::validate() const {
    if (num_experts < 1) throw ConfigError("num_experts must be >= 1");
    if (top_k < 1 || top_k > num_experts) throw ConfigError("top_k must satisfy 1 <= K <= N");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (num_layers < 1) throw ConfigError("num_layers must be >= 1");
}

RouterLogits gate_scores(const TokenEmbedding& x, const GateWeights& w) {
    if (static_cast<int>(x.size()) != w.hidden_dim)
        throw ConfigError("gate_scores: token dimension does not match gate weights");
    if (w.data.size() != static_cast<size_t>(w.hidden_dim) * w.num_experts)
        throw ConfigError("gate_scores: gate weight matrix has wrong size");

    RouterLogits logits(w.num_experts, 0.0);
    for (int r = 0; r < w.hidden_dim; ++r) {
        const double xr = x[r];
        for (int c = 0; c < w.num_experts; ++c)
            logits[c] += xr * w.at(r, c);
    }
    return logits;
}

namespace {

// Softmax over the logits of already-selected experts, max-subtracted.
void assign_softmax_weights(const RouterLogits& logits, std::vector<ExpertChoice>& selected) {
    double max_logit = logits[selected.front().expert];
    for (const auto& s : selected) max_logit = std::max(max_logit, logits[s.expert]);
    double sum = 0.0;
    for (auto& s : selected) {
        s.weight = std::exp(logits[s.expert] - max_logit);
        sum += s.weight;
    }
    for (auto& s : selected) s.weight /= sum;
}

// Descending logit, ties broken by lower expert index.
void sort_by_logit(const RouterLogits& logits, std::vector<int>& ids) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (logits[a] != logits[b]) return logits[a] > logits[b];
        return a < b;
    });
}

} // namespace

RoutingDecision route_topk(const RouterLogits& logits, int k) {
    const int n = static_cast<int>(logits.size());
    if (k < 1 || k > n) throw ConfigError("route_topk: k must satisfy 1 <= k <= N");

    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    sort_by_logit(logits, ids);
    ids.resize(k);

    RoutingDecision d;
    d.selected.reserve(k);
    for (int id : ids) d.selected.push_back({id, 0.0});
    assign_softmax_weights(logits, d.selected);
    return d;
}

RoutingDecision route_c2r(const RouterLogits& logits, int k, const TopTTable& table) {
    const int n = static_cast<int>(logits.size());
    if (k < 1 || k > n) throw ConfigError("route_c2r: k must satisfy 1 <= k <= N");
    if (table.num_experts != n) throw ConfigError("route_c2r: table size does not match logits");

    int top1 = 0;
    for (int i = 1; i < n; ++i)
        if (logits[i] > logits[top1]) top1 = i;

    const std::vector<int>& row = table.rows[top1];
    if (static_cast<int>(row.size()) < k - 1)
        throw ConfigError("route_c2r: collaborator row shorter than k-1");

    std::vector<int> ids;
    ids.reserve(k);
    ids.push_back(top1);
    if (k > 1) {
        std::vector<int> candidates(row.begin(), row.end());
        sort_by_logit(logits, candidates);
        ids.insert(ids.end(), candidates.begin(), candidates.begin() + (k - 1));
        // Final order matches route_topk's: descending logit, ties by index.
        sort_by_logit(logits, ids);
    }

    RoutingDecision d;
    d.selected.reserve(k);
    for (int id : ids) d.selected.push_back({id, 0.0});
    assign_softmax_weights(logits, d.selected);
    return d;
}

TokenEmbedding expert_forward(const TokenEmbedding& x, const ExpertParams& e) {
    const int d = e.hidden_dim;
    const int f = e.ff_dim;
    if (static_cast<int>(x.size()) != d)
        throw ConfigError("expert_forward: token dimension mismatch");
    if (e.w1.size() != static_cast<size_t>(f) * d || e.b1.size() != static_cast<size_t>(f) ||
        e.w2.size() != static_cast<size_t>(d) * f || e.b2.size() != static_cast<size_t>(d))
        throw ConfigError("expert_forward: parameter shapes inconsistent");

    std::vector<double> h(f);
    for (int i = 0; i < f; ++i) {
        double acc = e.b1[i];
        for (int j = 0; j < d; ++j) acc += e.w1[static_cast<size_t>(i) * d + j] * x[j];
        h[i] = acc > 0.0 ? acc : 0.0; // ReLU
    }
    TokenEmbedding y(d);
    for (int i = 0; i < d; ++i) {
        double acc = e.b2[i];
        for (int j = 0; j < f; ++j) acc += e.w2[static_cast<size_t>(i) * f + j] * h[j];
        y[i] = acc;
    }
    return y;
}

TokenEmbedding moe_forward(const TokenEmbedding& x, const RoutingDecision& decision,
                           const std::vector<ExpertParams>& experts) {
    TokenEmbedding out(x.size(), 0.0);
    for (const auto& s : decision.selected) {
        if (s.expert < 0 || s.expert >= static_cast<int>(experts.size()))
            throw InternalError("moe_forward: expert id out of range");
        TokenEmbedding y = expert_forward(x, experts[s.expert]);
        for (size_t i = 0; i < out.size(); ++i) out[i] += s.weight * y[i];
    }
    return out;
}

} // namespace c2r
