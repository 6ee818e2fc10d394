#include "c2r/commsim.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace c2r {

CommFractionTable CommFractionTable::paper_default() {
    CommFractionTable t;
    t.source = "paper-default";
    t.fractions = {{1, 0.0}, {2, 0.301}, {3, 0.407}, {4, 0.619}, {5, 0.763}, {6, 0.772}};
    return t;
}

CommFractionTable CommFractionTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("comm fractions: cannot open " + path);
    CommFractionTable t;
    t.source = "measured-external";
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int ep = 0;
        double frac = -1.0;
        if (!(ss >> ep >> frac) || ep < 1 || frac < 0.0 || frac > 1.0)
            throw ConfigError("comm fractions: malformed line " + std::to_string(lineno) +
                              " in " + path);
        t.fractions[ep] = frac;
    }
    return t;
}

double CommFractionTable::at(int ep) const {
    auto it = fractions.find(ep);
    if (it == fractions.end())
        throw ConfigError("comm fractions: no entry for EP=" + std::to_string(ep));
    return it->second;
}

DispatchAccount account_dispatch(const std::vector<RoutingDecision>& decisions,
                                 const PlacementMap& placement) {
    DispatchAccount acc;
    acc.per_device_recv.assign(placement.ep, 0);
    std::vector<char> hit(placement.ep, 0);
    for (const auto& d : decisions) {
        std::fill(hit.begin(), hit.end(), 0);
        acc.naive_copies += static_cast<std::int64_t>(d.selected.size());
        for (const auto& s : d.selected) {
            if (s.expert < 0 || s.expert >= placement.num_experts)
                throw InternalError("account_dispatch: expert id out of range");
            const int dev = placement.device[s.expert];
            if (!hit[dev]) {
                hit[dev] = 1;
                acc.dedup_copies += 1;
                acc.per_device_recv[dev] += 1;
            }
        }
        acc.tokens += 1;
    }
    return acc;
}

DispatchAccount merge_accounts(const DispatchAccount& a, const DispatchAccount& b) {
    if (a.per_device_recv.size() != b.per_device_recv.size())
        throw ConfigError("merge_accounts: device counts differ");
    DispatchAccount out = a;
    out.naive_copies += b.naive_copies;
    out.dedup_copies += b.dedup_copies;
    out.tokens += b.tokens;
    for (size_t i = 0; i < out.per_device_recv.size(); ++i)
        out.per_device_recv[i] += b.per_device_recv[i];
    return out;
}

double redundancy_ratio(const DispatchAccount& account) {
    if (account.naive_copies <= 0)
        throw ConfigError("redundancy_ratio: empty account");
    return 1.0 - static_cast<double>(account.dedup_copies) /
                     static_cast<double>(account.naive_copies);
}

double estimate_speedup(double redundancy, double comm_fraction) {
    if (redundancy < 0.0 || redundancy > 1.0 || comm_fraction < 0.0 || comm_fraction > 1.0)
        throw ConfigError("estimate_speedup: inputs must lie in [0, 1]");
    return redundancy * comm_fraction;
}

std::vector<SpeedupModel> sweep_ep(const std::vector<RoutingDecision>& decisions,
                                   const CollaborationMatrix& matrix,
                                   const std::vector<int>& ep_values,
                                   const CommFractionTable& fractions) {
    std::vector<int> eps = ep_values;
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

    std::vector<SpeedupModel> out;
    for (int ep : eps) {
        if (ep < 1 || matrix.num_experts % ep != 0) continue; // reported upstream
        PlacementMap placement = place_greedy(matrix, ep);
        DispatchAccount acc = account_dispatch(decisions, placement);
        SpeedupModel m;
        m.ep = ep;
        m.redundancy = redundancy_ratio(acc);
        m.comm_fraction = fractions.at(ep);
        m.estimated_speedup = estimate_speedup(m.redundancy, m.comm_fraction);
        m.naive_copies = acc.naive_copies;
        m.dedup_copies = acc.dedup_copies;
        out.push_back(m);
    }
    return out;
}

} // namespace c2r
