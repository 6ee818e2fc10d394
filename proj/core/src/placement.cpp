#include "c2r/placement.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace c2r {

namespace {

void check_divisible(int n, int ep) {
    if (ep < 1) throw ConfigError("placement: ep must be >= 1");
    if (n < 1 || n % ep != 0)
        throw ConfigError("placement: num_experts must be divisible by ep");
}

std::int64_t intra_mass_of(const CollaborationMatrix& m, const std::vector<int>& device) {
    std::int64_t mass = 0;
    for (int i = 0; i < m.num_experts; ++i)
        for (int j = i + 1; j < m.num_experts; ++j)
            if (device[i] == device[j]) mass += m.at(i, j);
    return mass;
}

// Pairwise-swap hill climbing on intra-device mass, fixed sweep budget.
void refine_swaps(const CollaborationMatrix& m, std::vector<int>& device) {
    const int n = m.num_experts;
    constexpr int kSweeps = 10;
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (device[i] == device[j]) continue;
                std::int64_t delta = 0;
                for (int k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    if (device[k] == device[i]) delta += m.at(j, k) - m.at(i, k);
                    else if (device[k] == device[j]) delta += m.at(i, k) - m.at(j, k);
                }
                if (delta > 0) {
                    std::swap(device[i], device[j]);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
}

} // namespace

PlacementMap place_identity(int num_experts, int ep) {
    check_divisible(num_experts, ep);
    PlacementMap p;
    p.num_experts = num_experts;
    p.ep = ep;
    p.device.resize(num_experts);
    const int cap = num_experts / ep;
    for (int i = 0; i < num_experts; ++i) p.device[i] = i / cap;
    return p;
}

PlacementMap place_greedy(const CollaborationMatrix& matrix, int ep) {
    const int n = matrix.num_experts;
    check_divisible(n, ep);
    const int cap = n / ep;

    std::vector<int> device(n, -1);
    std::vector<bool> assigned(n, false);

    for (int dev = 0; dev < ep; ++dev) {
        // Seed: unassigned expert with the largest mass towards unassigned peers.
        int seed = -1;
        std::int64_t best_mass = -1;
        for (int i = 0; i < n; ++i) {
            if (assigned[i]) continue;
            std::int64_t mass = 0;
            for (int j = 0; j < n; ++j)
                if (j != i && !assigned[j]) mass += matrix.at(i, j);
            if (mass > best_mass) {
                best_mass = mass;
                seed = i;
            }
        }
        device[seed] = dev;
        assigned[seed] = true;
        std::vector<int> group{seed};

        while (static_cast<int>(group.size()) < cap) {
            int pick = -1;
            std::int64_t best = -1;
            for (int i = 0; i < n; ++i) {
                if (assigned[i]) continue;
                std::int64_t affinity = 0;
                for (int g : group) affinity += matrix.at(i, g);
                if (affinity > best) {
                    best = affinity;
                    pick = i;
                }
            }
            device[pick] = dev;
            assigned[pick] = true;
            group.push_back(pick);
        }
    }

    refine_swaps(matrix, device);

    // Never return anything worse than the contiguous baseline.
    PlacementMap identity = place_identity(n, ep);
    if (intra_mass_of(matrix, identity.device) > intra_mass_of(matrix, device))
        device = identity.device;

    PlacementMap p;
    p.num_experts = n;
    p.ep = ep;
    p.device = std::move(device);
    return p;
}

PlacementScore score(const CollaborationMatrix& matrix, const PlacementMap& placement) {
    if (matrix.num_experts != placement.num_experts)
        throw ConfigError("score: matrix and placement sizes differ");
    PlacementScore s;
    s.intra_mass = intra_mass_of(matrix, placement.device);
    s.total_mass = matrix.upper_triangle_sum();
    s.locality = s.total_mass > 0
                     ? static_cast<double>(s.intra_mass) / static_cast<double>(s.total_mass)
                     : 1.0;
    return s;
}

void write_placement(const PlacementMap& placement, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_placement: cannot open " + path);
    for (int i = 0; i < placement.num_experts; ++i)
        out << i << ' ' << placement.device[i] << '\n';
    if (!out) throw IoError("write_placement: write failed for " + path);
}

PlacementMap read_placement(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_placement: cannot open " + path);
    std::vector<int> device;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        int expert = -1, dev = -1;
        if (!(ss >> expert >> dev) || expert != static_cast<int>(device.size()))
            throw ConfigError("read_placement: malformed line " + std::to_string(lineno) +
                              " in " + path);
        device.push_back(dev);
    }
    if (device.empty()) throw ConfigError("read_placement: empty placement file " + path);

    const int ndev = *std::max_element(device.begin(), device.end()) + 1;
    PlacementMap p;
    p.num_experts = static_cast<int>(device.size());
    p.ep = ndev;
    p.device = std::move(device);
    check_divisible(p.num_experts, p.ep);
    // Balanced capacity check.
    std::vector<int> load(ndev, 0);
    for (int d : p.device) {
        if (d < 0 || d >= ndev) throw ConfigError("read_placement: device id out of range");
        load[d] += 1;
    }
    for (int l : load)
        if (l != p.capacity())
            throw ConfigError("read_placement: placement is not balanced");
    return p;
}

} // namespace c2r
