// c2rsim: desk-scale simulator for collaboration-constrained MoE routing,
// expert placement, and zero-redundancy all-to-all accounting.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "c2r/commsim.hpp"
#include "c2r/placement.hpp"
#include "c2r/profiler.hpp"
#include "c2r/routing.hpp"
#include "c2r/trace.hpp"
#include "c2r/workload.hpp"

namespace fs = std::filesystem;
using namespace c2r;

namespace {

struct RunConfig {
    int num_experts = 8;
    int top_k = 2;
    int top_t = 0; // 0 = default N-1
    int hidden_dim = 16;
    int num_layers = 1;
    std::int64_t tokens = 10000;
    int groups = 1;
    double cluster_strength = 0.0;
    double noise = 1.0;
    std::uint64_t seed = 0;
    std::string strategy = "topk";     // topk | c2r | random-c2r
    std::string placement = "greedy";  // identity | greedy
    std::string placement_file;       // fixed placement, overrides strategy for its EP
    std::string comm_fractions = "paper-default";
    std::string trace_path;
    std::string out_dir = "out";
    std::vector<int> ep_values{2};
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

// Per-layer token logits, either synthetic or from a trace file. Trace
// records that carry pre-routed decisions are kept separately.
struct LayerInput {
    std::vector<RouterLogits> logits;
    std::vector<RoutingDecision> decisions;
};

std::map<int, LayerInput> load_inputs(const RunConfig& cfg) {
    std::map<int, LayerInput> layers;
    if (!cfg.trace_path.empty()) {
        for (auto& rec : read_trace(cfg.trace_path)) {
            auto& layer = layers[rec.layer_id];
            if (rec.logits) {
                if (static_cast<int>(rec.logits->size()) != cfg.num_experts)
                    throw ConfigError("trace logits length does not match --experts");
                layer.logits.push_back(std::move(*rec.logits));
            } else if (rec.decision) {
                layer.decisions.push_back(std::move(*rec.decision));
            }
        }
        if (layers.empty()) throw ConfigError("empty workload");
        return layers;
    }

    if (cfg.tokens < 1) throw ConfigError("empty workload");
    WorkloadSpec spec;
    spec.num_tokens = cfg.tokens;
    spec.num_experts = cfg.num_experts;
    spec.hidden_dim = cfg.hidden_dim;
    spec.num_groups = cfg.groups;
    spec.cluster_strength = cfg.cluster_strength;
    spec.noise_scale = cfg.noise;
    for (int l = 0; l < cfg.num_layers; ++l) {
        spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(l));
        layers[l].logits = generate(spec);
    }
    return layers;
}

TopTTable random_top_t(int n, int t, std::uint64_t seed) {
    if (t < 1 || t > n - 1) throw ConfigError("random-c2r: top_t must satisfy 1 <= T <= N-1");
    TopTTable table;
    table.num_experts = n;
    table.t = t;
    table.rows.resize(n);
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(seed, 0xC2F00DULL + static_cast<std::uint64_t>(i)));
        std::vector<int> others;
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back(j);
        for (int k = 0; k < t; ++k) {
            const int pick = k + static_cast<int>(rng.next() % (others.size() - k));
            std::swap(others[k], others[pick]);
        }
        table.rows[i].assign(others.begin(), others.begin() + t);
    }
    return table;
}

CollaborationMatrix matrix_from(const std::vector<RoutingDecision>& decisions, int n, int layer) {
    CollaborationMatrix m(n, layer);
    for (const auto& d : decisions) accumulate(m, d);
    return m;
}

// Route one layer's logits per the configured strategy. c2r first profiles
// the same logits under plain top-K to build the collaborator table.
std::vector<RoutingDecision> route_layer(const RunConfig& cfg, int layer_id,
                                         const LayerInput& input) {
    const int t = cfg.top_t > 0 ? cfg.top_t : cfg.num_experts - 1;
    std::vector<RoutingDecision> decisions = input.decisions;

    if (!input.logits.empty()) {
        TopTTable table;
        if (cfg.strategy == "c2r") {
            if (t < cfg.top_k - 1) throw ConfigError("c2r requires top_t >= top_k - 1");
            CollaborationMatrix m(cfg.num_experts, layer_id);
            for (const auto& logits : input.logits)
                accumulate(m, route_topk(logits, cfg.top_k));
            table = extract_top_t(m, t);
        } else if (cfg.strategy == "random-c2r") {
            if (t < cfg.top_k - 1) throw ConfigError("random-c2r requires top_t >= top_k - 1");
            table = random_top_t(cfg.num_experts, t, derive_seed(cfg.seed, 0x5EEDULL + layer_id));
        } else if (cfg.strategy != "topk") {
            throw ConfigError("unknown strategy '" + cfg.strategy + "'");
        }

        for (const auto& logits : input.logits) {
            if (cfg.strategy == "topk") decisions.push_back(route_topk(logits, cfg.top_k));
            else decisions.push_back(route_c2r(logits, cfg.top_k, table));
        }
    }
    if (decisions.empty()) throw ConfigError("empty workload");
    return decisions;
}

CommFractionTable load_fractions(const RunConfig& cfg) {
    if (cfg.comm_fractions == "paper-default") return CommFractionTable::paper_default();
    return CommFractionTable::load(cfg.comm_fractions);
}

int cmd_profile(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto layers = load_inputs(cfg);

    auto csv = open_out(fs::path(cfg.out_dir) / "profile.csv");
    auto txt = open_out(fs::path(cfg.out_dir) / "profile.txt");
    csv << "layer,expert,active,degree,layer_degree\n";
    for (auto& [layer_id, input] : layers) {
        auto decisions = route_layer(cfg, layer_id, input);
        CollaborationMatrix m = matrix_from(decisions, cfg.num_experts, layer_id);
        CollaborationProfile p = profile(m);

        export_heatmap(m, (fs::path(cfg.out_dir) /
                           ("heatmap_layer" + std::to_string(layer_id) + ".csv")).string());
        for (int i = 0; i < cfg.num_experts; ++i)
            csv << layer_id << ',' << i << ',' << (p.active[i] ? 1 : 0) << ','
                << fmt(p.degrees[i]) << ',' << fmt(p.layer_degree) << '\n';

        txt << "layer " << layer_id << ": tokens=" << m.tokens_seen
            << " active_experts=" << p.num_active
            << " layer_degree=" << fmt6(p.layer_degree) << "\n";
    }
    return 0;
}

int cmd_route(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto layers = load_inputs(cfg);

    std::vector<TraceRecord> records;
    for (auto& [layer_id, input] : layers) {
        for (auto& d : route_layer(cfg, layer_id, input)) {
            TraceRecord rec;
            rec.layer_id = layer_id;
            rec.decision = std::move(d);
            records.push_back(std::move(rec));
        }
    }
    write_trace(records, (fs::path(cfg.out_dir) / "decisions.trace").string());
    return 0;
}

struct EpRow {
    int ep;
    std::int64_t naive = 0, dedup = 0;
};

int cmd_simulate(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    auto layers = load_inputs(cfg);
    CommFractionTable fractions = load_fractions(cfg);

    std::map<int, EpRow> totals;
    auto per_layer = open_out(fs::path(cfg.out_dir) / "report_per_layer.csv");
    per_layer << "layer,ep,naive_copies,dedup_copies,redundancy\n";

    std::optional<PlacementMap> fixed;
    if (!cfg.placement_file.empty()) {
        fixed = read_placement(cfg.placement_file);
        if (fixed->num_experts != cfg.num_experts)
            throw ConfigError("placement file does not match --experts");
    }

    for (auto& [layer_id, input] : layers) {
        auto decisions = route_layer(cfg, layer_id, input);
        CollaborationMatrix m = matrix_from(decisions, cfg.num_experts, layer_id);
        for (int ep : cfg.ep_values) {
            if (ep < 1 || cfg.num_experts % ep != 0) {
                std::cerr << "skipping EP=" << ep << ": does not divide N\n";
                continue;
            }
            if (cfg.placement != "identity" && cfg.placement != "greedy")
                throw ConfigError("unknown placement strategy '" + cfg.placement + "'");
            PlacementMap placement;
            if (fixed && fixed->ep == ep) placement = *fixed;
            else if (cfg.placement == "identity") placement = place_identity(cfg.num_experts, ep);
            else placement = place_greedy(m, ep);
            write_placement(placement,
                            (fs::path(cfg.out_dir) / ("placement_layer" + std::to_string(layer_id) +
                                                      "_ep" + std::to_string(ep) + ".txt")).string());
            DispatchAccount acc = account_dispatch(decisions, placement);
            per_layer << layer_id << ',' << ep << ',' << acc.naive_copies << ','
                      << acc.dedup_copies << ',' << fmt(redundancy_ratio(acc)) << '\n';
            auto& row = totals[ep];
            row.ep = ep;
            row.naive += acc.naive_copies;
            row.dedup += acc.dedup_copies;
        }
    }
    if (totals.empty()) throw ConfigError("no EP value divides num_experts");

    auto csv = open_out(fs::path(cfg.out_dir) / "report.csv");
    auto json = open_out(fs::path(cfg.out_dir) / "report.json");
    auto txt = open_out(fs::path(cfg.out_dir) / "report.txt");
    csv << "ep,naive_copies,dedup_copies,redundancy,comm_fraction,"
           "comm_fraction_source,estimated_speedup\n";
    json << "[\n";
    bool first = true;
    for (auto& [ep, row] : totals) {
        const double r = 1.0 - static_cast<double>(row.dedup) / static_cast<double>(row.naive);
        const double p = fractions.at(ep);
        const double s = estimate_speedup(r, p);
        csv << ep << ',' << row.naive << ',' << row.dedup << ',' << fmt(r) << ',' << fmt(p)
            << ',' << fractions.source << ',' << fmt(s) << '\n';
        if (!first) json << ",\n";
        first = false;
        json << "  {\"ep\": " << ep << ", \"naive_copies\": " << row.naive
             << ", \"dedup_copies\": " << row.dedup << ", \"redundancy\": " << fmt(r)
             << ", \"comm_fraction\": " << fmt(p) << ", \"comm_fraction_source\": \""
             << fractions.source << "\", \"estimated_speedup\": " << fmt(s) << "}";
        txt << "EP=" << ep << "  dispatch copies " << row.dedup << "/" << row.naive
            << " (round-trip " << 2 * row.dedup << "/" << 2 * row.naive << ")"
            << "  redundancy=" << fmt6(r) << "  P=" << fmt6(p) << " (" << fractions.source
            << ")  speedup=" << fmt6(s) << "\n";
    }
    json << "\n]\n";
    return 0;
}

int cmd_sweep_t(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    if (cfg.top_k < 1) throw ConfigError("top_k must be >= 1");
    auto layers = load_inputs(cfg);

    auto csv = open_out(fs::path(cfg.out_dir) / "sweep_t.csv");
    csv << "t,layer,layer_degree,ep,redundancy\n"; // t=0 rows are the top-K baseline

    for (auto& [layer_id, input] : layers) {
        if (input.logits.empty())
            throw ConfigError("sweep-t requires logits records, not pre-routed decisions");

        // Baseline top-K pass doubles as the profiling pass for Top-T tables.
        std::vector<RoutingDecision> base;
        base.reserve(input.logits.size());
        for (const auto& logits : input.logits) base.push_back(route_topk(logits, cfg.top_k));
        CollaborationMatrix base_m = matrix_from(base, cfg.num_experts, layer_id);
        CollaborationProfile base_p = profile(base_m);

        auto emit = [&](int t, const std::vector<RoutingDecision>& decisions,
                        const CollaborationMatrix& m, const CollaborationProfile& p) {
            for (int ep : cfg.ep_values) {
                if (ep < 1 || cfg.num_experts % ep != 0) continue;
                DispatchAccount acc = account_dispatch(decisions, place_greedy(m, ep));
                csv << t << ',' << layer_id << ',' << fmt(p.layer_degree) << ',' << ep << ','
                    << fmt(redundancy_ratio(acc)) << '\n';
            }
        };
        emit(0, base, base_m, base_p);

        for (int t = std::max(1, cfg.top_k - 1); t <= cfg.num_experts - 1; ++t) {
            TopTTable table = extract_top_t(base_m, t);
            std::vector<RoutingDecision> decisions;
            decisions.reserve(input.logits.size());
            for (const auto& logits : input.logits)
                decisions.push_back(route_c2r(logits, cfg.top_k, table));
            CollaborationMatrix m = matrix_from(decisions, cfg.num_experts, layer_id);
            emit(t, decisions, m, profile(m));
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixture-of-Experts collaboration routing simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--experts", cfg.num_experts, "Number of experts N");
        sub->add_option("--top-k", cfg.top_k, "Experts activated per token K");
        sub->add_option("--top-t", cfg.top_t, "Collaborator list length T (default N-1)");
        sub->add_option("--hidden-dim", cfg.hidden_dim, "Token embedding dimension");
        sub->add_option("--layers", cfg.num_layers, "Number of MoE layers");
        sub->add_option("--tokens", cfg.tokens, "Synthetic workload size");
        sub->add_option("--groups", cfg.groups, "Latent expert groups in the workload");
        sub->add_option("--cluster-strength", cfg.cluster_strength, "In-group logit boost");
        sub->add_option("--noise", cfg.noise, "Logit noise scale");
        sub->add_option("--seed", cfg.seed, "Workload / table seed");
        sub->add_option("--strategy", cfg.strategy, "topk | c2r | random-c2r");
        sub->add_option("--placement", cfg.placement, "identity | greedy");
        sub->add_option("--placement-file", cfg.placement_file,
                        "Fixed placement file, overrides --placement for its EP");
        sub->add_option("--ep", cfg.ep_values, "Expert-parallelism degrees")->delimiter(',');
        sub->add_option("--comm-fractions", cfg.comm_fractions,
                        "'paper-default' or path to an 'ep fraction' file");
        sub->add_option("--trace", cfg.trace_path, "Input trace file instead of synthetic workload");
        sub->add_option("--out", cfg.out_dir, "Output directory");
    };

    auto* profile_cmd = app.add_subcommand("profile", "Collaboration matrices and degrees");
    auto* route_cmd = app.add_subcommand("route", "Emit a routing decision trace");
    auto* simulate_cmd = app.add_subcommand("simulate", "All-to-all accounting and speedup");
    auto* sweep_cmd = app.add_subcommand("sweep-t", "Degrees and redundancy across T");
    for (auto* sub : {profile_cmd, route_cmd, simulate_cmd, sweep_cmd}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (profile_cmd->parsed()) return cmd_profile(cfg);
        if (route_cmd->parsed()) return cmd_route(cfg);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg);
        if (sweep_cmd->parsed()) return cmd_sweep_t(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
