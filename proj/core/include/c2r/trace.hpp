#pragma once

#include <optional>
#include <string>
#include <vector>

#include "c2r/routing.hpp"

namespace c2r {

// One token of a routing trace: either raw router logits or an already
// routed decision, never both.
struct TraceRecord {
    int layer_id = 0;
    std::optional<RouterLogits> logits;
    std::optional<RoutingDecision> decision;

    bool operator==(const TraceRecord&) const = default;
};

// Line format, one token per line:
//   layer_id<TAB>v1,v2,...,vN        raw logits
//   layer_id<TAB>@e1:w1,e2:w2,...    pre-routed decision
// Values are written with 17 significant digits so doubles round-trip.
std::vector<TraceRecord> read_trace(const std::string& path);
void write_trace(const std::vector<TraceRecord>& records, const std::string& path);

} // namespace c2r
