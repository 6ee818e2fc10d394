#include "c2r/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace c2r {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ConfigError malformed(int lineno, const std::string& path, const std::string& why) {
    return ConfigError("trace: malformed line " + std::to_string(lineno) + " in " + path +
                       ": " + why);
}

double parse_double(const std::string& s, int lineno, const std::string& path) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw malformed(lineno, path, "bad number '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

} // namespace

std::vector<TraceRecord> read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("trace: cannot open " + path);

    std::vector<TraceRecord> records;
    std::string line;
    int lineno = 0;
    int expected_n = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos) throw malformed(lineno, path, "missing tab separator");

        TraceRecord rec;
        try {
            rec.layer_id = std::stoi(line.substr(0, tab));
        } catch (const std::exception&) {
            throw malformed(lineno, path, "bad layer id");
        }

        const std::string payload = line.substr(tab + 1);
        if (payload.empty()) throw malformed(lineno, path, "empty payload");

        if (payload[0] == '@') {
            RoutingDecision d;
            for (const std::string& part : split(payload.substr(1), ',')) {
                const size_t colon = part.find(':');
                if (colon == std::string::npos)
                    throw malformed(lineno, path, "expected expert:weight pair");
                ExpertChoice c;
                try {
                    c.expert = std::stoi(part.substr(0, colon));
                } catch (const std::exception&) {
                    throw malformed(lineno, path, "bad expert id");
                }
                c.weight = parse_double(part.substr(colon + 1), lineno, path);
                d.selected.push_back(c);
            }
            if (d.selected.empty()) throw malformed(lineno, path, "empty decision");
            rec.decision = std::move(d);
        } else {
            RouterLogits logits;
            for (const std::string& part : split(payload, ','))
                logits.push_back(parse_double(part, lineno, path));
            if (expected_n < 0) expected_n = static_cast<int>(logits.size());
            else if (expected_n != static_cast<int>(logits.size()))
                throw ConfigError("trace: line " + std::to_string(lineno) + " in " + path +
                                  " has " + std::to_string(logits.size()) +
                                  " logits, expected " + std::to_string(expected_n));
            rec.logits = std::move(logits);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_trace(const std::vector<TraceRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("trace: cannot open " + path + " for writing");
    for (const auto& rec : records) {
        out << rec.layer_id << '\t';
        if (rec.decision) {
            out << '@';
            const auto& sel = rec.decision->selected;
            for (size_t i = 0; i < sel.size(); ++i) {
                if (i) out << ',';
                out << sel[i].expert << ':' << format_double(sel[i].weight);
            }
        } else if (rec.logits) {
            const auto& l = *rec.logits;
            for (size_t i = 0; i < l.size(); ++i) {
                if (i) out << ',';
                out << format_double(l[i]);
            }
        } else {
            throw ConfigError("trace: record has neither logits nor decision");
        }
        out << '\n';
    }
    if (!out) throw IoError("trace: write failed for " + path);
}

} // namespace c2r
