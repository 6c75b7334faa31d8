#include "fqmag/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fqmag/errors.hpp"
#include "fqmag/version.hpp"

namespace fqmag {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

// JSON numbers cannot carry inf/nan; clamp to null-safe sentinels via text.
nlohmann::ordered_json json_num(double v) {
    if (std::isnan(v) || std::isinf(v)) return nlohmann::ordered_json(num(v));
    return nlohmann::ordered_json(v);
}

} // namespace

std::string report_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "# schema=" << kReportSchema << "\n";
    out << "p,n,d,q,set,check,hypothesis_met,lhs,rhs,status,ratio,seconds\n";
    char sec[32];
    for (const auto& r : rows) {
        std::snprintf(sec, sizeof sec, "%.3f", r.seconds);
        out << r.p << ',' << r.n << ',' << r.d << ',' << r.q << ',' << csv_quote(r.set) << ','
            << r.check << ',' << (r.hypothesis_met ? 1 : 0) << ',' << num(r.lhs) << ','
            << num(r.rhs) << ',' << r.status << ',' << num(r.ratio) << ',' << sec << "\n";
    }
    return out.str();
}

std::string report_to_json(const std::vector<ReportRow>& rows, const ExperimentConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["schema"] = kReportSchema;
    doc["version"] = kVersion;

    nlohmann::ordered_json prov;
    prov["tolerance"] = cfg.tolerance;
    prov["master_seed"] = cfg.master_seed;
    prov["seeds"] = cfg.seeds;
    prov["trials"] = cfg.trials;
    prov["timing"] = cfg.timing;
    prov["set_specs"] = cfg.set_specs;
    prov["config"] = serialize_config(cfg);
    doc["provenance"] = prov;

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["p"] = r.p;
        j["n"] = r.n;
        j["d"] = r.d;
        j["q"] = r.q;
        j["set"] = r.set;
        j["check"] = r.check;
        j["hypothesis_met"] = r.hypothesis_met;
        j["lhs"] = json_num(r.lhs);
        j["rhs"] = json_num(r.rhs);
        j["status"] = r.status;
        j["ratio"] = json_num(r.ratio);
        j["seconds"] = r.seconds;
        for (const auto& [k, v] : r.extras) j[k] = json_num(v);
        arr.push_back(std::move(j));
    }
    doc["rows"] = std::move(arr);
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigInvalid("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw ConfigInvalid("write failed for '" + path + "'");
}

} // namespace fqmag
