#include <fstream>
#include <limits>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "fqmag/errors.hpp"
#include "fqmag/report.hpp"
#include "fqmag/version.hpp"

using namespace fqmag;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

ReportRow sample_row() {
    ReportRow r;
    r.p = 3;
    r.n = 2;
    r.d = 4;
    r.q = 9;
    r.set = "random:size=7,seed=3";
    r.check = "lemma_audit/nu_l2_bound_k2";
    r.hypothesis_met = true;
    r.lhs = 1.0 / 3.0;
    r.rhs = 2916.0;
    r.status = "pass";
    r.ratio = 0.5;
    return r;
}

} // namespace

TEST_CASE("csv schema line, header, and quoting") {
    ReportRow r = sample_row();
    const auto lines = lines_of(report_to_csv({r}));
    REQUIRE(lines.size() == 3);
    REQUIRE(lines[0] == std::string("# schema=") + kReportSchema);
    REQUIRE(lines[1] == "p,n,d,q,set,check,hypothesis_met,lhs,rhs,status,ratio,seconds");
    // set labels are always quoted; commas inside stay put
    REQUIRE(lines[2] ==
            R"(3,2,4,9,"random:size=7,seed=3",lemma_audit/nu_l2_bound_k2,1,0.333333333333,2916,pass,0.5,0.000)");

    r.set = "odd \"label\"";
    r.hypothesis_met = false;
    const auto quoted = lines_of(report_to_csv({r}));
    REQUIRE(quoted[2].find("\"odd \"\"label\"\"\"") != std::string::npos);
    REQUIRE(quoted[2].find(",0,") != std::string::npos); // hypothesis_met renders 0
}

TEST_CASE("csv seconds stay fixed-width and rows keep order") {
    ReportRow a = sample_row();
    ReportRow b = sample_row();
    b.check = "zzz/last";
    b.seconds = 1.23456;
    const auto lines = lines_of(report_to_csv({a, b}));
    REQUIRE(lines[2].find(",0.000") != std::string::npos);
    REQUIRE(lines[3].find(",1.235") != std::string::npos);
    REQUIRE(lines[2].find("lemma_audit") != std::string::npos);
    REQUIRE(lines[3].find("zzz/last") != std::string::npos);
}

TEST_CASE("json mirror carries provenance and extras") {
    ReportRow r = sample_row();
    r.extras = {{"nu0", 9.0}, {"weird", std::numeric_limits<double>::infinity()}};
    ExperimentConfig cfg;
    cfg.grid = {{3, 2, 4}};
    cfg.checks = {"lemma_audit"};
    const auto doc = nlohmann::json::parse(report_to_json({r}, cfg));
    REQUIRE(doc["schema"] == kReportSchema);
    REQUIRE(doc["version"] == kVersion);
    REQUIRE(doc["provenance"]["tolerance"] == 1e-8);
    REQUIRE(doc["provenance"]["master_seed"] == 1);
    REQUIRE(doc["provenance"]["trials"] == 8);
    REQUIRE(doc["provenance"]["config"].get<std::string>().find("grid = 3:2:4") !=
            std::string::npos);
    REQUIRE(doc["rows"].size() == 1);
    const auto& row = doc["rows"][0];
    REQUIRE(row["set"] == "random:size=7,seed=3");
    REQUIRE(row["hypothesis_met"] == true);
    REQUIRE(row["nu0"] == 9.0);
    REQUIRE(row["weird"] == "inf"); // non-finite values degrade to strings
}

TEST_CASE("write_text_file round-trips and rejects bad paths") {
    const std::string path = "/tmp/fqmag_report_test.csv";
    write_text_file(path, "alpha\nbeta\n");
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    REQUIRE(buf.str() == "alpha\nbeta\n");
    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x.csv", "y"), ConfigInvalid);
}
