#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "combworks/verify.hpp"

using namespace combworks;

namespace {

AnalysisOptions fast_analysis() {
  AnalysisOptions o;
  o.opt.restarts = 8;
  o.opt.max_iters = 800;
  o.nm.opt = o.opt;
  o.nm.inner_restarts = 1;
  o.nm.inner_max_iters = 250;
  o.nm.refine_sweeps = 0;
  return o;
}

ThermalContext qubit_ctx() { return ThermalContext(Hamiltonian::qubit(1.0), 1.0); }

}  // namespace

TEST_CASE("scenario registry covers the worked examples and validates") {
  const auto& reg = scenario_registry();
  REQUIRE(reg.size() == 4);
  for (const auto& s : reg) {
    const ProcessTensor p = s.build(1.0, 1.0);
    CHECK(validate_comb(p).pass);
  }
  CHECK_THROWS(build_scenario({.name = "nonsense"}));
}

TEST_CASE("scenario expected values evaluate at runtime") {
  for (const auto& s : scenario_registry()) {
    for (const auto& [id, fn] : s.expected) {
      const double v = fn(1.0, 1.0);
      INFO(s.name, ":", id);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("verify suite on a random markov product has no failures") {
  const ProcessTensor p = build_scenario({.name = "markov-random", .seed = 9});
  const std::vector<VerificationRecord> records =
      verify_suite(p, qubit_ctx(), fast_analysis());
  CHECK(records.size() >= 10);
  for (const auto& r : records) {
    INFO(r.id, ": lhs=", r.lhs, " rhs=", r.rhs);
    CHECK(r.pass);
  }
  CHECK(all_pass(records));
}

TEST_CASE("check filter selects a subset") {
  const ProcessTensor p = build_scenario({.name = "markov-random", .seed = 9});
  const std::vector<VerificationRecord> records = verify_suite(
      p, qubit_ctx(), fast_analysis(), "", {"multitime-correlations-bound", "max-work-bound"});
  CHECK(records.size() == 2);
}

TEST_CASE("reports are deterministic and carry stable fields") {
  const ProcessTensor p = build_scenario({.name = "markov-random", .seed = 5});
  const AnalysisOptions options = fast_analysis();
  const std::vector<VerificationRecord> a = verify_suite(p, qubit_ctx(), options);
  const std::vector<VerificationRecord> b = verify_suite(p, qubit_ctx(), options);
  CHECK(emit_report(a, ReportFormat::kJson) == emit_report(b, ReportFormat::kJson));
  CHECK(emit_report(a, ReportFormat::kCsv) == emit_report(b, ReportFormat::kCsv));

  const std::string json = emit_report(a, ReportFormat::kJson);
  CHECK(json.find("\"records\"") != std::string::npos);
  CHECK(json.find("\"digest\"") != std::string::npos);
  const std::string csv = emit_report(a, ReportFormat::kCsv);
  CHECK(csv.rfind("id,lhs,rhs,margin,tol,pass,seed,digest\n", 0) == 0);
}

TEST_CASE("empty and failing record emission") {
  const std::vector<VerificationRecord> empty;
  CHECK(emit_report(empty, ReportFormat::kJson) == "{\"records\": [\n]}\n");
  CHECK(all_pass(empty));

  VerificationRecord bad;
  bad.id = "x";
  bad.lhs = 2.0;
  bad.rhs = 1.0;
  bad.tolerance = 0.0;
  bad.margin = -1.0;
  bad.pass = false;
  const std::vector<VerificationRecord> recs = {bad};
  CHECK_FALSE(all_pass(recs));
  CHECK(emit_report(recs, ReportFormat::kJson).find("\"pass\": false") != std::string::npos);
}

TEST_CASE("entropy continuity record over 1000 quadruples has no violations") {
  const VerificationRecord r = entropy_continuity_record(1000, 42);
  CHECK(r.pass);
  CHECK(r.lhs <= 0.0);
}

TEST_CASE("analysis emission contains the ladder and the bracket") {
  const ProcessTensor p = build_scenario({.name = "markov-random", .seed = 7});
  const ProcessAnalysis a = analyze_process(p, qubit_ctx(), fast_analysis());
  const std::string json = emit_analysis(a, "markov-random", ReportFormat::kJson);
  for (const char* key :
       {"\"sequential\"", "\"joint\"", "\"global\"", "\"comb_lower\"", "\"comb_upper\"",
        "\"work_investment\"", "\"nm\"", "\"checks\""})
    CHECK(json.find(key) != std::string::npos);
  const std::string csv = emit_analysis(a, "markov-random", ReportFormat::kCsv);
  CHECK(csv.rfind("key,value\n", 0) == 0);

  const std::string nm_json = emit_nm(a.nm, "markov-random", ReportFormat::kJson);
  CHECK(nm_json.find("\"lower\"") != std::string::npos);
}

TEST_CASE("digest distinguishes processes") {
  const ProcessTensor a = build_scenario({.name = "fig2a"});
  const ProcessTensor b = build_scenario({.name = "fig2b"});
  CHECK(process_digest(a) != process_digest(b));
  CHECK(process_digest(a) == process_digest(build_scenario({.name = "fig2a"})));
}

TEST_CASE("format parsing") {
  CHECK(parse_format("json") == ReportFormat::kJson);
  CHECK(parse_format("csv") == ReportFormat::kCsv);
  CHECK_THROWS(parse_format("yaml"));
}
