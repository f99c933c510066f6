#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "combworks/nonmarkov.hpp"
#include "combworks/protocols.hpp"
#include "combworks/scenarios.hpp"

namespace combworks {

/// One bound or identity check: pass means lhs <= rhs + tolerance.
struct VerificationRecord {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs + tolerance - lhs
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string digest;  // FNV-1a over the target Choi and knobs
};

struct AnalysisOptions {
  OptimizerConfig opt;
  NMOptions nm;
};

struct ProcessAnalysis {
  ProtocolReport report;
  NMBracket nm;
};

/// Protocol ladder, non-Markovianity bracket (cross-seeded with the storage
/// winner), and the full gap report for one process.
ProcessAnalysis analyze_process(const ProcessTensor& p, const ThermalContext& ctx,
                                const AnalysisOptions& options);

/// All bound checks for one target: the gap-report checks, the bracket-order
/// sanity check, the scenario's closed-form inequalities when it has any, and
/// the sampled continuity-bound suite. An empty `checks` filter keeps all.
std::vector<VerificationRecord> verify_suite(const ProcessTensor& p, const ThermalContext& ctx,
                                             const AnalysisOptions& options,
                                             const std::string& scenario_name = "",
                                             const std::vector<std::string>& checks = {});

/// Continuity-bound property record over seeded random qubit quadruples:
/// lhs is the worst violation, so pass means no sample broke the bound.
VerificationRecord entropy_continuity_record(int samples, std::uint64_t seed);

enum class ReportFormat { kJson, kCsv };
ReportFormat parse_format(const std::string& name);

/// Deterministic report bytes, reals at 12 significant digits, stable field
/// order. Byte-identical across runs for identical inputs.
std::string emit_report(std::span<const VerificationRecord> records, ReportFormat format);

std::string emit_analysis(const ProcessAnalysis& analysis, const std::string& target,
                          ReportFormat format);

std::string emit_nm(const NMBracket& nm, const std::string& target, ReportFormat format);

bool all_pass(std::span<const VerificationRecord> records);

std::uint64_t fnv1a(std::span<const unsigned char> bytes);
std::string process_digest(const ProcessTensor& p);

}  // namespace combworks
