#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "toda/bigint.hpp"

namespace toda {

enum class Verdict { pass, fail, hypothesis_excluded, inconclusive };

const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& name);

// One named check with its parameters and a machine-auditable witness payload.
// durationMs is wall-clock bookkeeping and is never serialized.
struct CheckReport {
    std::string check_id;
    std::map<std::string, std::string> params;
    Verdict verdict = Verdict::pass;
    nlohmann::json witnesses = nlohmann::json::object();
    long long duration_ms = 0;
};

// Equality over the serialized data model (duration_ms excluded).
bool reports_equal(const CheckReport& a, const CheckReport& b);

struct PipelineVerdict {
    long long prime = 0;
    CheckReport oracle_check;                      // engine vs closed form
    std::vector<CheckReport> lemma_reports;        // lemma31, lemma32-m*
    std::vector<CheckReport> vk_permanent_checks;  // prop34-k*-step1..5, -lemma32
    std::vector<CheckReport> vm_square_checks;     // prop35-*
    std::string conclusion;                        // nonempty only when everything passes

    bool all_pass() const;
    // every check, sorted by (check_id, params)
    std::vector<const CheckReport*> sorted_checks() const;
};

bool verdicts_equal(const PipelineVerdict& a, const PipelineVerdict& b);

enum class ReportFormat { text, json };

std::string emit_report(const PipelineVerdict& v, ReportFormat f);
std::string emit_report(const CheckReport& r, ReportFormat f);

// Inverse of emit_report(*, json) over the serialized data model.
PipelineVerdict parse_report(const std::string& bytes);

// Process exit contract: 0 when everything checked passes, 1 otherwise.
// A hypothesis-excluded verdict is a non-check, not a failure.
int exit_code_for(const PipelineVerdict& v);
int exit_code_for(const CheckReport& r);

}  // namespace toda
