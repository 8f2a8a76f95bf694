#include "toda/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace toda {

namespace {

using nlohmann::json;

json report_to_json(const CheckReport& r) {
    json j;
    j["checkId"] = r.check_id;
    j["params"] = r.params;
    j["verdict"] = verdict_name(r.verdict);
    j["witnesses"] = r.witnesses;
    return j;
}

CheckReport report_from_json(const json& j) {
    CheckReport r;
    r.check_id = j.at("checkId").get<std::string>();
    r.params = j.at("params").get<std::map<std::string, std::string>>();
    r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    r.witnesses = j.at("witnesses");
    return r;
}

json envelope(long long prime, const std::vector<const CheckReport*>& checks,
              const std::string& conclusion) {
    json j;
    j["schema"] = "toda-obstruction/1";
    j["prime"] = prime;
    j["checks"] = json::array();
    for (const CheckReport* r : checks) j["checks"].push_back(report_to_json(*r));
    j["conclusion"] = conclusion;
    return j;
}

std::string render_text(long long prime, const std::vector<const CheckReport*>& checks,
                        const std::string& conclusion) {
    std::ostringstream out;
    out << "toda-obstruction report (p = " << prime << ")\n";
    std::size_t idw = 5, vw = 7;
    for (const CheckReport* r : checks) {
        idw = std::max(idw, r->check_id.size());
        vw = std::max(vw, std::string(verdict_name(r->verdict)).size());
    }
    out << std::left << std::setw(static_cast<int>(idw) + 2) << "check"
        << std::setw(static_cast<int>(vw) + 2) << "verdict" << "params\n";
    for (const CheckReport* r : checks) {
        out << std::left << std::setw(static_cast<int>(idw) + 2) << r->check_id
            << std::setw(static_cast<int>(vw) + 2) << verdict_name(r->verdict);
        bool first = true;
        for (const auto& [k, v] : r->params) {
            if (!first) out << ' ';
            out << k << '=' << v;
            first = false;
        }
        out << '\n';
    }
    if (!conclusion.empty()) out << "conclusion: " << conclusion << '\n';
    return out.str();
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::hypothesis_excluded: return "hypothesis-excluded";
        case Verdict::inconclusive: return "inconclusive";
    }
    throw std::logic_error("bad verdict");
}

Verdict verdict_from_name(const std::string& name) {
    if (name == "pass") return Verdict::pass;
    if (name == "fail") return Verdict::fail;
    if (name == "hypothesis-excluded") return Verdict::hypothesis_excluded;
    if (name == "inconclusive") return Verdict::inconclusive;
    throw std::invalid_argument("unknown verdict: " + name);
}

bool reports_equal(const CheckReport& a, const CheckReport& b) {
    return a.check_id == b.check_id && a.params == b.params && a.verdict == b.verdict &&
           a.witnesses == b.witnesses;
}

bool PipelineVerdict::all_pass() const {
    for (const CheckReport* r : sorted_checks())
        if (r->verdict != Verdict::pass) return false;
    return true;
}

std::vector<const CheckReport*> PipelineVerdict::sorted_checks() const {
    std::vector<const CheckReport*> all;
    all.push_back(&oracle_check);
    for (const auto& r : lemma_reports) all.push_back(&r);
    for (const auto& r : vk_permanent_checks) all.push_back(&r);
    for (const auto& r : vm_square_checks) all.push_back(&r);
    std::sort(all.begin(), all.end(), [](const CheckReport* a, const CheckReport* b) {
        if (a->check_id != b->check_id) return a->check_id < b->check_id;
        return a->params < b->params;
    });
    return all;
}

bool verdicts_equal(const PipelineVerdict& a, const PipelineVerdict& b) {
    if (a.prime != b.prime || a.conclusion != b.conclusion) return false;
    auto ca = a.sorted_checks(), cb = b.sorted_checks();
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (!reports_equal(*ca[i], *cb[i])) return false;
    return true;
}

std::string emit_report(const PipelineVerdict& v, ReportFormat f) {
    auto checks = v.sorted_checks();
    if (f == ReportFormat::json) return envelope(v.prime, checks, v.conclusion).dump(2) + "\n";
    return render_text(v.prime, checks, v.conclusion);
}

std::string emit_report(const CheckReport& r, ReportFormat f) {
    long long prime = 0;
    if (auto it = r.params.find("prime"); it != r.params.end()) prime = std::stoll(it->second);
    std::vector<const CheckReport*> one{&r};
    if (f == ReportFormat::json) return envelope(prime, one, "").dump(2) + "\n";
    return render_text(prime, one, "");
}

int exit_code_for(const CheckReport& r) {
    return r.verdict == Verdict::pass || r.verdict == Verdict::hypothesis_excluded ? 0 : 1;
}

int exit_code_for(const PipelineVerdict& v) {
    for (const CheckReport* r : v.sorted_checks())
        if (exit_code_for(*r) != 0) return 1;
    return 0;
}

PipelineVerdict parse_report(const std::string& bytes) {
    nlohmann::json j = nlohmann::json::parse(bytes);
    if (j.at("schema").get<std::string>() != "toda-obstruction/1")
        throw std::invalid_argument("unsupported report schema");
    PipelineVerdict v;
    v.prime = j.at("prime").get<long long>();
    v.conclusion = j.at("conclusion").get<std::string>();
    for (const auto& cj : j.at("checks")) {
        CheckReport r = report_from_json(cj);
        if (r.check_id.rfind("einf-", 0) == 0)
            v.oracle_check = r;
        else if (r.check_id.rfind("prop34-", 0) == 0)
            v.vk_permanent_checks.push_back(std::move(r));
        else if (r.check_id.rfind("prop35-", 0) == 0)
            v.vm_square_checks.push_back(std::move(r));
        else
            v.lemma_reports.push_back(std::move(r));
    }
    return v;
}

}  // namespace toda
