#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "toda/pipeline.hpp"

namespace {

bool valid_int_literal(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

int write_out(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << bytes;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return 2;
    }
    out << bytes;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification pipeline for the mod-p Smith-Toda obstruction computations"};
    app.require_subcommand(1);

    long long prime = 0;
    bool as_json = false;
    std::string out_path;

    CLI::App* verify = app.add_subcommand("verify", "run the full pipeline for one prime");
    verify->add_option("--prime", prime, "odd prime > 5")->required();
    verify->add_flag("--json", as_json, "emit the JSON report instead of the text table");
    verify->add_option("--out", out_path, "write the report to a file instead of stdout");

    long long s_max = 0;
    std::string t_max_str;
    CLI::App* einf = app.add_subcommand("einf", "dump the collapsed page over a window");
    einf->add_option("--prime", prime, "odd prime >= 5")->required();
    einf->add_option("--smax", s_max, "largest filtration to materialize")->required();
    einf->add_option("--tmax", t_max_str, "largest internal degree (window starts at 0)")
        ->required();

    CLI::App* lemma31 = app.add_subcommand("lemma31", "cohomology vanishing degree families");
    lemma31->add_option("--prime", prime, "odd prime >= 5")->required();
    lemma31->add_flag("--json", as_json, "emit JSON");

    long long m_arg = 0;
    CLI::App* lemma32 = app.add_subcommand("lemma32", "homotopy vanishing degree families");
    lemma32->add_option("--prime", prime, "odd prime >= 5")->required();
    lemma32->add_option("--m", m_arg, "quotient depth, 0 <= m <= p-2")->required();
    lemma32->add_flag("--json", as_json, "emit JSON");

    long long floor_arg = 0, degree_arg = 2;
    std::string uexp_str;
    CLI::App* exclude = app.add_subcommand("exclude", "run one exclusion fixpoint with chains");
    exclude->add_option("--prime", prime, "odd prime >= 5")->required();
    exclude->add_option("--floor", floor_arg, "first alive generator index")->required();
    exclude->add_option("--uexp", uexp_str, "exponent of u (arbitrary precision)")->required();
    exclude->add_option("--degree", degree_arg, "universe degree bound, >= 1")->required();
    exclude->add_flag("--json", as_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        toda::PrimeContext ctx = toda::make_context(prime);

        if (verify->parsed()) {
            toda::PipelineVerdict v = toda::run_theorem_pipeline(ctx);
            std::string bytes =
                emit_report(v, as_json ? toda::ReportFormat::json : toda::ReportFormat::text);
            int rc = write_out(bytes, out_path);
            return rc != 0 ? rc : toda::exit_code_for(v);
        }
        if (einf->parsed()) {
            if (!valid_int_literal(t_max_str)) throw std::domain_error("--tmax must be an integer");
            toda::Window w;
            w.s_max = s_max;
            w.t_min = 0;
            w.t_max = toda::Int(t_max_str);
            toda::Page page = toda::run_to_einfinity(ctx, w);
            std::cout << "# s t deltaExp alphaExp betaExp coeff fate\n"
                      << dump_page(ctx, page);
            return 0;
        }
        if (lemma31->parsed()) {
            toda::CheckReport r = toda::lemma_cohomology_verify(ctx);
            std::cout << emit_report(r,
                                     as_json ? toda::ReportFormat::json : toda::ReportFormat::text);
            return toda::exit_code_for(r);
        }
        if (lemma32->parsed()) {
            toda::CheckReport r = toda::lemma_homotopy_verify(ctx, m_arg);
            std::cout << emit_report(r,
                                     as_json ? toda::ReportFormat::json : toda::ReportFormat::text);
            return toda::exit_code_for(r);
        }
        if (exclude->parsed()) {
            if (!valid_int_literal(uexp_str)) throw std::domain_error("--uexp must be an integer");
            toda::Int s(uexp_str);
            toda::ExclusionResult res =
                toda::exclusion_fixpoint(ctx, floor_arg, s, degree_arg);
            if (as_json) {
                nlohmann::json j;
                j["prime"] = ctx.p;
                j["floor"] = floor_arg;
                j["uExp"] = s.str();
                j["degreeBound"] = degree_arg;
                j["universeSize"] = res.universe.size();
                j["chain"] = nlohmann::json::array();
                for (const auto& rec : res.excluded)
                    j["chain"].push_back(toda::exclusion_record_to_json(rec));
                j["retained"] = nlohmann::json::array();
                for (const auto& m : res.retained)
                    j["retained"].push_back(toda::monomial_to_json(m));
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "universe " << res.universe.size() << " monomials, floor "
                          << floor_arg << ", degree bound " << degree_arg << "\n";
                std::cout << "excluded " << res.excluded.size() << ":\n";
                for (const auto& rec : res.excluded) {
                    std::cout << "  " << toda::monomial_display(rec.mono);
                    if (rec.a_priori) {
                        std::cout << "  tau-weight " << rec.tau.str() << "\n";
                        continue;
                    }
                    std::cout << "  emission " << toda::monomial_display(*rec.emission)
                              << "  other producers:";
                    if (rec.producers.empty()) std::cout << " none";
                    for (const auto& w : rec.producers)
                        std::cout << " [" << toda::monomial_display(w.mono) << " "
                                  << (w.state == toda::ProducerState::tau_forbidden
                                          ? "tau-forbidden"
                                          : "excluded-earlier")
                                  << "]";
                    std::cout << "\n";
                }
                std::cout << "retained " << res.retained.size() << ":\n";
                for (const auto& m : res.retained)
                    std::cout << "  " << toda::monomial_display(m) << "\n";
            }
            return 0;
        }
    } catch (const toda::InvalidPrimeError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const toda::PipelineRefusal& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const toda::WindowError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 2;
}
