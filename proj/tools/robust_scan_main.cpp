// robust-scan: genome-scan association statistics over genotype count
// tables, single-table evaluation, LD mapping of genotype relative risks,
// and the simulation studies. See README.md for formats and examples.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rscan/distributions.hpp"
#include "rscan/genetics.hpp"
#include "rscan/scan_io.hpp"
#include "rscan/simulate.hpp"
#include "rscan/stats.hpp"

namespace {

using nlohmann::json;
using namespace rscan;

constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

Method parse_method_token(const std::string& token) {
    if (token == "catt") return Method::CATT_HALF;
    if (token == "pearson") return Method::PEARSON;
    if (token == "max3") return Method::MAX3;
    if (token == "min2") return Method::MIN2;
    if (token == "gms") return Method::GMS;
    throw std::invalid_argument("unknown method '" + token +
                                "' (expected catt, pearson, max3, min2, gms)");
}

std::vector<Method> parse_methods(const std::string& csv) {
    std::vector<Method> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(parse_method_token(token));
    }
    if (out.empty()) throw std::invalid_argument("no methods requested");
    return out;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputTarget(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
        stream = &file;
    }
};

int cmd_scan(const std::string& input, const std::string& methods_csv,
             std::optional<std::int64_t> top, std::int64_t bootstrap,
             std::uint64_t seed, const std::string& output, bool no_timestamp) {
    FileScanOptions options;
    options.methods = parse_methods(methods_csv);
    options.top = top;
    options.bootstrap_replicates = bootstrap;
    options.seed = seed;

    const CountFile file = read_count_file_path(input);
    for (const std::string& warning : file.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (!file.warnings.empty()) {
        std::cerr << "warning: skipped " << file.warnings.size() << " malformed row(s)\n";
    }
    if (file.rows.empty()) {
        std::cerr << "error: no usable rows\n";
        return kExitDegenerate;
    }

    const FileScanResult result = scan_count_file(file.rows, options);
    OutputTarget out(output);
    write_scan_tsv(*out.stream, file.rows, options, result, !no_timestamp);
    return 0;
}

void emit_result_lines(std::ostream& out, json& obj, const char* name,
                       const GenotypeCounts& c, Method method,
                       std::int64_t bootstrap, std::uint64_t seed) {
    try {
        TestResult t;
        switch (method) {
            case Method::CATT0: t = catt(c, 0.0); break;
            case Method::CATT_HALF: t = catt(c, 0.5); break;
            case Method::CATT1: t = catt(c, 1.0); break;
            case Method::PEARSON: t = pearson(c); break;
            case Method::MAX3: t = max3(c); break;
            case Method::MIN2: t = min2(c); break;
            case Method::HWDTT: t = hwdtt(c); break;
            default: return;
        }
        if (method == Method::MIN2) {
            t.p_value = min2_pvalue(t.statistic);
        } else if (bootstrap > 0 && method == Method::MAX3) {
            t.p_value = bootstrap_pvalue(c, method, {bootstrap, seed});
        }
        out << name << ".statistic=" << format_g12(t.statistic) << "\n";
        obj[name]["statistic"] = t.statistic;
        if (t.p_value) {
            out << name << ".p_value=" << format_g12(*t.p_value) << "\n";
            obj[name]["p_value"] = *t.p_value;
        }
    } catch (const std::runtime_error& e) {
        out << name << ".error=" << e.what() << "\n";
        obj[name]["error"] = e.what();
    }
}

int cmd_test(const GenotypeCounts& c, double threshold, std::int64_t bootstrap,
             std::uint64_t seed, bool as_json) {
    std::ostringstream out;
    json obj;

    emit_result_lines(out, obj, "CATT0", c, Method::CATT0, bootstrap, seed);
    emit_result_lines(out, obj, "CATT_HALF", c, Method::CATT_HALF, bootstrap, seed);
    emit_result_lines(out, obj, "CATT1", c, Method::CATT1, bootstrap, seed);
    emit_result_lines(out, obj, "PEARSON", c, Method::PEARSON, bootstrap, seed);
    emit_result_lines(out, obj, "MAX3", c, Method::MAX3, bootstrap, seed);
    emit_result_lines(out, obj, "MIN2", c, Method::MIN2, bootstrap, seed);
    emit_result_lines(out, obj, "HWDTT", c, Method::HWDTT, bootstrap, seed);

    try {
        const GmsResult g = gms(c, threshold);
        out << "GMS.selected_model=" << to_string(g.selected_model) << "\n";
        out << "GMS.statistic=" << format_g12(g.statistic) << "\n";
        out << "GMS.z_hwdtt=" << format_g12(g.z_hwdtt) << "\n";
        out << "GMS.oriented=" << (g.oriented ? "true" : "false") << "\n";
        obj["GMS"] = {{"selected_model", to_string(g.selected_model)},
                      {"statistic", g.statistic},
                      {"z_hwdtt", g.z_hwdtt},
                      {"oriented", g.oriented}};
        if (bootstrap > 0) {
            const double p = bootstrap_pvalue(c, Method::GMS, {bootstrap, seed});
            out << "GMS.p_value=" << format_g12(p) << "\n";
            obj["GMS"]["p_value"] = p;
        }
    } catch (const std::runtime_error& e) {
        out << "GMS.error=" << e.what() << "\n";
        obj["GMS"]["error"] = e.what();
    }

    // residual of the chi-square decomposition into trend + HWD parts;
    // reported for inspection, not an identity at finite n
    try {
        const double t = pearson(c).statistic;
        const double z = catt(c, 0.5).statistic;
        const double w = hwdtt(c).statistic;
        const double residual = t - z * z - w * w;
        out << "diagnostics.pearson_decomposition_residual=" << format_g12(residual)
            << "\n";
        obj["diagnostics"]["pearson_decomposition_residual"] = residual;
    } catch (const std::runtime_error&) {
    }

    if (as_json) {
        std::cout << obj.dump(2) << "\n";
    } else {
        std::cout << out.str();
    }
    return 0;
}

int cmd_grr_map(const std::string& model_name, double lambda2, double p, double q,
                double d_prime, double k, bool as_json) {
    const GeneticModel model = genetic_model_from_string(model_name);
    const GrrPair grr_star = grr_from_model(model, lambda2);
    const double f0_star = baseline_penetrance(k, q, grr_star);
    const HaplotypeTable h = haplotype_table({p, q}, d_prime);
    const PenetranceTriple f = marker_penetrances(
        {f0_star, f0_star * grr_star.lambda1, f0_star * grr_star.lambda2}, h);
    const GrrPair grr{f.f1 / f.f0, f.f2 / f.f0};

    if (as_json) {
        const json obj = {{"lambda1", grr.lambda1}, {"lambda2", grr.lambda2},
                          {"f0", f.f0},             {"f1", f.f1},
                          {"f2", f.f2}};
        std::cout << obj.dump(2) << "\n";
    } else {
        std::cout << "lambda1=" << format_g12(grr.lambda1) << "\n"
                  << "lambda2=" << format_g12(grr.lambda2) << "\n"
                  << "f0=" << format_g12(f.f0) << "\n"
                  << "f1=" << format_g12(f.f1) << "\n"
                  << "f2=" << format_g12(f.f2) << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& study,
                 const std::string& output, std::optional<std::uint64_t> seed,
                 bool no_timestamp) {
    StudyKind kind;
    if (study == "ranking") {
        kind = StudyKind::Ranking;
    } else if (study == "model-selection") {
        kind = StudyKind::ModelSelection;
    } else {
        throw std::invalid_argument("unknown study '" + study +
                                    "' (expected ranking or model-selection)");
    }

    StudyConfig config = read_study_config_path(config_path, kind);
    OutputTarget out(output);
    if (kind == StudyKind::Ranking) {
        if (seed) config.scan.seed = *seed;
        write_criteria_report(*out.stream, run_scan(config.scan), !no_timestamp);
    } else {
        if (seed) config.selection.seed = *seed;
        write_model_selection_report(*out.stream,
                                     run_model_selection_study(config.selection),
                                     !no_timestamp);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust association scans for case-control genotype tables"};
    app.require_subcommand(1);

    // scan
    auto* scan = app.add_subcommand("scan", "rank SNPs in a genotype count file");
    std::string scan_input, scan_methods = "catt,gms,max3,min2,pearson";
    std::string scan_output;
    std::optional<std::int64_t> scan_top;
    std::int64_t scan_bootstrap = 0;
    std::uint64_t scan_seed = 0;
    bool scan_no_ts = false;
    scan->add_option("input", scan_input, "count file (TSV)")->required();
    scan->add_option("--methods", scan_methods, "comma list of ranking methods");
    scan->add_option("--top", scan_top, "write only the top-ranked rows");
    scan->add_option("--bootstrap", scan_bootstrap,
                     "bootstrap replicates for MAX3/GMS p-values");
    scan->add_option("--seed", scan_seed, "bootstrap seed");
    scan->add_option("--output", scan_output, "output path (default stdout)");
    scan->add_flag("--no-header-timestamp", scan_no_ts,
                   "suppress the timestamp header line");

    // test
    auto* test = app.add_subcommand("test", "evaluate one 2x3 genotype table");
    GenotypeCounts test_counts;
    double test_threshold = 1.645;
    std::int64_t test_bootstrap = 0;
    std::uint64_t test_seed = 0;
    bool test_json = false;
    test->add_option("--r0", test_counts.r0, "case count, genotype G0")->required();
    test->add_option("--r1", test_counts.r1, "case count, genotype G1")->required();
    test->add_option("--r2", test_counts.r2, "case count, genotype G2")->required();
    test->add_option("--s0", test_counts.s0, "control count, genotype G0")->required();
    test->add_option("--s1", test_counts.s1, "control count, genotype G1")->required();
    test->add_option("--s2", test_counts.s2, "control count, genotype G2")->required();
    test->add_option("--threshold", test_threshold, "model-selection threshold");
    test->add_option("--bootstrap", test_bootstrap,
                     "bootstrap replicates for MAX3/GMS p-values");
    test->add_option("--seed", test_seed, "bootstrap seed");
    test->add_flag("--json", test_json, "emit one JSON object");

    // grr-map
    auto* grr = app.add_subcommand(
        "grr-map", "genotype relative risks induced at a marker through LD");
    std::string grr_model;
    double grr_lambda2 = 2.0, grr_p = 0.3, grr_q = 0.3, grr_dp = 1.0, grr_k = 0.1;
    bool grr_json = false;
    grr->add_option("--model", grr_model, "REC, ADD, MUL or DOM")->required();
    grr->add_option("--lambda2", grr_lambda2, "GRR at the functional locus")->required();
    grr->add_option("--p", grr_p, "marker risk-allele frequency")->required();
    grr->add_option("--q", grr_q, "functional risk-allele frequency")->required();
    grr->add_option("--d-prime", grr_dp, "standardized LD coefficient")->required();
    grr->add_option("--k", grr_k, "disease prevalence")->required();
    grr->add_flag("--json", grr_json, "emit one JSON object");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a simulation study from a config");
    std::string sim_config, sim_study, sim_output;
    std::optional<std::uint64_t> sim_seed;
    bool sim_no_ts = false;
    sim->add_option("config", sim_config, "key=value config file")->required();
    sim->add_option("--study", sim_study, "ranking or model-selection")->required();
    sim->add_option("--output", sim_output, "output path (default stdout)");
    sim->add_option("--seed", sim_seed, "override the config seed");
    sim->add_flag("--no-header-timestamp", sim_no_ts,
                  "suppress the timestamp header line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*scan) {
            return cmd_scan(scan_input, scan_methods, scan_top, scan_bootstrap,
                            scan_seed, scan_output, scan_no_ts);
        }
        if (*test) {
            if (test_counts.r0 < 0 || test_counts.r1 < 0 || test_counts.r2 < 0 ||
                test_counts.s0 < 0 || test_counts.s1 < 0 || test_counts.s2 < 0) {
                throw std::invalid_argument("counts must be nonnegative");
            }
            return cmd_test(test_counts, test_threshold, test_bootstrap, test_seed,
                            test_json);
        }
        if (*grr) {
            return cmd_grr_map(grr_model, grr_lambda2, grr_p, grr_q, grr_dp, grr_k,
                               grr_json);
        }
        if (*sim) {
            return cmd_simulate(sim_config, sim_study, sim_output, sim_seed, sim_no_ts);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateTable& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
