#include "rscan/scan_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "rscan/distributions.hpp"
#include "rscan/parallel.hpp"
#include "rscan/rng.hpp"

namespace rscan {

namespace {

const char* kCountHeader[7] = {"snp_id", "r0", "r1", "r2", "s0", "s1", "s2"};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool parse_count(const std::string& field, std::int64_t& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && out >= 0;
}

std::string scan_method_token(Method m) {
    switch (m) {
        case Method::CATT_HALF: return "catt";
        case Method::PEARSON: return "pearson";
        case Method::MAX3: return "max3";
        case Method::MIN2: return "min2";
        case Method::GMS: return "gms";
        default: return to_string(m);
    }
}

void write_timestamp(std::ostream& out) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out << "# generated: " << buf << "\n";
}

}  // namespace

std::string format_g12(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

CountFile read_count_file(std::istream& in) {
    CountFile file;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const std::vector<std::string> fields = split_tabs(line);
        if (!header_seen) {
            if (fields.size() != 7 ||
                !std::equal(fields.begin(), fields.end(), kCountHeader)) {
                throw ParseError(line_no,
                                 "expected header 'snp_id\\tr0\\tr1\\tr2\\ts0\\ts1\\ts2'");
            }
            header_seen = true;
            continue;
        }

        const auto skip = [&](const std::string& why) {
            file.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
        };
        if (fields.size() != 7) {
            skip("expected 7 tab-separated fields, got " + std::to_string(fields.size()));
            continue;
        }
        CountFileRow row;
        row.snp_id = fields[0];
        if (row.snp_id.empty()) {
            skip("empty snp_id");
            continue;
        }
        std::int64_t v[6];
        bool ok = true;
        for (int i = 0; i < 6; ++i) {
            if (!parse_count(fields[static_cast<std::size_t>(i) + 1], v[i])) {
                skip("field '" + fields[static_cast<std::size_t>(i) + 1] +
                     "' is not a nonnegative integer");
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        row.counts = {v[0], v[1], v[2], v[3], v[4], v[5]};
        if (row.counts.r() == 0 || row.counts.s() == 0) {
            skip("row '" + row.snp_id + "' has an empty study arm");
            continue;
        }
        if (!seen_ids.insert(row.snp_id).second) {
            skip("duplicate snp_id '" + row.snp_id + "'");
            continue;
        }
        file.rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError(line_no + 1, "missing header line");
    return file;
}

CountFile read_count_file_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return read_count_file(in);
}

FileScanResult scan_count_file(const std::vector<CountFileRow>& rows,
                               const FileScanOptions& options) {
    if (options.methods.empty()) throw std::invalid_argument("no methods requested");
    for (Method m : options.methods) {
        if (std::find(std::begin(kScanMethods), std::end(kScanMethods), m) ==
            std::end(kScanMethods)) {
            throw std::invalid_argument("method has no scan ranking key");
        }
    }

    const std::size_t n = rows.size();
    const std::size_t n_methods = options.methods.size();
    FileScanResult result;
    result.results.assign(n_methods, std::vector<SnpMethodResult>(n));

    parallel_for(n, [&](std::size_t i) {
        const GenotypeCounts& c = rows[i].counts;
        for (std::size_t m = 0; m < n_methods; ++m) {
            const Method method = options.methods[m];
            SnpMethodResult& out = result.results[m][i];
            try {
                switch (method) {
                    case Method::CATT_HALF: {
                        const TestResult t = catt(c, 0.5);
                        out.statistic = t.statistic;
                        out.key = std::fabs(t.statistic);
                        out.p_value = t.p_value;
                        break;
                    }
                    case Method::PEARSON: {
                        const TestResult t = pearson(c);
                        out.statistic = t.statistic;
                        out.key = t.statistic;
                        out.p_value = t.p_value;
                        break;
                    }
                    case Method::MAX3: {
                        const TestResult t = max3(c);
                        out.statistic = t.statistic;
                        out.key = t.statistic;
                        break;
                    }
                    case Method::MIN2: {
                        const TestResult t = min2(c);
                        out.statistic = t.statistic;
                        out.key = -t.statistic;
                        out.p_value = min2_pvalue(t.statistic);
                        break;
                    }
                    case Method::GMS: {
                        const GmsResult g = gms(c);
                        out.statistic = g.statistic;
                        out.key = std::fabs(g.statistic);
                        break;
                    }
                    default: break;
                }
                if (options.bootstrap_replicates > 0 &&
                    (method == Method::MAX3 || method == Method::GMS)) {
                    BootstrapConfig bcfg;
                    bcfg.replicates = options.bootstrap_replicates;
                    bcfg.seed = mix_seed(options.seed, i);
                    out.p_value = bootstrap_pvalue(c, method, bcfg);
                }
            } catch (const std::runtime_error&) {
                out.statistic = std::numeric_limits<double>::quiet_NaN();
                out.key = -std::numeric_limits<double>::infinity();
                out.p_value.reset();
            }
        }
    });

    bool any_usable = false;
    std::vector<double> keys(n);
    for (std::size_t m = 0; m < n_methods; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            keys[i] = result.results[m][i].key;
            any_usable = any_usable || std::isfinite(keys[i]);
        }
        const auto ranks = ranks_from_keys(keys);
        for (std::size_t i = 0; i < n; ++i) result.results[m][i].rank = ranks[i];
    }
    if (n > 0 && !any_usable) {
        throw DegenerateTable("every row is degenerate for every requested method");
    }

    result.row_order.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.row_order[static_cast<std::size_t>(result.results[0][i].rank) - 1] = i;
    }
    return result;
}

void write_scan_tsv(std::ostream& out, const std::vector<CountFileRow>& rows,
                    const FileScanOptions& options, const FileScanResult& result,
                    bool with_timestamp) {
    out << "# robust-scan scan report\n";
    if (with_timestamp) write_timestamp(out);
    out << "# methods:";
    for (Method m : options.methods) out << ' ' << scan_method_token(m);
    out << "\n";
    if (options.bootstrap_replicates > 0) {
        out << "# bootstrap: replicates=" << options.bootstrap_replicates
            << " seed=" << options.seed << "\n";
    }

    out << "snp_id";
    for (Method m : options.methods) {
        const std::string tok = scan_method_token(m);
        out << '\t' << tok << "_stat" << '\t' << tok << "_key" << '\t' << tok
            << "_rank";
    }
    for (std::size_t m = 0; m < options.methods.size(); ++m) {
        const Method method = options.methods[m];
        const bool has_p = method == Method::CATT_HALF || method == Method::PEARSON ||
                           method == Method::MIN2 ||
                           options.bootstrap_replicates > 0;
        if (has_p) out << '\t' << scan_method_token(method) << "_p";
    }
    out << "\n";

    std::size_t limit = result.row_order.size();
    if (options.top && *options.top >= 0) {
        limit = std::min<std::size_t>(limit, static_cast<std::size_t>(*options.top));
    }
    for (std::size_t pos = 0; pos < limit; ++pos) {
        const std::size_t i = result.row_order[pos];
        out << rows[i].snp_id;
        for (std::size_t m = 0; m < options.methods.size(); ++m) {
            const SnpMethodResult& r = result.results[m][i];
            out << '\t' << format_g12(r.statistic) << '\t' << format_g12(r.key)
                << '\t' << r.rank;
        }
        for (std::size_t m = 0; m < options.methods.size(); ++m) {
            const Method method = options.methods[m];
            const bool has_p = method == Method::CATT_HALF ||
                               method == Method::PEARSON || method == Method::MIN2 ||
                               options.bootstrap_replicates > 0;
            if (!has_p) continue;
            const SnpMethodResult& r = result.results[m][i];
            out << '\t'
                << (r.p_value ? format_g12(*r.p_value)
                              : format_g12(std::numeric_limits<double>::quiet_NaN()));
        }
        out << "\n";
    }
}

namespace {

struct KeyValueFile {
    std::map<std::string, std::string> values;
    std::map<std::string, std::size_t> lines;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

KeyValueFile read_key_values(std::istream& in) {
    KeyValueFile kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (kv.values.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        kv.values[key] = trim(stripped.substr(eq + 1));
        kv.lines[key] = line_no;
    }
    return kv;
}

class ConfigReader {
public:
    explicit ConfigReader(KeyValueFile kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) {
        used_.insert(key);
        return kv_.values.count(key) > 0;
    }

    std::string raw(const std::string& key) {
        used_.insert(key);
        const auto it = kv_.values.find(key);
        if (it == kv_.values.end()) {
            throw ParseError(0, "missing required key '" + key + "'");
        }
        return it->second;
    }

    template <typename T>
    T get(const std::string& key) {
        return parse_one<T>(key, raw(key));
    }

    template <typename T>
    T get_or(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return get<T>(key);
    }

    template <typename T>
    std::vector<T> get_list(const std::string& key) {
        const std::string value = raw(key);
        std::vector<T> out;
        if (trim(value).empty()) return out;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_one<T>(key, trim(item)));
        }
        return out;
    }

    /// Scalar broadcast: a single value expands to `size` copies.
    template <typename T>
    std::vector<T> get_broadcast(const std::string& key, std::size_t size) {
        std::vector<T> list = get_list<T>(key);
        if (list.size() == 1 && size > 1) list.assign(size, list[0]);
        if (list.size() != size) {
            throw ParseError(line_of(key), "key '" + key + "' needs 1 or " +
                                               std::to_string(size) + " values");
        }
        return list;
    }

    void reject_unknown_keys() const {
        for (const auto& [key, value] : kv_.values) {
            if (!used_.count(key)) {
                throw ParseError(kv_.lines.at(key), "unknown key '" + key + "'");
            }
        }
    }

    std::size_t line_of(const std::string& key) const {
        const auto it = kv_.lines.find(key);
        return it == kv_.lines.end() ? 0 : it->second;
    }

private:
    template <typename T>
    T parse_one(const std::string& key, const std::string& text) {
        if constexpr (std::is_same_v<T, GeneticModel>) {
            try {
                return genetic_model_from_string(text);
            } catch (const std::invalid_argument&) {
                throw ParseError(line_of(key), "key '" + key + "': unknown model '" +
                                                   text + "'");
            }
        } else {
            T value{};
            const char* begin = text.data();
            const char* end = begin + text.size();
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr != end) {
                throw ParseError(line_of(key),
                                 "key '" + key + "': cannot parse '" + text + "'");
            }
            return value;
        }
    }

    KeyValueFile kv_;
    std::unordered_set<std::string> used_;
};

ScanConfig read_ranking_config(ConfigReader& cfg) {
    ScanConfig sc;
    sc.total_snps = cfg.get<std::int64_t>("total_snps");
    sc.replicates = cfg.get<std::int64_t>("replicates");
    sc.top_l = cfg.get<std::int64_t>("top_l");
    sc.cases = cfg.get<std::int64_t>("cases");
    sc.controls = cfg.get<std::int64_t>("controls");
    sc.prevalence = cfg.get_or<double>("prevalence", 0.1);
    sc.seed = cfg.get_or<std::uint64_t>("seed", 0);
    sc.null_maf_low = cfg.get_or<double>("null_maf_low", 0.1);
    sc.null_maf_high = cfg.get_or<double>("null_maf_high", 0.5);

    const auto models = cfg.get_list<GeneticModel>("true_snp_models");
    if (!models.empty()) {
        const auto mafs = cfg.get_broadcast<double>("true_snp_mafs", models.size());
        const auto q = cfg.has("true_snp_functional_mafs")
                           ? cfg.get_broadcast<double>("true_snp_functional_mafs",
                                                       models.size())
                           : mafs;
        const auto grrs = cfg.get_broadcast<double>("true_snp_grrs", models.size());
        const auto dps = cfg.get_broadcast<double>("true_snp_d_primes", models.size());
        for (std::size_t i = 0; i < models.size(); ++i) {
            sc.true_snps.push_back({models[i], mafs[i], q[i], grrs[i], dps[i]});
        }
    } else {
        cfg.has("true_snp_mafs");
        cfg.has("true_snp_functional_mafs");
        cfg.has("true_snp_grrs");
        cfg.has("true_snp_d_primes");
    }
    return sc;
}

ModelSelectionConfig read_selection_config(ConfigReader& cfg) {
    ModelSelectionConfig mc;
    mc.maf_grid = cfg.get_list<double>("maf_grid");
    mc.model_grid = cfg.get_list<GeneticModel>("model_grid");
    mc.d_prime_grid = cfg.get_list<double>("d_prime_grid");
    mc.prevalence = cfg.get_or<double>("prevalence", 0.1);
    mc.lambda2_star = cfg.get<double>("lambda2_star");
    mc.threshold = cfg.get_or<double>("threshold", 1.645);
    mc.cases = cfg.get<std::int64_t>("cases");
    mc.controls = cfg.get<std::int64_t>("controls");
    mc.replicates = cfg.get<std::int64_t>("replicates");
    mc.seed = cfg.get_or<std::uint64_t>("seed", 0);
    return mc;
}

template <typename T>
std::string join_list(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        if constexpr (std::is_same_v<T, GeneticModel>) {
            out += to_string(values[i]);
        } else if constexpr (std::is_floating_point_v<T>) {
            out += format_g12(values[i]);
        } else {
            out += std::to_string(values[i]);
        }
    }
    return out;
}

}  // namespace

StudyConfig read_study_config(std::istream& in, StudyKind kind) {
    ConfigReader cfg(read_key_values(in));
    StudyConfig out;
    out.kind = kind;
    if (kind == StudyKind::Ranking) {
        out.scan = read_ranking_config(cfg);
    } else {
        out.selection = read_selection_config(cfg);
    }
    cfg.reject_unknown_keys();
    return out;
}

StudyConfig read_study_config_path(const std::string& path, StudyKind kind) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return read_study_config(in, kind);
}

void write_criteria_report(std::ostream& out, const CriteriaReport& report,
                           bool with_timestamp) {
    const ScanConfig& c = report.config;
    out << "# robust-scan ranking report\n";
    if (with_timestamp) write_timestamp(out);
    out << "# total_snps = " << c.total_snps << "\n";
    out << "# replicates = " << c.replicates << "\n";
    out << "# top_l = " << c.top_l << "\n";
    out << "# cases = " << c.cases << "\n";
    out << "# controls = " << c.controls << "\n";
    out << "# prevalence = " << format_g12(c.prevalence) << "\n";
    out << "# seed = " << c.seed << "\n";
    out << "# null_maf_low = " << format_g12(c.null_maf_low) << "\n";
    out << "# null_maf_high = " << format_g12(c.null_maf_high) << "\n";

    std::vector<GeneticModel> models;
    std::vector<double> mafs, qs, grrs, dps;
    for (const TrueSnpSpec& t : c.true_snps) {
        models.push_back(t.model);
        mafs.push_back(t.maf_marker);
        qs.push_back(t.maf_functional);
        grrs.push_back(t.grr_lambda2_star);
        dps.push_back(t.d_prime);
    }
    out << "# true_snp_models = " << join_list(models) << "\n";
    out << "# true_snp_mafs = " << join_list(mafs) << "\n";
    out << "# true_snp_functional_mafs = " << join_list(qs) << "\n";
    out << "# true_snp_grrs = " << join_list(grrs) << "\n";
    out << "# true_snp_d_primes = " << join_list(dps) << "\n";

    out << "method\tprob_at_least_one\tavg_true_in_top\tmean_min_rank\t"
           "replicates_with_hit\n";
    for (const MethodCriteria& m : report.methods) {
        out << scan_method_token(m.method) << '\t' << format_g12(m.prob_at_least_one)
            << '\t' << format_g12(m.avg_true_in_top) << '\t'
            << format_g12(m.mean_min_rank) << '\t' << m.replicates_with_hit << "\n";
    }
}

void write_model_selection_report(std::ostream& out,
                                  const ModelSelectionReport& report,
                                  bool with_timestamp) {
    const ModelSelectionConfig& c = report.config;
    out << "# robust-scan model-selection report\n";
    if (with_timestamp) write_timestamp(out);
    out << "# maf_grid = " << join_list(c.maf_grid) << "\n";
    out << "# model_grid = " << join_list(c.model_grid) << "\n";
    out << "# d_prime_grid = " << join_list(c.d_prime_grid) << "\n";
    out << "# prevalence = " << format_g12(c.prevalence) << "\n";
    out << "# lambda2_star = " << format_g12(c.lambda2_star) << "\n";
    out << "# threshold = " << format_g12(c.threshold) << "\n";
    out << "# cases = " << c.cases << "\n";
    out << "# controls = " << c.controls << "\n";
    out << "# replicates = " << c.replicates << "\n";
    out << "# seed = " << c.seed << "\n";

    out << "maf\ttrue_model\td_prime\tfreq_rec\tfreq_addmul\tfreq_dom\n";
    for (const ModelSelectionCell& cell : report.cells) {
        out << format_g12(cell.maf) << '\t' << to_string(cell.true_model) << '\t'
            << format_g12(cell.d_prime) << '\t' << format_g12(cell.freq_rec) << '\t'
            << format_g12(cell.freq_addmul) << '\t' << format_g12(cell.freq_dom)
            << "\n";
    }
}

}  // namespace rscan
