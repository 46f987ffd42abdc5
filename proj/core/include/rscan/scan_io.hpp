#pragma once

// Count-file ingestion, the file-scan engine behind the `scan` command,
// flat key=value study configs, and the TSV report writers. Formats:
//
//   count file   TSV, header `snp_id r0 r1 r2 s0 s1 s2`, '#' comments,
//                UTF-8, LF line endings
//   study config flat `key = value` lines, '#' comments, unknown keys
//                are errors
//   reports      TSV with '#' header lines; floats at 12 significant
//                digits; an optional `# generated:` timestamp line that
//                can be suppressed for byte-reproducible output

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rscan/simulate.hpp"
#include "rscan/stats.hpp"

namespace rscan {

/// Structural problem that invalidates a whole file (bad header, bad key).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct CountFileRow {
    std::string snp_id;
    GenotypeCounts counts;
};

struct CountFile {
    std::vector<CountFileRow> rows;
    /// Malformed data rows are skipped, not fatal.
    std::vector<std::string> warnings;
};

/// Parses a genotype count file. Throws ParseError for structural
/// problems; individually malformed rows (wrong field count, non-integer
/// or negative counts, duplicate or empty snp_id, empty study arm) are
/// reported in `warnings` and skipped.
CountFile read_count_file(std::istream& in);
CountFile read_count_file_path(const std::string& path);

/// `%.12g` formatting used for every float we serialize.
std::string format_g12(double value);

/// Per-method scan output for one SNP.
struct SnpMethodResult {
    double statistic = 0.0;
    double key = 0.0;
    std::int64_t rank = 0;
    std::optional<double> p_value;
};

struct FileScanOptions {
    std::vector<Method> methods;  // subset of kScanMethods, request order
    std::optional<std::int64_t> top;
    std::int64_t bootstrap_replicates = 0;  // 0 = no bootstrap p-values
    std::uint64_t seed = 0;
};

struct FileScanResult {
    std::vector<std::size_t> row_order;  // by first method's rank
    // results[m][i]: method m (request order), input row i
    std::vector<std::vector<SnpMethodResult>> results;
};

/// Computes statistics, keys and ranks for every row; rows are processed
/// in parallel, ranks and ordering are deterministic.
/// Throws DegenerateTable when no row yields any computable statistic.
FileScanResult scan_count_file(const std::vector<CountFileRow>& rows,
                               const FileScanOptions& options);

void write_scan_tsv(std::ostream& out, const std::vector<CountFileRow>& rows,
                    const FileScanOptions& options, const FileScanResult& result,
                    bool with_timestamp);

/// Which study a config drives.
enum class StudyKind { Ranking, ModelSelection };

struct StudyConfig {
    StudyKind kind = StudyKind::Ranking;
    ScanConfig scan;                 // Ranking
    ModelSelectionConfig selection;  // ModelSelection
};

/// Parses a flat key=value study config. Unknown keys, missing required
/// keys and malformed values raise ParseError naming the offending key.
StudyConfig read_study_config(std::istream& in, StudyKind kind);
StudyConfig read_study_config_path(const std::string& path, StudyKind kind);

void write_criteria_report(std::ostream& out, const CriteriaReport& report,
                           bool with_timestamp);
void write_model_selection_report(std::ostream& out,
                                  const ModelSelectionReport& report,
                                  bool with_timestamp);

}  // namespace rscan
