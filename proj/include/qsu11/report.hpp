#ifndef QSU11_REPORT_HPP
#define QSU11_REPORT_HPP

#include <string>
#include <vector>

#include "qsu11/ortho.hpp"
#include "qsu11/spectral.hpp"

namespace qsu11 {

/// One tolerance line of a report.
struct CheckLine {
  std::string name;
  double value;
  double tol;
  bool pass;
};

std::string format_double(double v);  // fixed %.17g rendering

std::string spectrum_report_json(const SpectrumReport& r,
                                 const std::vector<CheckLine>& checks);
std::string spectrum_report_csv(const SpectrumReport& r);

std::string gram_report_json(const GramReport& r, const RepParams& params,
                             const std::vector<CheckLine>& checks);
std::string gram_report_csv(const GramReport& r);

std::string deficiency_report_json(const DeficiencyVerdict& v, const RepParams& params,
                                   const std::vector<CheckLine>& checks);

std::string checks_json(const std::string& command, const RepParams& params,
                        const std::vector<CheckLine>& checks);

/// CSV table with one row per q value of a limit sequence.
std::string limits_csv(const std::vector<double>& qs, const std::vector<double>& errors);

const char* to_string(OpKind k);
const char* to_string(Relation r);
bool parse_op_kind(const std::string& s, OpKind& out);
bool parse_relation(const std::string& s, Relation& out);

/// Write via a temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qsu11

#endif
