#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace weyl::cli {

// Global run configuration; config-file values are overridden by flags.
struct RunConfig {
  char family = 'A';
  int rank = 2;
  double c = 0;  // 0 = per-system default
  double q_res = 8;
  std::uint64_t weyl_cap = 1'000'000;
  std::size_t node_budget = 50'000'000;
  std::uint64_t seed = 0x5EED;
  std::string format = "json";  // json | csv
  std::string out;              // empty = stdout
  int workers = 1;
};

// exit codes
inline constexpr int kOk = 0;
inline constexpr int kVerifyFail = 1;
inline constexpr int kUsage = 2;
inline constexpr int kResource = 3;

void load_config_file(const std::string& path, RunConfig& cfg);
void validate(const RunConfig& cfg);

// Output goes to cfg.out when set, else to `fallback`; writing happens only
// after the whole report was produced, so failures leave no partial files.
void emit(const RunConfig& cfg, const std::string& text, std::ostream& fallback);

int cmd_roots(const RunConfig& cfg, std::ostream& os);
int cmd_peel(const RunConfig& cfg, bool csv_table, std::ostream& os);
int cmd_exponents(const RunConfig& cfg, std::ostream& os);
int cmd_char(const RunConfig& cfg, int N, const std::vector<std::string>& mu_fund,
             const std::string& points_csv, std::ostream& os);
int cmd_alcove_classify(const RunConfig& cfg, int N, const std::string& points_csv,
                        std::ostream& os);
int cmd_alcove_chart(const RunConfig& cfg, const std::vector<int>& J, std::ostream& os);
int cmd_norm(const RunConfig& cfg, const std::string& mode, const std::vector<int>& J,
             double p, int N, std::ostream& os);
int cmd_scan(const RunConfig& cfg, const std::string& mode, const std::vector<int>& J,
             double p, const std::vector<int>& N_list, std::ostream& os);
int cmd_verify(const RunConfig& cfg, bool inject_corrupt_marks, std::ostream& os);

// Full argv-style entry point used by the binary and by tests.
int run_cli(const std::vector<std::string>& args, std::ostream& os, std::ostream& err);

}  // namespace weyl::cli
