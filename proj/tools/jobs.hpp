#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "document.hpp"

namespace ellgw::app {

/// A request that cannot be carried out as configured (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JobConfig {
    std::string command;  // stationary | potential | verify | selftest
    std::string suite;    // verify only
    std::optional<StationaryProfile> profile;
    std::optional<int> genus;
    std::optional<int> level;  // operator index k
    std::string op = "all";    // Ltilde | D | Dbar | all
    bool quasimodular = false;
    bool extended = false;  // selftest: add the genus-3 spot checks
    int q_order = 6;
    int max_degree = 5;
    int max_level = 4;
    int jet_order = 6;
    int eps_order = 4;  // highest power of eps in the Miura check (genus <= eps_order / 2)
    int b_max = 2;
    int n_max = 3;
    std::string format = "json";
    std::string output;
    bool timing = false;
    bool use_cache = true;
    std::filesystem::path cache_dir;

    PotentialTruncation potential_truncation() const { return {max_degree, max_level, q_order}; }
};

/// "2,1,0" -> {2, 1, 0}; "" -> {}.
StationaryProfile parse_profile(const std::string& text);

/// Throws ConfigError when a field is out of range.
void validate(const JobConfig& cfg);

/// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// $ELLGW_CACHE_DIR, else ~/.cache/ellgw.
std::filesystem::path default_cache_dir();

struct JobOutcome {
    ResultDocument document;
    bool passed = true;  // false when a verification check failed
};

JobOutcome run_job(const JobConfig& cfg);

/// Write `text` to `path` through a temporary file and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& text);

} // namespace ellgw::app
