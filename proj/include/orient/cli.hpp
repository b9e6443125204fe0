#pragma once

// Run configuration and command dispatch for the `orient` binary.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace orient::cli {

struct RunConfig {
  std::string command;     // simulate, spectrum, bispectrum, invert, match, contrast, mc-validate, asym-check
  std::string subcommand;  // match: build; contrast: run | scan

  struct Params {
    double nu = 1.0;
    double m = 0.5;
    double theta = 1.0;
    std::string kernel = "exp:1";
  } params;

  struct Io {
    std::string out_dir = "orient_out";
    std::string format = "csv";
    std::string events;
    std::string out;
    std::optional<double> window_end;
  } io;

  struct Grid {
    double T = 1000.0;
    double pad_tol = 1e-6;
    double w_max = 10.0;
    int n_w = 64;
    std::string kind = "fac";  // comp | fac
    std::string form = "R";    // R | Q
    double lambda = 40.0;
    int n = 512;
    double H = 2.0;
    double t_min = 1e-4;
    double t_max = 1e-1;
    int n_t = 4;
    double rho_spacing = 0.05;
  } grid;

  struct Contrast {
    std::string g = "bump";  // bump | quadrant
    std::vector<double> thetas{-1.0, 0.0, 1.0};
    int reps = 100;
    bool exact = true;
  } contrast;

  struct Mc {
    std::string suite = "bartlett";
    std::string level = "quick";
  } mc;

  std::uint64_t seed = 1;
  int threads = 0;
};

nlohmann::json to_json(const RunConfig& c);

// Every violation as "field.path: message"; empty when valid.
std::vector<std::string> validate(const RunConfig& c);

// Accepts a bare config or a run manifest (uses its "config" member).
// Throws ConfigError listing all violations.
RunConfig parse_config(const nlohmann::json& j);

// Command line; `--config file.json` seeds the config and explicit flags
// override it. Throws ConfigError. Returns nullopt after --help.
std::optional<RunConfig> parse_args(int argc, char** argv);

// 0 success, 1 numerical validation failure, 2 configuration error.
int run(const RunConfig& c);

int main_entry(int argc, char** argv);

}  // namespace orient::cli
