#pragma once

// JSON configuration for the command-line front end. Every key has an
// explicit default (see default_config()); user documents are merged over
// the defaults and unknown keys are rejected.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clmm/analytics.hpp"
#include "clmm/mc.hpp"
#include "clmm/reconstruction.hpp"
#include "clmm/simulate.hpp"

namespace clmm::cli {

// Bad configuration: maps onto exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

using Json = nlohmann::json;

Json default_config();

// Merges `user` over the defaults. Throws ConfigError on unknown keys.
Json merge_config(const Json& user);

// Reads and merges a config file; an empty path yields the defaults.
Json load_config(const std::string& path);

Numeraire parse_numeraire(const std::string& name);

struct ReconstructSettings {
    RatioConvention convention = RatioConvention::Token1Share;
    double tolerance = 1e-9;
};

struct Settings {
    std::string out_dir;
    std::uint64_t seed = 42;
    Scenario scenario;
    AnalysisOptions analysis;
    std::vector<double> capital_buckets;
    ReconstructSettings reconstruct;
    McSpec mc;
};

// Interprets a merged config. `need_path` loads or generates the scenario
// price path (simulate only). Throws ConfigError.
Settings interpret(const Json& config, bool need_path);

}  // namespace clmm::cli
