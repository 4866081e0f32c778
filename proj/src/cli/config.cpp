#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "invsq/cli.hpp"
#include "invsq/errors.hpp"

namespace invsq::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Keys that replace each other: setting one on the command line drops the
// others from the config file.
const std::vector<std::set<std::string>> kExclusiveGroups = {
    {"g", "nu"},
    {"R", "R-log"},
};

const std::set<std::string> kKnownKeys = {
    "scheme", "nu",    "g",     "c",       "r0",      "R",    "R-log",  "method", "out",
    "format", "meta",  "n-steps", "kind",  "r-min",   "r-max", "samples", "spacing",
};

} // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config file '" + path + "'");
    }
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key)) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        entries[key] = value;
    }
    return entries;
}

std::vector<std::string> config_to_args(const std::map<std::string, std::string>& entries,
                                        const std::vector<std::string>& cli_args) {
    std::set<std::string> given;
    for (const std::string& a : cli_args) {
        if (a.rfind("--", 0) == 0) {
            given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos
                                                                       : a.find('=') - 2));
        }
    }
    auto overridden = [&](const std::string& key) {
        if (given.count(key)) {
            return true;
        }
        for (const auto& group : kExclusiveGroups) {
            if (group.count(key)) {
                for (const auto& other : group) {
                    if (given.count(other)) {
                        return true;
                    }
                }
            }
        }
        return false;
    };
    std::vector<std::string> args;
    for (const auto& [key, value] : entries) {
        if (overridden(key)) {
            continue;
        }
        if (key == "meta") {
            if (value == "true" || value == "1" || value == "yes") {
                args.push_back("--meta");
            }
            continue;
        }
        args.push_back("--" + key);
        std::istringstream words(value);
        std::string w;
        while (words >> w) {
            args.push_back(w);
        }
    }
    return args;
}

std::vector<double> resolve_cutoffs(const RunConfig& config) {
    if (config.R_log) {
        const LogRange& r = *config.R_log;
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(r.points));
        const double a = std::log10(r.min);
        const double b = std::log10(r.max);
        for (int i = 0; i < r.points; ++i) {
            out.push_back(i + 1 == r.points ? r.max
                                            : std::pow(10.0, a + (b - a) * i / (r.points - 1)));
        }
        out.front() = r.min;
        return out;
    }
    return config.R_values;
}

void validate(const RunConfig& config) {
    if (config.g.has_value() == config.nu.has_value()) {
        throw UsageError("give exactly one of --g or --nu");
    }
    (void)coupling_of(config);
    if (!(config.r0 > 0.0) || !std::isfinite(config.r0)) {
        throw UsageError("--r0 must be positive");
    }
    if (config.R_log) {
        const LogRange& r = *config.R_log;
        if (!(r.min > 0.0 && r.min < r.max && std::isfinite(r.max))) {
            throw UsageError("--R-log needs 0 < min < max");
        }
        if (r.points < 2) {
            throw UsageError("--R-log needs at least 2 points");
        }
    }
    if (!config.R_values.empty() && config.R_log) {
        throw UsageError("give either --R or --R-log, not both");
    }
    for (double R : config.R_values) {
        if (!(R > 0.0) || !std::isfinite(R)) {
            throw UsageError("--R values must be positive");
        }
    }
    if (config.n_steps < 10000) {
        throw UsageError("--n-steps must be at least 10000");
    }
    if (config.samples < 2) {
        throw UsageError("--samples must be at least 2");
    }
}

Coupling coupling_of(const RunConfig& config) {
    if (config.g) {
        return Coupling::from_g(*config.g);
    }
    if (config.nu) {
        return Coupling::from_nu(*config.nu);
    }
    throw UsageError("give exactly one of --g or --nu");
}

} // namespace invsq::cli
