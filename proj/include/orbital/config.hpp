#pragma once
#include <map>
#include <string>
#include <vector>

namespace orbital {

// One configurable parameter of an experiment schema.
struct ParamSpec {
    std::string key;
    std::string type;  // int | real | string | list
    std::string default_value;  // empty + required=true means caller must set it
    bool required = false;
    std::string doc;
};

struct ExperimentSchema {
    std::string name;
    std::string summary;    // what it computes and which statement it probes
    std::vector<ParamSpec> params;
};

const std::vector<ExperimentSchema>& experiment_schemas();
const ExperimentSchema* find_schema(const std::string& name);

// Fully resolved configuration: every schema key present (defaults applied).
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::string> values;

    const std::string& get(const std::string& key) const;
    long long get_int(const std::string& key) const;
    double get_real(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    std::vector<int> get_int_list(const std::string& key) const;
};

struct ConfigError {
    std::string key;
    std::string message;
};

// Parses the key = value document (one dotted key per line, '#' comments).
// All validation errors are collected, not just the first.
ExperimentConfig parse_config(const std::string& text, std::vector<ConfigError>& errors);

// Semantic validation beyond types: ranges and cross-field hypotheses
// (0 < s < 1, W | 2L+1, m >= 1, ...).
void validate_config(const ExperimentConfig& cfg, std::vector<ConfigError>& errors);

std::string describe_experiment(const std::string& name);

}  // namespace orbital
