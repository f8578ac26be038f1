#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mexp/registry.hpp"
#include "mexp/verdict.hpp"

namespace mexp {

/// Everything a CLI run depends on. `workers` is deliberately not part of the
/// textual form: it never changes results.
struct ExperimentConfig {
    std::string command = "decay";
    std::string system = "rotation";
    Params params;
    int power = 1;
    std::string measure = "lebesgue";
    std::string sampling = "automatic";
    std::optional<Sided> sided;
    std::vector<double> center{0.3};
    double delta = 0.05;
    std::vector<double> delta_grid{0.02, 0.01, 0.005};
    int n_max = 20;
    std::uint64_t samples = 100000;
    int x_probes = 20;
    double threshold = 0.01;
    std::uint64_t seed = 7;
    double cover_radius = 0.1;
    double cover_spacing = 0.05;
    int sequences = 40;
    std::vector<std::string> cases;

    /// Defaults for a subcommand (entropy uses n_max 14 and 30 probes).
    static ExperimentConfig defaults_for(const std::string& command);

    /// Set one field from its textual key and value; throws UsageError.
    /// `param` takes "name=value"; `param.<name>` takes the value.
    void set(const std::string& key, const std::string& value);

    /// "key = value" lines in a fixed order; doubles in shortest round-trip form.
    std::string to_text() const;

    /// Applies every "key = value" line of `text` on top of *this. Blank lines
    /// and lines starting with '#' are ignored.
    void apply_text(const std::string& text);
    static ExperimentConfig from_text(const std::string& text);

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

double parse_double(const std::string& s, const std::string& what);
std::uint64_t parse_u64(const std::string& s, const std::string& what);
int parse_int(const std::string& s, const std::string& what);
std::vector<double> parse_list(const std::string& s, const std::string& what);

}  // namespace mexp
