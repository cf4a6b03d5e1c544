#pragma once
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace parabtk {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CliOptions {
    std::optional<json> input;            // parsed document, when --input was given
    std::string weights;                  // "democratic:p/q", overrides document weights
    std::optional<FieldConfig> field;     // overrides the document field
    uint64_t seed = 20240601;
    std::vector<int> at;                  // elm points
    bool named = false;                   // elm keeps the degree
    std::string shape;                    // walls / flat-locus / classify hint
    std::string strategy = "lp";          // find-weights: lp | constructive
};

const std::vector<std::string>& command_names();

// structured report; throws UsageError or InputError
json run_command(const std::string& cmd, const CliOptions& opt);

// aligned text rendering of a report
std::string render_table(const json& report);

}  // namespace parabtk
