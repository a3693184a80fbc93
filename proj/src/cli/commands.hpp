#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"

namespace ringpair {
namespace cli {

struct CommandOptions {
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    bool quiet = false;
};

// Each command writes its CSV/JSON artifacts under out_dir and returns 0.
// Configuration problems raise config_error; runtime failures raise other
// exceptions. The CLI front end maps these to exit codes 2 and 3.
int cmd_spectrum(const RunConfig& config, const CommandOptions& options);
int cmd_figures(const RunConfig& config, const CommandOptions& options);
int cmd_coinc(const RunConfig& config, const CommandOptions& options);
int cmd_tune(const RunConfig& config, const CommandOptions& options);

} // namespace cli
} // namespace ringpair
