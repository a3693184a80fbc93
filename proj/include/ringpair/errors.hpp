#pragma once

#include <stdexcept>
#include <string>

namespace ringpair {

// Invalid device/run configuration (bad geometry, schema violations, ...).
// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// No valid pump/signal/idler assignment exists.
class selection_error : public std::runtime_error {
public:
    explicit selection_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Least-squares fit cannot be performed (degenerate observations).
class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ringpair
