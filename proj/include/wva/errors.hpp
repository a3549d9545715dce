#pragma once

#include <stdexcept>
#include <string>

namespace wva {

// Single exception type for the whole library. The kind separates user-input
// problems (parameter, format) from runtime numerical conditions; the CLI maps
// the former to exit code 2 and the latter to exit code 3.
class Error : public std::runtime_error {
public:
    enum class Kind {
        parameter,          // invalid argument or model parameter
        format,             // malformed input file or table
        singularity,        // evaluation too close to cos(2C) = 0
        regime,             // first-order approximation preconditions violated
        degenerate_signal,  // normalizer vanishes (e.g. difference signal identically zero)
        numerical,          // step selection or other numeric procedure failed
        feasibility,        // intensity budget unreachable for a scheme
    };

    Error(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

    Kind kind() const { return kind_; }

    static Error parameter(const std::string& msg) { return {Kind::parameter, msg}; }
    static Error format(const std::string& msg) { return {Kind::format, msg}; }
    static Error singularity(const std::string& msg) { return {Kind::singularity, msg}; }
    static Error regime(const std::string& msg) { return {Kind::regime, msg}; }
    static Error degenerate_signal(const std::string& msg) { return {Kind::degenerate_signal, msg}; }
    static Error numerical(const std::string& msg) { return {Kind::numerical, msg}; }
    static Error feasibility(const std::string& msg) { return {Kind::feasibility, msg}; }

private:
    Kind kind_;
};

}  // namespace wva
