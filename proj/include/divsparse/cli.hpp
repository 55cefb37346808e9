#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "divsparse/domains.hpp"
#include "divsparse/solvers.hpp"

namespace divsparse {

/// Malformed instance text; the message starts with "line N:".
class ParseError : public UsageError {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

DomainInstance parse_instance(const std::string& text);

enum class Command { solve, sparsify, enumerate, verify };
enum class Mode { automatic, small, limited };

Command parse_command(const std::string& name);
Mode parse_mode(const std::string& name);

struct RunConfig {
    Command command = Command::solve;
    std::optional<Problem> problem;
    std::size_t k = 1;
    std::size_t d = 0;
    bool modified = false;
    std::uint64_t seed = 0;
    double epsilon = 0.01;
    std::optional<std::size_t> p;
    std::optional<std::size_t> trials;
    Mode mode = Mode::automatic;
};

/// Mode actually used for an instance: auto picks small when the domain
/// declares a size bound.
Mode resolve_mode(Mode requested, const DomainInstance& instance);

/// Runs one command and writes its report to `out`. Returns the process exit
/// code: 0 on success (NO answers included), 2 on usage errors, 3 when a
/// guard is exceeded. Error messages go to `err`.
int run(const RunConfig& config, const DomainInstance& instance, std::ostream& out,
        std::ostream& err);

/// Parses `text` and runs; parse errors yield exit code 2.
int run_text(const RunConfig& config, const std::string& text, std::ostream& out,
             std::ostream& err);

}  // namespace divsparse
