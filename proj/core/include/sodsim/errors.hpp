#ifndef SODSIM_ERRORS_HPP
#define SODSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sodsim {

// Configuration / user input problems. CLI maps these to exit code 1.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// A runtime invariant of the simulation was violated. These are bugs,
// not user errors; CLI maps them to exit code 2.
class SimInvariantError : public std::logic_error {
public:
    explicit SimInvariantError(const std::string& what) : std::logic_error(what) {}
};

// Requested a directed link between nodes that are not within radio range.
class OutOfRangeError : public std::domain_error {
public:
    explicit OutOfRangeError(const std::string& what) : std::domain_error(what) {}
};

} // namespace sodsim

#endif
