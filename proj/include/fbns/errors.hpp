#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbns {

// Base class for anything the solver can throw while a run is in flight.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Specific volume fell below the configured floor.
class VacuumApproach : public SolverError {
public:
    VacuumApproach(double xi_min, double t)
        : SolverError("specific volume " + std::to_string(xi_min) +
                      " below floor at t=" + std::to_string(t)),
          xi_min(xi_min), t(t) {}
    // Point evaluation outside any trajectory; no time to report.
    explicit VacuumApproach(double xi_min)
        : SolverError("specific volume " + std::to_string(xi_min) + " below floor"),
          xi_min(xi_min), t(std::numeric_limits<double>::quiet_NaN()) {}
    double xi_min;
    double t;
};

// Adaptive step control could not meet its tolerance (boundary ODE).
class StiffnessFailure : public SolverError {
public:
    explicit StiffnessFailure(const std::string& what) : SolverError(what) {}
};

// Step size shrank below the representable floor.
class StepSizeUnderflow : public SolverError {
public:
    explicit StepSizeUnderflow(const std::string& what) : SolverError(what) {}
};

// Lagrangian-to-Eulerian map lost strict monotonicity.
class NonMonotoneMap : public SolverError {
public:
    explicit NonMonotoneMap(const std::string& what) : SolverError(what) {}
};

// Initial data failed a structural check.
class InvalidInitialData : public std::runtime_error {
public:
    explicit InvalidInitialData(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations(std::move(violations)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid initial data:";
        for (const auto& e : v) s += " [" + e + "]";
        return s;
    }
};

// A runtime invariant marked "hard" was violated on an accepted step.
class MonitorViolation : public SolverError {
public:
    MonitorViolation(std::string monitor, double magnitude, double t)
        : SolverError("monitor '" + monitor + "' violated at t=" + std::to_string(t) +
                      ", magnitude " + std::to_string(magnitude)),
          monitor(std::move(monitor)), magnitude(magnitude), t(t) {}
    std::string monitor;
    double magnitude;
    double t;
};

// Bad configuration file or parameter set; names the violated assumption.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fbns
