#pragma once

#include <stdexcept>
#include <string>

namespace lasym {

// Exit-code contract used by the CLI: 0 success, 2 configuration,
// 3 no contraction certificate, 4 divergence, 1 any other failure.
enum class ExitCode : int {
    ok = 0,
    numerical = 1,
    config = 2,
    no_certificate = 3,
    divergence = 4,
};

struct Error : std::runtime_error {
    explicit Error(const std::string& what, ExitCode code = ExitCode::numerical)
        : std::runtime_error(what), exit_code(code) {}
    ExitCode exit_code;
};

/// Invalid parameters or configuration (bad grid spec, A <= 1, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what, ExitCode::config) {}
};

/// Evaluation at a point outside an evaluator's domain (e.g. x = 0 for a
/// point-singular field).
struct SingularityError : Error {
    explicit SingularityError(const std::string& what) : Error(what) {}
};

/// Root finding or iteration failed to converge.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

/// The measured (eps, c, ||y||) triple does not admit contraction roots.
struct NoCertificateError : Error {
    NoCertificateError(const std::string& what, double eps, double c, double y_norm)
        : Error(what, ExitCode::no_certificate), eps_hat(eps), c_hat(c), y_norm(y_norm) {}
    double eps_hat;
    double c_hat;
    double y_norm;
};

/// Picard iterate escaped the uniqueness ball.
struct DivergenceError : Error {
    explicit DivergenceError(const std::string& what) : Error(what, ExitCode::divergence) {}
};

/// Compatibility datum violated (nonzero mean where a zero mean is required).
struct ZeroMeanError : Error {
    explicit ZeroMeanError(const std::string& what) : Error(what) {}
};

}  // namespace lasym
