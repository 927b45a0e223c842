#pragma once

#include <stdexcept>
#include <string>

namespace ousldp {

// Input outside an operation's mathematical domain. The message names the
// violated inequality.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

// Evaluation point within the guard band of a domain boundary, where the
// log singularity of H would poison downstream quadrature.
class boundary_error : public domain_error {
public:
    explicit boundary_error(const std::string& msg) : domain_error(msg) {}
};

// Regime without an expansion or without a CGF route (c = theta explosive,
// c = 0 handled by the exact Gaussian path, ...).
class no_expansion_error : public domain_error {
public:
    explicit no_expansion_error(const std::string& msg) : domain_error(msg) {}
};

// Root finder or quadrature failed to meet its contract.
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ousldp
