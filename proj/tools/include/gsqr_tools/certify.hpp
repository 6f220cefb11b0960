#pragma once

#include "gsqr_tools/document.hpp"

#include <string>
#include <vector>

namespace gsqr::tools {

struct CertifyFinding {
    std::size_t node = 0;
    std::string check;  // "kkt", "norm", "residual" or "slope"
    double magnitude = 0.0;
    std::string detail;
};

struct CertifyReport {
    bool ok = true;
    std::size_t checks = 0;
    std::vector<CertifyFinding> failures;

    /// The failure with the largest magnitude; undefined when ok.
    const CertifyFinding& worst() const;
};

/**
 * Re-checks a stored path against its own data: optimality at every node's
 * lambda endpoints and midpoint, mixed_norm(beta) = R, stored residuals, and
 * loss slope -lambda on every segment. All comparisons use the absolute
 * tolerance tol.
 */
CertifyReport certify_document(const PathDocument& doc, double tol);

}  // namespace gsqr::tools
