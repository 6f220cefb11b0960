#include "gsqr_tools/certify.hpp"

#include "gsqr/errors.hpp"
#include "gsqr/select.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gsqr::tools {

const CertifyFinding& CertifyReport::worst() const {
    return *std::max_element(failures.begin(), failures.end(),
                             [](const CertifyFinding& a, const CertifyFinding& b) { return a.magnitude < b.magnitude; });
}

CertifyReport certify_document(const PathDocument& doc, double tol) {
    if (doc.path.empty()) throw InputError("document has an empty path");
    if (!(tol >= 0.0)) throw InputError("tolerance must be >= 0");
    const QuantileProblem& p = doc.problem();
    const auto& nodes = doc.path.nodes;

    CertifyReport report;
    auto fail = [&](std::size_t t, const char* check, double magnitude, std::string detail) {
        report.ok = false;
        report.failures.push_back({t, check, magnitude, std::move(detail)});
    };

    for (std::size_t t = 0; t < nodes.size(); ++t) {
        const PathNode& node = nodes[t];
        for (double lambda : certification_lambdas(node)) {
            ++report.checks;
            const KktReport kkt = verify_node(node, lambda, p, tol);
            if (!kkt.ok) {
                std::ostringstream os;
                os.precision(17);
                os << "lambda = " << lambda << ": " << kkt.summary();
                fail(t, "kkt", kkt.worst, os.str());
            }
        }

        ++report.checks;
        const double norm_gap = std::abs(mixed_norm(node.beta, p.groups()) - node.R);
        if (norm_gap > tol) fail(t, "norm", norm_gap, "mixed norm of beta differs from R");

        ++report.checks;
        const double r_gap = (node.r - residuals(node.beta, p)).lpNorm<Eigen::Infinity>();
        if (r_gap > tol) fail(t, "residual", r_gap, "stored residuals differ from y - X beta");

        if (t + 1 < nodes.size()) {
            const double dR = nodes[t + 1].R - node.R;
            if (dR > 0.0) {
                ++report.checks;
                const double slope = segment_slope(node, nodes[t + 1], p);
                const double gap = std::abs(slope + node.lambda_lo);
                if (gap > tol) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "segment to node " << t + 1 << ": loss slope " << slope << " but lambda " << node.lambda_lo;
                    fail(t, "slope", gap, os.str());
                }
            }
        }
    }
    return report;
}

}  // namespace gsqr::tools
