#pragma once

#include <string>

#include "nsm/teleport.hpp"

namespace nsm {

// Plain-text pipeline description. Grammar (one directive per line,
// '#' starts a comment):
//
//   input amplitudes <a0> <a1> ...        photon-number amplitudes (real)
//   input resource squeezed-vacuum <lambda>
//   option tail-eps <x> | option seed <n> | option tol <x>
//   option detector <ideal | path-to-design-file>
//   step <kind> key=value ...
//
// Step kinds and their keys:
//   reversal-scaling      lambda=, n-tilde=, [p=]
//   reversal-derivative   lambda=, n-tilde=, [p=]
//   number-shift          n=, n-tilde=, [p=, prep-p=, lambda=, lambda-prime=]
//   scaling               n=, r=, [p=, prep-p=, lambda=, lambda-prime=]
//   custom-epr            kind=sum|difference, profile=a,b,c, n-tilde=, [p=]
//   reversal              lambda-dd=, lambda=, lambda-prime=, n-tilde=, [p=]
//   scissors              n=, [p=]
//   two-sided-scissors    n1=, n2=, [p=, p2=]
//   extractor             n=, [p=]
//   n-photon-source       n=, lambda=, [prep-p=]
//   differentiate         lambda=, n-tilde=, [p=]
//   truncated-maximal-epr n=, lambda=, lambda-prime=, lambda-dd=, [p=]
//   filter                n1=, n=, [p=]
//
// When p / prep-p are omitted they default to the declared detector
// success for the measured number sum. Supplying lambda and
// lambda-prime on shift/scaling attaches the preparation probability.
struct PipelineDocument {
    PureState input;
    std::vector<ManipulationStep> steps;
    double tail_epsilon = kDefaultTailEps;
    double tolerance = 1e-10;
    unsigned seed = 0;
    std::string detector = "ideal";

    static PipelineDocument parse(const std::string& text);
};

struct RunReport {
    std::vector<std::pair<Pattern, Amp>> output;  // normalized amplitudes
    std::vector<StageRecord> stages;
    double net_probability = 1.0;

    static RunReport from_result(const PipelineResult& result);

    std::string format_table() const;
    std::string format_csv() const;
    std::string format_json() const;
    std::string format(const std::string& kind) const;  // table|csv|json
};

}  // namespace nsm
