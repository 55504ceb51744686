#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsm/pipeline_doc.hpp"

using namespace nsm;

namespace {

const char* kReversalDoc =
    "# qubit scaling reversal\n"
    "input amplitudes 1 0.5\n"
    "step reversal lambda-dd=0.7 lambda=0.49 lambda-prime=0.7 n-tilde=1\n";

}  // namespace

TEST_CASE("parse and run the reversal example") {
    const PipelineDocument doc = PipelineDocument::parse(kReversalDoc);
    CHECK(doc.steps.size() == 2);  // reversal expands to two stages
    CHECK(doc.detector == "ideal");

    const PipelineResult result = run_pipeline(doc.input, doc.steps);
    CHECK(result.net_probability ==
          doctest::Approx(0.005931970324875).epsilon(1e-10));

    const RunReport rep = RunReport::from_result(result);
    CHECK(rep.net_probability == result.net_probability);
    CHECK(rep.stages.size() == result.stages.size());
    // normalized output amplitudes proportional to (1, 2)
    REQUIRE(rep.output.size() == 2);
    CHECK(std::abs(rep.output[1].second / rep.output[0].second - Amp{2, 0}) <
          1e-10);
}

TEST_CASE("no steps leaves the input untouched") {
    const PipelineDocument doc =
        PipelineDocument::parse("input amplitudes 0.6 0.8\n");
    const PipelineResult result = run_pipeline(doc.input, doc.steps);
    CHECK(result.net_probability == doctest::Approx(1.0));
    CHECK(result.stages.empty());
    CHECK(result.output.amplitude({0}).real() == doctest::Approx(0.6));
    CHECK(result.output.amplitude({1}).real() == doctest::Approx(0.8));
}

TEST_CASE("options and resources parse") {
    const PipelineDocument doc = PipelineDocument::parse(
        "input resource squeezed-vacuum 0.5\n"
        "option tail-eps 1e-10\n"
        "option tol 1e-9\n"
        "option seed 7\n"
        "option detector ideal\n"
        "step scissors n=2\n");
    CHECK(doc.tail_epsilon == doctest::Approx(1e-10));
    CHECK(doc.tolerance == doctest::Approx(1e-9));
    CHECK(doc.seed == 7);
    CHECK(doc.input.mode_count() == 2);

    const PipelineDocument custom = PipelineDocument::parse(
        "input amplitudes 1\n"
        "step custom-epr kind=sum profile=0.707106781186547,0,0.707106781186548 "
        "n-tilde=2\n");
    REQUIRE(custom.steps.size() == 1);
    CHECK(custom.steps[0].kind == StepKind::CustomEPR);
    CHECK(custom.steps[0].profile.size() == 3);
}

TEST_CASE("parse errors name the line and field") {
    // out-of-range squeeze parameter
    try {
        PipelineDocument::parse(
            "input amplitudes 1 0.5\n"
            "step reversal-scaling lambda=1.2 n-tilde=1\n");
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("lambda") != std::string::npos);
    }

    CHECK_THROWS_AS(PipelineDocument::parse("bogus directive\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(PipelineDocument::parse("input amplitudes 1\n"
                                            "step warp n=1\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(PipelineDocument::parse("input amplitudes 1\n"
                                            "step scissors n=1 volume=11\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(PipelineDocument::parse("step scissors n=1\n"),
                    std::invalid_argument);  // no input
}

TEST_CASE("formatting is deterministic and round-trips") {
    const PipelineDocument doc = PipelineDocument::parse(kReversalDoc);
    const RunReport rep =
        RunReport::from_result(run_pipeline(doc.input, doc.steps));

    CHECK(rep.format("csv") == rep.format_csv());
    CHECK(rep.format("json") == rep.format_json());
    CHECK(rep.format("table") == rep.format_table());
    CHECK_THROWS_AS(rep.format("yaml"), std::invalid_argument);

    // identical bytes on repeat calls
    CHECK(rep.format_csv() == rep.format_csv());
    CHECK(rep.format_json() == rep.format_json());

    // precision 17 survives a text round trip
    const std::string csv = rep.format_csv();
    const size_t pos = csv.find("\nnet,,");
    REQUIRE(pos != std::string::npos);
    const double back = std::stod(csv.substr(pos + 6));
    CHECK(back == rep.net_probability);
}
