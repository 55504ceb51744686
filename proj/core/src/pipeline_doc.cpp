#include "nsm/pipeline_doc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace nsm {

namespace {

[[noreturn]] void fail(int lineno, const std::string& what) {
    throw std::invalid_argument("pipeline: line " + std::to_string(lineno) +
                                ": " + what);
}

double parse_double(const std::string& s, int lineno, const std::string& key) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(lineno, "field '" + key + "': expected a number, got '" + s + "'");
    }
    if (used != s.size())
        fail(lineno, "field '" + key + "': trailing junk in '" + s + "'");
    return v;
}

int parse_int(const std::string& s, int lineno, const std::string& key) {
    const double v = parse_double(s, lineno, key);
    const int i = static_cast<int>(std::lround(v));
    if (std::abs(v - i) > 0.0)
        fail(lineno, "field '" + key + "': expected an integer");
    return i;
}

double parse_lambda(const std::string& s, int lineno, const std::string& key) {
    const double v = parse_double(s, lineno, key);
    if (v < 0.0 || v >= 1.0)
        fail(lineno, "field '" + key + "': squeezing parameter must lie in "
                     "[0, 1)");
    return v;
}

using KeyMap = std::map<std::string, std::string>;

KeyMap parse_keys(std::istringstream& ls, int lineno) {
    KeyMap keys;
    std::string tok;
    while (ls >> tok) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size())
            fail(lineno, "expected key=value, got '" + tok + "'");
        keys[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return keys;
}

class Keys {
public:
    Keys(KeyMap m, int lineno) : m_(std::move(m)), lineno_(lineno) {}

    std::string require(const std::string& key) {
        auto it = m_.find(key);
        if (it == m_.end()) fail(lineno_, "missing field '" + key + "'");
        used_.insert(used_.end(), key);
        return it->second;
    }
    std::optional<std::string> get(const std::string& key) {
        auto it = m_.find(key);
        if (it == m_.end()) return std::nullopt;
        used_.insert(used_.end(), key);
        return it->second;
    }
    void finish() const {
        for (const auto& [k, v] : m_)
            if (std::find(used_.begin(), used_.end(), k) == used_.end())
                fail(lineno_, "unknown field '" + k + "'");
    }
    int lineno() const { return lineno_; }

private:
    KeyMap m_;
    int lineno_;
    std::vector<std::string> used_;
};

ManipulationStep parse_basic_step(const std::string& kind, Keys& k) {
    const int ln = k.lineno();
    if (kind == "reversal-scaling" || kind == "reversal-derivative") {
        const double lambda = parse_lambda(k.require("lambda"), ln, "lambda");
        const int nt = parse_int(k.require("n-tilde"), ln, "n-tilde");
        double p = default_detector_success(nt);
        if (auto v = k.get("p")) p = parse_double(*v, ln, "p");
        return kind == "reversal-scaling"
                   ? ManipulationStep::reversal_scaling(lambda, nt, p)
                   : ManipulationStep::reversal_derivative(lambda, nt, p);
    }
    if (kind == "number-shift" || kind == "scaling") {
        const int n = parse_int(k.require("n"), ln, "n");
        ManipulationStep s;
        if (kind == "number-shift") {
            const int nt = parse_int(k.require("n-tilde"), ln, "n-tilde");
            s = ManipulationStep::number_shift(n, nt);
        } else {
            const double r = parse_double(k.require("r"), ln, "r");
            s = ManipulationStep::scaling(n, r);
        }
        s.detector_success = default_detector_success(s.n_tilde);
        if (auto v = k.get("p"))
            s.detector_success = parse_double(*v, ln, "p");
        const auto l = k.get("lambda");
        const auto lp = k.get("lambda-prime");
        if (l.has_value() != lp.has_value())
            fail(ln, "lambda and lambda-prime must be supplied together");
        if (l) {
            s.with_squeeze(parse_lambda(*l, ln, "lambda"),
                           parse_lambda(*lp, ln, "lambda-prime"));
            s.prep_detector_success = default_detector_success(s.n);
        }
        if (auto v = k.get("prep-p"))
            s.prep_detector_success = parse_double(*v, ln, "prep-p");
        return s;
    }
    if (kind == "custom-epr") {
        const std::string kindstr = k.require("kind");
        EprKind ek;
        if (kindstr == "sum")
            ek = EprKind::NumberSum;
        else if (kindstr == "difference")
            ek = EprKind::NumberDifference;
        else
            fail(ln, "field 'kind': expected sum or difference");
        std::vector<Amp> profile;
        std::istringstream ps(k.require("profile"));
        std::string item;
        while (std::getline(ps, item, ','))
            profile.emplace_back(parse_double(item, ln, "profile"), 0.0);
        const int nt = parse_int(k.require("n-tilde"), ln, "n-tilde");
        double p = default_detector_success(nt);
        if (auto v = k.get("p")) p = parse_double(*v, ln, "p");
        return ManipulationStep::custom_epr_step(ek, std::move(profile), nt, p);
    }
    fail(ln, "unknown step kind '" + kind + "'");
}

std::vector<ManipulationStep> parse_step(const std::string& kind, Keys& k) {
    const int ln = k.lineno();
    auto opt_p = [&](const char* key, int n_tilde) {
        double p = default_detector_success(n_tilde);
        if (auto v = k.get(key)) p = parse_double(*v, ln, key);
        return p;
    };
    if (kind == "reversal") {
        const double ldd = parse_lambda(k.require("lambda-dd"), ln, "lambda-dd");
        const double l = parse_lambda(k.require("lambda"), ln, "lambda");
        const double lp =
            parse_lambda(k.require("lambda-prime"), ln, "lambda-prime");
        const int nt = parse_int(k.require("n-tilde"), ln, "n-tilde");
        return reversal_pipeline(ldd, l, lp, nt, opt_p("p", nt));
    }
    if (kind == "scissors") {
        const int n = parse_int(k.require("n"), ln, "n");
        return scissors(n, opt_p("p", n));
    }
    if (kind == "two-sided-scissors") {
        const int n1 = parse_int(k.require("n1"), ln, "n1");
        const int n2 = parse_int(k.require("n2"), ln, "n2");
        return two_sided_scissors(n1, n2, opt_p("p", n2),
                                  opt_p("p2", n2 - n1));
    }
    if (kind == "extractor") {
        const int n = parse_int(k.require("n"), ln, "n");
        return extractor(n, opt_p("p", n));
    }
    if (kind == "n-photon-source") {
        const int n = parse_int(k.require("n"), ln, "n");
        const double l = parse_lambda(k.require("lambda"), ln, "lambda");
        return n_photon_source(n, l, opt_p("prep-p", n));
    }
    if (kind == "differentiate") {
        const double l = parse_lambda(k.require("lambda"), ln, "lambda");
        const int nt = parse_int(k.require("n-tilde"), ln, "n-tilde");
        return differentiate(l, nt, opt_p("p", nt));
    }
    if (kind == "truncated-maximal-epr") {
        const int n = parse_int(k.require("n"), ln, "n");
        const double l = parse_lambda(k.require("lambda"), ln, "lambda");
        const double lp =
            parse_lambda(k.require("lambda-prime"), ln, "lambda-prime");
        const double ldd =
            parse_lambda(k.require("lambda-dd"), ln, "lambda-dd");
        return truncated_maximal_epr(n, l, lp, ldd, opt_p("p", n));
    }
    if (kind == "filter") {
        const int n1 = parse_int(k.require("n1"), ln, "n1");
        const int n = parse_int(k.require("n"), ln, "n");
        return filter(n1, n, opt_p("p", n));
    }
    return {parse_basic_step(kind, k)};
}

}  // namespace

PipelineDocument PipelineDocument::parse(const std::string& text) {
    std::optional<PureState> input;
    std::vector<ManipulationStep> steps;
    double tail_eps = kDefaultTailEps;
    double tol = 1e-10;
    unsigned seed = 0;
    std::string detector = "ideal";

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream ls(line);
        std::string directive;
        ls >> directive;
        if (directive == "input") {
            std::string what;
            ls >> what;
            if (what == "amplitudes") {
                std::vector<std::pair<Pattern, Amp>> terms;
                double a;
                int idx = 0;
                while (ls >> a) terms.push_back({{idx++}, Amp{a, 0.0}});
                if (terms.empty()) fail(lineno, "empty amplitude list");
                input = normalized_superpose(terms);
            } else if (what == "resource") {
                std::string name, arg;
                ls >> name >> arg;
                if (name == "squeezed-vacuum")
                    input = squeezed_vacuum(
                        parse_lambda(arg, lineno, "lambda"), tail_eps);
                else if (name == "photon-subtracted")
                    input = photon_subtracted(
                        parse_lambda(arg, lineno, "lambda"), tail_eps);
                else
                    fail(lineno, "unknown input resource '" + name + "'");
            } else {
                fail(lineno, "expected 'amplitudes' or 'resource'");
            }
        } else if (directive == "option") {
            std::string key, val;
            ls >> key >> val;
            if (key == "tail-eps")
                tail_eps = parse_double(val, lineno, key);
            else if (key == "tol")
                tol = parse_double(val, lineno, key);
            else if (key == "seed")
                seed = static_cast<unsigned>(parse_int(val, lineno, key));
            else if (key == "detector")
                detector = val;
            else
                fail(lineno, "unknown option '" + key + "'");
        } else if (directive == "step") {
            std::string kind;
            ls >> kind;
            Keys keys(parse_keys(ls, lineno), lineno);
            for (auto& s : parse_step(kind, keys)) {
                s.tail_epsilon = tail_eps;
                steps.push_back(std::move(s));
            }
            keys.finish();
        } else {
            fail(lineno, "unknown directive '" + directive + "'");
        }
    }
    if (!input) throw std::invalid_argument("pipeline: no input given");
    return PipelineDocument{std::move(*input), std::move(steps), tail_eps,
                            tol, seed, std::move(detector)};
}

RunReport RunReport::from_result(const PipelineResult& result) {
    RunReport rep;
    for (const auto& [pattern, amp] : result.output.terms())
        rep.output.push_back({pattern, amp});
    rep.stages = result.stages;
    rep.net_probability = result.net_probability;
    return rep;
}

std::string RunReport::format_table() const {
    std::ostringstream os;
    os.precision(12);
    os << "output state:\n";
    for (const auto& [pattern, amp] : output) {
        os << "  |";
        for (size_t k = 0; k < pattern.size(); ++k)
            os << (k ? "," : "") << pattern[k];
        os << ">  " << amp.real() << (amp.imag() < 0 ? " - " : " + ")
           << std::abs(amp.imag()) << "i\n";
    }
    os << "stages:\n";
    for (const auto& s : stages)
        os << "  " << s.label << "  " << s.probability << '\n';
    os << "net probability: " << net_probability << '\n';
    return os.str();
}

std::string RunReport::format_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "row,key,value_re,value_im\n";
    for (const auto& [pattern, amp] : output) {
        os << "output,";
        for (size_t k = 0; k < pattern.size(); ++k)
            os << (k ? " " : "") << pattern[k];
        os << ',' << amp.real() << ',' << amp.imag() << '\n';
    }
    for (const auto& s : stages)
        os << "stage," << s.label << ',' << s.probability << ",0\n";
    os << "net,," << net_probability << ",0\n";
    return os.str();
}

std::string RunReport::format_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"output\": [\n";
    for (size_t i = 0; i < output.size(); ++i) {
        const auto& [pattern, amp] = output[i];
        os << "    {\"pattern\": [";
        for (size_t k = 0; k < pattern.size(); ++k)
            os << (k ? ", " : "") << pattern[k];
        os << "], \"re\": " << amp.real() << ", \"im\": " << amp.imag()
           << "}" << (i + 1 < output.size() ? "," : "") << '\n';
    }
    os << "  ],\n  \"stages\": [\n";
    for (size_t i = 0; i < stages.size(); ++i)
        os << "    {\"label\": \"" << stages[i].label
           << "\", \"probability\": " << stages[i].probability << "}"
           << (i + 1 < stages.size() ? "," : "") << '\n';
    os << "  ],\n  \"net_probability\": " << net_probability << "\n}\n";
    return os.str();
}

std::string RunReport::format(const std::string& kind) const {
    if (kind == "table") return format_table();
    if (kind == "csv") return format_csv();
    if (kind == "json") return format_json();
    throw std::invalid_argument("RunReport::format: unknown format '" + kind +
                                "'");
}

}  // namespace nsm
