#include "opspace/cb_estimate.hpp"
#include "opspace/factorization.hpp"
#include "opspace/fock_lab.hpp"
#include "opspace/json_io.hpp"
#include "opspace/report.hpp"
#include "opspace/strip_quotient.hpp"
#include "opspace/subspace_geometry.hpp"
#include "opspace/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace opspace;

namespace {

struct Common {
    std::uint64_t seed = ExperimentConfig{}.seed;
    std::string input;  // empty: stdin for commands that need input, none otherwise
    std::string output = "-";
    std::string format = "json";
    std::vector<std::string> tolerances;
};

void emit_json(const Common& c, const Json& j) { write_text(c.output, j.dump(2) + "\n"); }

int emit_rows(const Common& c, std::vector<CheckRow> rows) {
    std::map<std::string, double> tol;
    for (const auto& t : c.tolerances) tol.insert(parse_tolerance(t));
    apply_tolerances(rows, tol);
    write_text(c.output, emit_table(rows, parse_format(c.format)));
    return exit_code_for(rows);
}

Json load(const Common& c) { return Json::parse(read_text(c.input.empty() ? "-" : c.input)); }

int cmd_norm(const Common& c) {
    const MatrixElement x = element_from_json(load(c));
    NormOptions o;
    o.seed = c.seed;
    const NormResult r = mn_norm_detail(x, o);
    Json j;
    j["space"] = x.space.name();
    j["value"] = r.value;
    j["converged"] = r.converged;
    j["stale"] = r.stale;
    j["iterations"] = r.iterations;
    j["argmax"] = r.argmax;
    emit_json(c, j);
    return r.stale ? kExitCheckFailure : kExitPass;
}

int cmd_cbnorm(const Common& c, int level) {
    const Json in = load(c);
    LinearMapSpec m;
    const Json& src = in.at("source");
    m.source = src.contains("algebra") ? CbSource::algebra(src.at("algebra").get<int>()) : CbSource::descriptor(descriptor_from_json(src));
    m.target = descriptor_from_json(in.at("target"));
    m.matrix = matrix_from_json(in.at("matrix"));
    CbEstimateOptions o;
    o.level = level;
    o.seed = c.seed;
    const auto r = cb_norm_level_estimate(m, o);
    Json j;
    j["lower_bound"] = r.value;
    j["per_level"] = r.per_level;
    j["certified"] = r.certified;
    j["evaluations"] = r.evaluations;
    emit_json(c, j);
    return kExitPass;
}

int cmd_fock(const Common& c, int n, int d, double theta) {
    std::vector<double> lambdas;
    if (!c.input.empty()) {
        const Json in = load(c);
        n = in.value("n", n);
        d = in.value("d", d);
        theta = in.value("theta", theta);
        if (in.contains("lambdas")) lambdas = double_list(in.at("lambdas"));
    }
    if (lambdas.empty()) lambdas.assign(static_cast<std::size_t>(n), 1.0);
    if (static_cast<int>(lambdas.size()) != n) throw UsageError("fock: need one lambda per generator");
    const TruncatedFock fock(n, d);
    const auto fam = CircularFamily::build(fock, theta, lambdas);
    Rng rng = substream(c.seed, 0);
    std::vector<ComplexMatrix> a;
    for (int i = 0; i < n; ++i) a.push_back(random_gaussian(2, 2, rng));
    return emit_rows(c, check_factorization_chain(fam, random_gaussian(n, 2, rng), a));
}

int cmd_certify(const Common& c, double target) {
    const CbMapSpec spec = map_spec_from_json(load(c));
    SearchOptions o;
    o.seed = c.seed;
    o.target_constant = target;
    const SearchResult r = search_certificate(spec, o);
    Json j = certificate_to_json(r.cert);
    j["probes"] = static_cast<int>(r.probe_report.slacks.size());
    j["maxSlack"] = r.probe_report.slacks.empty() ? 0.0 : *std::max_element(r.probe_report.slacks.begin(), r.probe_report.slacks.end());
    j["minSlack"] = r.probe_report.min_slack;
    j["feasible"] = r.feasible;
    j["gap"] = r.gap;
    j["rounds"] = r.rounds;
    emit_json(c, j);
    if (!r.probe_report.pass) return kExitCheckFailure;
    return r.feasible ? kExitPass : kExitInfeasible;
}

int cmd_decompose(const Common& c) {
    const Json in = load(c);
    Json j;
    if (in.contains("P")) {
        const auto rep = projection_decompose(matrix_from_json(in.at("P")), double_list(in.at("lambda")));
        j["valid"] = rep.valid;
        j["diagnostic"] = rep.diagnostic;
        if (rep.valid) {
            j["alpha"] = matrix_to_json(rep.alpha);
            j["beta"] = matrix_to_json(rep.beta);
            j["cb_bound"] = rep.cb_bound;
            j["lambda_hs"] = rep.lambda_hs;
            j["dcb_bound"] = rep.dcb_bound;
            j["checks"] = check_rows_to_json(rep.rows);
        }
        emit_json(c, j);
        return rep.valid && all_pass(rep.rows) ? kExitPass : kExitCheckFailure;
    }
    SubspaceRC s;
    s.m = in.at("m").get<int>();
    s.basis = matrix_from_json(in.at("basis"));
    const auto dec = xu_decompose(s);
    j["row_part"] = matrix_to_json(dec.row_part.cols() ? dec.row_part : ComplexMatrix::Zero(s.m, 1));
    j["row_dim"] = dec.row_part.cols();
    j["col_part"] = matrix_to_json(dec.col_part.cols() ? dec.col_part : ComplexMatrix::Zero(s.m, 1));
    j["col_dim"] = dec.col_part.cols();
    j["lambda"] = real_list(dec.lambda);
    j["degenerate_directions"] = dec.degenerate_directions;
    j["reassembly_distance"] = subspace_distance(dec.reassembled(), s.basis);
    const auto split = split_lambda(std::vector<double>(dec.lambda.data(), dec.lambda.data() + dec.lambda.size()));
    j["lambda1"] = split.lambda1;
    j["lambda2_inverted"] = split.inverted_lambda2();
    emit_json(c, j);
    return kExitPass;
}

TailRule tail_from_json(const Json& t) {
    const std::string kind = t.at("kind").get<std::string>();
    if (kind == "power_law") return TailRule::power_law(t.at("exponent").get<double>());
    if (kind == "geometric") return TailRule::geometric(t.at("ratio").get<double>());
    TailRule r;
    if (kind == "bounded_ratio") r.kind = TailKind::BoundedRatio;
    else if (kind == "square_summable") r.kind = TailKind::SquareSummable;
    else if (kind == "divergent") r.kind = TailKind::Divergent;
    else throw UsageError("unknown tail kind: " + kind);
    const std::string side = t.value("side", std::string("auto"));
    r.side = side == "small" ? TailSide::Small : side == "large" ? TailSide::Large : TailSide::Auto;
    return r;
}

int cmd_classify(const Common& c) {
    const Json in = load(c);
    ClassifyInput ci;
    for (const auto& comp : in.at("components")) {
        ClassifyComponent cc;
        cc.xi = double_list(comp.at("xi"));
        if (comp.contains("tail")) cc.tail = tail_from_json(comp.at("tail"));
        ci.components.push_back(cc);
    }
    ci.include_row = in.value("include_row", false);
    ci.include_col = in.value("include_col", false);
    ci.epsilon = in.value("epsilon", 0.5);
    const auto r = classify(ci);
    Json j;
    j["label"] = r.label;
    j["factors"] = r.factors;
    j["small_sum"] = r.small_sum;
    j["large_sum"] = r.large_sum;
    j["min_xi"] = r.min_xi;
    j["max_xi"] = r.max_xi;
    j["note"] = r.note;
    emit_json(c, j);
    return kExitPass;
}

int cmd_strip(const Common& c, int D, int nodes) {
    const StripQuadrature q = harmonic_measure(nodes);
    const HardyBasis b = HardyBasis::exponential(D);
    Json j;
    j["quadrature"] = quadrature_to_json(q);
    j["basis"] = hardy_basis_to_json(b);
    const auto g = graph_operator_T(q, b);
    j["graph_lambda"] = real_list(g.lambda);
    if (!g.warning.empty()) j["warning"] = g.warning;
    if (!c.input.empty()) {
        std::vector<ComplexMatrix> x;
        for (const auto& m : load(c).at("x")) x.push_back(matrix_from_json(m));
        const auto r = quotient_oh_norm(x, q, b);
        j["quotient_norm"] = r.value;
        j["row_norm"] = r.row_norm;
        j["col_norm"] = r.col_norm;
        j["oh_closed_form"] = oh_closed_form(x);
        if (!r.feasible) j["diagnostic"] = r.diagnostic;
    }
    emit_json(c, j);
    return kExitPass;
}

int cmd_report(Common c, const std::string& suite, const std::string& config_path, const CLI::App& sub) {
    auto given = [&](const char* flag) { return sub.count(flag) > 0; };
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        // config file first, flags override it below
        const Json j = Json::parse(read_text(config_path));
        cfg.seed = j.value("seed", cfg.seed);
        cfg.suite = j.value("suite", cfg.suite);
        cfg.output = j.value("output", cfg.output);
        if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
        if (j.contains("tolerances"))
            for (const auto& [k, v] : j.at("tolerances").items()) cfg.tolerances[k] = v.get<double>();
    }
    if (given("--suite") || config_path.empty()) cfg.suite = suite.empty() ? cfg.suite : suite;
    if (given("--seed") || config_path.empty()) cfg.seed = c.seed;
    if (given("--output") || config_path.empty()) cfg.output = c.output;
    if (given("--format") || config_path.empty()) cfg.format = parse_format(c.format);
    for (const auto& t : c.tolerances) {
        const auto [k, v] = parse_tolerance(t);
        cfg.tolerances[k] = v;
    }
    if (!is_known_suite(cfg.suite)) throw UsageError("unknown suite: " + cfg.suite);
    const SuiteOutcome out = run_suite(cfg);
    write_text(cfg.output, out.text);
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator space numerical laboratory"};
    app.require_subcommand(1);
    Common c;
    int level = 2, n = 2, d = 3, D = 16, nodes = 241;
    double theta = 0.5, target = kInf;
    std::string suite, config;

    auto common = [&](CLI::App* sub, bool with_input) {
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("-o,--output", c.output, "output path, - for stdout");
        sub->add_option("--format", c.format, "json, csv or markdown");
        sub->add_option("--tolerance", c.tolerances, "KEY=VAL tolerance override")->take_all();
        if (with_input) sub->add_option("-i,--input", c.input, "input JSON path, - for stdin");
    };
    auto* norm = app.add_subcommand("norm", "matrix-level norm of an element");
    common(norm, true);
    auto* cbnorm = app.add_subcommand("cbnorm", "lower bound for a cb norm");
    common(cbnorm, true);
    cbnorm->add_option("--level", level, "matrix level");
    auto* fock = app.add_subcommand("fock", "checks on the truncated Fock space");
    common(fock, true);
    fock->add_option("--n", n, "generators");
    fock->add_option("--d", d, "word length cutoff");
    fock->add_option("--theta", theta, "interpolation parameter");
    auto* certify = app.add_subcommand("certify", "search for a state certificate");
    common(certify, true);
    certify->add_option("--target", target, "feasibility threshold for C");
    auto* decompose = app.add_subcommand("decompose", "decompose a subspace of R (+) C or a projection");
    common(decompose, true);
    auto* classify_cmd = app.add_subcommand("classify", "classify a weighted diagonal");
    common(classify_cmd, true);
    auto* strip = app.add_subcommand("strip", "strip quadrature, Hardy basis and quotient norm");
    common(strip, true);
    strip->add_option("--D", D, "basis dimension");
    strip->add_option("--nodes", nodes, "quadrature nodes");
    auto* report = app.add_subcommand("report", "run a check suite");
    common(report, false);
    report->add_option("--suite", suite, "norms, fock, certify, geometry, strip or all");
    report->add_option("--config", config, "JSON config; flags override it");
    report->add_option("--theta", theta, "unused by the suites");
    report->add_option("--n", n, "unused by the suites");
    report->add_option("--d", d, "unused by the suites");
    report->add_option("--level", level, "unused by the suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    try {
        if (norm->parsed()) return cmd_norm(c);
        if (cbnorm->parsed()) return cmd_cbnorm(c, level);
        if (fock->parsed()) return cmd_fock(c, n, d, theta);
        if (certify->parsed()) return cmd_certify(c, target);
        if (decompose->parsed()) return cmd_decompose(c);
        if (classify_cmd->parsed()) return cmd_classify(c);
        if (strip->parsed()) return cmd_strip(c, D, nodes);
        if (report->parsed()) return cmd_report(c, suite, config, *report);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitUsage;
}
