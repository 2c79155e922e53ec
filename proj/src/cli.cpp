#include "hodegeo/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hodegeo/checks.hpp"
#include "hodegeo/invariants.hpp"
#include "hodegeo/model.hpp"

namespace hodegeo {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json matrix_json(const ExprMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows; ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(to_string(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_matrix(std::ostream& os, const std::string& label, const ExprMatrix& m) {
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            os << label << '[' << i + 1 << "][" << j + 1 << "] = " << to_string(m.at(i, j))
               << '\n';
}

struct Options {
    std::string format = "text";
    std::uint64_t seed = 1;
    bool json() const { return format == "json"; }
};

void emit(std::ostream& out, const Options& opt, const ordered_json& doc,
          const std::string& text) {
    if (opt.json()) {
        out << doc.dump(2) << '\n';
    } else {
        out << text;
    }
}

int cmd_connection(const std::string& model_path, const Options& opt, std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    ConnectionCoeffs nc = canonical_connection(s);
    ordered_json doc;
    doc["command"] = "connection";
    doc["dimension"] = s.n;
    doc["order"] = s.k;
    ordered_json levels = ordered_json::array();
    std::ostringstream text;
    for (int a = 1; a <= s.k; ++a) {
        levels.push_back(matrix_json(nc.level(a)));
        print_matrix(text, "N_(" + std::to_string(a) + ")", nc.level(a));
    }
    doc["N"] = std::move(levels);
    emit(out, opt, doc, text.str());
    return 0;
}

int cmd_curvature(const std::string& model_path, const Options& opt, std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    CurvatureComponents cc = curvature_canonical(s);
    ordered_json doc;
    doc["command"] = "curvature";
    doc["dimension"] = s.n;
    doc["order"] = s.k;
    ordered_json levels = ordered_json::array();
    std::ostringstream text;
    for (int a = 0; a <= s.k - 1; ++a) {
        levels.push_back(matrix_json(cc.level(a)));
        print_matrix(text, "R_(" + std::to_string(a) + ")", cc.level(a));
    }
    doc["R"] = std::move(levels);
    emit(out, opt, doc, text.str());
    return 0;
}

const char* verdict_name(Vanishing v) {
    switch (v) {
        case Vanishing::ExactZero: return "exact zero";
        case Vanishing::SampledZero: return "zero at all sampled points";
        case Vanishing::NonZero: return "nonzero";
    }
    return "?";
}

int cmd_invariant(const std::string& model_path, const Options& opt, std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    InvariantReport rep = invariant_report(s, opt.seed);
    ordered_json doc;
    doc["command"] = "invariant";
    doc["which"] = rep.which;
    doc["direct"] = to_string(rep.direct);
    doc["curvature_form"] = to_string(rep.curvature_form);
    doc["identity_verified"] = rep.identity_verified;
    doc["verdict"] = verdict_name(rep.verdict);
    doc["sample_max"] = rep.sample_max;
    doc["notes"] = rep.notes;
    std::ostringstream text;
    text << rep.which << " = " << to_string(rep.direct) << '\n';
    text << "curvature form = " << to_string(rep.curvature_form) << '\n';
    text << "identity verified: " << (rep.identity_verified ? "true" : "false") << '\n';
    text << "verdict: " << verdict_name(rep.verdict) << '\n';
    text << "notes: " << rep.notes << '\n';
    emit(out, opt, doc, text.str());
    return 0;
}

int cmd_symmetry(const std::string& model_path, const std::string& field_path, int trials,
                 double tol, const Options& opt, std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    VectorComponents field;
    if (!field_path.empty()) {
        std::ifstream in(field_path);
        if (!in) throw ModelError("cannot open field file: " + field_path);
        ordered_json j = ordered_json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ModelError("invalid JSON in field file");
        const ordered_json& arr = j.is_array() ? j : j.at("field");
        if (!arr.is_array() || static_cast<int>(arr.size()) != s.n)
            throw ShapeError("field file must hold n expression strings");
        for (const auto& item : arr)
            field.push_back(parse_expression(item.get<std::string>(), s.n, s.k));
    } else if (auto f = m.field()) {
        field = *f;
    } else {
        throw ModelError("no symmetry candidate: pass --field or add 'field' to the model");
    }
    LieSymmetryReport rep = lie_symmetry_check(s, field, trials, tol, opt.seed);
    ordered_json doc;
    doc["command"] = "symmetry";
    doc["is_symmetry"] = rep.is_symmetry;
    doc["raw_vanishes"] = rep.raw_vanishes;
    doc["covariant_vanishes"] = rep.covariant_vanishes;
    doc["max_raw"] = rep.max_raw;
    doc["max_covariant"] = rep.max_covariant;
    std::ostringstream text;
    text << "Lie symmetry: " << (rep.is_symmetry ? "yes" : "no") << '\n';
    text << "raw residual vanishes: " << (rep.raw_vanishes ? "true" : "false")
         << " (max " << rep.max_raw << ")\n";
    text << "covariant residual vanishes: " << (rep.covariant_vanishes ? "true" : "false")
         << " (max " << rep.max_covariant << ")\n";
    emit(out, opt, doc, text.str());
    return 0;
}

int cmd_geodesic(const std::string& model_path, const std::string& init_path,
                 const IntegratorConfig& cfg, const std::string& out_path, const Options& opt,
                 std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    JetPoint init = load_init(init_path, m);
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    bool all_regular = true;
    for (bool r : traj.regular) all_regular = all_regular && r;
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw ModelError("cannot open output file: " + out_path);
        write_csv(os, traj);
    }
    ordered_json doc;
    doc["command"] = "geodesic";
    doc["samples"] = traj.times.size();
    doc["t_final"] = traj.times.back();
    ordered_json fin = ordered_json::array();
    for (double v : traj.states.back()) fin.push_back(v);
    doc["final_state"] = std::move(fin);
    doc["all_regular"] = all_regular;
    if (!out_path.empty()) doc["csv"] = out_path;
    std::ostringstream text;
    text << "samples: " << traj.times.size() << '\n';
    text << "final state at t = " << traj.times.back() << ":";
    for (double v : traj.states.back()) text << ' ' << v;
    text << '\n';
    if (!all_regular) text << "warning: trajectory leaves the slit bundle (y^(1) = 0)\n";
    if (!out_path.empty()) text << "wrote " << out_path << '\n';
    emit(out, opt, doc, text.str());
    return 0;
}

int cmd_jacobi(const std::string& model_path, const std::string& init_path,
               const std::string& var_path, const IntegratorConfig& cfg, bool oracle,
               double offset, const std::string& out_path, const Options& opt,
               std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    JetPoint init = load_init(init_path, m);
    std::vector<std::vector<double>> var_init = load_variation(var_path, m);
    Trajectory traj = integrate_semispray_flow(s, init, cfg);
    VariationSeries series = integrate_jacobi(s, traj, var_init, cfg);
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw ModelError("cannot open output file: " + out_path);
        write_csv(os, series);
    }
    ordered_json doc;
    doc["command"] = "jacobi";
    doc["samples"] = series.times.size();
    ordered_json fin = ordered_json::array();
    for (double v : series.values.back()) fin.push_back(v);
    doc["final_variation"] = std::move(fin);
    std::ostringstream text;
    text << "samples: " << series.times.size() << '\n';
    text << "final variation state:";
    for (double v : series.values.back()) text << ' ' << v;
    text << '\n';
    if (oracle) {
        auto jets = jet_from_covariant(s, init, var_init);
        VariationSeries fd = variation_oracle(s, init, jets, offset, cfg);
        double dev = series_max_error(series, fd);
        doc["oracle_offset"] = offset;
        doc["oracle_max_deviation"] = dev;
        text << "oracle offset " << offset << ": max deviation " << dev << '\n';
    }
    if (!out_path.empty()) {
        doc["csv"] = out_path;
        text << "wrote " << out_path << '\n';
    }
    emit(out, opt, doc, text.str());
    return 0;
}

int cmd_riemann(const std::string& model_path, bool prolong, const std::string& out_path,
                const Options& opt, std::ostream& out) {
    ModelFile m = load_model(model_path);
    auto metric = m.metric();
    if (!metric) throw ModelError("model has no 'metric' block");
    if (!prolong) throw ModelError("riemann currently supports only --prolong");
    Semispray s3 = el_semispray3(*metric);
    ModelFile out_model;
    out_model.dimension = s3.n;
    out_model.order = 3;
    out_model.parameters = m.parameters;
    for (const Expr& g : s3.coeffs) out_model.g_text.push_back(to_string(g));
    out_model.g = s3.coeffs;
    out_model.metric_text = m.metric_text;
    std::string text = model_to_json(out_model) + "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw ModelError("cannot open output file: " + out_path);
        os << text;
        std::ostringstream note;
        note << "wrote " << out_path << '\n';
        ordered_json doc;
        doc["command"] = "riemann";
        doc["prolonged_model"] = out_path;
        emit(out, opt, doc, note.str());
    } else {
        out << text;
    }
    return 0;
}

int cmd_check(const std::string& model_path, int trials, double tol, const Options& opt,
              std::ostream& out) {
    ModelFile m = load_model(model_path);
    Semispray s = m.semispray();
    SampleOptions sopts;
    sopts.trials = trials;
    sopts.tol = tol;
    sopts.seed = opt.seed;
    std::vector<CheckResult> results = identity_suite(s, sopts);
    ordered_json doc;
    doc["command"] = "check";
    ordered_json items = ordered_json::array();
    std::ostringstream text;
    for (const CheckResult& r : results) {
        ordered_json item;
        item["name"] = r.name;
        item["pass"] = r.pass;
        item["max_err"] = r.max_err;
        if (!r.note.empty()) item["note"] = r.note;
        items.push_back(std::move(item));
        text << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (max err " << r.max_err
             << ")\n";
    }
    bool ok = all_pass(results);
    doc["checks"] = std::move(items);
    doc["all_pass"] = ok;
    text << (ok ? "all checks passed\n" : "some checks FAILED\n");
    emit(out, opt, doc, text.str());
    return ok ? 0 : 4;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"higher-order ODE geometry toolkit"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized checks")->capture_default_str();

    std::string model_path, init_path, var_path, field_path, out_path;
    IntegratorConfig cfg;
    int trials = 20;
    double tol = 1e-9;
    bool oracle = false;
    bool prolong = false;
    double offset = 1e-3;

    CLI::App* connection = app.add_subcommand("connection", "canonical nonlinear connection");
    connection->add_option("model", model_path)->required();

    CLI::App* curvature = app.add_subcommand("curvature", "Jacobi endomorphism components");
    curvature->add_option("model", model_path)->required();

    CLI::App* invariant = app.add_subcommand("invariant", "W3/W4 invariant report");
    invariant->add_option("model", model_path)->required();

    CLI::App* symmetry = app.add_subcommand("symmetry", "Lie symmetry residual check");
    symmetry->add_option("model", model_path)->required();
    symmetry->add_option("--field", field_path, "JSON file with candidate components");
    symmetry->add_option("--trials", trials)->capture_default_str();
    symmetry->add_option("--tol", tol)->capture_default_str();

    CLI::App* geodesic = app.add_subcommand("geodesic", "integrate the semispray flow");
    geodesic->add_option("model", model_path)->required();
    geodesic->add_option("--init", init_path)->required();
    geodesic->add_option("--t0", cfg.t0)->capture_default_str();
    geodesic->add_option("--t1", cfg.t1)->capture_default_str();
    geodesic->add_option("--step", cfg.step)->capture_default_str();
    geodesic->add_option("--out", out_path, "CSV output path");

    CLI::App* jacobi = app.add_subcommand("jacobi", "integrate the covariant Jacobi equation");
    jacobi->add_option("model", model_path)->required();
    jacobi->add_option("--init", init_path)->required();
    jacobi->add_option("--var", var_path)->required();
    jacobi->add_option("--t0", cfg.t0)->capture_default_str();
    jacobi->add_option("--t1", cfg.t1)->capture_default_str();
    jacobi->add_option("--step", cfg.step)->capture_default_str();
    jacobi->add_flag("--oracle", oracle, "compare against the finite-difference oracle");
    jacobi->add_option("--s", offset, "oracle variation offset")->capture_default_str();
    jacobi->add_option("--out", out_path, "CSV output path");

    CLI::App* riemann = app.add_subcommand("riemann", "Riemannian prolongation tools");
    riemann->add_option("model", model_path)->required();
    riemann->add_flag("--prolong", prolong, "emit the order-3 Euler-Lagrange model");
    riemann->add_option("--out", out_path, "output path for the generated model");

    CLI::App* check = app.add_subcommand("check", "run the identity suite on a model");
    check->add_option("model", model_path)->required();
    check->add_option("--trials", trials)->capture_default_str();
    check->add_option("--tol", tol)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (connection->parsed()) return cmd_connection(model_path, opt, out);
        if (curvature->parsed()) return cmd_curvature(model_path, opt, out);
        if (invariant->parsed()) return cmd_invariant(model_path, opt, out);
        if (symmetry->parsed())
            return cmd_symmetry(model_path, field_path, trials, tol, opt, out);
        if (geodesic->parsed())
            return cmd_geodesic(model_path, init_path, cfg, out_path, opt, out);
        if (jacobi->parsed())
            return cmd_jacobi(model_path, init_path, var_path, cfg, oracle, offset, out_path, opt,
                              out);
        if (riemann->parsed()) return cmd_riemann(model_path, prolong, out_path, opt, out);
        if (check->parsed()) return cmd_check(model_path, trials, tol, opt, out);
        err << "no subcommand\n";
        return 1;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return 4;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ModelError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace hodegeo
