#include "jdisc/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "jdisc/calculus.hpp"
#include "jdisc/errors.hpp"
#include "jdisc/morse.hpp"
#include "jdisc/solver.hpp"
#include "jdisc/structure.hpp"
#include "jdisc/transforms.hpp"

namespace jdisc::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    if (!is.good() && !is.eof()) throw error("read failed: " + path);
    return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw error("cannot open " + tmp.string());
        os << content;
        os.flush();
        if (!os) throw error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw error("rename failed: " + path + ": " + ec.message());
}

void emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (out_path.empty())
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        atomic_write(out_path, text);
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object()) throw config_error(where + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw config_error("unknown key '" + it.key() + "' in " + where);
    }
}

cd parse_complex(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw config_error(where + " must be [re, im]");
    return cd(v[0].get<double>(), v[1].get<double>());
}

std::vector<MonomialTerm> parse_terms(const json& arr, const std::string& where) {
    std::vector<MonomialTerm> out;
    if (!arr.is_array()) throw config_error(where + " must be an array");
    for (const auto& t : arr) {
        check_keys(t, {"c", "i", "j", "k", "l"}, where + " entry");
        MonomialTerm m;
        m.c = parse_complex(t.at("c"), where + ".c");
        m.i = t.value("i", 0);
        m.j = t.value("j", 0);
        m.k = t.value("k", 0);
        m.l = t.value("l", 0);
        out.push_back(m);
    }
    return out;
}

struct GridSpec {
    int n_radial = 64;
    int n_angular = 128;
    DiscGrid::RadialRule rule = DiscGrid::RadialRule::gauss_radau;
};

GridSpec parse_grid_flag(const std::string& s) {
    GridSpec g;
    if (std::sscanf(s.c_str(), "%dx%d", &g.n_radial, &g.n_angular) != 2)
        throw config_error("--grid expects RxA, e.g. 64x128");
    return g;
}

GridSpec parse_grid_json(const json& j) {
    GridSpec g;
    check_keys(j, {"n_radial", "n_angular", "rule"}, "grid");
    g.n_radial = j.value("n_radial", 64);
    g.n_angular = j.value("n_angular", 128);
    std::string rule = j.value("rule", "gauss_radau");
    if (rule == "gauss_radau")
        g.rule = DiscGrid::RadialRule::gauss_radau;
    else if (rule == "composite_gl8")
        g.rule = DiscGrid::RadialRule::composite_gl8;
    else
        throw config_error("grid.rule must be gauss_radau or composite_gl8");
    return g;
}

json complex_json(cd z) { return json::array({z.real(), z.imag()}); }

json matrix2c_json(const acs::Mat2c& m) {
    return json::array({json::array({complex_json(m(0, 0)), complex_json(m(0, 1))}),
                        json::array({complex_json(m(1, 0)), complex_json(m(1, 1))})});
}

acs::Mat2c parse_matrix2c(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw config_error(where + " must be a 2x2 matrix");
    acs::Mat2c m;
    for (int r = 0; r < 2; ++r) {
        if (!j[r].is_array() || j[r].size() != 2)
            throw config_error(where + " must be a 2x2 matrix");
        for (int c = 0; c < 2; ++c) m(r, c) = parse_complex(j[r][c], where);
    }
    return m;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveFlags {
    std::string config_path, out_path, fields_prefix, grid_flag;
    std::int64_t seed = -1;
    double p = 0.0;
    int n = 0;
};

int run_solve(const SolveFlags& flags) {
    json cfg = json::parse(read_file(flags.config_path));
    check_keys(cfg, {"grid", "coefficients", "solver"}, "config");

    GridSpec gs;
    if (cfg.contains("grid")) gs = parse_grid_json(cfg.at("grid"));
    if (!flags.grid_flag.empty()) gs = parse_grid_flag(flags.grid_flag);

    const json& cj = cfg.at("coefficients");
    check_keys(cj, {"a_terms", "b_terms", "gamma", "a0"}, "coefficients");
    double gamma = cj.value("gamma", 0.5);
    double a0 = cj.value("a0", 0.0);
    CoefficientPair coeffs(parse_terms(cj.value("a_terms", json::array()), "a_terms"),
                           parse_terms(cj.value("b_terms", json::array()), "b_terms"), gamma,
                           a0);

    json sj = cfg.value("solver", json::object());
    check_keys(sj, {"p", "p_candidates", "n", "tol_h", "tol_outer", "max_inner", "max_outer",
                    "damping", "safety", "norm_trials", "seed"},
               "solver");
    SolverConfig sc;
    sc.n_radial = gs.n_radial;
    sc.n_angular = gs.n_angular;
    sc.rule = gs.rule;
    sc.n = sj.value("n", 8);
    sc.tol_h = sj.value("tol_h", 1e-12);
    sc.tol_outer = sj.value("tol_outer", 1e-11);
    sc.max_inner = sj.value("max_inner", 200);
    sc.max_outer = sj.value("max_outer", 200);
    sc.damping = sj.value("damping", 0.5);
    sc.safety = sj.value("safety", 1.05);
    sc.norm_trials = sj.value("norm_trials", 24);
    sc.seed = sj.value("seed", 1);
    if (flags.seed >= 0) sc.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.n > 0) sc.n = flags.n;

    json candidates_used = json::array();
    if (flags.p > 0.0) {
        sc.p = flags.p;
    } else if (sj.contains("p_candidates")) {
        std::vector<double> cands = sj.at("p_candidates").get<std::vector<double>>();
        auto grid = build_grid(gs.n_radial, gs.n_angular, gs.rule);
        sc.p = select_exponent(coeffs, cands, grid, sc.norm_trials, sc.seed, sc.safety);
        for (double c : cands) candidates_used.push_back(c);
    } else {
        sc.p = sj.value("p", 2.25);
    }

    // canonical record of the effective inputs; hashed into the report
    json effective = {
        {"grid", {{"n_radial", gs.n_radial}, {"n_angular", gs.n_angular}}},
        {"coefficients", cj},
        {"solver",
         {{"p", sc.p},
          {"n", sc.n},
          {"tol_h", sc.tol_h},
          {"tol_outer", sc.tol_outer},
          {"max_inner", sc.max_inner},
          {"max_outer", sc.max_outer},
          {"damping", sc.damping},
          {"safety", sc.safety},
          {"norm_trials", sc.norm_trials},
          {"seed", sc.seed}}},
    };

    auto [sol, rep] = outer_iterate(coeffs, sc);

    json doc;
    doc["version"] = kVersion;
    doc["command"] = "solve";
    doc["config_hash"] = fnv1a_hex(effective.dump());
    doc["grid"] = {{"n_radial", gs.n_radial}, {"n_angular", gs.n_angular}};
    if (!candidates_used.empty()) doc["p_candidates"] = candidates_used;
    doc["p"] = rep.p;
    doc["n"] = rep.n;
    doc["a0"] = rep.a0;
    doc["delta"] = rep.delta;
    doc["converged"] = rep.converged;
    doc["outer_iters"] = rep.outer_iters;
    doc["inner_iters_total"] = rep.inner_iters_total;
    doc["r0_norm_estimate"] = rep.r0_norm_estimate;
    doc["contraction_ratio"] = rep.contraction_ratio;
    doc["h_norm"] = rep.h_norm;
    doc["h_bound"] = rep.h_bound;
    doc["residuals"] = {{"pde_z", rep.residuals.pde_z},
                        {"pde_w", rep.residuals.pde_w},
                        {"boundary_z", rep.residuals.boundary_z},
                        {"boundary_w", rep.residuals.boundary_w}};
    doc["winding_z"] = rep.winding_z;
    doc["min_jacobian"] = rep.min_jacobian;
    doc["orientation_ok"] = rep.orientation_ok;
    doc["envelope_C"] = rep.envelope_C;
    doc["sup_w"] = rep.sup_w;
    doc["torus_distance"] = torus_distance(sol);
    doc["history"] = {{"u_sup", rep.history_u_sup},
                      {"v_sup", rep.history_v_sup},
                      {"h_p", rep.history_h_p}};
    emit(doc, flags.out_path);

    if (!flags.fields_prefix.empty()) {
        auto dump = [&](const char* name, const ComplexField& f) {
            std::ostringstream ss;
            write_csv(ss, f);
            atomic_write(flags.fields_prefix + "." + name + ".csv", ss.str());
        };
        dump("u", sol.u);
        dump("v", sol.v);
        dump("h", sol.h);
        dump("z", sol.z);
        dump("w", sol.w);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify-ops
// ---------------------------------------------------------------------------

int run_verify_ops(const std::string& grid_flag, std::uint64_t seed,
                   const std::string& out_path) {
    GridSpec gs;
    if (!grid_flag.empty()) gs = parse_grid_flag(grid_flag);
    auto g = build_grid(gs.n_radial, gs.n_angular, gs.rule);
    std::string grid_name =
        std::to_string(gs.n_radial) + "x" + std::to_string(gs.n_angular);

    json entries = json::array();
    bool all_pass = true;
    auto add = [&](const char* identity, double max_error, double tol) {
        bool pass = max_error <= tol;
        all_pass = all_pass && pass;
        entries.push_back({{"identity", identity},
                           {"grid", grid_name},
                           {"max_error", max_error},
                           {"tolerance", tol},
                           {"pass", pass}});
    };
    auto sup_diff = [](const ComplexField& a, const ComplexField& b) {
        double m = 0.0;
        for (int k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
        return m;
    };

    rng gen(seed);
    ComplexField one(g, cd(1.0, 0.0));
    ComplexField zeta = ComplexField::coordinate(g);

    add("T(1) = conj(zeta)", sup_diff(cauchy_green(one), conj(zeta)), 1e-9);
    add("R(1) = 0", norm(ahlfors_beurling(one), kSupNorm), 1e-9);
    add("B(1) = -1", sup_diff(bergman(one), cd(-1.0, 0.0) * one), 1e-9);
    add("R0(1) = -1", sup_diff(r0(one), cd(-1.0, 0.0) * one), 1e-9);

    double m_inv = 0.0, m_t0inv = 0.0, m_bnd = 0.0, m_rel = 0.0, m_iso = 0.0, m_anti = 0.0;
    for (int rep = 0; rep < 8; ++rep) {
        ComplexField f = random_band_limited(g, gen, 12, 6);
        m_inv = std::max(m_inv, sup_diff(dbar(cauchy_green(f)), f));
        ComplexField u0 = t0(f);
        m_t0inv = std::max(m_t0inv, sup_diff(dbar(u0), f));
        BoundaryTrace tr = boundary_trace(u0);
        for (cd v : tr.values) m_bnd = std::max(m_bnd, std::abs(v.real()));
        m_rel = std::max(m_rel, sup_diff(r0(f), dz(u0)));
        double nf = norm(f, 2.0);
        m_iso = std::max(m_iso, std::abs(norm(r0(f), 2.0) / nf - 1.0));
        ModeStack modes = to_modes(bergman(f));
        double total = 0.0, anti = 0.0;
        for (int k = 0; k < g->n_angular(); ++k) {
            double e = 0.0;
            for (const cd& z : modes.modes[k]) e += std::norm(z);
            total += e;
            if (g->mode_of_slot(k) < 0) anti += e;
        }
        m_anti = std::max(m_anti, total > 0 ? anti / total : 0.0);
    }
    add("dbar(T f) = f", m_inv, 1e-6);
    add("dbar(T0 f) = f", m_t0inv, 1e-6);
    add("Re T0 f = 0 on the boundary", m_bnd, 1e-8);
    add("R0 f = dz(T0 f)", m_rel, 1e-6);
    add("||R0 f||_2 = ||f||_2", m_iso, 1e-6);
    add("B has no anti-holomorphic energy", m_anti, 1e-8);

    double m_hol = 0.0;
    ComplexField zk = one;
    for (int k = 1; k <= 4; ++k) {
        zk = zk * zeta;
        m_hol = std::max(m_hol, sup_diff(bergman(zk), cd(-1.0, 0.0) * zk));
    }
    add("B(zeta^k) = -zeta^k", m_hol, 1e-8);

    json doc;
    doc["version"] = kVersion;
    doc["command"] = "verify-ops";
    doc["config_hash"] = fnv1a_hex(json({{"grid", grid_name}, {"seed", seed}}).dump());
    doc["seed"] = seed;
    doc["grid"] = grid_name;
    doc["identities"] = entries;
    doc["all_pass"] = all_pass;
    emit(doc, out_path);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// analyze-structure
// ---------------------------------------------------------------------------

acs::StructureField parse_structure(const json& sj) {
    check_keys(sj, {"type", "gamma", "mu_scale", "nu_scale", "terms"}, "structure");
    std::string type = sj.value("type", "bundled");
    double gamma = sj.value("gamma", 0.5);
    if (type == "standard") return acs::StructureField::standard(gamma);
    if (type == "bundled")
        return acs::StructureField::bundled_admissible(gamma, sj.value("mu_scale", 0.08),
                                                       sj.value("nu_scale", 0.05));
    if (type == "perturbation") {
        std::vector<acs::StructureField::PerturbTerm> terms;
        for (const auto& t : sj.value("terms", json::array())) {
            check_keys(t, {"row", "col", "c", "i", "j", "k", "l"}, "structure term");
            acs::StructureField::PerturbTerm pt;
            pt.row = t.value("row", 0);
            pt.col = t.value("col", 0);
            pt.c = parse_complex(t.at("c"), "structure term c");
            pt.i = t.value("i", 0);
            pt.j = t.value("j", 0);
            pt.k = t.value("k", 0);
            pt.l = t.value("l", 0);
            terms.push_back(pt);
        }
        return acs::StructureField::from_perturbation(terms, gamma);
    }
    throw config_error("structure.type must be standard, bundled or perturbation");
}

int run_analyze_structure(const std::string& config_path, const std::string& out_path) {
    json cfg = json::parse(read_file(config_path));
    check_keys(cfg, {"structure", "fit"}, "config");
    const json& sj = cfg.at("structure");
    acs::StructureField S = parse_structure(sj);
    double gamma = sj.value("gamma", 0.5);

    acs::FitOptions fit;
    if (cfg.contains("fit")) {
        const json& fj = cfg.at("fit");
        check_keys(fj, {"z_degree", "w_degree", "tolerance"}, "fit");
        fit.z_degree = fj.value("z_degree", fit.z_degree);
        fit.w_degree = fj.value("w_degree", fit.w_degree);
        fit.tolerance = fj.value("tolerance", fit.tolerance);
    }

    acs::BlockReport blocks = acs::verify_block_structure(S);
    json doc;
    doc["version"] = kVersion;
    doc["command"] = "analyze-structure";
    doc["config_hash"] = fnv1a_hex(cfg.dump());
    doc["square_defect"] = S.square_defect();
    doc["blocks"] = {{"dev_j12", blocks.dev_j12},
                     {"dev_j22", blocks.dev_j22},
                     {"dev_j11_w0", blocks.dev_j11_w0},
                     {"dev_j21_w0", blocks.dev_j21_w0},
                     {"pass", blocks.pass},
                     {"worst", blocks.worst_block}};
    doc["min_det_j_plus_jst"] = acs::nondegeneracy_check(S);

    bool ok = blocks.pass;
    if (blocks.pass) {
        acs::AMatrixField A = acs::matrix_a_from_j(S);
        doc["max_clin_deviation"] = A.max_clin_deviation;
        doc["max_second_column"] = A.max_second_column;
        CoefficientPair coeffs = acs::coefficients_from_structure(S, gamma, fit);
        doc["a0"] = coeffs.a0();
        doc["a_term_count"] = coeffs.a_terms().size();
        doc["b_term_count"] = coeffs.b_terms().size();
        json a_terms = json::array();
        for (const auto& t : coeffs.a_terms())
            a_terms.push_back(
                {{"c", complex_json(t.c)}, {"i", t.i}, {"j", t.j}, {"k", t.k}, {"l", t.l}});
        json b_terms = json::array();
        for (const auto& t : coeffs.b_terms())
            b_terms.push_back(
                {{"c", complex_json(t.c)}, {"i", t.i}, {"j", t.j}, {"k", t.k}, {"l", t.l}});
        doc["coefficients"] = {{"a_terms", a_terms}, {"b_terms", b_terms}, {"gamma", gamma}};
        ok = ok && coeffs.a0() < 1.0 && doc["min_det_j_plus_jst"].get<double>() > 0.0;
    }
    doc["pass"] = ok;
    emit(doc, out_path);
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// takagi / morse
// ---------------------------------------------------------------------------

int run_takagi(const std::string& in_path, const std::string& out_path) {
    json cfg = json::parse(read_file(in_path));
    check_keys(cfg, {"matrix"}, "takagi input");
    acs::Mat2c B = parse_matrix2c(cfg.at("matrix"), "matrix");
    morse::TakagiResult t = morse::takagi(B);
    acs::Mat2c D = t.U.transpose() * B * t.U;
    json doc;
    doc["version"] = kVersion;
    doc["command"] = "takagi";
    doc["config_hash"] = fnv1a_hex(cfg.dump());
    doc["U"] = matrix2c_json(t.U);
    doc["d"] = {t.d[0], t.d[1]};
    doc["unitarity_error"] =
        (t.U.adjoint() * t.U - acs::Mat2c::Identity()).cwiseAbs().maxCoeff();
    doc["offdiag_error"] = std::max(std::abs(D(0, 1)), std::abs(D(1, 0)));
    emit(doc, out_path);
    return 0;
}

int run_morse(const std::string& config_path, const std::string& out_path) {
    json cfg = json::parse(read_file(config_path));
    check_keys(cfg, {"hermitian", "symmetric", "base", "k", "epsilon", "delta", "crossing_k",
                     "slow_cutoff_delta"},
               "morse config");
    json doc;
    doc["version"] = kVersion;
    doc["command"] = "morse";
    doc["config_hash"] = fnv1a_hex(cfg.dump());

    if (cfg.contains("hermitian")) {
        morse::QuadraticData q;
        q.hermitian = parse_matrix2c(cfg.at("hermitian"), "hermitian");
        q.symmetric = parse_matrix2c(cfg.at("symmetric"), "symmetric");
        q.base = cfg.value("base", 0.0);
        int k = cfg.value("k", 0);
        double epsilon = cfg.value("epsilon", 0.4);
        double delta = cfg.value("delta", 0.2);
        morse::MorseModel m = morse::morse_normal_form(q, k, epsilon, delta);
        doc["normal_form"] = {{"k", m.k},
                              {"coefficients", {m.a1, m.a2}},
                              {"input_coefficients", {m.input_a1, m.input_a2}},
                              {"epsilon", m.epsilon},
                              {"delta", m.delta},
                              {"inner_radius", m.inner_radius},
                              {"base", m.base},
                              {"linear_change", matrix2c_json(m.linear_change)},
                              {"unitary", matrix2c_json(m.unitary)}};
    }
    if (cfg.contains("crossing_k")) {
        morse::CrossingProfile cp = morse::crossing_profile(cfg.at("crossing_k").get<int>());
        doc["crossing"] = {{"k", cp.k},
                           {"tau0", cp.tau0},
                           {"tau1", cp.tau1},
                           {"min_levi_eigenvalue", cp.min_levi_eigenvalue},
                           {"box_halfwidth", cp.box_halfwidth}};
    }
    if (cfg.contains("slow_cutoff_delta")) {
        morse::CutoffProfile p = morse::slow_cutoff(cfg.at("slow_cutoff_delta").get<double>());
        doc["slow_cutoff"] = {{"delta", p.delta},
                              {"transition_scale", p.transition_scale},
                              {"support_end", p.support_end}};
    }
    emit(doc, out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int run_report(const std::string& in_path) {
    json doc = json::parse(read_file(in_path));
    std::ostringstream out;
    out << "report: " << doc.value("command", "?") << " (version " << doc.value("version", "?")
        << ", config " << doc.value("config_hash", "?") << ")\n";
    if (doc.contains("converged")) {
        out << "  converged: " << (doc["converged"].get<bool>() ? "yes" : "no") << " in "
            << doc.value("outer_iters", 0) << " outer / " << doc.value("inner_iters_total", 0)
            << " inner iterations\n";
        out << "  p = " << doc.value("p", 0.0) << ", n = " << doc.value("n", 0)
            << ", a0 = " << doc.value("a0", 0.0) << ", delta = " << doc.value("delta", 0.0)
            << "\n";
        const json& r = doc.at("residuals");
        out << "  residuals: pde_z " << r.value("pde_z", 0.0) << ", pde_w "
            << r.value("pde_w", 0.0) << ", boundary " << r.value("boundary_z", 0.0) << " / "
            << r.value("boundary_w", 0.0) << "\n";
        out << "  winding(z) = " << doc.value("winding_z", 0)
            << ", min jacobian = " << doc.value("min_jacobian", 0.0)
            << ", envelope C = " << doc.value("envelope_C", 0.0)
            << ", sup |w| = " << doc.value("sup_w", 0.0) << "\n";
    }
    if (doc.contains("identities")) {
        for (const auto& e : doc["identities"])
            out << "  [" << (e.value("pass", false) ? "pass" : "FAIL") << "] "
                << e.value("identity", "?") << ": max error " << e.value("max_error", 0.0)
                << "\n";
        out << "  overall: " << (doc.value("all_pass", false) ? "pass" : "FAIL") << "\n";
    }
    if (doc.contains("blocks")) {
        out << "  blocks pass: " << (doc["blocks"].value("pass", false) ? "yes" : "no")
            << ", min det(J+Jst) = " << doc.value("min_det_j_plus_jst", 0.0)
            << ", a0 = " << doc.value("a0", 0.0) << "\n";
    }
    if (doc.contains("d")) out << "  takagi d = [" << doc["d"][0] << ", " << doc["d"][1] << "]\n";
    std::string text = out.str();
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"singular integral operators and pseudoholomorphic disc solver on the unit disc"};
    app.require_subcommand(1);

    SolveFlags sf;
    CLI::App* solve = app.add_subcommand("solve", "run the quasilinear disc solver");
    solve->add_option("--config", sf.config_path, "JSON config")->required();
    solve->add_option("--out", sf.out_path, "report path (stdout if omitted)");
    solve->add_option("--fields", sf.fields_prefix, "CSV dump prefix for u,v,h,z,w");
    solve->add_option("--grid", sf.grid_flag, "grid RxA override");
    solve->add_option("--seed", sf.seed, "seed override");
    solve->add_option("--p", sf.p, "exponent override");
    solve->add_option("--n", sf.n, "vanishing order override");

    std::string vo_grid, vo_out;
    std::uint64_t vo_seed = 7;
    CLI::App* verify = app.add_subcommand("verify-ops", "check the integral operator identities");
    verify->add_option("--grid", vo_grid, "grid RxA");
    verify->add_option("--seed", vo_seed, "probe seed");
    verify->add_option("--out", vo_out, "report path (stdout if omitted)");

    std::string as_config, as_out;
    CLI::App* analyze = app.add_subcommand("analyze-structure",
                                           "certify an almost complex structure and extract "
                                           "its coefficient pair");
    analyze->add_option("--config", as_config, "JSON config")->required();
    analyze->add_option("--out", as_out, "report path (stdout if omitted)");

    std::string tk_in, tk_out;
    CLI::App* tk = app.add_subcommand("takagi", "diagonalize a complex symmetric 2x2 matrix");
    tk->add_option("--in", tk_in, "JSON input with a 2x2 matrix of [re, im] pairs")->required();
    tk->add_option("--out", tk_out, "report path (stdout if omitted)");

    std::string mo_config, mo_out;
    CLI::App* mo = app.add_subcommand("morse", "normal form / crossing profile / slow cutoff");
    mo->add_option("--config", mo_config, "JSON config")->required();
    mo->add_option("--out", mo_out, "report path (stdout if omitted)");

    std::string rp_in;
    CLI::App* rp = app.add_subcommand("report", "summarize a JSON report");
    rp->add_option("--in", rp_in, "report JSON")->required();

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return run_solve(sf);
        if (verify->parsed()) return run_verify_ops(vo_grid, vo_seed, vo_out);
        if (analyze->parsed()) return run_analyze_structure(as_config, as_out);
        if (tk->parsed()) return run_takagi(tk_in, tk_out);
        if (mo->parsed()) return run_morse(mo_config, mo_out);
        if (rp->parsed()) return run_report(rp_in);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const convergence_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const infeasibility_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const degeneracy_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const approximation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ellipticity_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const construction_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: bad JSON: %s\n", e.what());
        return 1;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

} // namespace jdisc::cli
