// Command-line front end: one subcommand group per library module, CSV or JSON tables out.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellforge/bell.hpp"
#include "bellforge/numerics.hpp"
#include "bellforge/photonics.hpp"
#include "bellforge/qstate.hpp"
#include "bellforge/thermal.hpp"

namespace bf = bellforge;
using json = nlohmann::ordered_json;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json meta = json::object();

    void add(std::vector<Cell> row)
    {
        if (row.size() != columns.size()) throw std::logic_error("row width mismatch");
        rows.push_back(std::move(row));
    }
};

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_double(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            }
        },
        c);
}

json json_cell(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return format_double(v);
                return std::stod(format_double(v));
            } else {
                return v;
            }
        },
        c);
}

struct Common {
    std::string format = "csv";
    std::string out;
    std::uint64_t seed = 20240601;
    int restarts = 64;
};

void emit(const Table& t, const Common& common, const std::string& command)
{
    std::ostringstream os;
    if (common.format == "json") {
        json j;
        j["schema"] = 1;
        j["command"] = command;
        j["seed"] = common.seed;
        j["meta"] = t.meta;
        j["rows"] = json::array();
        for (const auto& row : t.rows) {
            json r = json::object();
            for (std::size_t c = 0; c < row.size(); ++c) r[t.columns[c]] = json_cell(row[c]);
            j["rows"].push_back(r);
        }
        os << j.dump(2) << "\n";
    } else {
        for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
            os << "\n";
        }
    }
    if (common.out.empty()) {
        std::cout << os.str();
        return;
    }
    std::ofstream f(common.out);
    if (!f) throw IoError("cannot open output file " + common.out);
    f << os.str();
    if (!f) throw IoError("failed writing " + common.out);
}

double parse_number(std::string s)
{
    // accept the unicode minus and pi symbols as well as "pi"
    for (const auto& [from, to] : std::vector<std::pair<std::string, std::string>>{{"−", "-"}, {"π", "pi"}}) {
        for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from)) s.replace(p, from.size(), to);
    }
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = M_PI;
        s = s.substr(0, s.size() - 2);
        if (s.empty() || s == "+") return factor;
        if (s == "-") return -factor;
        if (s.back() == '*') s.pop_back();
    }
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw bf::DomainError("cannot parse number '" + s + "'");
    }
    if (used != s.size()) throw bf::DomainError("cannot parse number '" + s + "'");
    return v * factor;
}

/** start:stop:step, endpoints inclusive; a single number is a one-point grid. */
std::vector<double> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 1) return {parse_number(parts[0])};
    if (parts.size() != 3) throw bf::DomainError("grid must be start:stop:step");
    const double start = parse_number(parts[0]), stop = parse_number(parts[1]), step = parse_number(parts[2]);
    if (!(step > 0) || stop < start) throw bf::DomainError("grid needs step > 0 and stop >= start");
    const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw bf::DomainError("grid too large");
    std::vector<double> g;
    for (long k = 0; k < count; ++k) g.push_back(start + k * step);
    return g;
}

/** singlet | ghz:N | ghzm:N | w:N | gghz:N:alpha | mixed:N, optionally mixed with white noise. */
bf::DensityOperator parse_state(const std::string& spec, double visibility)
{
    std::vector<std::string> p;
    std::stringstream ss(spec);
    for (std::string x; std::getline(ss, x, ':');) p.push_back(x);
    if (p.empty()) throw bf::DomainError("empty state name");
    auto n_at = [&](std::size_t i) {
        if (i >= p.size()) throw bf::DomainError("state '" + spec + "' needs a party count");
        return static_cast<int>(parse_number(p[i]));
    };
    bf::DensityOperator rho = [&]() -> bf::DensityOperator {
        if (p[0] == "singlet") return bf::singlet().density();
        if (p[0] == "ghz") return bf::ghz_state(n_at(1), +1).density();
        if (p[0] == "ghzm") return bf::ghz_state(n_at(1), -1).density();
        if (p[0] == "w") return bf::w_state(n_at(1)).density();
        if (p[0] == "gghz") {
            if (p.size() < 3) throw bf::DomainError("gghz needs N and alpha");
            return bf::generalized_ghz(n_at(1), parse_number(p[2])).density();
        }
        if (p[0] == "mixed") {
            const int n = n_at(1);
            const int d = 1 << n;
            return bf::DensityOperator(Eigen::MatrixXcd::Identity(d, d) / double(d), std::vector<int>(n, 2));
        }
        throw bf::DomainError("unknown state '" + spec + "'");
    }();
    return visibility < 1.0 ? bf::with_white_noise(rho, visibility) : rho;
}

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--restarts", c.restarts, "optimizer restarts");
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

bf::SpinLattice lattice_for(const std::string& model, const std::string& input, double a)
{
    if (!input.empty()) return bf::lattice_from_json(read_file(input));
    if (model.empty()) throw bf::DomainError("give --model or --input");
    return bf::model_by_name(model, a);
}

// ---------------- bell ----------------

struct BellArgs {
    std::string target = "chsh";
    std::string state = "singlet";
    double visibility = 1.0;
    std::string kind = "wwwzb";
    int n = 3;
};

void add_observable_columns(Table& t, const bf::BellFunctional& f)
{
    for (int p = 0; p < f.scenario.n_parties; ++p)
        for (int s = 0; s < f.scenario.settings[p]; ++s) {
            const std::string base = "p" + std::to_string(p) + "s" + std::to_string(s);
            t.columns.push_back(base + "_theta");
            t.columns.push_back(base + "_phi");
        }
}

void push_angles(std::vector<Cell>& row, const std::vector<std::vector<Eigen::Vector3d>>& obs)
{
    for (const auto& party : obs)
        for (const auto& v : party) {
            row.emplace_back(std::acos(std::clamp(v.z() / v.norm(), -1.0, 1.0)));
            row.emplace_back(std::atan2(v.y(), v.x()));
        }
}

Table run_bell(const BellArgs& a, const Common& c)
{
    Table t;
    if (a.target == "avn") {
        const auto rep = bf::ghz_avn_check(a.n);
        t.columns = {"observable", "mean", "expected"};
        for (std::size_t i = 0; i < rep.labels.size(); ++i) t.add({rep.labels[i], rep.means[i], rep.expected[i]});
        t.meta = {{"means_match", rep.means_match}, {"lhv_assignable", rep.lhv_assignable},
                  {"contradiction", rep.contradiction}};
        return t;
    }
    if (a.target == "rotinv-critical") {
        // planar ratio of noisy GHZ is linear in V; bisect for where it reaches 1
        t.columns = {"n", "v_critical", "reference"};
        const auto ratio_at = [&](double v) {
            const auto tensor = bf::correlation_tensor(parse_state("ghz:" + std::to_string(a.n), v));
            return bf::rotinv_condition(tensor, bf::RotInvMode::planar, c.restarts, c.seed).ratio - 1.0;
        };
        t.add({static_cast<long long>(a.n), bf::bisect_root(ratio_at, 0.05, 1.0, 1e-10),
               2.0 * std::pow(2.0 / M_PI, a.n)});
        return t;
    }
    const bf::DensityOperator rho = parse_state(a.state, a.visibility);
    if (a.target == "condition") {
        const bf::CorrelationTensor tensor = bf::correlation_tensor(rho);
        t.columns = {"condition", "state", "visibility", "value", "bound", "violation_possible"};
        auto row = [&](const std::string& name, double v, double bound) {
            t.add({name, a.state, a.visibility, v, bound, v > bound});
        };
        if (a.kind == "wwwzb") row("wwwzb_optimized", bf::condition_wwwzb(tensor, bf::ConditionMode::optimized, c.seed), 1);
        else if (a.kind == "wwwzb-fixed") row("wwwzb_fixed", bf::condition_wwwzb(tensor, bf::ConditionMode::fixed_frame), 1);
        else if (a.kind == "wzlpzb") row("wzlpzb", bf::condition_wzlpzb(tensor, tensor.n_parties(), c.seed), 1);
        else if (a.kind == "ineq1" || a.kind == "ineq2") {
            const auto rep = bf::condition_three_setting(
                tensor, a.kind == "ineq1" ? bf::ThreeSettingCondition::ineq1 : bf::ThreeSettingCondition::ineq2, c.seed);
            row(a.kind + "_raw_fixed", rep.raw_fixed, 1);
            row(a.kind + "_common_fixed", rep.common_fixed, 1);
            row(a.kind + "_optimized", rep.optimized, 1);
        } else if (a.kind == "rotinv-planar" || a.kind == "rotinv-full") {
            const auto rep = bf::rotinv_condition(
                tensor, a.kind == "rotinv-planar" ? bf::RotInvMode::planar : bf::RotInvMode::full, c.restarts, c.seed);
            row(a.kind + "_ratio", rep.ratio, 1);
            t.meta = {{"sum_sq", rep.sum_sq}, {"t_max", rep.t_max}};
        } else if (a.kind == "xz-sum") {
            const int n = tensor.n_parties();
            row("xz_sum", bf::plane_square_sum(tensor, std::vector<std::array<int, 2>>(n, {1, 3})), 1);
        } else if (a.kind == "modified") {
            row("modified_tensor_max", bf::modified_tensor_max(tensor, 20, c.seed), 1);
        } else {
            throw bf::DomainError("unknown condition kind '" + a.kind + "'");
        }
        return t;
    }
    if (a.target == "wwwzb-max") {
        const bf::CorrelationTensor tensor = bf::correlation_tensor(rho);
        const int n = tensor.n_parties();
        auto family = bf::wwwzb_family(n);
        std::vector<double> values(family.size());
        bf::SeeSawOptions opts;
        opts.restarts = c.restarts;
        opts.seed = c.seed;
        bf::parallel_for(family.size(), [&](std::size_t k) {
            values[k] = bf::quantum_value(family[k], tensor, opts).value;
        });
        const auto best = std::max_element(values.begin(), values.end()) - values.begin();
        t.columns = {"state", "visibility", "best_member", "quantum_value", "lhv_bound"};
        t.add({a.state, a.visibility, static_cast<long long>(best), values[best], 1.0});
        return t;
    }
    bf::BellFunctional f = bf::named_functional(a.target);
    const bf::CorrelationTensor tensor = bf::correlation_tensor(rho);
    if (tensor.n_parties() != f.scenario.n_parties) throw bf::DomainError("state and functional differ in party count");
    bf::SeeSawOptions opts;
    opts.restarts = c.restarts;
    opts.seed = c.seed;
    const auto q = bf::quantum_value(f, tensor, opts);
    t.columns = {"functional", "state", "visibility", "quantum_value", "lhv_bound", "ratio"};
    add_observable_columns(t, f);
    std::vector<Cell> row{f.name, a.state, a.visibility, q.value, *f.lhv_bound, q.value / *f.lhv_bound};
    push_angles(row, q.observables);
    t.add(row);
    return t;
}

// ---------------- generate ----------------

Table run_generate(int n)
{
    const auto cat = bf::generate_tight_functionals(n);
    std::vector<std::pair<std::string, bf::BellFunctional>> known;
    if (n == 3)
        for (int k = 1; k <= 4; ++k) known.emplace_back("wiesniak_ineq" + std::to_string(k), bf::wiesniak_ineq(k));
    if (n == 2) known.emplace_back("chsh_3settings", [] {
        bf::BellFunctional f(bf::Scenario(2, 3), "chsh_3settings");
        const auto c = bf::chsh();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f.at({i, j}) = c.at({i, j}) / 2.0;
        return f;
    }());
    Table t;
    t.columns = {"class", "orbit_size", "trivial", "lhv_bound", "saturating", "rank", "matches", "quarter_coefficients"};
    for (std::size_t k = 0; k < cat.classes.size(); ++k) {
        const auto& cls = cat.classes[k];
        std::string matches;
        for (const auto& [name, f] : known)
            if (bf::match_class(cat, f) == k) matches += (matches.empty() ? "" : " ") + name;
        std::string coeffs;
        for (int q : cls.quarter_coeffs) coeffs += (coeffs.empty() ? "" : " ") + std::to_string(q);
        t.add({static_cast<long long>(k), static_cast<long long>(cls.orbit_size), cls.trivial, *cls.functional.lhv_bound,
               static_cast<long long>(cls.saturating), static_cast<long long>(cls.rank), matches, coeffs});
    }
    t.meta = {{"n_parties", n}, {"sign_functions", cat.sign_functions}, {"nontrivial_classes", cat.nontrivial()}};
    return t;
}

// ---------------- photonics ----------------

struct PhotonicsArgs {
    std::string eta_grid = "0.01:1:0.01";
    std::string dphi_grid = "0:2pi:0.25pi";
    double eta = 1.0, l = 1.0, alpha_sq = 400.0, alpha = 0.5, beta = 0.0, v = 1.0, p_dark = 0.0;
    double r = 0.0349, dphi = 0.0;
    std::string variant = "plus_only";
    std::string method = "approx";
};

bf::ProbabilityMethod method_of(const std::string& m)
{
    if (m == "exact") return bf::ProbabilityMethod::exact;
    if (m == "approx") return bf::ProbabilityMethod::approx;
    throw bf::DomainError("method must be exact or approx");
}

Table run_photonics(const std::string& what, const PhotonicsArgs& a)
{
    Table t;
    bf::BJSSParams p;
    p.eta = a.eta;
    p.l = a.l;
    p.alpha_sq = a.alpha_sq;
    if (what == "bjss-curves") {
        t.columns = {"eta", "l_ch_pp", "l_chsh", "l_ch_pm", "v_crit"};
        for (double e : parse_grid(a.eta_grid)) {
            const auto c = bf::bjss_critical_curves(e);
            t.add({e, c.l_ch_pp, c.l_chsh, c.l_ch_pm, bf::garg_mermin({e, a.p_dark, 1.0}).v_crit});
        }
    } else if (what == "bjss-roots") {
        const auto r = bf::bjss_critical_roots();
        t.columns = {"curve", "eta_at_l1"};
        t.add({std::string("ch_pp"), r.l_ch_pp});
        t.add({std::string("chsh"), r.l_chsh});
        t.add({std::string("ch_pm"), r.l_ch_pm});
    } else if (what == "bjss-probs") {
        t.columns = {"dphi", "method", "n_max", "P_plus", "P_pp", "P_pm", "P_mp", "P_mm"};
        for (double d : parse_grid(a.dphi_grid)) {
            const auto q = bf::bjss_probs(p, 0.0, -d, method_of(a.method));
            t.add({d, a.method, static_cast<long long>(q.n_max_used), q.p_plus_c, q.p_pp, q.p_pm, q.p_mp, q.p_mm});
        }
    } else if (what == "bjss-ch") {
        const bool chsh = a.variant == "chsh";
        if (!chsh && a.variant != "plus_only" && a.variant != "plus_minus")
            throw bf::DomainError("variant must be plus_only, plus_minus or chsh");
        const auto opt = chsh ? bf::bjss_chsh_max(p, method_of(a.method))
                              : bf::bjss_ch_max(p, a.variant == "plus_only" ? bf::ChVariant::plus_only
                                                                             : bf::ChVariant::plus_minus,
                                                method_of(a.method));
        t.columns = {"variant", "eta", "l", "value", "phi_c", "phi_c2", "phi_d", "phi_d2"};
        t.add({a.variant, a.eta, a.l, opt.value, opt.angles[0], opt.angles[1], opt.angles[2], opt.angles[3]});
    } else if (what == "compensated") {
        const auto c = bf::bjss_compensated(p, a.dphi);
        t.columns = {"eta", "P_plus", "P_pp", "l_critical", "critical_product", "attainable"};
        t.add({a.eta, c.p_plus, c.p_pp, c.l_critical, c.critical_product, c.attainable});
    } else if (what == "ppt") {
        t.columns = {"eta", "l", "formula", "numeric"};
        t.add({a.eta, a.l, bf::bjss_ppt_min_eig_formula(a.eta, a.l), bf::bjss_ppt_min_eig_numeric(a.eta, a.l)});
    } else if (what == "twc") {
        t.columns = {"alpha", "visibility_single_photon", "visibility_coherent", "chsh_margin", "chsh_threshold"};
        const double vc = a.beta > 0 ? bf::twc_visibility(a.alpha, a.beta) : NAN;
        t.add({a.alpha, bf::twc_visibility(a.alpha), vc, bf::twc_chsh_margin(a.alpha), bf::twc_chsh_threshold()});
    } else if (what == "garg-mermin") {
        const auto g = bf::garg_mermin({a.eta, a.p_dark, a.v});
        t.columns = {"visibility", "eta", "p_dark", "eta_crit", "v_crit"};
        t.add({a.v, a.eta, a.p_dark, g.eta_crit, g.v_crit});
    } else if (what == "hessmo") {
        const double tr = std::sqrt(1 - a.r * a.r);
        const auto h = bf::hessmo_probs(a.alpha, a.r, tr, a.dphi, a.eta);
        t.columns = {"alpha", "r", "eta", "dphi", "P_c", "P_cd", "P_coinc_total", "visibility", "nonclassical"};
        t.add({a.alpha, a.r, a.eta, a.dphi, h.p_c, h.p_cd, h.p_coinc_total, h.visibility, h.nonclassical});
    } else {
        throw bf::DomainError("unknown photonics command '" + what + "'");
    }
    return t;
}

// ---------------- thermal / witness ----------------

struct ThermalArgs {
    std::string model;
    std::string input;
    std::string a_grid = "0";
    std::string t_grid = "0.5";
    std::string b_grid = "2";
    std::string level = "bipartite";
    std::string kind = "gapless";
    double scale = 2.0, e_bound = -0.25, u0 = -0.443;
    double J = 1.0, B = 0.0;
    int ed_sites = 0;
    int n = 2;
    double j1 = 1.0, j2 = 0.0;
};

Table run_sweep(const ThermalArgs& a)
{
    const auto a_values = parse_grid(a.a_grid);
    const auto t_values = parse_grid(a.t_grid);
    std::vector<std::vector<std::vector<Cell>>> rows(a_values.size());
    bf::parallel_for(a_values.size(), [&](std::size_t i) {
        const bf::SpinLattice lat = lattice_for(a.model, a.input, a_values[i]);
        const bf::Spectrum spec = bf::diagonalize(lat);
        const bf::StateMoments mom = bf::magnetization_moments(spec, lat);
        const bool applicable = lat.isotropic() && lat.field.squaredNorm() == 0;
        for (double T : t_values) {
            const auto th = bf::thermo(spec, mom, T);
            double chiT = 0;
            for (int ax = 0; ax < 3; ++ax) chiT += T * bf::susceptibility(spec, mom, T, Eigen::Vector3d::Unit(ax));
            const double thr = lat.spin_sum();
            rows[i].push_back({lat.name, a_values[i], T, th.U, th.C, chiT, thr, applicable && chiT < thr});
        }
    });
    Table t;
    t.columns = {"model", "a", "T", "U", "C", "chiT", "threshold", "flag"};
    for (auto& block : rows)
        for (auto& r : block) t.add(std::move(r));
    return t;
}

Table run_thermal(const std::string& what, const ThermalArgs& a)
{
    Table t;
    if (what == "sweep") return run_sweep(a);
    if (what == "spectrum") {
        const auto lat = lattice_for(a.model, a.input, parse_grid(a.a_grid).front());
        const auto spec = bf::diagonalize(lat, false);
        t.columns = {"index", "energy"};
        for (long k = 0; k < spec.energies.size(); ++k) t.add({static_cast<long long>(k), spec.energies(k)});
        t.meta = {{"dim", spec.dim}, {"blocks", spec.blocks.size()}};
    } else if (what == "ising-variance") {
        t.columns = {"B", "min_variance_per_site", "theta1", "theta2", "explicit_n8"};
        for (double B : parse_grid(a.b_grid)) {
            const auto r = bf::ising_min_variance(B);
            t.add({B, r.min_value_per_site, r.theta1, r.theta2,
                   bf::ising_product_variance_explicit(r.theta1, r.theta2, B, 8)});
        }
    } else if (what == "katsura-ising") {
        const double B = parse_grid(a.b_grid).front();
        t.columns = {"T", "C_per_site", "C_ed_per_site", "entanglement_line"};
        std::optional<bf::Spectrum> spec;
        if (a.ed_sites > 0) spec = bf::diagonalize(bf::ising_ring(a.ed_sites, 1, B), false);
        const double vmin = bf::ising_min_variance(B).min_value_per_site;
        for (double T : parse_grid(a.t_grid))
            t.add({T, bf::katsura_ising_c(B, T), spec ? bf::thermo(*spec, T).C / a.ed_sites : NAN, vmin / (T * T)});
    } else if (what == "katsura-xx") {
        t.columns = {"T", "U_per_site", "M_per_site"};
        for (double T : parse_grid(a.t_grid)) {
            const auto k = bf::katsura_xx(a.J / T, a.B / T);
            t.add({T, k.U_over_T * T, k.M_bar});
        }
    } else if (what == "concurrence") {
        const auto lat = lattice_for(a.model.empty() ? "xxx_ring:8" : a.model, a.input, 0.0);
        const auto spec = bf::diagonalize(lat);
        t.columns = {"T", "concurrence", "tensor_formula"};
        for (double T : parse_grid(a.t_grid)) {
            const auto pair = bf::partial_trace(bf::thermal_state(spec, T), {0, 1});
            const auto ct = bf::correlation_tensor(pair);
            const double formula = 0.5 * std::max(0.0, std::abs(ct({1, 1}) + ct({2, 2})) - ct({3, 3}) - 1.0);
            t.add({T, bf::concurrence(pair), formula});
        }
    } else {
        throw bf::DomainError("unknown thermal command '" + what + "'");
    }
    return t;
}

bf::EnergyLevel level_of(const std::string& s)
{
    if (s == "bipartite") return bf::EnergyLevel::bipartite;
    if (s == "tripartite") return bf::EnergyLevel::tripartite;
    if (s == "bifactorisable") return bf::EnergyLevel::bifactorisable;
    throw bf::DomainError("level must be bipartite, tripartite or bifactorisable");
}

Table run_witness(const std::string& what, const ThermalArgs& a)
{
    Table t;
    t.columns = {"T", "quantity", "threshold", "flag"};
    if (what == "susceptibility") {
        const auto lat = lattice_for(a.model, a.input, parse_grid(a.a_grid).front());
        if (!lat.isotropic() || lat.field.squaredNorm() > 0)
            throw bf::DomainError("susceptibility witness needs isotropic couplings and zero field");
        const auto spec = bf::diagonalize(lat);
        const auto mom = bf::magnetization_moments(spec, lat);
        for (double T : parse_grid(a.t_grid)) {
            const auto r = bf::witness_susceptibility(lat, spec, mom, T);
            t.add({T, r.quantity, r.threshold, r.entangled});
        }
        const auto g = bf::witness_susceptibility_ground(lat, spec, mom);
        t.meta = {{"ground_quantity", g.quantity}, {"ground_note", g.note}};
    } else if (what == "energy") {
        const auto lat = lattice_for(a.model, a.input, 0.0);
        for (double T : parse_grid(a.t_grid)) {
            const auto r = bf::witness_energy(lat, T, level_of(a.level));
            t.add({T, r.quantity, r.threshold, r.entangled});
        }
    } else if (what == "heat-capacity") {
        bf::HeatCapacityClass cls;
        if (a.kind == "gapless") cls.kind = bf::HeatCapacityClass::Kind::gapless;
        else if (a.kind == "gapped") cls.kind = bf::HeatCapacityClass::Kind::gapped;
        else throw bf::DomainError("kind must be gapless or gapped");
        cls.scale = a.scale;
        cls.e_bound = a.e_bound;
        cls.u0 = a.u0;
        t.columns = {"T", "threshold", "coefficient"};
        const int power = cls.kind == bf::HeatCapacityClass::Kind::gapless ? 1 : 2;
        for (double T : parse_grid(a.t_grid)) t.add({T, cls.threshold(T), cls.threshold(T) * std::pow(T, power)});
    } else if (what == "bvz-dimer") {
        const auto lat = bf::dimer_chain(a.n, a.j1, a.j2);
        const auto spec = bf::diagonalize(lat);
        const auto mom = bf::magnetization_moments(spec, lat);
        for (double T : parse_grid(a.t_grid)) {
            const double chi = bf::susceptibility(spec, mom, T, Eigen::Vector3d::UnitZ()) / a.n;
            const auto r = bf::witness_bvz_dimer(chi, T);
            t.add({T, r.quantity, r.threshold, r.entangled});
        }
    } else {
        throw bf::DomainError("unknown witness command '" + what + "'");
    }
    return t;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bellforge: Bell inequalities, photonic Bell tests and thermal entanglement witnesses"};
    app.require_subcommand(1);
    Common common;
    std::string command;

    BellArgs bell_args;
    auto* bell = app.add_subcommand("bell", "quantum/LHV values, GHZ check and tensor conditions");
    bell->add_option("target", bell_args.target,
                     "functional name (chsh, mermin_N, ardehali_N, mabk_N, chsh_lift_N, plzb3qa, wiesniak_ineqK), "
                     "wwwzb-max, condition, rotinv-critical, or avn");
    bell->add_option("--state", bell_args.state, "singlet | ghz:N | ghzm:N | w:N | gghz:N:alpha | mixed:N");
    bell->add_option("--visibility", bell_args.visibility, "white-noise visibility V")->check(CLI::Range(0.0, 1.0));
    bell->add_option("--kind", bell_args.kind,
                     "condition: wwwzb | wwwzb-fixed | wzlpzb | ineq1 | ineq2 | rotinv-planar | rotinv-full | xz-sum | modified");
    bell->add_option("--n", bell_args.n, "party count for avn and rotinv-critical");
    add_common(bell, common);

    int gen_n = 3;
    auto* gen = app.add_subcommand("generate", "tight three-setting correlation functionals");
    gen->add_option("--n", gen_n, "parties (2 or 3)");
    add_common(gen, common);

    PhotonicsArgs ph;
    std::string ph_what;
    auto* phot = app.add_subcommand("photonics", "single-photon Bell test quantities");
    phot->add_option("what", ph_what,
                     "bjss-curves | bjss-roots | bjss-probs | bjss-ch | compensated | ppt | twc | garg-mermin | hessmo")
        ->required();
    phot->add_option("--eta-grid", ph.eta_grid);
    phot->add_option("--dphi-grid", ph.dphi_grid);
    phot->add_option("--eta", ph.eta);
    phot->add_option("--l", ph.l);
    phot->add_option("--alpha-sq", ph.alpha_sq);
    phot->add_option("--alpha", ph.alpha);
    phot->add_option("--beta", ph.beta);
    phot->add_option("--v", ph.v);
    phot->add_option("--p-dark", ph.p_dark);
    phot->add_option("--r", ph.r, "beam-splitter reflection amplitude");
    phot->add_option("--dphi", ph.dphi);
    phot->add_option("--variant", ph.variant, "plus_only | plus_minus | chsh");
    phot->add_option("--method", ph.method, "approx | exact");
    add_common(phot, common);

    ThermalArgs th;
    std::string th_what, wi_what;
    auto thermal_options = [&](CLI::App* sub) {
        sub->add_option("--model", th.model, "xxx_ring:N:J:l | xxz_ring:N:J:J3:B | ising_ring:N:sign:B | blbq_ring6 | "
                                             "cube_center | octahedron_center | tetrahedron_center | dimer_chain:N:J1:J2 | xxx_chain:N:J");
        sub->add_option("--input", th.input, "lattice JSON file");
        sub->add_option("--a-grid", th.a_grid);
        sub->add_option("--t-grid", th.t_grid);
        sub->add_option("--b-grid", th.b_grid);
        add_common(sub, common);
    };
    auto* thermal = app.add_subcommand("thermal", "exact-diagonalization thermodynamics");
    thermal->add_option("what", th_what, "sweep | spectrum | ising-variance | katsura-ising | katsura-xx | concurrence")
        ->required();
    thermal->add_option("--ed-sites", th.ed_sites, "ring size for the ED comparison");
    thermal->add_option("--J", th.J);
    thermal->add_option("--B", th.B);
    thermal_options(thermal);

    auto* witness = app.add_subcommand("witness", "entanglement witnesses");
    witness->add_option("what", wi_what, "susceptibility | energy | heat-capacity | bvz-dimer")->required();
    witness->add_option("--level", th.level, "bipartite | tripartite | bifactorisable");
    witness->add_option("--kind", th.kind, "gapless | gapped");
    witness->add_option("--scale", th.scale, "gamma or gap");
    witness->add_option("--e-bound", th.e_bound);
    witness->add_option("--u0", th.u0);
    witness->add_option("--n", th.n);
    witness->add_option("--j1", th.j1);
    witness->add_option("--j2", th.j2);
    thermal_options(witness);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Table t;
        if (*bell) {
            command = "bell " + bell_args.target;
            t = run_bell(bell_args, common);
        } else if (*gen) {
            command = "generate";
            t = run_generate(gen_n);
        } else if (*phot) {
            command = "photonics " + ph_what;
            t = run_photonics(ph_what, ph);
        } else if (*thermal) {
            command = "thermal " + th_what;
            t = run_thermal(th_what, th);
        } else if (*witness) {
            command = "witness " + wi_what;
            t = run_witness(wi_what, th);
        }
        emit(t, common, command);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
