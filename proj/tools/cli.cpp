// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsd/io.hpp"
#include "qsd/qsd.hpp"

namespace qsd::cli {
namespace {

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

void print_matrix(std::ostream& out, const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << "  [";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Complex z = m(r, c);
            out << (c ? ", " : "") << format_text(z.real()) << (z.imag() < 0 ? "-" : "+") << format_text(std::abs(z.imag()))
                << "i";
        }
        out << "]\n";
    }
}

std::string optional_flag(const std::optional<bool>& v) {
    if (!v) return "n/a";
    return *v ? "pass" : "FAIL";
}

// Top eigenvector of a rank-1 state.
PureState as_pure(const DensityMatrix& rho) {
    if (std::abs(rho.purity() - 1.0) > 1e-10) {
        throw std::invalid_argument("--method pure needs a pure state (purity " + format_text(rho.purity()) + ")");
    }
    const Spectrum s = hermitian_eig(rho.matrix());
    std::vector<Complex> v(rho.dimension());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = s.eigenvectors(r, v.size() - 1);
    return PureState::normalized(rho.dims(), std::move(v));
}

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    Json config;
    std::uint64_t seed = 0;
    std::string started_at;
    std::vector<std::string> outputs;

    void write(const std::string& output_path) const {
        Json j{{"command", command},
               {"argv", argv},
               {"config", config},
               {"seed", seed},
               {"tool_version", kVersion},
               {"started_at", started_at},
               {"finished_at", utc_now()},
               {"outputs", outputs}};
        write_file(manifest_path_for(output_path), [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }
};

struct Options {
    // rre
    std::string bell;
    bool maximally_mixed = false;
    bool random = false;
    int rank = 4;
    std::string file;
    std::string method = "spectral";
    double tol = 1e-10;
    bool json = false;
    std::uint64_t seed = 0;
    // bounds
    bool bell_ensemble = false;
    bool separable = false;
    int rank1 = 4;
    int rank2 = 4;
    // experiments
    std::string panel = "mixed";
    std::vector<int> ranks;
    std::size_t n = 1000;
    std::string product_mode = "identical";
    unsigned threads = 1;
    std::string out_path;
    int restarts = 64;
    int max_iter = 2000;
    double zero_tol = 1e-4;
    std::vector<double> grid;
    bool second_product = false;
    // replay
    std::string manifest;
};

int cmd_rre(const Options& o, std::ostream& out) {
    const int sources = !o.bell.empty() + o.maximally_mixed + o.random + !o.file.empty();
    if (sources != 1) {
        throw UsageError("rre: choose exactly one of --bell, --maximally-mixed, --random, --file");
    }
    std::optional<DensityMatrix> rho;
    if (!o.bell.empty()) {
        rho = DensityMatrix::projector(bell_state(parse_bell_label(o.bell)));
    } else if (o.maximally_mixed) {
        rho = DensityMatrix::maximally_mixed(kTwoQubits);
    } else if (o.random) {
        SeededRng rng(o.seed);
        rho = random_mixed_rank(kTwoQubits, static_cast<std::size_t>(o.rank), rng);
    } else {
        rho = read_state_file(o.file);
    }

    RREResult result = [&] {
        if (o.method == "spectral") return rre(*rho);
        if (o.method == "bisection") return rre_bisection_oracle(*rho, o.tol);
        if (o.method == "pure") {
            const double value = rre_pure(as_pure(*rho));
            return RREResult{value, rho->mixed_with_identity(value), RreMethod::pure_closed_form};
        }
        throw UsageError("rre: unknown --method '" + o.method + "' (spectral, bisection, pure)");
    }();

    if (o.json) {
        out << rre_to_json(result).dump(2) << '\n';
    } else {
        out << "rre: " << format_text(result.value) << '\n';
        out << "method: " << to_string(result.method) << '\n';
        out << "closest separable state:\n";
        print_matrix(out, result.closest_separable.matrix());
    }
    return kSuccess;
}

int cmd_bounds(const Options& o, std::ostream& out) {
    const int sources = o.bell_ensemble + o.separable + o.random + !o.file.empty();
    if (sources != 1) {
        throw UsageError("bounds: choose exactly one of --bell, --separable, --random, --file");
    }
    std::optional<Ensemble> eta;
    if (o.bell_ensemble) {
        eta = Ensemble::pair(0.5, DensityMatrix::projector(bell_state(BellLabel::phi_plus)),
                             DensityMatrix::projector(bell_state(BellLabel::phi_minus)));
    } else if (o.separable) {
        eta = Ensemble::pair(0.5, DensityMatrix::projector(basis_state(1)), DensityMatrix::maximally_mixed(kTwoQubits));
    } else if (o.random) {
        SeededRng rng(o.seed);
        DensityMatrix rho1 = random_mixed_rank(kTwoQubits, static_cast<std::size_t>(o.rank1), rng);
        DensityMatrix rho2 = random_mixed_rank(kTwoQubits, static_cast<std::size_t>(o.rank2), rng);
        eta = Ensemble::pair(rng.uniform(), std::move(rho1), std::move(rho2));
    } else {
        eta = read_ensemble_file(o.file);
    }

    const BoundReport rep = bound_report(*eta);
    if (o.json) {
        out << bound_report_to_json(rep).dump(2) << '\n';
    } else {
        out << "P_G(ensemble): " << format_text(rep.p_eta) << '\n';
        out << "P_G(closest separable ensemble): " << format_text(rep.p_eps) << '\n';
        out << "RRE:";
        for (double r : rep.r_values) out << ' ' << format_text(r);
        out << '\n';
        out << "Rmax: " << format_text(rep.r_max) << "  Rmin: " << format_text(rep.r_min) << '\n';
        out << "gamma: " << format_text(rep.gamma) << '\n';
        out << "theorem 1 upper bound: " << format_text(rep.thm1_upper) << " [" << (rep.thm1_ok ? "pass" : "FAIL")
            << "]\n";
        out << "theorem 2 lower bound: " << format_text(rep.thm2_lower) << " [" << (rep.thm2_ok ? "pass" : "FAIL")
            << "]\n";
        out << "theorem 3 (equal RRE): " << optional_flag(rep.thm3_ok) << '\n';
        out << "theorem 4 lower bound on difference: "
            << (rep.thm4_lower_diff ? format_text(*rep.thm4_lower_diff) : std::string("n/a")) << " ["
            << optional_flag(rep.thm4_ok) << "]\n";
    }
    return rep.any_violation() ? kBoundViolation : kSuccess;
}

ProductMode parse_product_mode(const std::string& s) {
    if (s == "identical") return ProductMode::identical;
    if (s == "independent") return ProductMode::independent;
    throw UsageError("unknown --product-mode '" + s + "' (identical, independent)");
}

int cmd_fig1(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    if (o.out_path.empty()) throw UsageError("experiment fig1: --out is required");
    Manifest manifest{"experiment fig1", argv, {}, o.seed, utc_now(), {o.out_path}};

    Fig1Config cfg;
    if (o.panel == "mixed") {
        cfg = Fig1Config::for_panel(Fig1Panel::mixed_ranks);
        if (!o.ranks.empty()) {
            if (o.ranks.size() % 2 != 0) {
                throw UsageError("experiment fig1: --panel mixed takes rank pairs, e.g. --ranks 4,4 or 1,1,2,2");
            }
            cfg.classes.clear();
            for (std::size_t i = 0; i < o.ranks.size(); i += 2) cfg.classes.push_back({o.ranks[i], o.ranks[i + 1], false});
        }
    } else if (o.panel == "product") {
        cfg = Fig1Config::for_panel(Fig1Panel::product_vs_rank);
        if (!o.ranks.empty()) {
            cfg.classes.clear();
            for (int k : o.ranks) cfg.classes.push_back({k, 1, true});
        }
    } else {
        throw UsageError("experiment fig1: unknown --panel '" + o.panel + "' (mixed, product)");
    }
    cfg.n_ensembles = o.n;
    cfg.seed = o.seed;
    cfg.product_mode = parse_product_mode(o.product_mode);
    cfg.threads = o.threads;

    Json classes = Json::array();
    for (const auto& c : cfg.classes) classes.push_back({{"rank1", c.rank1}, {"rank2", c.rank2}, {"product", c.product}});
    manifest.config = {{"panel", o.panel}, {"classes", classes},    {"n_ensembles", cfg.n_ensembles},
                       {"seed", cfg.seed}, {"product_mode", o.product_mode}};

    const Fig1Result res = run_fig1(cfg);
    write_file(o.out_path, [&](std::ostream& f) { write_fig1_csv(f, res.records); });
    manifest.write(o.out_path);

    const auto& s = res.summary;
    out << "records: " << s.records << '\n';
    out << "gamma>1 violations: " << s.gamma_violations << '\n';
    out << "theorem 1 violations: " << s.thm1_violations << '\n';
    out << "theorem 2 violations: " << s.thm2_violations << '\n';
    out << "below 1/(1+R) curve: " << s.below_curve << '\n';
    for (const auto& c : s.per_class) {
        out << "  class rank1=" << c.cls.rank1 << " rank2=" << (c.cls.product ? std::string("product") : std::to_string(c.cls.rank2))
            << ": " << c.below_curve << "/" << c.count << " below\n";
    }
    return (s.gamma_violations + s.thm1_violations + s.thm2_violations) ? kBoundViolation : kSuccess;
}

int cmd_fig2(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    if (o.out_path.empty()) throw UsageError("experiment fig2: --out is required");
    Manifest manifest{"experiment fig2", argv, {}, o.seed, utc_now(), {o.out_path}};

    Fig2Config cfg;
    if (!o.grid.empty()) cfg.r_grid = o.grid;
    cfg.restarts = o.restarts;
    cfg.max_iterations = o.max_iter;
    cfg.zero_tolerance = o.zero_tol;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.second_product = o.second_product;
    manifest.config = {{"r_grid", cfg.r_grid},         {"restarts", cfg.restarts}, {"max_iterations", cfg.max_iterations},
                       {"zero_tolerance", cfg.zero_tolerance}, {"seed", cfg.seed},   {"second_product", cfg.second_product}};

    const Fig2Result res = run_fig2(cfg);
    write_file(o.out_path, [&](std::ostream& f) { write_fig2_csv(f, res.records); });
    manifest.write(o.out_path);

    for (const auto& r : res.records) {
        out << "r=" << format_text(r.r) << " deltaP=" << format_text(r.delta_p) << '\n';
    }
    out << "r_c: " << (res.r_c ? format_text(*res.r_c) : std::string("none")) << '\n';
    out << "monotone tail: " << (res.monotone_tail ? "yes" : "no") << '\n';
    out << "lower-bound floor violations: " << res.floor_violations << '\n';
    return res.floor_violations ? kBoundViolation : kSuccess;
}

void print_tally(std::ostream& out, const char* name, const TheoremTally& t) {
    out << name << ": checked " << t.checked << ", violations " << t.violations << ", worst slack "
        << format_text(t.worst_slack) << '\n';
}

int cmd_verify(const Options& o, const std::vector<std::string>& argv, std::ostream& out) {
    if (o.n < 1) throw std::invalid_argument("experiment verify: --n must be at least 1");
    VerifyConfig cfg;
    cfg.n_samples = o.n;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    const std::string started = utc_now();
    const VerifySummary s = verify_theorems(cfg);
    if (!o.out_path.empty()) {
        write_file(o.out_path, [&](std::ostream& f) {
            f << "theorem,checked,violations,worst_slack\n";
            const std::pair<const char*, const TheoremTally*> rows[] = {
                {"1", &s.thm1}, {"2", &s.thm2}, {"3", &s.thm3}, {"4", &s.thm4}};
            for (const auto& [name, t] : rows) {
                f << name << ',' << t->checked << ',' << t->violations << ',' << format_full(t->worst_slack) << '\n';
            }
        });
        Manifest{"experiment verify", argv, {{"n_samples", cfg.n_samples}, {"seed", cfg.seed}}, o.seed, started, {o.out_path}}
            .write(o.out_path);
    }
    print_tally(out, "theorem 1", s.thm1);
    print_tally(out, "theorem 2", s.thm2);
    print_tally(out, "theorem 3", s.thm3);
    print_tally(out, "theorem 4", s.thm4);
    return s.ok() ? kSuccess : kBoundViolation;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth);

int cmd_replay(const Options& o, std::ostream& out, std::ostream& err, int depth) {
    const Json j = read_json_file(o.manifest);
    if (!j.contains("argv") || !j.at("argv").is_array()) {
        throw IoError(o.manifest + ": manifest has no 'argv' array");
    }
    if (depth > 0) throw UsageError("replay: nested replay is not allowed");
    return dispatch(j.at("argv").get<std::vector<std::string>>(), out, err, depth + 1);
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QSD_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("QSD_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, int depth) {
    Options o;
    CLI::App app{"Minimum-error discrimination and robustness of entanglement for two-qubit ensembles", "qsd"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", o.seed, "RNG seed (default: $QSD_SEED or 0)"); };

    auto* rre_cmd = app.add_subcommand("rre", "Random robustness of entanglement of a two-qubit state");
    rre_cmd->add_option("--bell", o.bell, "Bell state: phi+, phi-, psi+, psi-");
    rre_cmd->add_flag("--maximally-mixed", o.maximally_mixed, "Use I/4");
    rre_cmd->add_flag("--random", o.random, "Sample a random state of the given rank");
    rre_cmd->add_option("--rank", o.rank, "Rank for --random")->check(CLI::Range(1, 4));
    rre_cmd->add_option("--file", o.file, "State JSON file");
    rre_cmd->add_option("--method", o.method, "spectral, bisection or pure");
    rre_cmd->add_option("--tol", o.tol, "Bisection tolerance");
    rre_cmd->add_flag("--json", o.json, "JSON output");
    add_seed(rre_cmd);

    auto* bounds_cmd = app.add_subcommand("bounds", "Discrimination bounds for a two-state ensemble");
    bounds_cmd->add_flag("--bell", o.bell_ensemble, "Equiprobable phi+/phi- ensemble");
    bounds_cmd->add_flag("--separable", o.separable, "Equiprobable |01><01| / I/4 ensemble");
    bounds_cmd->add_flag("--random", o.random, "Random ensemble of the given ranks");
    bounds_cmd->add_option("--rank1", o.rank1, "Rank of state 1 for --random")->check(CLI::Range(1, 4));
    bounds_cmd->add_option("--rank2", o.rank2, "Rank of state 2 for --random")->check(CLI::Range(1, 4));
    bounds_cmd->add_option("--file", o.file, "Ensemble JSON file");
    bounds_cmd->add_flag("--json", o.json, "JSON output");
    add_seed(bounds_cmd);

    auto* exp_cmd = app.add_subcommand("experiment", "Batch experiments writing CSV plus a manifest");
    exp_cmd->require_subcommand(1);
    auto* fig1_cmd = exp_cmd->add_subcommand("fig1", "gamma vs maximum RRE over random ensembles");
    fig1_cmd->add_option("--panel", o.panel, "mixed or product");
    fig1_cmd->add_option("--ranks", o.ranks, "Rank pairs (mixed) or ranks (product), comma separated")->delimiter(',');
    fig1_cmd->add_option("--n", o.n, "Ensembles per class");
    fig1_cmd->add_option("--product-mode", o.product_mode, "identical or independent");
    fig1_cmd->add_option("--threads", o.threads, "Worker threads");
    fig1_cmd->add_option("--out", o.out_path, "Output CSV path");
    add_seed(fig1_cmd);

    auto* fig2_cmd = exp_cmd->add_subcommand("fig2", "delta-P(r) over pure-state pairs and its threshold r_c");
    fig2_cmd->add_option("--grid", o.grid, "Ascending r values in (0, 2), comma separated")->delimiter(',');
    fig2_cmd->add_option("--restarts", o.restarts, "Nelder-Mead restarts per r");
    fig2_cmd->add_option("--max-iter", o.max_iter, "Simplex iteration cap");
    fig2_cmd->add_option("--tol", o.zero_tol, "Tolerance for delta-P = 0");
    fig2_cmd->add_flag("--second-product", o.second_product, "Pin state 2 to a product state");
    fig2_cmd->add_option("--threads", o.threads, "Worker threads");
    fig2_cmd->add_option("--out", o.out_path, "Output CSV path");
    add_seed(fig2_cmd);

    auto* verify_cmd = exp_cmd->add_subcommand("verify", "Monte-Carlo check of the four bounds");
    verify_cmd->add_option("--n", o.n, "Samples per construction");
    verify_cmd->add_option("--threads", o.threads, "Worker threads");
    verify_cmd->add_option("--out", o.out_path, "Optional CSV of the tallies");
    add_seed(verify_cmd);

    auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", o.manifest, "Manifest JSON path")->required();

    try {
        o.seed = default_seed();
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    if (rre_cmd->parsed()) return cmd_rre(o, out);
    if (bounds_cmd->parsed()) return cmd_bounds(o, out);
    if (fig1_cmd->parsed()) return cmd_fig1(o, args, out);
    if (fig2_cmd->parsed()) return cmd_fig2(o, args, out);
    if (verify_cmd->parsed()) return cmd_verify(o, args, out);
    if (replay_cmd->parsed()) return cmd_replay(o, out, err, depth);
    throw UsageError("no command given");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err, 0);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
}

}  // namespace qsd::cli
