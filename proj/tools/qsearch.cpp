// qsearch: state-vector laboratory for quantum database search and
// quantum-random-walk spatial search on hypercubic lattices.
//
// Exit codes: 0 success, 1 usage error, 2 numerical-consistency failure,
// 3 infeasible size.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qsearch/dispersion.hpp"
#include "qsearch/grover.hpp"
#include "qsearch/lab.hpp"
#include "qsearch/lattice.hpp"
#include "qsearch/spatial.hpp"
#include "qsearch/walk.hpp"

namespace {

std::size_t size_cap_from_env(std::size_t flag_value) {
    if (const char* env = std::getenv("QSEARCH_MAX_N")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("QSEARCH_MAX_N is not a number");
        }
    }
    return flag_value;
}

std::vector<std::size_t> parse_size_list(const std::string& s) {
    std::vector<std::size_t> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoull(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(std::stod(item));
    return out;
}

void emit_records(const std::vector<qsearch::SearchRecord>& records, const std::string& out_path) {
    if (!out_path.empty() && out_path != "-") return; // sweep already wrote the file
    std::cout << qsearch::csv_header() << '\n';
    for (const auto& r : records) std::cout << qsearch::to_csv_row(r) << '\n';
}

int run_grover_cmd(std::size_t n, const std::string& marked_list, bool trace,
                   std::size_t max_n) {
    if (n == 0) throw std::invalid_argument("grover: need --n >= 1");
    if (n > max_n) throw qsearch::size_error("grover: N exceeds the size cap");
    std::vector<std::size_t> marked =
        marked_list.empty() ? std::vector<std::size_t>{0} : parse_size_list(marked_list);

    const auto opt = qsearch::optimal_queries(n, marked.size());
    const auto run = qsearch::run_grover(n, marked, opt.q);
    const double measured = run.trace.back().second;

    std::cout << "N=" << n << " M=" << marked.size() << " Q=" << opt.q
              << " success_closed_form=" << opt.success << " success_measured=" << measured
              << '\n';
    if (trace) {
        std::cout << "iteration,success_probability\n";
        for (const auto& [it, p] : run.trace) std::cout << it << ',' << p << '\n';
    }
    if (std::abs(measured - opt.success) > 1e-9)
        throw qsearch::consistency_error("grover: simulation deviates from closed form");
    return 0;
}

int run_spatial_cmd(int d, std::size_t side, int t1, std::optional<double> tau,
                    std::size_t t2_max, const std::string& csv, std::size_t max_n) {
    const auto lat = qsearch::make_lattice(d, side);
    if (lat.n > max_n) throw qsearch::size_error("spatial: L^d exceeds the size cap");

    qsearch::SearchConfig cfg;
    cfg.lattice = lat;
    cfg.t1 = t1;
    cfg.t2_max = t2_max;
    if (tau) {
        cfg.tau = *tau;
    } else {
        const auto tuned = qsearch::tune_tau(lat, t1);
        cfg.tau = tuned.tau;
        std::cerr << "tuned tau=" << tuned.tau << " objective=" << tuned.score << '\n';
    }
    const auto res = qsearch::run_search(cfg);
    const auto bound = qsearch::lower_bound_check(lat, res);

    qsearch::SearchRecord rec;
    rec.mode = "spatial";
    rec.d = d;
    rec.side = side;
    rec.n = lat.n;
    rec.t1 = t1;
    rec.tau = cfg.tau;
    rec.t2_star = res.t2_star;
    rec.p_max = res.p_max;
    rec.effective_queries = res.effective_queries;
    rec.walk_steps_total = res.walk_steps_total;
    rec.status = res.budget_limited ? "budget-limited" : "ok";

    if (!csv.empty()) {
        if (csv == "-") {
            std::cout << qsearch::csv_header() << '\n' << qsearch::to_csv_row(rec) << '\n';
        } else {
            std::ofstream out(csv, std::ios::app);
            const bool fresh = out.tellp() == 0;
            if (fresh) out << qsearch::csv_header() << '\n';
            out << qsearch::to_csv_row(rec) << '\n';
        }
    } else {
        std::cout << "d=" << d << " L=" << side << " N=" << lat.n << " t1=" << t1
                  << " tau=" << cfg.tau << " t2*=" << res.t2_star << " p_max=" << res.p_max
                  << " effective_queries=" << res.effective_queries
                  << " walk_steps=" << res.walk_steps_total
                  << (res.budget_limited ? " (budget-limited)" : "") << '\n';
        std::cout << "lower bounds: walk_steps/(dL)=" << bound.steps_per_dL
                  << " effective_queries/sqrt(N)=" << bound.queries_per_sqrt_n << '\n';
    }
    return 0;
}

int run_tulsi_cmd(std::size_t side, int t1, std::optional<double> tau,
                  std::optional<double> cos_delta, const std::string& sweep_delta,
                  std::size_t t2_max, const std::string& csv, std::size_t max_n) {
    const auto lat = qsearch::make_lattice(2, side);
    if (lat.n > max_n) throw qsearch::size_error("tulsi: L^2 exceeds the size cap");

    std::vector<double> deltas;
    if (!sweep_delta.empty())
        deltas = parse_double_list(sweep_delta);
    else
        deltas.push_back(cos_delta ? *cos_delta : qsearch::default_cos_delta(lat.n));

    double tau_value;
    if (tau) {
        tau_value = *tau;
    } else {
        const auto tuned = qsearch::tune_tau(lat, t1);
        tau_value = tuned.tau;
        std::cerr << "tuned tau=" << tuned.tau << " objective=" << tuned.score << '\n';
    }

    std::vector<qsearch::SearchRecord> records;
    for (double cd : deltas) {
        qsearch::SearchConfig cfg;
        cfg.lattice = lat;
        cfg.t1 = t1;
        cfg.tau = tau_value;
        cfg.t2_max = t2_max;
        cfg.tulsi_cos_delta = cd;
        const auto res = qsearch::run_search_tulsi(cfg);
        qsearch::SearchRecord rec;
        rec.mode = "tulsi";
        rec.d = 2;
        rec.side = side;
        rec.n = lat.n;
        rec.t1 = t1;
        rec.tau = tau_value;
        rec.cos_delta = cd;
        rec.t2_star = res.t2_star;
        rec.p_max = res.p_max;
        rec.effective_queries = res.effective_queries;
        rec.walk_steps_total = res.walk_steps_total;
        rec.status = res.budget_limited ? "budget-limited" : "ok";
        records.push_back(rec);
    }

    if (!csv.empty() && csv != "-") {
        std::ofstream out(csv, std::ios::app);
        const bool fresh = out.tellp() == 0;
        if (fresh) out << qsearch::csv_header() << '\n';
        for (const auto& r : records) out << qsearch::to_csv_row(r) << '\n';
    } else {
        std::cout << qsearch::csv_header() << '\n';
        for (const auto& r : records) std::cout << qsearch::to_csv_row(r) << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"State-vector laboratory for Grover search and quantum-random-walk "
                 "spatial search on hypercubic lattices"};
    app.require_subcommand(1);

    std::size_t max_n_flag = qsearch::default_max_n;
    app.add_option("--max-n", max_n_flag, "Refuse state vectors larger than this");
    int jobs = 1;
    app.add_option("--jobs", jobs, "Worker threads for sweeps");

    // grover
    auto* grover = app.add_subcommand("grover", "Run Grover database search at the optimal Q");
    std::size_t g_n = 0;
    std::string g_marked;
    bool g_trace = false;
    grover->add_option("--n", g_n, "Database size")->required();
    grover->add_option("--marked", g_marked, "Comma-separated marked indices (default 0)");
    grover->add_flag("--trace", g_trace, "Print the per-iteration success trace");

    // spatial
    auto* spatial = app.add_subcommand("spatial", "Quantum-random-walk spatial search");
    int s_d = 3;
    std::size_t s_l = 8;
    int s_t1 = 3;
    double s_tau = -1.0;
    bool s_tune = false;
    std::size_t s_t2max = 0;
    std::string s_csv;
    spatial->add_option("--d", s_d, "Lattice dimension")->required();
    spatial->add_option("--l", s_l, "Lattice side (even)")->required();
    spatial->add_option("--t1", s_t1, "Walk steps per oracle query");
    spatial->add_option("--tau", s_tau, "Fixed step parameter");
    spatial->add_flag("--tune", s_tune, "Tune tau (default when --tau is absent)");
    spatial->add_option("--t2-max", s_t2max, "Query budget (0 = default)");
    spatial->add_option("--csv", s_csv, "Append the record to this CSV ('-' = stdout)");

    // tulsi
    auto* tulsi = app.add_subcommand("tulsi", "Ancilla-regulated d=2 spatial search");
    std::size_t u_l = 32;
    int u_t1 = 3;
    double u_tau = -1.0;
    double u_cd = -1.0;
    std::string u_sweep;
    std::size_t u_t2max = 0;
    std::string u_csv;
    tulsi->add_option("--l", u_l, "Lattice side (even)")->required();
    tulsi->add_option("--t1", u_t1, "Walk steps per oracle query");
    tulsi->add_option("--tau", u_tau, "Fixed step parameter (default: tuned)");
    tulsi->add_option("--cos-delta", u_cd, "Regulator strength in (0,1]");
    tulsi->add_option("--sweep-delta", u_sweep, "Comma-separated cos_delta values");
    tulsi->add_option("--t2-max", u_t2max, "Query budget (0 = default)");
    tulsi->add_option("--csv", u_csv, "Append records to this CSV ('-' = stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
    std::string config_path;
    sweep_cmd->add_option("--config", config_path, "Flat key=value config file")->required();

    // fig3
    auto* fig3 = app.add_subcommand("fig3", "Effective queries vs N across dimensions, a + b/d fit");
    std::string f3_ds = "3,4,5,6,7,8,9";
    std::string f3_ls = "4,6,8,10,12,16";
    int f3_t1 = 3;
    std::string f3_out;
    fig3->add_option("--ds", f3_ds, "Dimensions");
    fig3->add_option("--ls", f3_ls, "Side lengths (infeasible sizes skipped)");
    fig3->add_option("--t1", f3_t1, "Walk steps per oracle query");
    fig3->add_option("--out", f3_out, "CSV output path");

    // fig4
    auto* fig4 = app.add_subcommand("fig4", "Regulated d=2 scaling, a + b/L fit");
    std::string f4_ls = "16,32,64,128";
    std::string f4_cds;
    int f4_t1 = 3;
    std::string f4_out;
    fig4->add_option("--ls", f4_ls, "Side lengths");
    fig4->add_option("--cos-delta", f4_cds, "Comma-separated cos_delta values (default auto)");
    fig4->add_option("--t1", f4_t1, "Walk steps per oracle query");
    fig4->add_option("--out", f4_out, "CSV output path");

    // table
    auto* table = app.add_subcommand("table", "Classical vs quantum query-count table");
    std::string t_ns = "4,16,64,256,1024";
    std::string t_csv;
    table->add_option("--ns", t_ns, "Database sizes");
    table->add_option("--csv", t_csv, "Write CSV here instead of aligned text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const std::size_t max_n = size_cap_from_env(max_n_flag);

        if (grover->parsed()) return run_grover_cmd(g_n, g_marked, g_trace, max_n);

        if (spatial->parsed()) {
            std::optional<double> tau;
            if (!s_tune && s_tau > 0.0) tau = s_tau;
            return run_spatial_cmd(s_d, s_l, s_t1, tau, s_t2max, s_csv, max_n);
        }

        if (tulsi->parsed()) {
            std::optional<double> tau;
            if (u_tau > 0.0) tau = u_tau;
            std::optional<double> cd;
            if (u_cd > 0.0) cd = u_cd;
            return run_tulsi_cmd(u_l, u_t1, tau, cd, u_sweep, u_t2max, u_csv, max_n);
        }

        if (sweep_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("sweep: cannot read config " + config_path);
            qsearch::SweepSpec spec = qsearch::parse_sweep_config(in);
            spec.max_n = std::min(spec.max_n, max_n);
            if (jobs > 1) spec.jobs = jobs;
            const auto records = qsearch::sweep(spec);
            emit_records(records, spec.output_path);
            return 0;
        }

        if (fig3->parsed()) {
            const auto [records, fit] =
                qsearch::reproduce_fig3(parse_size_list(f3_ls), parse_int_list(f3_ds), f3_t1,
                                        max_n, f3_out, jobs);
            emit_records(records, f3_out);
            std::cout << "fit eff/sqrt(N) = a + b/d: a=" << fit.a << " b=" << fit.b
                      << " residual_rms=" << fit.residual_rms << " points=" << fit.points_used
                      << " (pi/4=" << qsearch::pi / 4 << ", gap=" << fit.a - qsearch::pi / 4
                      << ")\n";
            return 0;
        }

        if (fig4->parsed()) {
            const std::vector<double> cds =
                f4_cds.empty() ? std::vector<double>{} : parse_double_list(f4_cds);
            const auto [records, fit] = qsearch::reproduce_fig4(parse_size_list(f4_ls), cds,
                                                                f4_t1, max_n, f4_out, jobs);
            emit_records(records, f4_out);
            std::cout << "fit eff/sqrt(N log2 N) = a + b/L: a=" << fit.a << " b=" << fit.b
                      << " residual_rms=" << fit.residual_rms << " points=" << fit.points_used
                      << '\n';
            return 0;
        }

        if (table->parsed()) {
            const auto rows = qsearch::grover_table(parse_size_list(t_ns));
            if (!t_csv.empty()) {
                if (t_csv == "-") {
                    std::cout << qsearch::grover_table_csv(rows);
                } else {
                    std::ofstream out(t_csv);
                    out << qsearch::grover_table_csv(rows);
                }
            } else {
                std::cout << qsearch::grover_table_text(rows);
            }
            return 0;
        }
    } catch (const qsearch::consistency_error& e) {
        std::cerr << "numerical consistency failure: " << e.what() << '\n';
        return 2;
    } catch (const qsearch::size_error& e) {
        std::cerr << "infeasible size: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
