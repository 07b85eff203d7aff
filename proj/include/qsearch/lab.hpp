#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qsearch/common.hpp"
#include "qsearch/fit.hpp"
#include "qsearch/grover.hpp"
#include "qsearch/lattice.hpp"
#include "qsearch/spatial.hpp"
#include "qsearch/walk.hpp"

namespace qsearch {

enum class SweepMode { grover, spatial, tulsi };

inline std::string to_string(SweepMode m) {
    switch (m) {
        case SweepMode::grover: return "grover";
        case SweepMode::spatial: return "spatial";
        case SweepMode::tulsi: return "tulsi";
    }
    return "?";
}

/// One experiment plan: the cartesian product of the parameter lists.
struct SweepSpec {
    SweepMode mode = SweepMode::spatial;
    std::vector<int> dims;
    std::vector<std::size_t> sides;
    std::vector<std::size_t> ns; // grover mode: database sizes
    std::vector<int> t1_values{3};
    std::optional<double> tau;              // nullopt -> auto-tune per lattice
    std::vector<double> cos_delta_values;   // tulsi; empty -> 1/sqrt(log2 N)
    std::uint64_t seed = 0;
    std::string output_path;
    std::size_t t2_max = 0; // 0 -> default budget
    std::size_t max_n = default_max_n;
    int jobs = 1;
    bool timing = false; // wall-clock runtime_ms breaks byte-reproducibility
};

/// One measurement row, the unit of CSV persistence.
struct SearchRecord {
    std::string mode;
    int d = 0;
    std::size_t side = 0;
    std::size_t n = 0;
    int t1 = 0;
    double tau = 0.0;
    double cos_delta = 0.0;
    std::size_t t2_star = 0;
    double p_max = 0.0;
    double effective_queries = 0.0;
    std::size_t walk_steps_total = 0;
    long runtime_ms = 0;
    std::string status = "ok";
};

inline const char* csv_header() {
    return "mode,d,L,N,t1,tau,cos_delta,t2_star,p_max,effective_queries,"
           "walk_steps_total,runtime_ms,status";
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace detail

inline std::string to_csv_row(const SearchRecord& r) {
    std::ostringstream os;
    os << r.mode << ',' << r.d << ',' << r.side << ',' << r.n << ',' << r.t1 << ','
       << detail::fmt_double(r.tau) << ',' << detail::fmt_double(r.cos_delta) << ','
       << r.t2_star << ',' << detail::fmt_double(r.p_max) << ','
       << detail::fmt_double(r.effective_queries) << ',' << r.walk_steps_total << ','
       << r.runtime_ms << ',' << r.status;
    return os.str();
}

namespace detail {

// Identity of one configuration, used for resume matching.
using ConfigKey = std::tuple<std::string, int, std::size_t, std::size_t, int, std::string>;

inline ConfigKey record_key(const SearchRecord& r) {
    return {r.mode, r.d, r.side, r.n, r.t1, fmt_double(r.cos_delta)};
}

inline std::string key_string(const ConfigKey& k) {
    std::ostringstream os;
    os << std::get<0>(k) << ';' << std::get<1>(k) << ';' << std::get<2>(k) << ';'
       << std::get<3>(k) << ';' << std::get<4>(k) << ';' << std::get<5>(k);
    return os.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

/// Keys of rows already present in an output file (error rows are retried).
inline std::set<ConfigKey> completed_keys(const std::string& path) {
    std::set<ConfigKey> done;
    std::ifstream in(path);
    if (!in) return done;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        auto f = split(line, ',');
        if (f.size() < 13 || f[12].rfind("error", 0) == 0) continue;
        SearchRecord r;
        r.mode = f[0];
        r.d = std::stoi(f[1]);
        r.side = std::stoull(f[2]);
        r.n = std::stoull(f[3]);
        r.t1 = std::stoi(f[4]);
        r.cos_delta = std::stod(f[6]);
        done.insert(record_key(r));
    }
    return done;
}

} // namespace detail

inline double default_cos_delta(std::size_t n) {
    return 1.0 / std::sqrt(std::log2(static_cast<double>(n)));
}

namespace detail {

struct PlannedConfig {
    SweepMode mode;
    int d = 0;
    std::size_t side = 0;
    std::size_t n = 0;
    int t1 = 0;
    double cos_delta = 0.0; // 0 when not a tulsi run
};

inline SearchRecord run_config(const PlannedConfig& pc, const SweepSpec& spec) {
    SearchRecord rec;
    rec.mode = to_string(pc.mode);
    rec.d = pc.d;
    rec.side = pc.side;
    rec.n = pc.n;
    rec.t1 = pc.t1;
    rec.cos_delta = pc.cos_delta;

    const auto start = std::chrono::steady_clock::now();
    try {
        if (pc.mode == SweepMode::grover) {
            const auto opt = optimal_queries(pc.n, 1);
            rec.t2_star = opt.q;
            rec.p_max = opt.success;
            rec.effective_queries = static_cast<double>(opt.q) / std::sqrt(opt.success);
        } else {
            const Lattice lat = make_lattice(pc.d, pc.side);
            SearchConfig cfg;
            cfg.lattice = lat;
            cfg.t1 = pc.t1;
            cfg.t2_max = spec.t2_max;
            cfg.tau = spec.tau ? *spec.tau : tune_tau(lat, pc.t1).tau;
            rec.tau = cfg.tau;
            SearchResult res;
            if (pc.mode == SweepMode::tulsi) {
                cfg.tulsi_cos_delta = pc.cos_delta;
                res = run_search_tulsi(cfg);
            } else {
                res = run_search(cfg);
            }
            rec.t2_star = res.t2_star;
            rec.p_max = res.p_max;
            rec.effective_queries = res.effective_queries;
            rec.walk_steps_total = res.walk_steps_total;
            if (res.budget_limited) rec.status = "budget-limited";
        }
    } catch (const std::exception& e) {
        rec.status = std::string("error: ") + e.what();
    }
    if (spec.timing) {
        rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    return rec;
}

inline std::vector<PlannedConfig> plan_sweep(const SweepSpec& spec) {
    std::vector<PlannedConfig> plan;
    if (spec.mode == SweepMode::grover) {
        for (std::size_t n : spec.ns) {
            if (n == 0) throw std::invalid_argument("sweep: grover size must be positive");
            if (n > spec.max_n) throw size_error("sweep: N exceeds the size cap");
            plan.push_back({spec.mode, 0, 0, n, 0, 0.0});
        }
        std::sort(plan.begin(), plan.end(),
                  [](const PlannedConfig& a, const PlannedConfig& b) { return a.n < b.n; });
        return plan;
    }
    for (int d : spec.dims) {
        for (std::size_t side : spec.sides) {
            const Lattice lat = make_lattice(d, side); // fail fast on bad geometry
            if (lat.n > spec.max_n) throw size_error("sweep: L^d exceeds the size cap");
            for (int t1 : spec.t1_values) {
                if (t1 < 1) throw std::invalid_argument("sweep: t1 must be >= 1");
                if (spec.mode == SweepMode::tulsi) {
                    std::vector<double> cds = spec.cos_delta_values;
                    if (cds.empty()) cds.push_back(default_cos_delta(lat.n));
                    for (double cd : cds) {
                        if (!(cd > 0.0 && cd <= 1.0))
                            throw std::invalid_argument("sweep: cos_delta must lie in (0, 1]");
                        plan.push_back({spec.mode, d, side, lat.n, t1, cd});
                    }
                } else {
                    plan.push_back({spec.mode, d, side, lat.n, t1, 0.0});
                }
            }
        }
    }
    std::sort(plan.begin(), plan.end(), [](const PlannedConfig& a, const PlannedConfig& b) {
        return std::tie(a.d, a.side, a.t1, a.cos_delta) <
               std::tie(b.d, b.side, b.t1, b.cos_delta);
    });
    return plan;
}

} // namespace detail

/// Runs every configuration in the spec, appending one CSV row per record.
/// Deterministic for a fixed spec and seed; rows are emitted in config-key
/// order regardless of worker completion order; an existing output file is
/// resumed by skipping its completed configurations.
inline std::vector<SearchRecord> sweep(const SweepSpec& spec) {
    const auto plan = detail::plan_sweep(spec);

    std::set<detail::ConfigKey> done;
    std::ofstream out;
    if (!spec.output_path.empty()) {
        const bool existed = std::filesystem::exists(spec.output_path) &&
                             std::filesystem::file_size(spec.output_path) > 0;
        if (existed) done = detail::completed_keys(spec.output_path);
        out.open(spec.output_path, std::ios::app);
        if (!out) throw std::runtime_error("sweep: cannot open output file " + spec.output_path);
        if (!existed) out << csv_header() << '\n' << std::flush;
    }

    std::vector<SearchRecord> records;
    records.reserve(plan.size());

    const int jobs = std::max(1, spec.jobs);
    std::vector<std::future<SearchRecord>> pending;
    std::vector<const detail::PlannedConfig*> todo;
    for (const auto& pc : plan) {
        SearchRecord probe;
        probe.mode = to_string(pc.mode);
        probe.d = pc.d;
        probe.side = pc.side;
        probe.n = pc.n;
        probe.t1 = pc.t1;
        probe.cos_delta = pc.cos_delta;
        if (done.count(detail::record_key(probe))) {
            std::cerr << "sweep: skipping completed " << detail::key_string(detail::record_key(probe))
                      << '\n';
            continue;
        }
        todo.push_back(&pc);
    }

    // Bounded look-ahead pool; results are consumed (and written) in plan order.
    std::size_t next_launch = 0;
    std::deque<std::future<SearchRecord>> window;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        while (next_launch < todo.size() && window.size() < static_cast<std::size_t>(jobs)) {
            const detail::PlannedConfig* pc = todo[next_launch++];
            window.push_back(std::async(std::launch::async,
                                        [pc, &spec] { return detail::run_config(*pc, spec); }));
        }
        SearchRecord rec = window.front().get();
        window.pop_front();
        records.push_back(rec);
        if (out) out << to_csv_row(rec) << '\n' << std::flush;
    }
    return records;
}

/// Classical-versus-quantum query counts for a list of database sizes.
struct GroverTableRow {
    std::size_t n;
    std::size_t classical_binary;
    double classical_unsorted_mean;
    std::size_t quantum_q;
    double quantum_success;
};

inline std::vector<GroverTableRow> grover_table(const std::vector<std::size_t>& ns) {
    if (ns.empty()) throw std::invalid_argument("grover_table: need at least one size");
    std::vector<GroverTableRow> rows;
    rows.reserve(ns.size());
    for (std::size_t n : ns) {
        const auto base = classical_baselines(n);
        const auto opt = optimal_queries(n, 1);
        rows.push_back({n, base.binary_sorted, base.unsorted_mean_with_memory, opt.q, opt.success});
    }
    return rows;
}

inline std::string grover_table_csv(const std::vector<GroverTableRow>& rows) {
    std::ostringstream os;
    os << "N,classical_binary,classical_unsorted_mean,quantum_q,quantum_success\n";
    for (const auto& r : rows)
        os << r.n << ',' << r.classical_binary << ',' << detail::fmt_double(r.classical_unsorted_mean)
           << ',' << r.quantum_q << ',' << detail::fmt_double(r.quantum_success) << '\n';
    return os.str();
}

inline std::string grover_table_text(const std::vector<GroverTableRow>& rows) {
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%12s %14s %18s %10s %12s\n", "N", "binary(log2N)",
                  "unsorted((N+1)/2)", "quantum Q", "success");
    os << buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%12zu %14zu %18.1f %10zu %12.6f\n", r.n,
                      r.classical_binary, r.classical_unsorted_mean, r.quantum_q,
                      r.quantum_success);
        os << buf;
    }
    return os.str();
}

/// Effective queries against the database size for several dimensions:
/// sweeps the feasible (d, L) grid, fits eff/sqrt(N) = a + b/d, and reports
/// the d -> infinity intercept to compare with pi/4. Infeasible sizes are
/// skipped with a warning.
inline std::pair<std::vector<SearchRecord>, FitResult>
reproduce_fig3(const std::vector<std::size_t>& sides, const std::vector<int>& dims, int t1,
               std::size_t max_n = default_max_n, const std::string& output_path = {},
               int jobs = 1) {
    std::vector<SearchRecord> records;
    for (int d : dims) {
        std::vector<std::size_t> feasible;
        for (std::size_t side : sides) {
            if (std::pow(static_cast<double>(side), d) <= static_cast<double>(max_n))
                feasible.push_back(side);
            else
                std::cerr << "fig3: skipping infeasible d=" << d << " L=" << side << '\n';
        }
        if (feasible.empty()) continue;
        SweepSpec spec;
        spec.mode = SweepMode::spatial;
        spec.dims = {d};
        spec.sides = feasible;
        spec.t1_values = {t1};
        spec.max_n = max_n;
        spec.output_path = output_path;
        spec.jobs = jobs;
        auto recs = sweep(spec);
        records.insert(records.end(), recs.begin(), recs.end());
    }

    std::vector<double> xs, ys;
    for (const auto& r : records) {
        if (r.status.rfind("error", 0) == 0) continue;
        xs.push_back(static_cast<double>(r.d));
        ys.push_back(r.effective_queries / std::sqrt(static_cast<double>(r.n)));
    }
    return {records, fit_inverse(xs, ys)};
}

/// Infrared-regulated d = 2 searches: sweeps Tulsi runs over the side lengths
/// (default cos_delta = 1/sqrt(log2 N) when the list is empty) and fits
/// eff/sqrt(N log2 N) = a + b/L over the default-regulator series.
inline std::pair<std::vector<SearchRecord>, FitResult>
reproduce_fig4(const std::vector<std::size_t>& sides, const std::vector<double>& cos_deltas,
               int t1, std::size_t max_n = default_max_n, const std::string& output_path = {},
               int jobs = 1) {
    SweepSpec spec;
    spec.mode = SweepMode::tulsi;
    spec.dims = {2};
    spec.sides = sides;
    spec.t1_values = {t1};
    spec.cos_delta_values = cos_deltas;
    spec.max_n = max_n;
    spec.output_path = output_path;
    spec.jobs = jobs;
    auto records = sweep(spec);

    // Fit over one series: the default regulator when cos_deltas is empty,
    // otherwise the first listed value.
    std::vector<double> xs, ys;
    for (const auto& r : records) {
        if (r.status.rfind("error", 0) == 0) continue;
        if (!cos_deltas.empty() && std::abs(r.cos_delta - cos_deltas.front()) > 1e-15) continue;
        const double n = static_cast<double>(r.n);
        xs.push_back(static_cast<double>(r.side));
        ys.push_back(r.effective_queries / std::sqrt(n * std::log2(n)));
    }
    return {records, fit_inverse(xs, ys)};
}

/// Flat key = value configuration for `sweep`; lists are comma-separated,
/// '#' starts a comment.
inline SweepSpec parse_sweep_config(std::istream& in) {
    SweepSpec spec;
    std::string line;
    std::size_t lineno = 0;
    bool have_mode = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto parse_list = [&](auto convert) {
            std::vector<decltype(convert(std::string{}))> out;
            for (const auto& item : detail::split(value, ','))
                out.push_back(convert(trim(item)));
            return out;
        };
        if (key == "mode") {
            if (value == "grover") spec.mode = SweepMode::grover;
            else if (value == "spatial") spec.mode = SweepMode::spatial;
            else if (value == "tulsi") spec.mode = SweepMode::tulsi;
            else throw std::invalid_argument("config: unknown mode '" + value + "'");
            have_mode = true;
        } else if (key == "dims") {
            spec.dims = parse_list([](const std::string& s) { return std::stoi(s); });
        } else if (key == "sides") {
            spec.sides = parse_list([](const std::string& s) -> std::size_t { return std::stoull(s); });
        } else if (key == "ns") {
            spec.ns = parse_list([](const std::string& s) -> std::size_t { return std::stoull(s); });
        } else if (key == "t1") {
            spec.t1_values = parse_list([](const std::string& s) { return std::stoi(s); });
        } else if (key == "tau") {
            if (value == "auto") spec.tau.reset();
            else spec.tau = std::stod(value);
        } else if (key == "cos_delta") {
            if (value == "auto") spec.cos_delta_values.clear();
            else spec.cos_delta_values =
                     parse_list([](const std::string& s) { return std::stod(s); });
        } else if (key == "seed") {
            spec.seed = std::stoull(value);
        } else if (key == "output") {
            spec.output_path = value;
        } else if (key == "t2_max") {
            spec.t2_max = std::stoull(value);
        } else if (key == "max_n") {
            spec.max_n = std::stoull(value);
        } else if (key == "jobs") {
            spec.jobs = std::stoi(value);
        } else if (key == "timing") {
            spec.timing = value == "1" || value == "true" || value == "yes";
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    if (!have_mode) throw std::invalid_argument("config: missing required key 'mode'");
    return spec;
}

} // namespace qsearch
