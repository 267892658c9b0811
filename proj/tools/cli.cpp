#include "cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "siht/complexity.hpp"
#include "siht/experiment.hpp"
#include "siht/recovery.hpp"
#include "siht/ric.hpp"

namespace siht::cli {

namespace {

using json = nlohmann::json;

// Raised for bad or missing arguments; reported with the subcommand usage.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// String-valued flags keyed by setting name. Flags given on the command
// line override the same keys from --config.
class Settings {
public:
    void add(CLI::App* app, const std::string& key, const std::string& flag,
             const std::string& help)
    {
        options_[key] = app->add_option(flag, raw_[key], help);
    }

    void add_switch(CLI::App* app, const std::string& key, const std::string& flag,
                    const std::string& help)
    {
        options_[key] = app->add_flag(flag, help);
    }

    void add_config(CLI::App* app)
    {
        config_ = app->add_option("--config", config_path_,
                                  "JSON file with settings; flags override its values");
    }

    // Merges file and flags into one object.
    json resolve() const
    {
        json merged = json::object();
        if (config_ && config_->count() > 0) {
            std::ifstream f(config_path_);
            if (!f)
                throw IoError("cannot read config file '" + config_path_ + "'");
            try {
                merged = json::parse(f);
            } catch (const json::parse_error& e) {
                throw UsageError("config file '" + config_path_ + "': " + e.what());
            }
            if (!merged.is_object())
                throw UsageError("config file '" + config_path_ + "' must hold a JSON object");
        }
        for (const auto& [key, opt] : options_) {
            if (opt->count() == 0)
                continue;
            if (opt->get_expected_min() == 0)
                merged[key] = true;
            else
                merged[key] = raw_.at(key);
        }
        return merged;
    }

private:
    std::map<std::string, std::string> raw_;
    std::map<std::string, CLI::Option*> options_;
    CLI::Option* config_ = nullptr;
    std::string config_path_;
};

std::size_t parse_size(const std::string& text, const std::string& key)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        if (text.empty() || text[0] == '-')
            throw std::invalid_argument("negative");
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": expected a non-negative integer, got '" + text + "'");
    }
    if (pos != text.size())
        throw UsageError("--" + key + ": expected a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

double parse_real(const std::string& text, const std::string& key)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": expected a number, got '" + text + "'");
    }
    if (pos != text.size())
        throw UsageError("--" + key + ": expected a number, got '" + text + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        parts.push_back(item);
    return parts;
}

std::size_t size_of(const json& v, const std::string& key)
{
    if (v.is_number_unsigned())
        return v.get<std::size_t>();
    if (v.is_number_integer()) {
        if (v.get<long long>() < 0)
            throw UsageError("--" + key + " must be non-negative");
        return v.get<std::size_t>();
    }
    if (v.is_string())
        return parse_size(v.get<std::string>(), key);
    throw UsageError("--" + key + ": expected an integer");
}

std::size_t get_size(const json& s, const std::string& key, std::size_t fallback)
{
    return s.contains(key) ? size_of(s.at(key), key) : fallback;
}

double get_real(const json& s, const std::string& key, double fallback)
{
    if (!s.contains(key))
        return fallback;
    const json& v = s.at(key);
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return parse_real(v.get<std::string>(), key);
    throw UsageError("--" + key + ": expected a number");
}

std::string get_string(const json& s, const std::string& key, const std::string& fallback)
{
    if (!s.contains(key))
        return fallback;
    if (!s.at(key).is_string())
        throw UsageError("--" + key + ": expected a string");
    return s.at(key).get<std::string>();
}

bool get_bool(const json& s, const std::string& key)
{
    if (!s.contains(key))
        return false;
    const json& v = s.at(key);
    if (v.is_boolean())
        return v.get<bool>();
    throw UsageError("--" + key + ": expected true or false");
}

// "5,10,15", "5:35:5" (inclusive start:stop:step), a number, or a JSON array.
std::vector<std::size_t> list_of_sizes(const json& v, const std::string& key)
{
    std::vector<std::size_t> out;
    if (v.is_array()) {
        for (const json& e : v)
            out.push_back(size_of(e, key));
    } else if (v.is_string()) {
        for (const std::string& part : split(v.get<std::string>(), ',')) {
            const auto range = split(part, ':');
            if (range.size() == 1) {
                out.push_back(parse_size(part, key));
            } else if (range.size() == 2 || range.size() == 3) {
                const std::size_t lo = parse_size(range[0], key);
                const std::size_t hi = parse_size(range[1], key);
                const std::size_t step = range.size() == 3 ? parse_size(range[2], key) : 1;
                if (step == 0 || lo > hi)
                    throw UsageError("--" + key + ": bad range '" + part + "'");
                for (std::size_t x = lo; x <= hi; x += step)
                    out.push_back(x);
            } else {
                throw UsageError("--" + key + ": bad list element '" + part + "'");
            }
        }
    } else {
        out.push_back(size_of(v, key));
    }
    if (out.empty())
        throw UsageError("--" + key + " is empty");
    return out;
}

std::vector<std::size_t> get_sizes(const json& s, const std::string& key,
                                   std::vector<std::size_t> fallback)
{
    return s.contains(key) ? list_of_sizes(s.at(key), key) : fallback;
}

std::vector<double> get_reals(const json& s, const std::string& key)
{
    std::vector<double> out;
    const json& v = s.at(key);
    if (v.is_array()) {
        for (const json& e : v) {
            if (!e.is_number())
                throw UsageError("--" + key + ": expected numbers");
            out.push_back(e.get<double>());
        }
    } else if (v.is_string()) {
        for (const std::string& part : split(v.get<std::string>(), ','))
            out.push_back(parse_real(part, key));
    } else if (v.is_number()) {
        out.push_back(v.get<double>());
    }
    if (out.empty())
        throw UsageError("--" + key + " is empty");
    return out;
}

std::uint64_t require_seed(const json& s)
{
    if (!s.contains("seed"))
        throw UsageError("missing required --seed");
    return get_size(s, "seed", 0);
}

void add_experiment_flags(CLI::App* app, Settings& settings)
{
    settings.add_config(app);
    settings.add(app, "seed", "--seed", "Master seed (required)");
    settings.add(app, "n", "--n", "Signal dimension N (default 1000)");
    settings.add(app, "t", "--t", "Iteration horizon T (default 100)");
    settings.add(app, "trials", "--trials", "Trials per cell (default 100)");
    settings.add(app, "threshold", "--threshold", "Success threshold on ||x^T - x|| (default 1e-3)");
    settings.add(app, "ensemble", "--ensemble", "gaussian|rademacher|uniform|identity");
    settings.add(app, "workers", "--workers", "Worker threads (default $SIHT_WORKERS or all cores)");
    settings.add_switch(app, "stop_at_threshold", "--stop-at-threshold",
                        "Stop a run once its error reaches the threshold");
}

ExperimentConfig experiment_config(const json& s)
{
    ExperimentConfig c;
    c.master_seed = require_seed(s);
    c.dimension = get_size(s, "n", c.dimension);
    c.horizon = get_size(s, "t", c.horizon);
    c.trials = get_size(s, "trials", c.trials);
    c.threshold = get_real(s, "threshold", c.threshold);
    c.ensemble.family = parse_ensemble(get_string(s, "ensemble", "gaussian"));
    c.workers = get_size(s, "workers", 0);
    c.stop_at_threshold = get_bool(s, "stop_at_threshold");
    c.arm.a = get_size(s, "a", c.arm.a);
    c.arm.b = get_size(s, "b", c.arm.b);
    return c;
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Matrix read_matrix_csv(const std::string& path)
{
    std::stringstream in(slurp(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<double> row;
        for (std::string cell : split(line, ',')) {
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
            row.push_back(parse_real(cell, "matrix line " + std::to_string(line_no)));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw UsageError("matrix line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw UsageError("matrix file '" + path + "' is empty");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

int cmd_recover(const json& s, std::ostream& out)
{
    ExperimentConfig c = experiment_config(s);
    const std::size_t k = get_size(s, "k", 5);
    c.sparsity_grid = {k};
    c.arm.mode = parse_mode(get_string(s, "mode", "siht"));
    c.arm.m = get_size(s, "m", 250);
    c.validate();
    const std::size_t trial_index = get_size(s, "trial", 0);

    const RecoveryTrace trace = run_trial(c, c.arm, k, trial_index);
    json j;
    j["mode"] = std::string(to_string(c.arm.mode));
    if (c.arm.mode == Mode::siht) {
        j["a"] = c.arm.a;
        j["b"] = c.arm.b;
    } else {
        j["m"] = c.arm.m;
    }
    j["n"] = c.dimension;
    j["t"] = c.horizon;
    j["k"] = k;
    j["ensemble"] = std::string(to_string(c.ensemble.family));
    j["seed"] = c.master_seed;
    j["trial"] = trial_index;
    j["iterations"] = trace.iterations;
    j["threshold"] = c.threshold;
    j["final_error"] = trace.final_error();
    j["success"] = trace.success(c.threshold);
    j["errors"] = trace.errors;
    j["residual_norms"] = trace.residual_norms;
    j["support"] = support(trace.final_estimate.values()).indices();
    out << j.dump(2) << '\n';
    return ok;
}

int cmd_sweep(const json& s, std::ostream& out)
{
    ExperimentConfig c = experiment_config(s);
    c.sparsity_grid = get_sizes(s, "k", c.sparsity_grid);
    std::vector<Arm> arms;
    for (const std::string& name : split(get_string(s, "modes", "siht,offline"), ',')) {
        if (parse_mode(name) == Mode::siht) {
            arms.push_back(Arm::siht(c.arm.a, c.arm.b));
        } else {
            for (std::size_t m : get_sizes(s, "m", {100, 200, 250}))
                arms.push_back(Arm::offline(m));
        }
    }
    const SweepResult result = run_recovery_sweep(c, arms);
    std::ostringstream csv;
    write_sweep_csv(result, csv);
    const std::string path = get_string(s, "out", "");
    if (path.empty()) {
        out << csv.str();
    } else {
        write_file(path, csv.str());
        out << json{{"csv", path}, {"rows", result.rows.size()}}.dump() << '\n';
    }
    return ok;
}

int cmd_phase_diagram(const json& s, std::ostream& out)
{
    PhaseDiagramConfig c;
    c.base = experiment_config(s);
    c.a_values = get_sizes(s, "a_values", list_of_sizes("10:200:10", "a-values"));
    c.b_values = get_sizes(s, "b_values", list_of_sizes("10:200:10", "b-values"));
    c.sparsity = get_size(s, "k", 5);
    const PhaseDiagram d = run_phase_diagram(c);

    std::ostringstream csv;
    write_phase_csv(d, csv);
    const std::string csv_path = get_string(s, "csv", "");
    const std::string pgm_path = get_string(s, "pgm", "");
    if (!pgm_path.empty()) {
        std::ostringstream pgm;
        write_pgm(d, pgm);
        write_file(pgm_path, pgm.str());
    }
    if (csv_path.empty()) {
        out << csv.str();
    } else {
        write_file(csv_path, csv.str());
        out << json{{"csv", csv_path}, {"pgm", pgm_path}, {"cells", d.cells.size()}}.dump()
            << '\n';
    }
    return ok;
}

int cmd_complexity(const json& s, std::ostream& out)
{
    json j;
    if (get_bool(s, "expected")) {
        if (!s.contains("a") || !s.contains("b"))
            throw UsageError("--expected needs --a and --b");
        const std::size_t a = get_size(s, "a", 0);
        const std::size_t b = get_size(s, "b", 0);
        const std::size_t phases = get_size(s, "s", 100);
        const std::size_t trials = get_size(s, "trials", 10000);
        const auto est =
            estimate_expected_md(a, b, phases, trials, get_size(s, "seed", 0), get_size(s, "workers", 0));
        const double bound = expected_md_lower_bound(a, b);
        j = {{"a", a},
             {"b", b},
             {"s", phases},
             {"trials", trials},
             {"lower_bound", bound},
             {"mean", est.mean},
             {"std_error", est.std_error}};
        out << j.dump(2) << '\n';
        return ok;
    }

    if (!s.contains("m"))
        throw UsageError("complexity needs --m (or --expected with --a/--b)");
    const std::vector<std::size_t> m = list_of_sizes(s.at("m"), "m");
    ComplexityBreakdown br;
    const int given = static_cast<int>(s.contains("p")) + static_cast<int>(s.contains("tau")) +
                      static_cast<int>(s.contains("boundaries"));
    if (given > 1)
        throw UsageError("give at most one of --p, --tau, --boundaries");
    if (s.contains("p"))
        br = dynamic_sample_complexity(m, get_reals(s, "p"));
    else if (s.contains("tau"))
        br = dynamic_sample_complexity(m, PhaseSchedule::from_durations(get_sizes(s, "tau", {})));
    else if (s.contains("boundaries"))
        br = dynamic_sample_complexity(
            m, PhaseSchedule::from_boundaries(get_sizes(s, "boundaries", {})));
    else
        br = dynamic_sample_complexity(m, PhaseSchedule::per_step(m.size()));

    j["s"] = br.phase_count;
    j["m"] = m;
    j["p"] = br.fractions;
    j["p_bar"] = br.p_bar;
    j["a_m"] = br.arithmetic_mean;
    j["g_m"] = br.geometric_mean;
    j["md"] = br.dynamic_complexity;
    if (s.contains("k")) {
        const std::size_t k = get_size(s, "k", 1);
        const std::size_t n = get_size(s, "n", 1000);
        const double eps = get_real(s, "epsilon", 0.5);
        const double c_tilde = get_real(s, "c_tilde", 96.0);
        const TheoremCheck chk = satisfies_theorem(br, k, n, eps, c_tilde);
        j["theorem"] = {{"k", k},           {"n", n},
                        {"epsilon", eps},   {"c_tilde", c_tilde},
                        {"rhs", chk.rhs},   {"margin", chk.margin},
                        {"satisfied", chk.satisfied}};
    }
    out << j.dump(2) << '\n';
    return ok;
}

int cmd_ric(const json& s, std::ostream& out)
{
    const std::string path = get_string(s, "matrix", "");
    if (path.empty())
        throw UsageError("ric needs --matrix");
    if (!s.contains("order"))
        throw UsageError("ric needs --order");
    const Matrix phi = read_matrix_csv(path);
    const RicResult r =
        ric(phi, get_size(s, "order", 1), get_size(s, "cap", default_subset_cap));
    out << json{{"order", r.order}, {"value", r.value}, {"witness", r.witness.indices()}}.dump()
        << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sequential iterative hard thresholding: recovery runs, Monte Carlo "
                 "experiments, sample-complexity and RIC tools",
                 "siht"};
    app.require_subcommand(1);

    Settings recover_s, sweep_s, diagram_s, complexity_s, ric_s;

    auto* recover = app.add_subcommand("recover", "Run one trial and print its trace as JSON");
    add_experiment_flags(recover, recover_s);
    recover_s.add(recover, "k", "--k", "Sparsity K (default 5)");
    recover_s.add(recover, "mode", "--mode", "siht|offline (default siht)");
    recover_s.add(recover, "a", "--a", "SIHT: smallest M_j (default 20)");
    recover_s.add(recover, "b", "--b", "SIHT: largest M_j (default 150)");
    recover_s.add(recover, "m", "--m", "Offline: rows of the single matrix (default 250)");
    recover_s.add(recover, "trial", "--trial", "Trial index (default 0)");

    auto* sweep = app.add_subcommand("sweep", "Recovery probability versus K, written as CSV");
    add_experiment_flags(sweep, sweep_s);
    sweep_s.add(sweep, "k", "--k", "K grid, e.g. 5,10 or 5:35:5 (default 5:35:5)");
    sweep_s.add(sweep, "modes", "--modes", "Comma list of siht,offline (default both)");
    sweep_s.add(sweep, "a", "--a", "SIHT: smallest M_j (default 20)");
    sweep_s.add(sweep, "b", "--b", "SIHT: largest M_j (default 150)");
    sweep_s.add(sweep, "m", "--m", "Offline row counts (default 100,200,250)");
    sweep_s.add(sweep, "out", "--out", "CSV output path (default stdout)");

    auto* diagram = app.add_subcommand("phase-diagram", "SIHT recovery probability over (a, b)");
    add_experiment_flags(diagram, diagram_s);
    diagram_s.add(diagram, "k", "--k", "Sparsity K (default 5)");
    diagram_s.add(diagram, "a_values", "--a-values", "a grid (default 10:200:10)");
    diagram_s.add(diagram, "b_values", "--b-values", "b grid (default 10:200:10)");
    diagram_s.add(diagram, "pgm", "--pgm", "PGM (P5) output path");
    diagram_s.add(diagram, "csv", "--csv", "CSV output path (default stdout)");

    auto* complexity = app.add_subcommand("complexity", "Dynamic sample complexity and bounds");
    complexity_s.add_config(complexity);
    complexity_s.add(complexity, "m", "--m", "Measurement counts M_j, comma separated");
    complexity_s.add(complexity, "p", "--p", "Phase fractions p_j (default 1/s each)");
    complexity_s.add(complexity, "tau", "--tau", "Phase durations tau_j");
    complexity_s.add(complexity, "boundaries", "--boundaries", "Phase boundaries 0,t_1,...,T");
    complexity_s.add(complexity, "k", "--k", "Sparsity K; enables the sufficient-condition check");
    complexity_s.add(complexity, "n", "--n", "Signal dimension N (default 1000)");
    complexity_s.add(complexity, "epsilon", "--epsilon", "Failure parameter (default 0.5)");
    complexity_s.add(complexity, "c_tilde", "--c-tilde", "Ensemble constant (default 96)");
    complexity_s.add_switch(complexity, "expected", "--expected",
                            "Estimate E[M_d] for M_j ~ uniform{a..b}");
    complexity_s.add(complexity, "a", "--a", "Smallest M_j (with --expected)");
    complexity_s.add(complexity, "b", "--b", "Largest M_j (with --expected)");
    complexity_s.add(complexity, "s", "--s", "Phase count (with --expected, default 100)");
    complexity_s.add(complexity, "trials", "--trials", "Monte Carlo trials (default 10000)");
    complexity_s.add(complexity, "seed", "--seed", "Seed (with --expected, default 0)");
    complexity_s.add(complexity, "workers", "--workers", "Worker threads");

    auto* ric_cmd = app.add_subcommand("ric", "Exact restricted isometry constant of a CSV matrix");
    ric_s.add(ric_cmd, "matrix", "--matrix", "CSV file, one matrix row per line");
    ric_s.add(ric_cmd, "order", "--order", "Order R");
    ric_s.add(ric_cmd, "cap", "--cap", "Maximum number of subsets to enumerate (default 1e6)");

    std::vector<const char*> argv{"siht"};
    for (const auto& a : args)
        argv.push_back(a.c_str());

    CLI::App* active = &app;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        for (CLI::App* sub : app.get_subcommands())
            active = sub;
        if (recover->parsed())
            return cmd_recover(recover_s.resolve(), out);
        if (sweep->parsed())
            return cmd_sweep(sweep_s.resolve(), out);
        if (diagram->parsed())
            return cmd_phase_diagram(diagram_s.resolve(), out);
        if (complexity->parsed())
            return cmd_complexity(complexity_s.resolve(), out);
        if (ric_cmd->parsed())
            return cmd_ric(ric_s.resolve(), out);
        return validation_error;
    } catch (const CLI::CallForHelp&) {
        for (CLI::App* sub : app.get_subcommands())
            active = sub;
        out << active->help();
        return ok;
    } catch (const CLI::ParseError& e) {
        for (CLI::App* sub : app.get_subcommands())
            active = sub;
        err << "error: " << e.what() << "\n\n" << active->help();
        return validation_error;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << active->help();
        return validation_error;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    }
}

}  // namespace siht::cli
