#include "siht/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "siht/parallel.hpp"
#include "siht/random.hpp"

namespace siht {

namespace {

// Stream tags; part of the reproducibility contract, do not renumber.
constexpr std::uint64_t tag_signal = 0x5349474e;   // "SIGN"
constexpr std::uint64_t tag_sizes = 0x53495a45;    // "SIZE"
constexpr std::uint64_t tag_matrix = 0x4d415452;   // "MATR"
constexpr std::uint64_t tag_siht = 0x53494854;     // "SIHT"
constexpr std::uint64_t tag_offline = 0x4f46464c;  // "OFFL"

std::uint64_t arm_key(const Arm& arm)
{
    return arm.mode == Mode::siht ? derive_seed({tag_siht, arm.a, arm.b})
                                  : derive_seed({tag_offline, arm.m});
}

void validate_arm(const Arm& arm)
{
    if (arm.mode == Mode::siht && (arm.a < 1 || arm.a > arm.b))
        throw std::invalid_argument("siht arm needs 1 <= a <= b (a=" + std::to_string(arm.a) +
                                    ", b=" + std::to_string(arm.b) + ")");
    if (arm.mode == Mode::offline && arm.m < 1)
        throw std::invalid_argument("offline arm needs M >= 1");
}

// Trial outcomes for `cells` cells of `trials` each, index = cell * trials + r.
std::vector<TrialOutcome> run_grid(std::size_t cells, const ExperimentConfig& config,
                                   const std::function<TrialOutcome(std::size_t, std::size_t)>& run)
{
    std::vector<TrialOutcome> outcomes(cells * config.trials);
    parallel_for(outcomes.size(), resolve_workers(config.workers), [&](std::size_t i) {
        outcomes[i] = run(i / config.trials, i % config.trials);
    });
    return outcomes;
}

TrialOutcome outcome_of(const RecoveryTrace& trace, double threshold)
{
    const double e = trace.final_error();
    return TrialOutcome{e <= threshold, e};
}

}  // namespace

std::string_view to_string(Mode m) noexcept
{
    return m == Mode::siht ? "siht" : "offline";
}

Mode parse_mode(std::string_view name)
{
    if (name == "siht") return Mode::siht;
    if (name == "offline") return Mode::offline;
    throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const
{
    if (dimension < 1)
        throw std::invalid_argument("N must be >= 1");
    if (horizon < 1)
        throw std::invalid_argument("T must be >= 1");
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (!(threshold > 0.0))
        throw std::invalid_argument("threshold must be positive");
    if (sparsity_grid.empty())
        throw std::invalid_argument("K grid is empty");
    for (std::size_t k : sparsity_grid)
        if (k < 1 || k > dimension)
            throw std::invalid_argument("K=" + std::to_string(k) + " outside [1, N]");
    validate_arm(arm);
}

RecoveryTrace run_trial(const ExperimentConfig& config, const Arm& arm, std::size_t k,
                        std::size_t trial_index)
{
    validate_arm(arm);
    if (k < 1 || k > config.dimension)
        throw std::invalid_argument("K=" + std::to_string(k) + " outside [1, N]");

    const std::uint64_t master = config.master_seed;
    const SparseSignal truth =
        sample_signal(config.dimension, k, derive_seed({master, tag_signal, k, trial_index}));
    const SparseSignal x0 = SparseSignal::zero(config.dimension, k);
    const std::uint64_t key = arm_key(arm);
    const bool identity = config.ensemble.family == Ensemble::identity;
    RecoveryOptions options;
    if (config.stop_at_threshold)
        options.stop_at_error = config.threshold;

    auto matrix_for = [&](std::size_t rows, std::size_t phase) {
        return sample_matrix(config.ensemble, identity ? config.dimension : rows,
                             config.dimension,
                             derive_seed({master, key, k, trial_index, tag_matrix, phase}));
    };

    if (arm.mode == Mode::offline) {
        const MeasurementPhase phase = observe(matrix_for(arm.m, 0), truth);
        return run_offline_iht(phase, k, config.horizon, x0, truth, options);
    }

    const PhaseSchedule schedule = PhaseSchedule::per_step(config.horizon);
    const std::vector<std::size_t> sizes =
        draw_phase_sizes(arm.a, arm.b, schedule.phase_count(),
                         derive_seed({master, key, k, trial_index, tag_sizes}));
    std::size_t next = 0;
    PhaseStream stream = [&]() -> std::optional<MeasurementPhase> {
        if (next >= sizes.size())
            return std::nullopt;
        const std::size_t j = next++;
        return observe(matrix_for(sizes[j], j), truth);
    };
    return run_siht(schedule, stream, k, x0, truth, options);
}

TrialOutcome trial(const ExperimentConfig& config, std::size_t k, std::size_t trial_index)
{
    config.validate();
    return outcome_of(run_trial(config, config.arm, k, trial_index), config.threshold);
}

SweepResult run_recovery_sweep(const ExperimentConfig& config, const std::vector<Arm>& arms)
{
    config.validate();
    if (arms.empty())
        throw std::invalid_argument("sweep needs at least one arm");
    for (const Arm& arm : arms)
        validate_arm(arm);

    const std::size_t cells = config.sparsity_grid.size() * arms.size();
    auto cell_k = [&](std::size_t c) { return config.sparsity_grid[c / arms.size()]; };
    auto cell_arm = [&](std::size_t c) -> const Arm& { return arms[c % arms.size()]; };

    const auto outcomes = run_grid(cells, config, [&](std::size_t c, std::size_t r) {
        return outcome_of(run_trial(config, cell_arm(c), cell_k(c), r), config.threshold);
    });

    SweepResult result;
    std::vector<double> errors(config.trials);
    for (std::size_t c = 0; c < cells; ++c) {
        SweepRow row{cell_k(c), cell_arm(c), config.trials, 0, 0.0, 0.0};
        for (std::size_t r = 0; r < config.trials; ++r) {
            const TrialOutcome& o = outcomes[c * config.trials + r];
            row.successes += o.success ? 1 : 0;
            errors[r] = o.final_error;
        }
        row.probability = static_cast<double>(row.successes) / static_cast<double>(row.trials);
        row.mean_final_error = pairwise_sum(errors) / static_cast<double>(row.trials);
        result.rows.push_back(row);
    }
    return result;
}

SweepResult run_recovery_sweep(const ExperimentConfig& config)
{
    return run_recovery_sweep(config, {config.arm});
}

std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out)
{
    out << "k,mode,param_a,param_b,param_m,trials,successes,probability,mean_final_error\n";
    for (const SweepRow& row : result.rows) {
        out << row.k << ',' << to_string(row.arm.mode) << ',';
        if (row.arm.mode == Mode::siht)
            out << row.arm.a << ',' << row.arm.b << ",,";
        else
            out << ",," << row.arm.m << ',';
        out << row.trials << ',' << row.successes << ',' << format_real(row.probability) << ','
            << format_real(row.mean_final_error) << '\n';
    }
}

void PhaseDiagramConfig::validate() const
{
    ExperimentConfig probe = base;
    probe.sparsity_grid = {sparsity};
    probe.arm = Arm::siht(1, 1);
    probe.validate();
    if (a_values.empty() || b_values.empty())
        throw std::invalid_argument("phase diagram needs nonempty a and b grids");
    for (std::size_t v : a_values)
        if (v < 1)
            throw std::invalid_argument("phase diagram: a values must be >= 1");
    for (std::size_t v : b_values)
        if (v < 1)
            throw std::invalid_argument("phase diagram: b values must be >= 1");
}

PhaseDiagram run_phase_diagram(const PhaseDiagramConfig& config)
{
    config.validate();
    PhaseDiagram diagram{config.a_values, config.b_values, {}};
    const std::size_t nb = config.b_values.size();
    const std::size_t cells = config.a_values.size() * nb;
    for (std::size_t c = 0; c < cells; ++c) {
        PhaseCell cell;
        cell.a = config.a_values[c / nb];
        cell.b = config.b_values[c % nb];
        cell.valid = cell.b >= cell.a;
        diagram.cells.push_back(cell);
    }

    const ExperimentConfig& base = config.base;
    const auto outcomes = run_grid(cells, base, [&](std::size_t c, std::size_t r) {
        const PhaseCell& cell = diagram.cells[c];
        if (!cell.valid)
            return TrialOutcome{};
        return outcome_of(run_trial(base, Arm::siht(cell.a, cell.b), config.sparsity, r),
                          base.threshold);
    });

    for (std::size_t c = 0; c < cells; ++c) {
        PhaseCell& cell = diagram.cells[c];
        if (!cell.valid)
            continue;
        cell.trials = base.trials;
        for (std::size_t r = 0; r < base.trials; ++r)
            cell.successes += outcomes[c * base.trials + r].success ? 1 : 0;
        cell.probability = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
    }
    return diagram;
}

void write_pgm(const PhaseDiagram& diagram, std::ostream& out)
{
    const std::size_t width = diagram.a_values.size();
    const std::size_t height = diagram.b_values.size();
    out << "P5\n" << width << ' ' << height << "\n255\n";
    std::string pixels;
    pixels.reserve(width * height);
    // First image row is the largest b.
    for (std::size_t row = 0; row < height; ++row) {
        const std::size_t ib = height - 1 - row;
        for (std::size_t ia = 0; ia < width; ++ia) {
            const PhaseCell& cell = diagram.at(ia, ib);
            const long v = cell.valid ? std::lround(255.0 * cell.probability) : 0;
            pixels.push_back(static_cast<char>(static_cast<unsigned char>(v)));
        }
    }
    out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

void write_phase_csv(const PhaseDiagram& diagram, std::ostream& out)
{
    out << "a,b,valid,trials,successes,probability\n";
    for (const PhaseCell& cell : diagram.cells)
        out << cell.a << ',' << cell.b << ',' << (cell.valid ? 1 : 0) << ',' << cell.trials << ','
            << cell.successes << ',' << format_real(cell.probability) << '\n';
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f)
        throw IoError("failed writing '" + path + "'");
}

}  // namespace siht
