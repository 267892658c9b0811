#ifndef SIHT_EXPERIMENT_HPP
#define SIHT_EXPERIMENT_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "siht/measurement.hpp"
#include "siht/recovery.hpp"

namespace siht {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { siht, offline };

std::string_view to_string(Mode m) noexcept;
Mode parse_mode(std::string_view name);

// One measurement strategy: SIHT with M_j ~ uniform{a..b} per step, or
// offline IHT with a single M x N matrix.
struct Arm {
    Mode mode = Mode::siht;
    std::size_t a = 20;
    std::size_t b = 150;
    std::size_t m = 250;

    static Arm siht(std::size_t a, std::size_t b) { return Arm{Mode::siht, a, b, 0}; }
    static Arm offline(std::size_t m) { return Arm{Mode::offline, 0, 0, m}; }
};

struct ExperimentConfig {
    std::size_t dimension = 1000;  // N
    std::size_t horizon = 100;     // T
    std::vector<std::size_t> sparsity_grid{5, 10, 15, 20, 25, 30, 35};
    std::size_t trials = 100;
    double threshold = 1e-3;
    Arm arm;
    EnsembleSpec ensemble;
    std::uint64_t master_seed = 0;
    std::size_t workers = 0;  // 0: SIHT_WORKERS or hardware concurrency
    bool stop_at_threshold = false;

    // Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

struct TrialOutcome {
    bool success = false;
    double final_error = 0.0;
};

// One draw-and-recover run, a pure function of (config, K, trial_index).
// The ground truth depends only on (master_seed, K, trial_index), so all
// arms see the same signals; the measurement matrices also depend on the arm.
RecoveryTrace run_trial(const ExperimentConfig& config, const Arm& arm, std::size_t k,
                        std::size_t trial_index);
TrialOutcome trial(const ExperimentConfig& config, std::size_t k, std::size_t trial_index);

struct SweepRow {
    std::size_t k = 0;
    Arm arm;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double probability = 0.0;
    double mean_final_error = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // k-major, arms in request order
};

// Every (K, arm) cell of the grid; config.arm is ignored in favour of `arms`.
SweepResult run_recovery_sweep(const ExperimentConfig& config, const std::vector<Arm>& arms);
SweepResult run_recovery_sweep(const ExperimentConfig& config);

void write_sweep_csv(const SweepResult& result, std::ostream& out);

struct PhaseDiagramConfig {
    ExperimentConfig base;  // arm and sparsity_grid are ignored
    std::vector<std::size_t> a_values;
    std::vector<std::size_t> b_values;
    std::size_t sparsity = 5;

    void validate() const;
};

struct PhaseCell {
    std::size_t a = 0;
    std::size_t b = 0;
    bool valid = false;  // b >= a
    std::size_t trials = 0;
    std::size_t successes = 0;
    double probability = 0.0;
};

struct PhaseDiagram {
    std::vector<std::size_t> a_values;
    std::vector<std::size_t> b_values;
    std::vector<PhaseCell> cells;  // a-major: cells[ia * b_values.size() + ib]

    const PhaseCell& at(std::size_t ia, std::size_t ib) const
    {
        return cells[ia * b_values.size() + ib];
    }
};

PhaseDiagram run_phase_diagram(const PhaseDiagramConfig& config);

// Binary P5, one column per a value, one row per b value, largest b first;
// pixel = round(255 * probability), invalid cells black.
void write_pgm(const PhaseDiagram& diagram, std::ostream& out);
void write_phase_csv(const PhaseDiagram& diagram, std::ostream& out);

// Writes `content` to `path`, throwing IoError naming the path on failure.
void write_file(const std::string& path, const std::string& content);

// 17 significant digits.
std::string format_real(double v);

}  // namespace siht

#endif  // SIHT_EXPERIMENT_HPP
