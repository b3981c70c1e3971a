#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fsmkit/backend.hpp"
#include "fsmkit/repair.hpp"

namespace fsmkit {

/// A batch run: for every oracle — generate, describe, backend-generate,
/// diff + equivalence check, then (optionally) repair.
struct ExperimentPlan {
    std::vector<int> sizes{5, 10};
    int oracles_per_size = 30;
    int num_inputs = 5;
    int num_outputs = 2;
    std::string backend = "sim";  // sim | sim-oblivious | perfect | live
    SimulatorProfile profile = SimulatorProfile::observed_defaults();
    std::optional<RepairStrategy> strategy;
    std::uint64_t seed = 0;
    /// 25-state runs measure generation quality only unless this is set.
    bool repair_at_25 = false;
    int jobs = 1;
    RepairConfig repair;

    static ExperimentPlan from_json_file(const std::string& path);
    static ExperimentPlan from_json_text(const std::string& text);
    std::string to_json() const;
};

/// One oracle's outcome inside a batch.
struct OracleRecord {
    int index = 0;
    bool parsed = false;
    bool faulty = false;
    bool equivalent = false;
    std::array<int, 4> fault_counts{0, 0, 0, 0};
    int delta_size = 0;
    bool repaired = false;
    int repair_attempts = 0;
    int output_queries = 0;
    std::size_t max_query_length = 0;
    int augmented_transitions = 0;
    std::string error;
};

struct SizeReport {
    int num_states = 0;
    int oracles = 0;
    std::array<double, 4> fault_type_means{0, 0, 0, 0};
    std::array<int, 4> fault_type_maxima{0, 0, 0, 0};
    double all_faults_mean = 0.0;
    int all_faults_max = 0;
    int faulty = 0;
    int nonparse = 0;
    double avg_delta_size = 0.0;  // averaged over all oracles of the size
    int max_delta_size = 0;
    bool repair_ran = false;
    int repaired = 0;
    double repair_success_rate = 100.0;  // percent over the faulty ones
    int max_output_queries = 0;
    std::size_t max_query_length = 0;
    int domains_augmented = 0;
    int max_added_transitions = 0;
    std::vector<OracleRecord> records;
};

struct ExperimentReport {
    ExperimentPlan plan;
    std::vector<SizeReport> per_size;

    std::string to_json() const;
    /// Sections mirroring the fault-statistics and repair tables.
    std::string to_csv() const;
};

ExperimentReport run_experiment(const ExperimentPlan& plan);

/// format: "json" or "csv".
void emit_report(const ExperimentReport& report, const std::string& format, const std::string& path);

}  // namespace fsmkit
