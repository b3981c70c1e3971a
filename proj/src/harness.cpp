#include "fsmkit/harness.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fsmkit/csv.hpp"
#include "fsmkit/diff.hpp"
#include "fsmkit/nl.hpp"
#include "fsmkit/product.hpp"
#include "fsmkit/random_gen.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json profile_to_json(const SimulatorProfile& profile) {
    json doc;
    doc["seed"] = profile.seed;
    json sizes = json::object();
    for (const auto& [size, rates] : profile.per_size) {
        sizes[std::to_string(size)] = json{{"means", rates.means}, {"maxima", rates.maxima}};
    }
    doc["per_size"] = sizes;
    return doc;
}

SimulatorProfile profile_from_json(const json& doc) {
    if (doc.is_string()) {
        const std::string name = doc.get<std::string>();
        if (name == "observed") return SimulatorProfile::observed_defaults();
        if (name == "zero") return SimulatorProfile::zero();
        throw Error("unknown profile name \"" + name + "\" (use \"observed\", \"zero\" or an object)");
    }
    SimulatorProfile profile;
    profile.seed = doc.value("seed", 0ULL);
    if (doc.contains("per_size")) {
        for (const auto& [key, value] : doc.at("per_size").items()) {
            FaultRates rates;
            for (std::size_t i = 0; i < 4; ++i) {
                rates.means[i] = value.at("means").at(i).get<double>();
                rates.maxima[i] = value.at("maxima").at(i).get<int>();
            }
            profile.per_size[std::stoi(key)] = rates;
        }
    }
    return profile;
}

std::vector<std::string> fault_model_names(const FaultModel& fm) {
    std::vector<std::string> names;
    if (fm.output_faults) names.push_back("output");
    if (fm.missing_transition_faults) names.push_back("missing");
    if (fm.transfer_faults) names.push_back("transfer");
    return names;
}

FaultModel fault_model_from_names(const std::vector<std::string>& names) {
    FaultModel fm;
    for (const auto& name : names) {
        if (name == "output") {
            fm.output_faults = true;
        } else if (name == "missing") {
            fm.missing_transition_faults = true;
        } else if (name == "transfer") {
            fm.transfer_faults = true;
        } else {
            throw Error("unknown fault model source \"" + name + "\"");
        }
    }
    return fm;
}

}  // namespace

ExperimentPlan ExperimentPlan::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open experiment plan: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_json_text(text.str());
}

ExperimentPlan ExperimentPlan::from_json_text(const std::string& text) {
    json doc = json::parse(text);
    ExperimentPlan plan;
    if (doc.contains("sizes")) plan.sizes = doc.at("sizes").get<std::vector<int>>();
    plan.oracles_per_size = doc.value("oracles_per_size", plan.oracles_per_size);
    plan.num_inputs = doc.value("num_inputs", plan.num_inputs);
    plan.num_outputs = doc.value("num_outputs", plan.num_outputs);
    plan.backend = doc.value("backend", plan.backend);
    if (doc.contains("profile")) plan.profile = profile_from_json(doc.at("profile"));
    if (doc.contains("strategy") && !doc.at("strategy").is_null()) {
        const std::string name = doc.at("strategy").get<std::string>();
        auto strategy = repair_strategy_from_string(name);
        if (!strategy) throw Error("unknown repair strategy \"" + name + "\"");
        plan.strategy = strategy;
    }
    plan.seed = doc.value("seed", plan.seed);
    plan.repair_at_25 = doc.value("repair_at_25", plan.repair_at_25);
    plan.jobs = doc.value("jobs", plan.jobs);
    if (doc.contains("repair")) {
        const json& r = doc.at("repair");
        plan.repair.max_iter = r.value("max_iter", 0);
        plan.repair.state_bound = r.value("state_bound", 0);
        plan.repair.checkseq_budget_seconds = r.value("checkseq_budget_seconds", 60.0);
        plan.repair.iseq_count = r.value("iseq_count", 3);
        plan.repair.omit_conserve = r.value("omit_conserve", false);
        plan.repair.max_queries = r.value("max_queries", 0);
        if (r.contains("fault_model")) {
            plan.repair.fault_model = fault_model_from_names(r.at("fault_model").get<std::vector<std::string>>());
        }
    }
    if (plan.sizes.empty() || plan.oracles_per_size < 1 || plan.num_inputs < 1 || plan.num_outputs < 1) {
        throw Error("experiment plan needs at least one size, oracle, input and output");
    }
    return plan;
}

std::string ExperimentPlan::to_json() const {
    ordered_json doc;
    doc["sizes"] = sizes;
    doc["oracles_per_size"] = oracles_per_size;
    doc["num_inputs"] = num_inputs;
    doc["num_outputs"] = num_outputs;
    doc["backend"] = backend;
    doc["profile"] = profile_to_json(profile);
    doc["strategy"] = strategy ? json(to_string(*strategy)) : json(nullptr);
    doc["seed"] = seed;
    doc["repair_at_25"] = repair_at_25;
    doc["jobs"] = jobs;
    doc["repair"] = ordered_json{{"max_iter", repair.max_iter},
                                 {"state_bound", repair.state_bound},
                                 {"checkseq_budget_seconds", repair.checkseq_budget_seconds},
                                 {"iseq_count", repair.iseq_count},
                                 {"omit_conserve", repair.omit_conserve},
                                 {"max_queries", repair.max_queries},
                                 {"fault_model", fault_model_names(repair.fault_model)}};
    return doc.dump(2) + "\n";
}

namespace {

std::unique_ptr<Backend> make_backend(const ExperimentPlan& plan) {
    if (plan.backend == "perfect") return std::make_unique<PerfectBackend>();
    if (plan.backend == "sim") {
        SimulatorProfile profile = plan.profile;
        if (profile.seed == 0) profile.seed = plan.seed;
        return std::make_unique<SimulatorBackend>(profile, /*cooperative=*/true);
    }
    if (plan.backend == "sim-oblivious") {
        SimulatorProfile profile = plan.profile;
        if (profile.seed == 0) profile.seed = plan.seed;
        return std::make_unique<SimulatorBackend>(profile, /*cooperative=*/false);
    }
    if (plan.backend == "live") return std::make_unique<LiveBackend>(LiveBackendConfig::from_environment());
    throw Error("unknown backend \"" + plan.backend + "\"");
}

OracleRecord process_oracle(const ExperimentPlan& plan, int num_states, int index) {
    OracleRecord record;
    record.index = index;
    try {
        Rng stream = Rng(plan.seed).fork(static_cast<std::uint64_t>(num_states) * 1000003ULL +
                                         static_cast<std::uint64_t>(index));
        GenSpec spec{num_states, plan.num_inputs, plan.num_outputs, stream.next_u64()};
        const Fsm oracle = generate_oracle(spec);
        Rng nl_rng(stream.next_u64());
        const std::string description = describe_fsm(oracle, nl_rng);

        std::unique_ptr<Backend> backend = make_backend(plan);
        BackendResponse response = backend->generate_fsm(build_generation_prompt(description));
        record.parsed = response.machine.has_value();

        if (record.parsed) {
            Fsm observed(*response.machine);
            SyntacticDiff diff = syntactic_diff(oracle, observed);
            record.faulty = !diff.empty();
            record.delta_size = static_cast<int>(diff.evidences.size());
            for (std::size_t k = 0; k < 4; ++k) {
                record.fault_counts[k] = static_cast<int>(diff.count(static_cast<FaultKind>(k)));
            }
            try {
                Fsm widened(observed.states(), observed.initial(), oracle.inputs(), oracle.outputs(),
                            observed.transitions());
                record.equivalent = are_equivalent(oracle, widened);
            } catch (const Error&) {
                record.equivalent = false;
            }
        } else {
            record.faulty = true;  // faulty-by-nonparse
        }

        const bool repair_wanted =
            plan.strategy && record.faulty && (num_states < 25 || plan.repair_at_25) && record.parsed;
        if (repair_wanted) {
            RepairConfig cfg = plan.repair;
            cfg.seed = stream.next_u64();
            OracleExpert expert(oracle);
            RepairOutcome outcome;
            switch (*plan.strategy) {
                case RepairStrategy::Syntactic:
                    outcome = repair_syntactic(oracle, description, *backend, cfg);
                    break;
                case RepairStrategy::DistSeq:
                    outcome = repair_dist_seq(oracle, description, *backend, cfg);
                    break;
                case RepairStrategy::CheckSeq:
                    outcome = repair_check_seq(description, *backend, expert, cfg, &oracle);
                    break;
                case RepairStrategy::FaultModel:
                    outcome = repair_fault_model(description, *backend, expert, cfg, &oracle);
                    break;
            }
            record.repaired = outcome.success;
            record.repair_attempts = outcome.attempts;
            record.output_queries = static_cast<int>(outcome.queries.size());
            record.max_query_length = outcome.max_query_length;
            record.augmented_transitions = outcome.augmented_transitions;
        }
    } catch (const std::exception& e) {
        record.error = e.what();
        record.faulty = true;
    }
    return record;
}

SizeReport summarize(const ExperimentPlan& plan, int num_states, std::vector<OracleRecord> records) {
    SizeReport report;
    report.num_states = num_states;
    report.oracles = static_cast<int>(records.size());
    report.repair_ran = plan.strategy.has_value() && (num_states < 25 || plan.repair_at_25);

    long long delta_total = 0;
    std::array<long long, 4> totals{0, 0, 0, 0};
    for (const auto& r : records) {
        int all = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            totals[k] += r.fault_counts[k];
            report.fault_type_maxima[k] = std::max(report.fault_type_maxima[k], r.fault_counts[k]);
            all += r.fault_counts[k];
        }
        report.all_faults_max = std::max(report.all_faults_max, all);
        delta_total += r.delta_size;
        report.max_delta_size = std::max(report.max_delta_size, r.delta_size);
        if (!r.parsed) ++report.nonparse;
        if (r.faulty) ++report.faulty;
        if (r.repaired) ++report.repaired;
        report.max_output_queries = std::max(report.max_output_queries, r.output_queries);
        report.max_query_length = std::max(report.max_query_length, r.max_query_length);
        if (r.augmented_transitions > 0) ++report.domains_augmented;
        report.max_added_transitions = std::max(report.max_added_transitions, r.augmented_transitions);
    }
    if (report.oracles > 0) {
        double all_mean = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            report.fault_type_means[k] = static_cast<double>(totals[k]) / report.oracles;
            all_mean += report.fault_type_means[k];
        }
        report.all_faults_mean = all_mean;
        report.avg_delta_size = static_cast<double>(delta_total) / report.oracles;
    }
    report.repair_success_rate = report.faulty > 0 && report.repair_ran
                                     ? 100.0 * report.repaired / report.faulty
                                     : 100.0;
    report.records = std::move(records);
    return report;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentPlan& plan) {
    ExperimentReport report;
    report.plan = plan;
    for (int num_states : plan.sizes) {
        std::vector<OracleRecord> records(static_cast<std::size_t>(plan.oracles_per_size));
        if (plan.jobs > 1) {
            std::vector<std::future<OracleRecord>> futures;
            futures.reserve(records.size());
            for (int i = 0; i < plan.oracles_per_size; ++i) {
                futures.push_back(
                    std::async(std::launch::async, [&plan, num_states, i] { return process_oracle(plan, num_states, i); }));
            }
            for (int i = 0; i < plan.oracles_per_size; ++i) records[static_cast<std::size_t>(i)] = futures[static_cast<std::size_t>(i)].get();
        } else {
            for (int i = 0; i < plan.oracles_per_size; ++i) {
                records[static_cast<std::size_t>(i)] = process_oracle(plan, num_states, i);
            }
        }
        report.per_size.push_back(summarize(plan, num_states, std::move(records)));
    }
    return report;
}

std::string ExperimentReport::to_json() const {
    ordered_json doc;
    doc["plan"] = ordered_json::parse(plan.to_json());
    doc["per_size"] = ordered_json::array();
    for (const auto& s : per_size) {
        ordered_json size_doc;
        size_doc["num_states"] = s.num_states;
        size_doc["oracles"] = s.oracles;
        size_doc["fault_type_means"] = s.fault_type_means;
        size_doc["fault_type_maxima"] = s.fault_type_maxima;
        size_doc["all_faults_mean"] = s.all_faults_mean;
        size_doc["all_faults_max"] = s.all_faults_max;
        size_doc["faulty"] = s.faulty;
        size_doc["nonparse"] = s.nonparse;
        size_doc["avg_delta_size"] = s.avg_delta_size;
        size_doc["max_delta_size"] = s.max_delta_size;
        size_doc["repair_ran"] = s.repair_ran;
        size_doc["repaired"] = s.repaired;
        size_doc["repair_success_rate"] = s.repair_success_rate;
        size_doc["max_output_queries"] = s.max_output_queries;
        size_doc["max_query_length"] = s.max_query_length;
        size_doc["domains_augmented"] = s.domains_augmented;
        size_doc["max_added_transitions"] = s.max_added_transitions;
        size_doc["oracle_records"] = ordered_json::array();
        for (const auto& r : s.records) {
            size_doc["oracle_records"].push_back(ordered_json{{"index", r.index},
                                                              {"parsed", r.parsed},
                                                              {"faulty", r.faulty},
                                                              {"equivalent", r.equivalent},
                                                              {"fault_counts", r.fault_counts},
                                                              {"delta_size", r.delta_size},
                                                              {"repaired", r.repaired},
                                                              {"repair_attempts", r.repair_attempts},
                                                              {"output_queries", r.output_queries},
                                                              {"max_query_length", r.max_query_length},
                                                              {"augmented_transitions", r.augmented_transitions},
                                                              {"error", r.error}});
        }
        doc["per_size"].push_back(std::move(size_doc));
    }
    return doc.dump(2) + "\n";
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "fault_stats,nb_states,type1,type2,type3,type4,all\n";
    for (const auto& s : per_size) {
        out << "means," << s.num_states;
        for (double m : s.fault_type_means) out << ',' << m;
        out << ',' << s.all_faults_mean << '\n';
    }
    for (const auto& s : per_size) {
        out << "maximum," << s.num_states;
        for (int m : s.fault_type_maxima) out << ',' << m;
        out << ',' << s.all_faults_max << '\n';
    }
    out << "\nrepair,nb_states,nb_oracles,nb_faulty,avg_delta,max_delta,success_rate\n";
    for (const auto& s : per_size) {
        out << "repair," << s.num_states << ',' << s.oracles << ',' << s.faulty << ',' << s.avg_delta_size << ','
            << s.max_delta_size << ',' << s.repair_success_rate << '\n';
    }
    out << "\nqueries,nb_states,max_output_queries,max_query_length,domains_augmented,max_added_transitions\n";
    for (const auto& s : per_size) {
        out << "queries," << s.num_states << ',' << s.max_output_queries << ',' << s.max_query_length << ','
            << s.domains_augmented << ',' << s.max_added_transitions << '\n';
    }
    return out.str();
}

void emit_report(const ExperimentReport& report, const std::string& format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report to " + path);
    if (format == "json") {
        out << report.to_json();
    } else if (format == "csv") {
        out << report.to_csv();
    } else {
        throw Error("unknown report format \"" + format + "\" (use json or csv)");
    }
}

}  // namespace fsmkit
