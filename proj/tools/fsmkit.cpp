#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fsmkit/backend.hpp"
#include "fsmkit/checking.hpp"
#include "fsmkit/csv.hpp"
#include "fsmkit/diff.hpp"
#include "fsmkit/dot.hpp"
#include "fsmkit/expert.hpp"
#include "fsmkit/harness.hpp"
#include "fsmkit/miner.hpp"
#include "fsmkit/mutation.hpp"
#include "fsmkit/nl.hpp"
#include "fsmkit/product.hpp"
#include "fsmkit/random_gen.hpp"
#include "fsmkit/repair.hpp"

namespace {

using namespace fsmkit;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

Fsm load_machine(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".dot") return parse_dot(text);
    return parse_csv(text).machine;
}

FaultModel parse_fault_model(const std::string& spec) {
    FaultModel fm;
    std::istringstream in(spec);
    std::string name;
    while (std::getline(in, name, ',')) {
        if (name == "output") {
            fm.output_faults = true;
        } else if (name == "missing") {
            fm.missing_transition_faults = true;
        } else if (name == "transfer") {
            fm.transfer_faults = true;
        } else if (!name.empty()) {
            throw Error("unknown fault model source \"" + name + "\" (use output, missing, transfer)");
        }
    }
    return fm;
}

std::unique_ptr<Backend> make_backend(const std::string& name, const std::string& profile_path, std::uint64_t seed) {
    if (name == "perfect") return std::make_unique<PerfectBackend>();
    if (name == "sim" || name == "sim-oblivious") {
        SimulatorProfile profile =
            profile_path.empty() ? SimulatorProfile::observed_defaults() : SimulatorProfile::from_json_file(profile_path);
        if (profile.seed == 0) profile.seed = seed;
        return std::make_unique<SimulatorBackend>(profile, name == "sim");
    }
    if (name == "live") return std::make_unique<LiveBackend>(LiveBackendConfig::from_environment());
    throw Error("unknown backend \"" + name + "\" (use live, perfect, sim, sim-oblivious)");
}

ordered_json diff_to_json(const SyntacticDiff& diff) {
    ordered_json doc;
    doc["empty"] = diff.empty();
    doc["state_set_mismatch"] = diff.state_set_mismatch;
    doc["evidences"] = ordered_json::array();
    for (const auto& e : diff.evidences) {
        ordered_json item;
        item["kind"] = to_string(e.kind);
        item["expected"] = e.expected ? ordered_json(to_string(*e.expected)) : ordered_json(nullptr);
        item["observed"] = e.observed ? ordered_json(to_string(*e.observed)) : ordered_json(nullptr);
        doc["evidences"].push_back(std::move(item));
    }
    auto rows = [](const std::vector<Transition>& ts) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : ts) arr.push_back(to_string(t));
        return arr;
    };
    doc["desired"] = rows(diff.desired);
    doc["undesired"] = rows(diff.undesired);
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fsmkit — design Mealy machines from English descriptions, detect faults, repair them"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random deterministic complete oracle machine");
    int gen_states = 4, gen_inputs = 2, gen_outputs = 2;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "-";
    gen->add_option("--states", gen_states, "number of states")->required();
    gen->add_option("--inputs", gen_inputs, "input alphabet size")->required();
    gen->add_option("--outputs", gen_outputs, "output alphabet size")->required();
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--out", gen_out, "output CSV path (- for stdout)");

    // describe
    auto* describe = app.add_subcommand("describe", "render a machine as an English description");
    std::string describe_in, describe_out = "-";
    std::uint64_t describe_seed = 0;
    bool describe_normalize = false;
    describe->add_option("--in", describe_in, "machine CSV")->required();
    describe->add_option("--seed", describe_seed, "pattern selection seed");
    describe->add_option("--out", describe_out, "output text path");
    describe->add_flag("--normalize", describe_normalize, "collapse whitespace instead of the native shape");

    // parse-desc
    auto* parse_desc = app.add_subcommand("parse-desc", "parse an English description back into a machine");
    std::string pd_in, pd_out = "-";
    parse_desc->add_option("--in", pd_in, "description text file")->required();
    parse_desc->add_option("--out", pd_out, "output CSV path");

    // diff
    auto* diff_cmd = app.add_subcommand("diff", "syntactic comparison of two machines");
    std::string diff_expected, diff_observed, diff_format = "json";
    diff_cmd->add_option("--expected", diff_expected, "expected machine CSV")->required();
    diff_cmd->add_option("--observed", diff_observed, "observed machine CSV")->required();
    diff_cmd->add_option("--report", diff_format, "report format (json)");

    // equiv
    auto* equiv = app.add_subcommand("equiv", "trace equivalence of two machines (exit 1 when distinguishable)");
    std::string equiv_a, equiv_b;
    equiv->add_option("--a", equiv_a, "first machine CSV")->required();
    equiv->add_option("--b", equiv_b, "second machine CSV")->required();

    // checkseq
    auto* checkseq = app.add_subcommand("checkseq", "build a checking sequence");
    std::string checkseq_in;
    int checkseq_n = 0;
    double checkseq_budget = 60.0;
    std::uint64_t checkseq_seed = 0;
    checkseq->add_option("--in", checkseq_in, "machine CSV")->required();
    checkseq->add_option("--n", checkseq_n, "candidate state bound (default: the machine's state count)");
    checkseq->add_option("--budget-seconds", checkseq_budget, "construction budget");
    checkseq->add_option("--seed", checkseq_seed, "tour randomization seed");

    // mutate
    auto* mutate = app.add_subcommand("mutate", "build a mutation machine (repair domain)");
    std::string mutate_in, mutate_fm = "output,missing", mutate_out = "-", mutate_oracle;
    mutate->add_option("--in", mutate_in, "generated machine CSV")->required();
    mutate->add_option("--fault-model", mutate_fm, "comma list: output,missing,transfer");
    mutate->add_option("--oracle", mutate_oracle, "augment the domain to include this oracle CSV");
    mutate->add_option("--out", mutate_out, "output CSV (rows may repeat cells)");

    // generate
    auto* generate = app.add_subcommand("generate", "produce a machine from a description via a backend");
    std::string generate_desc, generate_backend = "perfect", generate_profile, generate_out = "-";
    std::uint64_t generate_seed = 0;
    generate->add_option("--desc", generate_desc, "description text file")->required();
    generate->add_option("--backend", generate_backend, "live | perfect | sim | sim-oblivious");
    generate->add_option("--profile", generate_profile, "simulator profile JSON");
    generate->add_option("--seed", generate_seed, "simulator seed");
    generate->add_option("--out", generate_out, "output CSV path");

    // repair
    auto* repair = app.add_subcommand("repair", "repair a generated machine");
    std::string repair_strategy = "syntactic", repair_desc, repair_oracle, repair_backend = "sim";
    std::string repair_profile, repair_expert = "oracle", repair_transcript, repair_fm = "output,missing";
    std::string repair_dump_cnf;
    int repair_max_iter = 0, repair_n = 0, repair_max_queries = 0;
    double repair_budget = 60.0;
    std::uint64_t repair_seed = 0;
    repair->add_option("--strategy", repair_strategy, "syntactic | distseq | checkseq | faultmodel")->required();
    repair->add_option("--desc", repair_desc, "description text file")->required();
    repair->add_option("--oracle", repair_oracle, "oracle machine CSV (required for syntactic/distseq)");
    repair->add_option("--backend", repair_backend, "live | perfect | sim | sim-oblivious");
    repair->add_option("--profile", repair_profile, "simulator profile JSON");
    repair->add_option("--expert", repair_expert, "oracle | interactive");
    repair->add_option("--transcript", repair_transcript, "write the session transcript JSON here");
    repair->add_option("--fault-model", repair_fm, "faultmodel strategy: comma list output,missing,transfer");
    repair->add_option("--dump-cnf", repair_dump_cnf, "faultmodel strategy: write the final DIMACS CNF here");
    repair->add_option("--max-iter", repair_max_iter, "repair attempt cap (default |S|*|A|)");
    repair->add_option("--n", repair_n, "checkseq state bound");
    repair->add_option("--max-queries", repair_max_queries, "faultmodel query budget");
    repair->add_option("--budget-seconds", repair_budget, "checkseq construction budget");
    repair->add_option("--seed", repair_seed, "session seed");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a batch experiment plan");
    std::string experiment_plan, experiment_out = "report.json", experiment_format = "json";
    experiment->add_option("--plan", experiment_plan, "plan JSON file")->required();
    experiment->add_option("--out", experiment_out, "report output path");
    experiment->add_option("--format", experiment_format, "json | csv");

    // convert
    auto* convert = app.add_subcommand("convert", "convert between CSV and DOT by file extension");
    std::string convert_in, convert_out;
    convert->add_option("--in", convert_in, "input machine (.csv or .dot)")->required();
    convert->add_option("--out", convert_out, "output machine (.csv or .dot)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const Fsm m = generate_oracle({gen_states, gen_inputs, gen_outputs, gen_seed});
            write_file(gen_out, serialize_csv(m));
        } else if (describe->parsed()) {
            const Fsm m = load_machine(describe_in);
            Rng rng(describe_seed);
            write_file(describe_out, describe_fsm(m, rng, PatternSet::standard(), {describe_normalize}));
        } else if (parse_desc->parsed()) {
            const Fsm m = parse_description(read_file(pd_in));
            write_file(pd_out, serialize_csv(m));
        } else if (diff_cmd->parsed()) {
            if (diff_format != "json") throw Error("only --report json is supported");
            const SyntacticDiff d = syntactic_diff(load_machine(diff_expected), load_machine(diff_observed));
            std::cout << diff_to_json(d).dump(2) << "\n";
            return d.empty() ? 0 : 1;
        } else if (equiv->parsed()) {
            const Fsm a = load_machine(equiv_a);
            const Fsm b = load_machine(equiv_b);
            auto witness = shortest_distinguishing_sequence(a, b);
            if (!witness) {
                std::cout << "equivalent\n";
                return 0;
            }
            std::cout << "distinguishing sequence: " << join_symbols(*witness) << "\n";
            return 1;
        } else if (checkseq->parsed()) {
            const Fsm m = load_machine(checkseq_in);
            const int bound = checkseq_n > 0 ? checkseq_n : static_cast<int>(m.states().size());
            const CheckingSequence cs = build_checking_sequence(m, bound, checkseq_budget, checkseq_seed);
            std::cout << "inputs:  " << join_symbols(cs.trace.inputs) << "\n";
            std::cout << "outputs: " << join_symbols(cs.trace.outputs) << "\n";
            std::cout << "length:  " << cs.trace.inputs.size() << "\n";
            std::cout << "verified: " << (cs.verified ? "true" : "false") << "\n";
            return cs.verified ? 0 : 2;
        } else if (mutate->parsed()) {
            const Fsm m = load_machine(mutate_in);
            MutationMachine mm = build_mutation_machine(m, parse_fault_model(mutate_fm));
            int added = 0;
            if (!mutate_oracle.empty()) {
                auto [augmented, count] = augment_with_oracle(mm, load_machine(mutate_oracle));
                mm = std::move(augmented);
                added = count;
            }
            write_file(mutate_out, serialize_csv(mm.base()));
            std::cerr << "domain size: " << mm.domain_size().to_string() << "; added transitions: " << added << "\n";
        } else if (generate->parsed()) {
            auto backend = make_backend(generate_backend, generate_profile, generate_seed);
            const BackendResponse response = backend->generate_fsm(build_generation_prompt(read_file(generate_desc)));
            for (const auto& note : response.diagnostics) std::cerr << "note: " << note << "\n";
            if (!response.machine) {
                std::cerr << "backend response did not parse; raw text follows\n" << response.raw_text << "\n";
                return 1;
            }
            write_file(generate_out, serialize_csv(*response.machine));
        } else if (repair->parsed()) {
            auto strategy = repair_strategy_from_string(repair_strategy);
            if (!strategy) throw Error("unknown strategy \"" + repair_strategy + "\"");
            const std::string description = read_file(repair_desc);
            auto backend = make_backend(repair_backend, repair_profile, repair_seed);

            RepairConfig cfg;
            cfg.max_iter = repair_max_iter;
            cfg.state_bound = repair_n;
            cfg.checkseq_budget_seconds = repair_budget;
            cfg.fault_model = parse_fault_model(repair_fm);
            cfg.max_queries = repair_max_queries;
            cfg.seed = repair_seed;

            std::optional<Fsm> oracle;
            if (!repair_oracle.empty()) oracle = load_machine(repair_oracle);

            std::unique_ptr<Expert> expert;
            if (repair_expert == "oracle") {
                if (!oracle) throw Error("--expert oracle needs --oracle");
                expert = std::make_unique<OracleExpert>(*oracle);
            } else if (repair_expert == "interactive") {
                expert = std::make_unique<InteractiveExpert>(std::cin, std::cout);
            } else {
                throw Error("unknown expert \"" + repair_expert + "\"");
            }

            RepairOutcome outcome;
            switch (*strategy) {
                case RepairStrategy::Syntactic:
                    if (!oracle) throw Error("syntactic repair needs --oracle");
                    outcome = repair_syntactic(*oracle, description, *backend, cfg);
                    break;
                case RepairStrategy::DistSeq:
                    if (!oracle) throw Error("distseq repair needs --oracle");
                    outcome = repair_dist_seq(*oracle, description, *backend, cfg);
                    break;
                case RepairStrategy::CheckSeq:
                    outcome = repair_check_seq(description, *backend, *expert, cfg, oracle ? &*oracle : nullptr);
                    break;
                case RepairStrategy::FaultModel:
                    outcome = repair_fault_model(description, *backend, *expert, cfg, oracle ? &*oracle : nullptr);
                    break;
            }
            if (!repair_transcript.empty()) write_file(repair_transcript, outcome_to_json(outcome));
            if (!repair_dump_cnf.empty() && *strategy == RepairStrategy::FaultModel) {
                // Rebuild the final formula from the recorded queries.
                const BackendResponse regen = backend->generate_fsm(build_generation_prompt(description));
                if (regen.machine) {
                    MutationMachine mm = build_mutation_machine(*regen.machine, cfg.fault_model);
                    if (oracle) mm = augment_with_oracle(mm, *oracle).first;
                    SelectionFormula formula = build_selection_formula(mm);
                    for (const auto& q : outcome.queries) add_trace_constraint(formula, mm, q);
                    write_file(repair_dump_cnf, formula.cnf.to_dimacs());
                }
            }
            std::cout << (outcome.success ? "repaired" : "repair failure") << " after " << outcome.attempts
                      << " attempt(s)";
            if (!outcome.queries.empty()) std::cout << ", " << outcome.queries.size() << " output queries";
            std::cout << "\n";
            if (!outcome.failure_reason.empty()) std::cout << "reason: " << outcome.failure_reason << "\n";
            if (outcome.success && outcome.machine) std::cout << serialize_csv(*outcome.machine);
            return outcome.success ? 0 : 1;
        } else if (experiment->parsed()) {
            const ExperimentPlan plan = ExperimentPlan::from_json_file(experiment_plan);
            const ExperimentReport report = run_experiment(plan);
            emit_report(report, experiment_format, experiment_out);
            std::cerr << "report written to " << experiment_out << "\n";
        } else if (convert->parsed()) {
            const Fsm m = load_machine(convert_in);
            const bool to_dot = convert_out.size() >= 4 && convert_out.substr(convert_out.size() - 4) == ".dot";
            write_file(convert_out, to_dot ? serialize_dot(m) : serialize_csv(m));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
