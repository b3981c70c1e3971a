#include "fsmkit/repair.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "fsmkit/checking.hpp"
#include "fsmkit/csv.hpp"
#include "fsmkit/nl.hpp"
#include "fsmkit/product.hpp"
#include "fsmkit/prompts.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

using nlohmann::ordered_json;

const char* to_string(RepairStrategy strategy) {
    switch (strategy) {
        case RepairStrategy::Syntactic: return "syntactic";
        case RepairStrategy::DistSeq: return "distseq";
        case RepairStrategy::CheckSeq: return "checkseq";
        case RepairStrategy::FaultModel: return "faultmodel";
    }
    return "?";
}

std::optional<RepairStrategy> repair_strategy_from_string(const std::string& name) {
    if (name == "syntactic") return RepairStrategy::Syntactic;
    if (name == "distseq") return RepairStrategy::DistSeq;
    if (name == "checkseq") return RepairStrategy::CheckSeq;
    if (name == "faultmodel") return RepairStrategy::FaultModel;
    return std::nullopt;
}

namespace {

int derived_max_iter(const RepairConfig& cfg, const Fsm& reference) {
    if (cfg.max_iter > 0) return cfg.max_iter;
    return static_cast<int>(reference.states().size() * reference.inputs().size());
}

/// Rebuilds `m` with alphabets covering both machines; serialized CSV drops
/// unused symbols, and comparison against the oracle needs shared universes.
Fsm widen_alphabets(const Fsm& m, const Fsm& reference) {
    auto unioned = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        std::vector<std::string> out = a;
        for (const auto& v : b) {
            if (std::find(out.begin(), out.end(), v) == std::end(out)) out.push_back(v);
        }
        return out;
    };
    return Fsm(m.states(), m.initial(), unioned(m.inputs(), reference.inputs()),
               unioned(m.outputs(), reference.outputs()), m.transitions());
}

std::string canonical_key(const Fsm& m) {
    std::vector<std::string> rows;
    rows.reserve(m.transitions().size());
    for (const auto& t : m.transitions()) rows.push_back(to_string(t));
    std::sort(rows.begin(), rows.end());
    std::string key = m.initial();
    for (const auto& row : rows) {
        key += '|';
        key += row;
    }
    return key;
}

class Session {
public:
    Session(RepairStrategy strategy, Backend& backend, const std::string& description)
        : backend_(backend), prompt_(build_generation_prompt(description)) {
        outcome_.strategy = strategy;
    }

    /// Sends the current prompt and records the exchange; returns the parsed
    /// machine or nullopt.
    std::optional<Fsm> exchange() {
        BackendResponse response = backend_.generate_fsm(prompt_);
        outcome_.history.push_back({prompt_.user_role, response.raw_text, response.machine.has_value()});
        if (response.machine) {
            const std::string key = canonical_key(*response.machine);
            if (!seen_.insert(key).second) ++outcome_.revisits;
        }
        return response.machine;
    }

    void append_fragment(const std::string& fragment) { prompt_.user_role += fragment; }

    RepairOutcome&& take(std::optional<Fsm> machine, bool success, std::string failure_reason = "") {
        outcome_.success = success;
        outcome_.machine = std::move(machine);
        outcome_.failure_reason = std::move(failure_reason);
        return std::move(outcome_);
    }

    RepairOutcome& outcome() { return outcome_; }

private:
    Backend& backend_;
    PromptMessage prompt_;
    RepairOutcome outcome_;
    std::set<std::string> seen_;
};

bool audit_against_oracle(const Fsm& machine, const Fsm& oracle) {
    try {
        return are_equivalent(oracle, widen_alphabets(machine, oracle));
    } catch (const Error&) {
        return false;
    }
}

std::string syntactic_fragment(const SyntacticDiff& diff, const Fsm& oracle, const Fsm& observed, Rng& rng,
                               bool omit_conserve) {
    std::string fragment = prompts::kSyntacticPresentHeader;
    for (const auto& t : diff.desired) {
        fragment += describe_transition(t, rng) + "\n";
    }
    fragment += prompts::kSyntacticAbsentHeader;
    for (const auto& t : diff.undesired) {
        fragment += describe_transition(t, rng) + "\n";
    }
    if (!omit_conserve) {
        fragment += prompts::kSyntacticKeepHeader;
        std::set<Transition> expected(oracle.transitions().begin(), oracle.transitions().end());
        for (const auto& t : observed.transitions()) {
            if (expected.find(t) != expected.end()) fragment += describe_transition(t, rng) + "\n";
        }
    }
    fragment += prompts::kSyntacticFormatReminder;
    return fragment;
}

std::string trace_fragment(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs) {
    std::string fragment = prompts::kTraceInputHeader;
    fragment += join_symbols(inputs) + "\n";
    fragment += prompts::kTraceOutputHeader;
    fragment += join_symbols(outputs) + "\n";
    fragment += prompts::kTraceFormatReminder;
    return fragment;
}

OutputQuery checked_query(Expert& expert, const std::vector<std::string>& inputs) {
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<std::string> answer = expert.output_query(inputs);
        if (answer.size() == inputs.size()) return OutputQuery{inputs, std::move(answer), expert.kind()};
    }
    throw Error("expert kept answering with the wrong sequence length");
}

}  // namespace

RepairOutcome repair_syntactic(const Fsm& oracle, const std::string& description, Backend& backend,
                               const RepairConfig& cfg) {
    Session session(RepairStrategy::Syntactic, backend, description);
    session.outcome().max_iter = derived_max_iter(cfg, oracle);
    Rng rng(cfg.seed ^ fnv1a64("syntactic"));

    std::optional<Fsm> machine = session.exchange();
    while (true) {
        if (!machine) {
            return session.take(std::nullopt, false, "backend returned unparsable text");
        }
        const Fsm observed = widen_alphabets(*machine, oracle);
        SyntacticDiff diff = syntactic_diff(oracle, observed);
        if (diff.empty()) {
            session.outcome().oracle_equivalent = audit_against_oracle(observed, oracle);
            return session.take(observed, true);
        }
        if (session.outcome().attempts >= session.outcome().max_iter) {
            return session.take(observed, false, "still faulty after max_iter repair attempts");
        }
        session.append_fragment(syntactic_fragment(diff, oracle, observed, rng, cfg.omit_conserve));
        ++session.outcome().attempts;
        machine = session.exchange();
    }
}

RepairOutcome repair_dist_seq(const Fsm& oracle, const std::string& description, Backend& backend,
                              const RepairConfig& cfg) {
    Session session(RepairStrategy::DistSeq, backend, description);
    session.outcome().max_iter = derived_max_iter(cfg, oracle);
    Rng rng(cfg.seed ^ fnv1a64("distseq"));

    std::optional<Fsm> machine = session.exchange();
    while (true) {
        if (!machine) {
            return session.take(std::nullopt, false, "backend returned unparsable text");
        }
        const Fsm observed = widen_alphabets(*machine, oracle);

        std::vector<std::vector<std::string>> iseq;
        try {
            if (!observed.is_deterministic() || !observed.is_complete()) {
                return session.take(observed, false, "generated machine is not a complete DFSM");
            }
            iseq = sample_distinguishing_sequences(oracle, observed, cfg.iseq_count, rng);
        } catch (const DomainError& e) {
            return session.take(observed, false, std::string("cannot compare with the oracle: ") + e.what());
        }
        if (iseq.empty()) {
            session.outcome().oracle_equivalent = audit_against_oracle(observed, oracle);
            return session.take(observed, true);
        }
        if (session.outcome().attempts >= session.outcome().max_iter) {
            return session.take(observed, false, "still not equivalent after max_iter repair attempts");
        }
        std::string fragment;
        for (const auto& sequence : iseq) {
            fragment += trace_fragment(sequence, oracle.run(sequence).trace.outputs);
        }
        session.append_fragment(fragment);
        ++session.outcome().attempts;
        machine = session.exchange();
    }
}

RepairOutcome repair_check_seq(const std::string& description, Backend& backend, Expert& expert,
                               const RepairConfig& cfg, const Fsm* oracle_for_audit) {
    Session session(RepairStrategy::CheckSeq, backend, description);

    std::optional<Fsm> machine = session.exchange();
    while (true) {
        if (!machine) {
            return session.take(std::nullopt, false, "backend returned unparsable text");
        }
        if (session.outcome().max_iter == 0) {
            session.outcome().max_iter =
                cfg.max_iter > 0 ? cfg.max_iter
                                 : derived_max_iter(cfg, oracle_for_audit != nullptr ? *oracle_for_audit : *machine);
        }

        Fsm subject = *machine;
        if (!subject.is_deterministic()) {
            subject = resolve_nondeterminism(subject);
            session.outcome().nondeterminism_resolved = true;
        }
        if (!subject.is_complete()) {
            subject = complete_inputs(subject).machine;
        }
        const int bound = cfg.state_bound > 0 ? cfg.state_bound
                          : oracle_for_audit != nullptr
                              ? static_cast<int>(std::max(oracle_for_audit->states().size(), subject.states().size()))
                              : static_cast<int>(subject.states().size());

        CheckingSequence cs = build_checking_sequence(subject, bound, cfg.checkseq_budget_seconds,
                                                      cfg.seed + static_cast<std::uint64_t>(session.outcome().attempts));
        if (!cs.verified) session.outcome().low_confidence = true;

        OutputQuery query = checked_query(expert, cs.trace.inputs);
        session.outcome().max_query_length = std::max(session.outcome().max_query_length, query.inputs.size());
        const bool agreed = query.answer == cs.trace.outputs;
        session.outcome().queries.push_back(std::move(query));
        if (agreed) {
            if (oracle_for_audit != nullptr) {
                session.outcome().oracle_equivalent = audit_against_oracle(subject, *oracle_for_audit);
            }
            return session.take(subject, true);
        }
        if (session.outcome().attempts >= session.outcome().max_iter) {
            return session.take(subject, false, "expert kept disagreeing after max_iter repair attempts");
        }
        session.append_fragment(
            trace_fragment(session.outcome().queries.back().inputs, session.outcome().queries.back().answer));
        ++session.outcome().attempts;
        machine = session.exchange();
    }
}

RepairOutcome repair_fault_model(const std::string& description, Backend& backend, Expert& expert,
                                 const RepairConfig& cfg, const Fsm* oracle) {
    Session session(RepairStrategy::FaultModel, backend, description);
    session.outcome().max_iter = cfg.max_iter;

    std::optional<Fsm> machine = session.exchange();
    if (!machine) {
        return session.take(std::nullopt, false, "backend returned unparsable text");
    }
    try {
        Fsm generated = oracle != nullptr ? widen_alphabets(*machine, *oracle) : *machine;
        MutationMachine domain = build_mutation_machine(generated, cfg.fault_model);
        if (oracle != nullptr) {
            auto [augmented, added] = augment_with_oracle(domain, *oracle);
            domain = std::move(augmented);
            session.outcome().augmented_transitions = added;
        }
        const int max_queries = cfg.max_queries > 0 ? cfg.max_queries : default_max_queries(domain);
        MineResult mined = mine(domain, expert, max_queries);
        session.outcome().queries = std::move(mined.queries);
        session.outcome().max_query_length = mined.max_query_length;
        if (mined.status == MineStatus::Repaired) {
            if (oracle != nullptr) {
                session.outcome().oracle_equivalent = audit_against_oracle(*mined.machine, *oracle);
            }
            return session.take(std::move(mined.machine), true);
        }
        const std::string reason = mined.status == MineStatus::Failure
                                       ? mined.failure_reason
                                       : "query budget exhausted before the domain converged";
        return session.take(std::nullopt, false, reason);
    } catch (const DomainError& e) {
        return session.take(std::nullopt, false, std::string("repair domain construction failed: ") + e.what());
    }
}

std::string outcome_to_json(const RepairOutcome& outcome) {
    ordered_json doc;
    doc["strategy"] = to_string(outcome.strategy);
    doc["success"] = outcome.success;
    doc["attempts"] = outcome.attempts;
    doc["max_iter"] = outcome.max_iter;
    doc["machine_csv"] = outcome.machine ? serialize_csv(*outcome.machine) : "";
    doc["history"] = ordered_json::array();
    for (const auto& attempt : outcome.history) {
        doc["history"].push_back(ordered_json{
            {"prompt", attempt.prompt}, {"response", attempt.response_text}, {"parsed", attempt.parsed}});
    }
    doc["queries"] = ordered_json::array();
    for (const auto& query : outcome.queries) {
        doc["queries"].push_back(ordered_json{{"inputs", join_symbols(query.inputs)},
                                              {"answer", join_symbols(query.answer)},
                                              {"source", query.source}});
    }
    doc["max_query_length"] = outcome.max_query_length;
    doc["revisits"] = outcome.revisits;
    doc["augmented_transitions"] = outcome.augmented_transitions;
    doc["low_confidence"] = outcome.low_confidence;
    doc["nondeterminism_resolved"] = outcome.nondeterminism_resolved;
    doc["failure_reason"] = outcome.failure_reason;
    if (outcome.oracle_equivalent.has_value()) {
        doc["oracle_equivalent"] = *outcome.oracle_equivalent;
    } else {
        doc["oracle_equivalent"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

}  // namespace fsmkit
