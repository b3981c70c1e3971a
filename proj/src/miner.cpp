#include "fsmkit/miner.hpp"

#include <algorithm>
#include <map>

#include "fsmkit/product.hpp"

namespace fsmkit {

namespace {

constexpr int kEquivalentBlockCap = 64;
constexpr int kAnswerRetries = 8;

std::vector<std::string> ask(Expert& expert, const std::vector<std::string>& inputs) {
    for (int attempt = 0; attempt < kAnswerRetries; ++attempt) {
        std::vector<std::string> answer = expert.output_query(inputs);
        if (answer.size() == inputs.size()) return answer;
    }
    throw Error("expert kept answering with the wrong sequence length");
}

std::vector<std::size_t> decode_selection(const SelectionFormula& f, const sat::Solver& solver) {
    std::vector<std::size_t> choice(f.selectors.size(), 0);
    for (std::size_t cell = 0; cell < f.selectors.size(); ++cell) {
        for (std::size_t j = 0; j < f.selectors[cell].size(); ++j) {
            if (solver.value(f.selectors[cell][j])) {
                choice[cell] = j;
                break;
            }
        }
    }
    return choice;
}

sat::Clause blocking_clause(const SelectionFormula& f, const std::vector<std::size_t>& choice) {
    sat::Clause clause;
    clause.reserve(choice.size());
    for (std::size_t cell = 0; cell < choice.size(); ++cell) {
        clause.push_back(-f.selectors[cell][choice[cell]]);
    }
    return clause;
}

}  // namespace

SelectionFormula build_selection_formula(const MutationMachine& mm) {
    SelectionFormula f;
    f.selectors.resize(mm.cells().size());
    for (std::size_t cell = 0; cell < mm.cells().size(); ++cell) {
        for (std::size_t j = 0; j < mm.cells()[cell].size(); ++j) {
            f.selectors[cell].push_back(f.cnf.new_var());
        }
        sat::exactly_one(f.cnf, f.selectors[cell]);
    }
    return f;
}

void add_trace_constraint(SelectionFormula& f, const MutationMachine& mm, const OutputQuery& query) {
    if (query.inputs.size() != query.answer.size()) {
        throw DomainError("output query has mismatched input/answer lengths");
    }
    if (query.inputs.empty()) return;

    const Fsm& base = mm.base();
    const std::size_t num_states = base.states().size();
    std::map<std::string, std::size_t> state_index;
    for (std::size_t i = 0; i < num_states; ++i) state_index[base.states()[i]] = i;

    // occ[i][s]: the selected machine is in state s after i steps.
    std::vector<std::vector<int>> occ(query.inputs.size() + 1, std::vector<int>(num_states, 0));
    for (auto& step : occ) {
        for (auto& var : step) var = f.cnf.new_var();
    }
    f.cnf.add_clause({occ[0][state_index.at(base.initial())]});

    for (std::size_t i = 0; i < query.inputs.size(); ++i) {
        const std::string& x = query.inputs[i];
        const std::string& y = query.answer[i];
        for (std::size_t s = 0; s < num_states; ++s) {
            const std::size_t cell = mm.cell_index(base.states()[s], x);
            const auto& options = mm.cells()[cell];
            for (std::size_t j = 0; j < options.size(); ++j) {
                const int sel = f.selectors[cell][j];
                if (options[j].output != y) {
                    f.cnf.add_clause({-occ[i][s], -sel});
                } else {
                    f.cnf.add_clause({-occ[i][s], -sel, occ[i + 1][state_index.at(options[j].tgt)]});
                }
            }
        }
    }
}

int default_max_queries(const MutationMachine& mm) {
    const Fsm& base = mm.base();
    return static_cast<int>(base.states().size() * base.inputs().size() *
                            std::max<std::size_t>(base.outputs().size(), 1));
}

MineResult mine(const MutationMachine& mm, Expert& expert, int max_queries) {
    SelectionFormula f = build_selection_formula(mm);
    MineResult result;

    while (true) {
        sat::Solver first(f.cnf);
        if (!first.solve()) {
            result.status = MineStatus::Failure;
            result.failure_reason = "no machine in the repair domain is consistent with the expert's answers";
            return result;
        }
        const std::vector<std::size_t> selection1 = decode_selection(f, first);
        Fsm m1 = mm.select(selection1);

        // Look for a consistent selection with observably different behavior;
        // equivalent duplicates are blocked and retried up to a cap.
        std::optional<Fsm> m2;
        {
            sat::Cnf probe = f.cnf;
            probe.add_clause(blocking_clause(f, selection1));
            for (int round = 0; round < kEquivalentBlockCap; ++round) {
                sat::Solver second(probe);
                if (!second.solve()) break;
                const std::vector<std::size_t> selection2 = decode_selection(f, second);
                Fsm candidate = mm.select(selection2);
                if (!are_equivalent(m1, candidate)) {
                    m2 = std::move(candidate);
                    break;
                }
                probe.add_clause(blocking_clause(f, selection2));
            }
        }
        if (!m2) {
            result.status = MineStatus::Repaired;
            result.machine = std::move(m1);
            return result;
        }

        if (static_cast<int>(result.queries.size()) >= max_queries) {
            result.status = MineStatus::Exhausted;
            result.candidates = {std::move(m1), std::move(*m2)};
            return result;
        }

        auto sequence = shortest_distinguishing_sequence(m1, *m2);
        // Non-equivalence guarantees a witness.
        OutputQuery query{*sequence, ask(expert, *sequence), expert.kind()};
        result.max_query_length = std::max(result.max_query_length, query.inputs.size());
        add_trace_constraint(f, mm, query);
        result.queries.push_back(std::move(query));
    }
}

MineResult brute_force_mine(const MutationMachine& mm, Expert& expert, int max_queries,
                            std::uint64_t enumeration_budget) {
    const BigUint size = mm.domain_size();
    if (!size.fits_u64() || size.as_u64() > enumeration_budget) {
        throw DomainError("repair domain too large to enumerate (" + size.to_string() + " machines)");
    }

    std::vector<Fsm> consistent;
    consistent.reserve(static_cast<std::size_t>(size.as_u64()));
    std::vector<std::size_t> odometer(mm.cells().size(), 0);
    while (true) {
        consistent.push_back(mm.select(odometer));
        std::size_t pos = 0;
        while (pos < odometer.size()) {
            if (++odometer[pos] < mm.cells()[pos].size()) break;
            odometer[pos] = 0;
            ++pos;
        }
        if (pos == odometer.size()) break;
    }

    MineResult result;
    while (true) {
        if (consistent.empty()) {
            result.status = MineStatus::Failure;
            result.failure_reason = "no machine in the repair domain is consistent with the expert's answers";
            return result;
        }
        const Fsm& m1 = consistent.front();
        const Fsm* m2 = nullptr;
        for (std::size_t i = 1; i < consistent.size(); ++i) {
            if (!are_equivalent(m1, consistent[i])) {
                m2 = &consistent[i];
                break;
            }
        }
        if (m2 == nullptr) {
            result.status = MineStatus::Repaired;
            result.machine = m1;
            return result;
        }
        if (static_cast<int>(result.queries.size()) >= max_queries) {
            result.status = MineStatus::Exhausted;
            result.candidates = {m1, *m2};
            return result;
        }

        auto sequence = shortest_distinguishing_sequence(m1, *m2);
        OutputQuery query{*sequence, ask(expert, *sequence), expert.kind()};
        result.max_query_length = std::max(result.max_query_length, query.inputs.size());
        std::vector<Fsm> survivors;
        survivors.reserve(consistent.size());
        for (auto& m : consistent) {
            if (m.run(query.inputs).trace.outputs == query.answer) survivors.push_back(std::move(m));
        }
        consistent = std::move(survivors);
        result.queries.push_back(std::move(query));
    }
}

}  // namespace fsmkit
