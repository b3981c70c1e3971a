#include "fsmkit/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fsmkit::sat {

std::string Cnf::to_dimacs() const {
    std::string out = "p cnf " + std::to_string(num_vars) + " " + std::to_string(clauses.size()) + "\n";
    for (const auto& clause : clauses) {
        for (Lit l : clause) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

Solver::Solver(const Cnf& cnf) : num_vars_(cnf.num_vars) {
    assign_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    level_.assign(static_cast<std::size_t>(num_vars_) + 1, 0);
    reason_.assign(static_cast<std::size_t>(num_vars_) + 1, -1);
    activity_.assign(static_cast<std::size_t>(num_vars_) + 1, 0.0);
    phase_.assign(static_cast<std::size_t>(num_vars_) + 1, -1);
    watchers_.assign(2 * (static_cast<std::size_t>(num_vars_) + 1), {});
    heap_pos_.assign(static_cast<std::size_t>(num_vars_) + 1, -1);
    heap_.reserve(static_cast<std::size_t>(num_vars_));
    for (int v = 1; v <= num_vars_; ++v) heap_insert(v);

    for (const auto& clause : cnf.clauses) {
        Clause lits = clause;
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        bool tautology = false;
        for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
            if (lits[i] == -lits[i + 1]) tautology = true;
        }
        if (tautology) continue;
        if (lits.empty()) {
            unsat_ = true;
            return;
        }
        if (lits.size() == 1) {
            if (lit_value(lits[0]) == -1) {
                unsat_ = true;
                return;
            }
            if (lit_value(lits[0]) == 0) enqueue(lits[0], -1);
            continue;
        }
        clauses_.push_back({std::move(lits), false});
        attach(static_cast<int>(clauses_.size()) - 1);
    }
}

void Solver::attach(int clause_id) {
    const auto& lits = clauses_[static_cast<std::size_t>(clause_id)].lits;
    watchers_[lit_index(lits[0])].push_back(clause_id);
    watchers_[lit_index(lits[1])].push_back(clause_id);
}

void Solver::enqueue(Lit l, int reason) {
    const int var = std::abs(l);
    assign_[static_cast<std::size_t>(var)] = static_cast<signed char>(l > 0 ? 1 : -1);
    level_[static_cast<std::size_t>(var)] = decision_level();
    reason_[static_cast<std::size_t>(var)] = reason;
    trail_.push_back(l);
}

int Solver::propagate() {
    while (propagate_cursor_ < trail_.size()) {
        const Lit p = trail_[propagate_cursor_++];
        const Lit false_lit = -p;
        auto& watch_list = watchers_[lit_index(false_lit)];
        std::size_t keep = 0;
        for (std::size_t i = 0; i < watch_list.size(); ++i) {
            const int cid = watch_list[i];
            auto& lits = clauses_[static_cast<std::size_t>(cid)].lits;
            if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
            // lits[1] == false_lit now.
            if (lit_value(lits[0]) == 1) {
                watch_list[keep++] = cid;
                continue;
            }
            bool moved = false;
            for (std::size_t j = 2; j < lits.size(); ++j) {
                if (lit_value(lits[j]) != -1) {
                    std::swap(lits[1], lits[j]);
                    watchers_[lit_index(lits[1])].push_back(cid);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            // Unit or conflicting.
            watch_list[keep++] = cid;
            if (lit_value(lits[0]) == -1) {
                for (std::size_t j = i + 1; j < watch_list.size(); ++j) watch_list[keep++] = watch_list[j];
                watch_list.resize(keep);
                propagate_cursor_ = trail_.size();
                return cid;
            }
            enqueue(lits[0], cid);
        }
        watch_list.resize(keep);
    }
    return -1;
}

void Solver::analyze(int conflict, Clause& learned, int& backtrack_level) {
    learned.clear();
    learned.push_back(0);  // slot for the asserting literal
    std::vector<bool> seen(static_cast<std::size_t>(num_vars_) + 1, false);
    int counter = 0;
    Lit p = 0;
    std::size_t index = trail_.size();
    int clause_id = conflict;

    do {
        const auto& lits = clauses_[static_cast<std::size_t>(clause_id)].lits;
        for (const Lit q : lits) {
            if (q == p) continue;
            const int var = std::abs(q);
            if (!seen[static_cast<std::size_t>(var)] && level_[static_cast<std::size_t>(var)] > 0) {
                seen[static_cast<std::size_t>(var)] = true;
                bump(var);
                if (level_[static_cast<std::size_t>(var)] >= decision_level()) {
                    ++counter;
                } else {
                    learned.push_back(q);
                }
            }
        }
        // Pick the next marked literal on the trail.
        while (!seen[static_cast<std::size_t>(std::abs(trail_[index - 1]))]) --index;
        p = trail_[--index];
        seen[static_cast<std::size_t>(std::abs(p))] = false;
        --counter;
        clause_id = reason_[static_cast<std::size_t>(std::abs(p))];
    } while (counter > 0);
    learned[0] = -p;

    backtrack_level = 0;
    for (std::size_t i = 1; i < learned.size(); ++i) {
        backtrack_level = std::max(backtrack_level, level_[static_cast<std::size_t>(std::abs(learned[i]))]);
    }
    // Move a max-level literal to the second watch slot.
    if (learned.size() > 1) {
        std::size_t best = 1;
        for (std::size_t i = 2; i < learned.size(); ++i) {
            if (level_[static_cast<std::size_t>(std::abs(learned[i]))] >
                level_[static_cast<std::size_t>(std::abs(learned[best]))]) {
                best = i;
            }
        }
        std::swap(learned[1], learned[best]);
    }
}

void Solver::backtrack(int target_level) {
    while (decision_level() > target_level) {
        const std::size_t limit = trail_limits_.back();
        trail_limits_.pop_back();
        while (trail_.size() > limit) {
            const int var = std::abs(trail_.back());
            phase_[static_cast<std::size_t>(var)] = assign_[static_cast<std::size_t>(var)];
            assign_[static_cast<std::size_t>(var)] = 0;
            reason_[static_cast<std::size_t>(var)] = -1;
            heap_insert(var);
            trail_.pop_back();
        }
    }
    propagate_cursor_ = std::min(propagate_cursor_, trail_.size());
}

void Solver::heap_sift_up(std::size_t i) {
    while (i > 0) {
        const std::size_t up = (i - 1) / 2;
        if (!heap_less(heap_[i], heap_[up])) break;
        std::swap(heap_[i], heap_[up]);
        heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
        heap_pos_[static_cast<std::size_t>(heap_[up])] = static_cast<int>(up);
        i = up;
    }
}

void Solver::heap_sift_down(std::size_t i) {
    while (true) {
        std::size_t best = i;
        const std::size_t left = 2 * i + 1, right = 2 * i + 2;
        if (left < heap_.size() && heap_less(heap_[left], heap_[best])) best = left;
        if (right < heap_.size() && heap_less(heap_[right], heap_[best])) best = right;
        if (best == i) break;
        std::swap(heap_[i], heap_[best]);
        heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
        heap_pos_[static_cast<std::size_t>(heap_[best])] = static_cast<int>(best);
        i = best;
    }
}

void Solver::heap_insert(int var) {
    if (heap_pos_[static_cast<std::size_t>(var)] != -1) return;
    heap_pos_[static_cast<std::size_t>(var)] = static_cast<int>(heap_.size());
    heap_.push_back(var);
    heap_sift_up(heap_.size() - 1);
}

int Solver::heap_pop() {
    const int top = heap_.front();
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_pos_[static_cast<std::size_t>(heap_.front())] = 0;
        heap_sift_down(0);
    }
    return top;
}

void Solver::bump(int var) {
    activity_[static_cast<std::size_t>(var)] += activity_inc_;
    if (activity_[static_cast<std::size_t>(var)] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        activity_inc_ *= 1e-100;
        // Rebuild the heap under the rescaled activities.
        std::vector<int> vars = heap_;
        heap_.clear();
        for (int v : vars) heap_pos_[static_cast<std::size_t>(v)] = -1;
        for (int v : vars) heap_insert(v);
        return;
    }
    const int pos = heap_pos_[static_cast<std::size_t>(var)];
    if (pos != -1) heap_sift_up(static_cast<std::size_t>(pos));
}

void Solver::decay() { activity_inc_ /= 0.95; }

int Solver::pick_branch_var() {
    while (!heap_.empty()) {
        const int var = heap_pop();
        if (assign_[static_cast<std::size_t>(var)] == 0) return var;
    }
    return 0;
}

bool Solver::solve() { return solve_limited(-1) == SolveStatus::Sat; }

SolveStatus Solver::solve_limited(long long max_conflicts, Deadline deadline) {
    if (unsat_) return SolveStatus::Unsat;
    if (propagate() != -1) return SolveStatus::Unsat;

    long long conflicts_until_restart = 100;
    long long restart_conflicts = 0;
    long long total_conflicts = 0;

    while (true) {
        const int conflict = propagate();
        if (conflict != -1) {
            ++restart_conflicts;
            ++total_conflicts;
            if (decision_level() == 0) return SolveStatus::Unsat;
            if (max_conflicts >= 0 && total_conflicts > max_conflicts) return SolveStatus::ConflictLimit;
            if (deadline && (total_conflicts & 511) == 0 && std::chrono::steady_clock::now() >= *deadline) {
                return SolveStatus::Timeout;
            }
            Clause learned;
            int backtrack_level = 0;
            analyze(conflict, learned, backtrack_level);
            backtrack(backtrack_level);
            if (learned.size() == 1) {
                enqueue(learned[0], -1);
            } else {
                clauses_.push_back({learned, true});
                attach(static_cast<int>(clauses_.size()) - 1);
                enqueue(learned[0], static_cast<int>(clauses_.size()) - 1);
            }
            decay();
            if (restart_conflicts >= conflicts_until_restart) {
                conflicts_until_restart = conflicts_until_restart * 3 / 2;
                restart_conflicts = 0;
                backtrack(0);
            }
        } else {
            const int var = pick_branch_var();
            if (var == 0) return SolveStatus::Sat;  // full assignment
            trail_limits_.push_back(trail_.size());
            enqueue(phase_[static_cast<std::size_t>(var)] == 1 ? var : -var, -1);
        }
    }
}

std::vector<bool> solve(const Cnf& cnf) {
    Solver solver(cnf);
    if (!solver.solve()) return {};
    std::vector<bool> model(static_cast<std::size_t>(cnf.num_vars) + 1, false);
    for (int v = 1; v <= cnf.num_vars; ++v) model[static_cast<std::size_t>(v)] = solver.value(v);
    return model;
}

void at_most_one(Cnf& cnf, const std::vector<int>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i + 1; j < vars.size(); ++j) {
            cnf.add_clause({-vars[i], -vars[j]});
        }
    }
}

void exactly_one(Cnf& cnf, const std::vector<int>& vars) {
    if (vars.empty()) throw std::logic_error("exactly_one over an empty set");
    Clause at_least;
    at_least.reserve(vars.size());
    for (int v : vars) at_least.push_back(v);
    cnf.add_clause(std::move(at_least));
    at_most_one(cnf, vars);
}

}  // namespace fsmkit::sat
