#pragma once

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace fsmkit::sat {

/// Literals are nonzero ints, DIMACS style: +v / -v.
using Lit = int;
using Clause = std::vector<Lit>;

struct Cnf {
    int num_vars = 0;
    std::vector<Clause> clauses;

    int new_var() { return ++num_vars; }
    void add_clause(Clause clause) { clauses.push_back(std::move(clause)); }

    /// Standard DIMACS text ("p cnf <vars> <clauses>" + one clause per line).
    std::string to_dimacs() const;
};

enum class SolveStatus { Sat, Unsat, ConflictLimit, Timeout };
using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// CDCL solver: two-watched-literal propagation, first-UIP learning,
/// activity-ordered decisions with phase saving and geometric restarts.
/// Deterministic: equal formulas yield equal models.
class Solver {
public:
    explicit Solver(const Cnf& cnf);

    bool solve();
    /// Gives up after the conflict budget (deterministic) or the wall-clock
    /// deadline, whichever is set and hit first.
    SolveStatus solve_limited(long long max_conflicts, Deadline deadline = std::nullopt);

    /// Valid after solve() returned true; model[v] for v in 1..num_vars.
    bool value(int var) const { return assign_[static_cast<std::size_t>(var)] == 1; }

private:
    struct WatchedClause {
        std::vector<Lit> lits;
        bool learned = false;
    };

    int num_vars_ = 0;
    std::vector<WatchedClause> clauses_;
    std::vector<std::vector<int>> watchers_;  // literal index -> clause ids
    std::vector<signed char> assign_;         // 0 unassigned, 1 true, -1 false
    std::vector<int> level_;
    std::vector<int> reason_;  // clause id or -1
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_limits_;
    std::size_t propagate_cursor_ = 0;
    std::vector<double> activity_;
    std::vector<signed char> phase_;
    double activity_inc_ = 1.0;
    bool unsat_ = false;
    std::vector<int> heap_;      // decision heap ordered by activity
    std::vector<int> heap_pos_;  // var -> heap index, -1 when absent

    static std::size_t lit_index(Lit l) {
        return static_cast<std::size_t>(2 * std::abs(l) + (l < 0 ? 1 : 0));
    }
    signed char lit_value(Lit l) const {
        signed char v = assign_[static_cast<std::size_t>(std::abs(l))];
        return l > 0 ? v : static_cast<signed char>(-v);
    }
    int decision_level() const { return static_cast<int>(trail_limits_.size()); }

    void attach(int clause_id);
    void enqueue(Lit l, int reason);
    int propagate();  // conflicting clause id or -1
    void analyze(int conflict, Clause& learned, int& backtrack_level);
    void backtrack(int level);
    void bump(int var);
    void decay();
    int pick_branch_var();

    bool heap_less(int a, int b) const {
        return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)] ||
               (activity_[static_cast<std::size_t>(a)] == activity_[static_cast<std::size_t>(b)] && a < b);
    }
    void heap_sift_up(std::size_t i);
    void heap_sift_down(std::size_t i);
    void heap_insert(int var);
    int heap_pop();
};

/// One-shot convenience; returns the model (index 1..num_vars) or empty.
std::vector<bool> solve(const Cnf& cnf);

// Clause helpers used by the encodings.
void at_most_one(Cnf& cnf, const std::vector<int>& vars);
void exactly_one(Cnf& cnf, const std::vector<int>& vars);

}  // namespace fsmkit::sat
