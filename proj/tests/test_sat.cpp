#include <doctest.h>

#include "fsmkit/rng.hpp"
#include "fsmkit/sat.hpp"

using namespace fsmkit;

namespace {

bool clause_satisfied(const sat::Clause& clause, const std::vector<bool>& assignment) {
    for (int lit : clause) {
        const bool value = assignment[static_cast<std::size_t>(std::abs(lit))];
        if ((lit > 0) == value) return true;
    }
    return false;
}

bool formula_satisfied(const sat::Cnf& cnf, const std::vector<bool>& assignment) {
    for (const auto& clause : cnf.clauses) {
        if (!clause_satisfied(clause, assignment)) return false;
    }
    return true;
}

bool brute_force_satisfiable(const sat::Cnf& cnf) {
    const std::size_t n = static_cast<std::size_t>(cnf.num_vars);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::vector<bool> assignment(n + 1, false);
        for (std::size_t v = 1; v <= n; ++v) assignment[v] = (mask >> (v - 1)) & 1;
        if (formula_satisfied(cnf, assignment)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("trivial formulas") {
    sat::Cnf cnf;
    const int a = cnf.new_var();
    const int b = cnf.new_var();
    cnf.add_clause({a, b});
    cnf.add_clause({-a});
    const auto model = sat::solve(cnf);
    REQUIRE(!model.empty());
    CHECK_FALSE(model[static_cast<std::size_t>(a)]);
    CHECK(model[static_cast<std::size_t>(b)]);

    cnf.add_clause({-b});
    CHECK(sat::solve(cnf).empty());
}

TEST_CASE("contradicting units are unsatisfiable") {
    sat::Cnf cnf;
    const int a = cnf.new_var();
    cnf.add_clause({a});
    cnf.add_clause({-a});
    CHECK(sat::solve(cnf).empty());
}

TEST_CASE("pigeonhole 4 into 3 is unsatisfiable") {
    sat::Cnf cnf;
    int var[4][3];
    for (auto& pigeon : var) {
        for (int& v : pigeon) v = cnf.new_var();
    }
    for (auto& pigeon : var) {
        cnf.add_clause({pigeon[0], pigeon[1], pigeon[2]});
    }
    for (int hole = 0; hole < 3; ++hole) {
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) cnf.add_clause({-var[p][hole], -var[q][hole]});
        }
    }
    CHECK(sat::solve(cnf).empty());
}

TEST_CASE("exactly_one admits precisely the one-hot assignments") {
    sat::Cnf cnf;
    std::vector<int> vars{cnf.new_var(), cnf.new_var(), cnf.new_var()};
    sat::exactly_one(cnf, vars);
    auto model = sat::solve(cnf);
    REQUIRE(!model.empty());
    int trues = 0;
    for (int v : vars) trues += model[static_cast<std::size_t>(v)] ? 1 : 0;
    CHECK(trues == 1);

    cnf.add_clause({vars[0]});
    cnf.add_clause({vars[1]});
    CHECK(sat::solve(cnf).empty());
}

TEST_CASE("random 3-SAT agrees with brute force") {
    Rng rng(2024);
    for (int instance = 0; instance < 80; ++instance) {
        sat::Cnf cnf;
        const int vars = 6 + static_cast<int>(rng.below(6));  // 6..11
        cnf.num_vars = vars;
        const int clauses = static_cast<int>(rng.below(static_cast<std::size_t>(4 * vars))) + 3;
        for (int c = 0; c < clauses; ++c) {
            sat::Clause clause;
            for (int k = 0; k < 3; ++k) {
                const int v = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(vars)));
                clause.push_back(rng.below(2) == 0 ? v : -v);
            }
            cnf.add_clause(clause);
        }
        const auto model = sat::solve(cnf);
        const bool expected = brute_force_satisfiable(cnf);
        CHECK(!model.empty() == expected);
        if (!model.empty()) CHECK(formula_satisfied(cnf, model));
    }
}

TEST_CASE("DIMACS emission") {
    sat::Cnf cnf;
    const int a = cnf.new_var();
    const int b = cnf.new_var();
    cnf.add_clause({a, -b});
    cnf.add_clause({b});
    CHECK(cnf.to_dimacs() == "p cnf 2 2\n1 -2 0\n2 0\n");
}

TEST_CASE("solving is deterministic") {
    sat::Cnf cnf;
    for (int i = 0; i < 12; ++i) cnf.new_var();
    Rng rng(7);
    for (int c = 0; c < 30; ++c) {
        sat::Clause clause;
        for (int k = 0; k < 3; ++k) {
            const int v = 1 + static_cast<int>(rng.below(12));
            clause.push_back(rng.below(2) == 0 ? v : -v);
        }
        cnf.add_clause(clause);
    }
    CHECK(sat::solve(cnf) == sat::solve(cnf));
}
