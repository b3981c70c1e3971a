#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsmkit/fsm.hpp"

namespace fsmkit {

/// Answers output queries: given an input sequence, what outputs should the
/// correct machine produce?
class Expert {
public:
    virtual ~Expert() = default;
    virtual std::vector<std::string> output_query(const std::vector<std::string>& input_seq) = 0;
    virtual const char* kind() const = 0;
};

/// A DFSM standing in for the human expert; answers by simulation.
class OracleExpert : public Expert {
public:
    explicit OracleExpert(Fsm oracle) : oracle_(std::move(oracle)) {}
    std::vector<std::string> output_query(const std::vector<std::string>& input_seq) override {
        return oracle_.run(input_seq).trace.outputs;
    }
    const char* kind() const override { return "oracle-expert"; }
    const Fsm& oracle() const { return oracle_; }

private:
    Fsm oracle_;
};

/// Prints the question, reads a whitespace-separated output sequence and
/// re-asks on length mismatch.
class InteractiveExpert : public Expert {
public:
    InteractiveExpert(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    std::vector<std::string> output_query(const std::vector<std::string>& input_seq) override;
    const char* kind() const override { return "interactive"; }

private:
    std::istream& in_;
    std::ostream& out_;
};

std::string join_symbols(const std::vector<std::string>& symbols);
std::vector<std::string> split_symbols(const std::string& line);

}  // namespace fsmkit
