#include "fsmkit/expert.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace fsmkit {

std::string join_symbols(const std::vector<std::string>& symbols) {
    std::string out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0) out += ' ';
        out += symbols[i];
    }
    return out;
}

std::vector<std::string> split_symbols(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> symbols;
    std::string tok;
    while (in >> tok) symbols.push_back(tok);
    return symbols;
}

std::vector<std::string> InteractiveExpert::output_query(const std::vector<std::string>& input_seq) {
    while (true) {
        out_ << "expected outputs for input sequence: " << join_symbols(input_seq) << "\n? " << std::flush;
        std::string line;
        if (!std::getline(in_, line)) {
            throw Error("interactive expert: input stream closed mid-session");
        }
        std::vector<std::string> answer = split_symbols(line);
        if (answer.size() == input_seq.size()) return answer;
        out_ << "need exactly " << input_seq.size() << " output symbols, got " << answer.size() << "; try again\n";
    }
}

}  // namespace fsmkit
