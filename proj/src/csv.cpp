#include "fsmkit/csv.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fsmkit {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string without_spaces(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c != ' ' && c != '\t') r.push_back(c);
    }
    return r;
}

std::string lowered(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_header(const std::string& line) {
    return lowered(without_spaces(line)) == "state,input,output,next_state";
}

std::optional<std::vector<std::string>> split_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(strip(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(strip(cur));
    if (fields.size() != 4) return std::nullopt;
    for (const auto& f : fields) {
        if (f.empty()) return std::nullopt;
    }
    return fields;
}

void note_symbol(std::vector<std::string>& universe, std::set<std::string>& seen, const std::string& symbol) {
    if (seen.insert(symbol).second) universe.push_back(symbol);
}

}  // namespace

ParsedCsv parse_csv(const std::string& text, const CsvOptions& options) {
    std::vector<std::pair<int, std::string>> lines;  // (line number, content)
    {
        std::istringstream in(text);
        std::string raw;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            std::string line = strip(raw);
            if (line.empty()) continue;
            if (line.rfind("```", 0) == 0) continue;  // markdown fence
            lines.emplace_back(number, line);
        }
    }
    if (lines.empty()) throw ParseError("no CSV content found");

    std::size_t pos = 0;
    if (!is_header(lines[0].second)) {
        if (!options.lenient) {
            throw ParseError("expected header \"State,Input,Output,Next_State\"", lines[0].first);
        }
        while (pos < lines.size() && !is_header(lines[pos].second)) ++pos;
        if (pos == lines.size()) throw ParseError("no CSV header found in text");
    }
    ++pos;  // past header

    std::vector<std::string> warnings;
    std::vector<Transition> transitions;
    std::set<Transition> seen_rows;
    std::vector<std::string> states, inputs, outputs;
    std::set<std::string> state_set, input_set, output_set;
    std::string initial;

    for (; pos < lines.size(); ++pos) {
        auto fields = split_row(lines[pos].second);
        if (!fields) {
            if (options.lenient) continue;
            throw ParseError("malformed CSV row \"" + lines[pos].second + "\"", lines[pos].first);
        }
        Transition t{(*fields)[0], (*fields)[1], (*fields)[2], (*fields)[3]};
        if (!seen_rows.insert(t).second) {
            warnings.push_back("duplicate row dropped: " + to_string(t));
            continue;
        }
        if (initial.empty()) initial = t.src;
        note_symbol(states, state_set, t.src);
        note_symbol(states, state_set, t.tgt);
        note_symbol(inputs, input_set, t.input);
        note_symbol(outputs, output_set, t.output);
        transitions.push_back(std::move(t));
    }
    if (transitions.empty()) throw ParseError("no transition rows found");

    if (options.expected_inputs) {
        std::set<std::string> allowed(options.expected_inputs->begin(), options.expected_inputs->end());
        for (const auto& x : inputs) {
            if (allowed.find(x) == allowed.end()) throw ParseError("input symbol \"" + x + "\" not in expected alphabet");
        }
        inputs = *options.expected_inputs;
    }
    if (options.expected_outputs) {
        std::set<std::string> allowed(options.expected_outputs->begin(), options.expected_outputs->end());
        for (const auto& y : outputs) {
            if (allowed.find(y) == allowed.end()) throw ParseError("output symbol \"" + y + "\" not in expected alphabet");
        }
        outputs = *options.expected_outputs;
    }

    return ParsedCsv{Fsm(std::move(states), std::move(initial), std::move(inputs), std::move(outputs),
                         std::move(transitions)),
                     std::move(warnings)};
}

std::string serialize_csv(const Fsm& m) {
    std::string out = "State,Input,Output,Next_State\n";
    auto emit = [&out](const Transition& t) {
        out += t.src;
        out += ',';
        out += t.input;
        out += ',';
        out += t.output;
        out += ',';
        out += t.tgt;
        out += '\n';
    };
    // Initial-state rows first: the parser takes the first row's source as
    // the initial state.
    for (const auto& t : m.transitions()) {
        if (t.src == m.initial()) emit(t);
    }
    for (const auto& t : m.transitions()) {
        if (t.src != m.initial()) emit(t);
    }
    return out;
}

}  // namespace fsmkit
