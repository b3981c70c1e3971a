#include "fsmkit/nl.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace fsmkit {

namespace {

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        text.replace(pos, key.size(), value);
        pos += value.size();
    }
    return text;
}

bool is_canonical_state(const std::string& id) {
    if (id.size() < 2 || (id[0] != 'S' && id[0] != 's')) return false;
    return std::all_of(id.begin() + 1, id.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string nl_label(const std::string& state) {
    if (is_canonical_state(state)) {
        std::string lower = state;
        lower[0] = 's';
        return lower;
    }
    return state;
}

std::string canonical_label(const std::string& label) {
    if (is_canonical_state(label)) {
        std::string upper = label;
        upper[0] = 'S';
        return upper;
    }
    return label;
}

}  // namespace

const PatternSet& PatternSet::standard() {
    static const PatternSet patterns{
        {"state {state}", "{state}"},
        {"{from} {output} and {move} {input}", "{output} and {move} {input} {from}"},
        {"it", "the system", "the application"},
        {"from {src}", "from state {src}", "in state {src}", "in  {src}", "when the system is in {src}",
         "when it is in {src}"},
        {"{system} moves to {tgt}", "{system} reaches {tgt}", "{tgt} is reached"},
        {"if the input is {input}", "if the input {input} occurs", "if  {input} occurs",
         "on occurence of input {input}", "on occurence of {input}"},
        {"{system} produces {output}", "{system} returns {output}", ", {output} is produced",
         "the output {output} is produced", ", {output} is returned"},
    };
    return patterns;
}

PatternSet PatternSet::truncated() const {
    auto head = [](const std::vector<std::string>& xs) { return std::vector<std::string>{xs.front()}; };
    return PatternSet{head(state_patterns),  head(transition_orderings), head(system_phrases), head(from_phrases),
                      head(move_phrases),    head(input_phrases),        head(output_phrases)};
}

std::string describe_transition(const Transition& t, Rng& rng, const PatternSet& patterns) {
    // Draws are sequenced explicitly (ordering, from, output, move, input) so
    // equal seeds give equal sentences on every platform.
    auto state_phrase = [&](const std::string& state) {
        return replace_all(rng.pick(patterns.state_patterns), "{state}", nl_label(state));
    };
    const std::string ordering = rng.pick(patterns.transition_orderings);

    std::string from = rng.pick(patterns.from_phrases);
    from = replace_all(from, "{src}", state_phrase(t.src));

    std::string output = rng.pick(patterns.output_phrases);
    if (output.find("{system}") != std::string::npos) {
        output = replace_all(output, "{system}", rng.pick(patterns.system_phrases));
    }
    output = replace_all(output, "{output}", t.output);

    std::string move = rng.pick(patterns.move_phrases);
    if (move.find("{system}") != std::string::npos) {
        move = replace_all(move, "{system}", rng.pick(patterns.system_phrases));
    }
    move = replace_all(move, "{tgt}", state_phrase(t.tgt));

    std::string input = rng.pick(patterns.input_phrases);
    input = replace_all(input, "{input}", t.input);

    std::string sentence = ordering;
    sentence = replace_all(sentence, "{from}", from);
    sentence = replace_all(sentence, "{output}", output);
    sentence = replace_all(sentence, "{move}", move);
    sentence = replace_all(sentence, "{input}", input);
    return sentence;
}

std::string describe_fsm(const Fsm& m, Rng& rng, const PatternSet& patterns, const DescribeOptions& options) {
    std::string text;
    for (const auto& t : m.transitions()) {
        text += " " + describe_transition(t, rng, patterns) + ".\n";
    }
    text += " state " + nl_label(m.initial()) + " is the initial state.\n";
    if (options.normalize_whitespace) {
        std::string squashed;
        bool in_space = true;  // also trims the leading space
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                in_space = true;
            } else {
                if (in_space && !squashed.empty()) squashed.push_back(' ');
                squashed.push_back(c);
                in_space = false;
            }
        }
        return squashed;
    }
    return text;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

using Tokens = std::vector<std::string>;

Tokens tokenize(const std::string& sentence) {
    Tokens tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    };
    for (char c : sentence) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == ',') {
            flush();
            tokens.emplace_back(1, ',');
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return tokens;
}

bool at(const Tokens& toks, std::size_t pos, const char* word) { return pos < toks.size() && toks[pos] == word; }

bool plausible_label(const std::string& tok) {
    static const std::set<std::string> reserved = {"and", "is",     "if", "on",        "occurs", "occurence",
                                                   "the", "reached", "to", "initial",   ",",      "state"};
    return reserved.find(tok) == reserved.end();
}

// Each matcher returns every (next position, captured value) parse.
using Matches = std::vector<std::pair<std::size_t, std::string>>;

// (?:state )* LABEL — both alternatives when the next token is "state".
Matches match_state_phrase(const Tokens& toks, std::size_t pos) {
    Matches out;
    std::size_t p = pos;
    while (p < toks.size()) {
        if (toks[p] == "state") {
            ++p;  // keep skipping "state" prefixes ("from state state s1")
            continue;
        }
        if (plausible_label(toks[p])) out.emplace_back(p + 1, canonical_label(toks[p]));
        break;
    }
    return out;
}

Matches match_from(const Tokens& toks, std::size_t pos) {
    if (at(toks, pos, "from") || at(toks, pos, "in")) return match_state_phrase(toks, pos + 1);
    if (at(toks, pos, "when")) {
        if ((at(toks, pos + 1, "the") && at(toks, pos + 2, "system") && at(toks, pos + 3, "is") &&
             at(toks, pos + 4, "in")) ||
            (at(toks, pos + 1, "it") && at(toks, pos + 2, "is") && at(toks, pos + 3, "in"))) {
            const std::size_t after = at(toks, pos + 1, "it") ? pos + 4 : pos + 5;
            return match_state_phrase(toks, after);
        }
    }
    return {};
}

// Positions after "it" / "the system" / "the application".
std::vector<std::size_t> match_system(const Tokens& toks, std::size_t pos) {
    std::vector<std::size_t> out;
    if (at(toks, pos, "it")) out.push_back(pos + 1);
    if (at(toks, pos, "the") && (at(toks, pos + 1, "system") || at(toks, pos + 1, "application"))) {
        out.push_back(pos + 2);
    }
    return out;
}

Matches match_output(const Tokens& toks, std::size_t pos) {
    Matches out;
    for (std::size_t p : match_system(toks, pos)) {
        if ((at(toks, p, "produces") || at(toks, p, "returns")) && p + 1 < toks.size()) {
            out.emplace_back(p + 2, toks[p + 1]);
        }
    }
    if (at(toks, pos, ",") && pos + 3 < toks.size() && toks[pos + 2] == "is" &&
        (toks[pos + 3] == "produced" || toks[pos + 3] == "returned")) {
        out.emplace_back(pos + 4, toks[pos + 1]);
    }
    if (at(toks, pos, "the") && at(toks, pos + 1, "output") && pos + 4 < toks.size() && toks[pos + 3] == "is" &&
        toks[pos + 4] == "produced") {
        out.emplace_back(pos + 5, toks[pos + 2]);
    }
    return out;
}

Matches match_move(const Tokens& toks, std::size_t pos) {
    Matches out;
    for (std::size_t p : match_system(toks, pos)) {
        std::size_t after = 0;
        if (at(toks, p, "moves") && at(toks, p + 1, "to")) {
            after = p + 2;
        } else if (at(toks, p, "reaches")) {
            after = p + 1;
        } else {
            continue;
        }
        for (auto& m : match_state_phrase(toks, after)) out.push_back(m);
    }
    for (auto& [p, label] : match_state_phrase(toks, pos)) {
        if (at(toks, p, "is") && at(toks, p + 1, "reached")) out.emplace_back(p + 2, label);
    }
    return out;
}

Matches match_input(const Tokens& toks, std::size_t pos) {
    Matches out;
    if (at(toks, pos, "if")) {
        if (at(toks, pos + 1, "the") && at(toks, pos + 2, "input")) {
            if (at(toks, pos + 3, "is") && pos + 4 < toks.size()) out.emplace_back(pos + 5, toks[pos + 4]);
            if (pos + 4 < toks.size() && toks[pos + 4] == "occurs") out.emplace_back(pos + 5, toks[pos + 3]);
        }
        if (pos + 2 < toks.size() && toks[pos + 2] == "occurs") out.emplace_back(pos + 3, toks[pos + 1]);
    }
    if (at(toks, pos, "on") && at(toks, pos + 1, "occurence") && at(toks, pos + 2, "of")) {
        if (at(toks, pos + 3, "input") && pos + 4 < toks.size()) out.emplace_back(pos + 5, toks[pos + 4]);
        if (pos + 3 < toks.size()) out.emplace_back(pos + 4, toks[pos + 3]);
    }
    return out;
}

std::optional<Transition> try_transition(const Tokens& toks) {
    // Ordering 1: FROM OUTPUT and MOVE INPUT
    for (const auto& [p1, src] : match_from(toks, 0)) {
        for (const auto& [p2, output] : match_output(toks, p1)) {
            if (!at(toks, p2, "and")) continue;
            for (const auto& [p3, tgt] : match_move(toks, p2 + 1)) {
                for (const auto& [p4, input] : match_input(toks, p3)) {
                    if (p4 == toks.size()) return Transition{src, input, output, tgt};
                }
            }
        }
    }
    // Ordering 2: OUTPUT and MOVE INPUT FROM
    for (const auto& [p1, output] : match_output(toks, 0)) {
        if (!at(toks, p1, "and")) continue;
        for (const auto& [p2, tgt] : match_move(toks, p1 + 1)) {
            for (const auto& [p3, input] : match_input(toks, p2)) {
                for (const auto& [p4, src] : match_from(toks, p3)) {
                    if (p4 == toks.size()) return Transition{src, input, output, tgt};
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> try_initial(const Tokens& toks) {
    for (const auto& [p, label] : match_state_phrase(toks, 0)) {
        if (at(toks, p, "is") && at(toks, p + 1, "the") && at(toks, p + 2, "initial") && at(toks, p + 3, "state") &&
            p + 4 == toks.size()) {
            return label;
        }
    }
    return std::nullopt;
}

}  // namespace

Transition parse_transition_sentence(const std::string& sentence) {
    auto t = try_transition(tokenize(sentence));
    if (!t) throw ParseError("sentence matches no transition pattern: \"" + sentence + "\"");
    return *t;
}

Fsm parse_description(const std::string& text) {
    std::vector<std::string> sentences;
    {
        std::string cur;
        for (char c : text) {
            if (c == '.') {
                sentences.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        sentences.push_back(cur);
    }

    std::vector<Transition> transitions;
    std::string initial;
    for (const auto& raw : sentences) {
        Tokens toks = tokenize(raw);
        if (toks.empty()) continue;
        if (auto init = try_initial(toks)) {
            if (!initial.empty()) throw ParseError("description names two initial states");
            initial = *init;
            continue;
        }
        if (auto t = try_transition(toks)) {
            transitions.push_back(std::move(*t));
            continue;
        }
        throw ParseError("sentence matches no pattern: \"" + raw + "\"");
    }
    if (initial.empty()) throw ParseError("description has no initial-state sentence");

    std::vector<std::string> states, inputs, outputs;
    std::set<std::string> state_set, input_set, output_set;
    auto note = [](std::vector<std::string>& order, std::set<std::string>& seen, const std::string& v) {
        if (seen.insert(v).second) order.push_back(v);
    };
    note(states, state_set, initial);
    for (const auto& t : transitions) {
        note(states, state_set, t.src);
        note(states, state_set, t.tgt);
        note(inputs, input_set, t.input);
        note(outputs, output_set, t.output);
    }
    return Fsm(std::move(states), std::move(initial), std::move(inputs), std::move(outputs), std::move(transitions));
}

}  // namespace fsmkit
