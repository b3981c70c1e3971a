#include "fsmkit/dot.hpp"

#include <cctype>
#include <set>

namespace fsmkit {

namespace {

constexpr const char* kMarkerNode = "__initial";

bool needs_quotes(const std::string& id) {
    if (id.empty()) return true;
    if (std::isdigit(static_cast<unsigned char>(id[0]))) return false;
    for (char c : id) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return true;
    }
    return false;
}

std::string quoted(const std::string& id) {
    if (!needs_quotes(id)) return id;
    std::string r = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') r.push_back('\\');
        r.push_back(c);
    }
    r.push_back('"');
    return r;
}

struct Token {
    enum Kind { Id, Punct, Arrow, End } kind = End;
    std::string text;
    int line = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        Token tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        char c = text_[pos_];
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            pos_ += 2;
            tok.kind = Token::Arrow;
            tok.text = "->";
            return tok;
        }
        if (c == '{' || c == '}' || c == '[' || c == ']' || c == '=' || c == ';' || c == ',') {
            ++pos_;
            tok.kind = Token::Punct;
            tok.text = std::string(1, c);
            return tok;
        }
        if (c == '"') {
            ++pos_;
            std::string value;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                if (text_[pos_] == '\n') ++line_;
                value.push_back(text_[pos_++]);
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string in DOT text", tok.line);
            ++pos_;
            tok.kind = Token::Id;
            tok.text = std::move(value);
            return tok;
        }
        std::string value;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
                value.push_back(d);
                ++pos_;
            } else {
                break;
            }
        }
        if (value.empty()) throw ParseError(std::string("unexpected character '") + c + "' in DOT text", line_);
        tok.kind = Token::Id;
        tok.text = std::move(value);
        return tok;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { advance(); }

    Fsm parse() {
        expect_id("digraph");
        if (cur_.kind == Token::Id) advance();  // optional graph name
        expect_punct("{");

        while (!(cur_.kind == Token::Punct && cur_.text == "}")) {
            if (cur_.kind == Token::End) throw ParseError("unexpected end of DOT text", cur_.line);
            statement();
        }

        if (initial_.empty()) throw ParseError("DOT text has no initial-state marker edge");
        std::vector<std::string> states;
        for (const auto& s : state_order_) {
            if (markers_.find(s) == markers_.end()) states.push_back(s);
        }
        return Fsm(std::move(states), initial_, inputs_, outputs_, transitions_);
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void expect_id(const std::string& text) {
        if (cur_.kind != Token::Id || cur_.text != text) {
            throw ParseError("expected \"" + text + "\" in DOT text", cur_.line);
        }
        advance();
    }

    void expect_punct(const std::string& text) {
        if (cur_.kind != Token::Punct || cur_.text != text) {
            throw ParseError("expected \"" + text + "\" in DOT text", cur_.line);
        }
        advance();
    }

    std::string take_id() {
        if (cur_.kind != Token::Id) throw ParseError("expected an identifier in DOT text", cur_.line);
        std::string id = cur_.text;
        advance();
        return id;
    }

    // [key=value, ...] — returns the pairs.
    std::vector<std::pair<std::string, std::string>> attr_block() {
        std::vector<std::pair<std::string, std::string>> attrs;
        expect_punct("[");
        while (!(cur_.kind == Token::Punct && cur_.text == "]")) {
            std::string key = take_id();
            expect_punct("=");
            std::string value = take_id();
            attrs.emplace_back(std::move(key), std::move(value));
            if (cur_.kind == Token::Punct && cur_.text == ",") advance();
        }
        advance();  // ']'
        return attrs;
    }

    void note_state(const std::string& s) {
        if (seen_states_.insert(s).second) state_order_.push_back(s);
    }

    void note_input(const std::string& x) {
        if (seen_inputs_.insert(x).second) inputs_.push_back(x);
    }

    void note_output(const std::string& y) {
        if (seen_outputs_.insert(y).second) outputs_.push_back(y);
    }

    void statement() {
        const int line = cur_.line;
        std::string lhs = take_id();

        if (cur_.kind == Token::Punct && cur_.text == "=") {  // graph attribute
            advance();
            take_id();
            maybe_semicolon();
            return;
        }

        if (cur_.kind == Token::Arrow) {
            advance();
            std::string rhs = take_id();
            std::string label;
            bool has_label = false;
            if (cur_.kind == Token::Punct && cur_.text == "[") {
                for (const auto& [key, value] : attr_block()) {
                    if (key == "label") {
                        label = value;
                        has_label = true;
                    }
                }
            }
            if (has_label && !label.empty()) {
                auto slash = label.find('/');
                if (slash == std::string::npos || slash == 0 || slash + 1 == label.size() ||
                    label.find('/', slash + 1) != std::string::npos) {
                    throw ParseError("edge label \"" + label + "\" is not of the shape input/output", line);
                }
                note_state(lhs);
                note_state(rhs);
                std::string input = label.substr(0, slash);
                std::string output = label.substr(slash + 1);
                note_input(input);
                note_output(output);
                transitions_.push_back({lhs, std::move(input), std::move(output), rhs});
            } else {
                // Unlabeled edge: initial-state marker.
                markers_.insert(lhs);
                note_state(rhs);
                if (initial_.empty()) initial_ = rhs;
            }
            maybe_semicolon();
            return;
        }

        // Node statement.
        bool is_marker = false;
        if (cur_.kind == Token::Punct && cur_.text == "[") {
            for (const auto& [key, value] : attr_block()) {
                if (key == "shape" && value == "point") is_marker = true;
            }
        }
        if (is_marker || lhs == kMarkerNode) {
            markers_.insert(lhs);
        } else {
            note_state(lhs);
        }
        maybe_semicolon();
    }

    void maybe_semicolon() {
        if (cur_.kind == Token::Punct && cur_.text == ";") advance();
    }

    Lexer lexer_;
    Token cur_;
    std::string initial_;
    std::vector<std::string> state_order_, inputs_, outputs_;
    std::set<std::string> seen_states_, seen_inputs_, seen_outputs_, markers_;
    std::vector<Transition> transitions_;
};

}  // namespace

std::string serialize_dot(const Fsm& m) {
    std::string out = "digraph fsm {\n";
    out += "  rankdir=LR;\n";
    out += std::string("  ") + kMarkerNode + " [shape=point];\n";
    out += std::string("  ") + kMarkerNode + " -> " + quoted(m.initial()) + ";\n";
    for (const auto& s : m.states()) {
        out += "  " + quoted(s) + ";\n";
    }
    for (const auto& t : m.transitions()) {
        out += "  " + quoted(t.src) + " -> " + quoted(t.tgt) + " [label=\"" + t.input + "/" + t.output + "\"];\n";
    }
    out += "}\n";
    return out;
}

Fsm parse_dot(const std::string& text) { return Parser(text).parse(); }

}  // namespace fsmkit
