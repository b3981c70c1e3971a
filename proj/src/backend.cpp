#include "fsmkit/backend.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fsmkit/csv.hpp"
#include "fsmkit/expert.hpp"
#include "fsmkit/nl.hpp"
#include "fsmkit/prompts.hpp"
#include "fsmkit/rng.hpp"

namespace fsmkit {

using nlohmann::json;

namespace {

constexpr const char* kDescriptionSlot = "{description}";

}  // namespace

const PromptTemplate& PromptTemplate::standard() {
    static const PromptTemplate tpl{prompts::kGenerationSystemRole, prompts::kGenerationUserPattern};
    return tpl;
}

PromptTemplate PromptTemplate::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open prompt template file: " + path);
    json doc = json::parse(in);
    PromptTemplate tpl;
    tpl.system_role = doc.at("system_role").get<std::string>();
    tpl.user_pattern = doc.at("user_pattern").get<std::string>();
    if (tpl.user_pattern.find(kDescriptionSlot) == std::string::npos) {
        throw Error("prompt template user_pattern lacks the {description} placeholder");
    }
    return tpl;
}

std::string PromptTemplate::render_user(const std::string& description) const {
    const std::size_t slot = user_pattern.find(kDescriptionSlot);
    if (slot == std::string::npos) throw Error("prompt template lacks the {description} placeholder");
    std::string out = user_pattern;
    out.replace(slot, std::string(kDescriptionSlot).size(), description);
    return out;
}

std::string PromptTemplate::extract_description(const std::string& user_role) const {
    const std::size_t slot = user_pattern.find(kDescriptionSlot);
    if (slot == std::string::npos) throw Error("prompt template lacks the {description} placeholder");
    const std::string prefix = user_pattern.substr(0, slot);
    const std::string suffix = user_pattern.substr(slot + std::string(kDescriptionSlot).size());
    if (user_role.rfind(prefix, 0) != 0) {
        throw Error("prompt does not start with the template prefix");
    }
    const std::size_t suffix_at = suffix.empty() ? user_role.size() : user_role.find(suffix, prefix.size());
    if (suffix_at == std::string::npos) {
        throw Error("prompt does not contain the template suffix");
    }
    return user_role.substr(prefix.size(), suffix_at - prefix.size());
}

PromptMessage build_generation_prompt(const std::string& description, const PromptTemplate& tpl) {
    if (description.empty()) throw DomainError("cannot build a prompt from an empty description");
    PromptMessage prompt;
    prompt.system_role = tpl.system_role;
    prompt.user_role = tpl.render_user(description);
    prompt.temperature = 0.0;
    return prompt;
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

SimulatorProfile SimulatorProfile::observed_defaults() {
    SimulatorProfile profile;
    profile.per_size[5] = FaultRates{{0.0, 0.03, 0.0, 0.0}, {0, 1, 0, 0}};
    profile.per_size[10] = FaultRates{{0.07, 0.43, 0.27, 0.33}, {1, 3, 3, 4}};
    return profile;
}

SimulatorProfile SimulatorProfile::zero() { return SimulatorProfile{}; }

SimulatorProfile SimulatorProfile::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open simulator profile file: " + path);
    json doc = json::parse(in);
    SimulatorProfile profile;
    profile.seed = doc.value("seed", 0ULL);
    for (const auto& [key, value] : doc.at("per_size").items()) {
        FaultRates rates;
        const auto& means = value.at("means");
        const auto& maxima = value.at("maxima");
        for (std::size_t i = 0; i < 4; ++i) {
            rates.means[i] = means.at(i).get<double>();
            rates.maxima[i] = maxima.at(i).get<int>();
        }
        profile.per_size[std::stoi(key)] = rates;
    }
    return profile;
}

FaultRates SimulatorProfile::rates_for(int num_states) const {
    if (per_size.empty()) return FaultRates{};
    auto exact = per_size.find(num_states);
    if (exact != per_size.end()) return exact->second;
    const FaultRates* best = nullptr;
    int best_gap = 0;
    for (const auto& [size, rates] : per_size) {
        const int gap = std::abs(size - num_states);
        if (best == nullptr || gap < best_gap) {
            best = &rates;
            best_gap = gap;
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

BackendResponse parse_backend_text(std::string raw_text) {
    BackendResponse response;
    response.raw_text = std::move(raw_text);
    try {
        CsvOptions options;
        options.lenient = true;
        ParsedCsv parsed = parse_csv(response.raw_text, options);
        response.machine = std::move(parsed.machine);
        response.diagnostics = std::move(parsed.warnings);
    } catch (const Error& e) {
        response.diagnostics.push_back(std::string("unparsable response: ") + e.what());
    }
    return response;
}

BackendResponse PerfectBackend::generate_fsm(const PromptMessage& prompt) {
    const std::string description = template_.extract_description(prompt.user_role);
    Fsm machine = parse_description(description);
    return parse_backend_text(serialize_csv(machine));
}

namespace {

// One fault recipe drawn from the rates; retried with fewer spots if the
// sampled combination cannot be injected (tiny alphabets, stranded states).
std::vector<FaultSpot> sample_recipe(const Fsm& truth, const FaultRates& rates, Rng& rng) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& s : truth.states()) {
        for (const auto& x : truth.inputs()) cells.emplace_back(s, x);
    }
    rng.shuffle(cells);

    std::vector<FaultSpot> recipe;
    std::size_t next_cell = 0;
    const FaultKind kinds[4] = {FaultKind::AdditionalTransition, FaultKind::MissingTransition, FaultKind::LocalOutput,
                                FaultKind::Transfer};
    for (std::size_t k = 0; k < 4; ++k) {
        int count = std::min(rng.poisson(rates.means[k]), rates.maxima[k]);
        if (kinds[k] == FaultKind::LocalOutput && truth.outputs().size() < 2) count = 0;
        if (kinds[k] == FaultKind::Transfer && truth.states().size() < 2) count = 0;
        if (kinds[k] == FaultKind::AdditionalTransition && truth.outputs().size() < 2 && truth.states().size() < 2) {
            count = 0;
        }
        for (int i = 0; i < count && next_cell < cells.size(); ++i, ++next_cell) {
            recipe.push_back({kinds[k], cells[next_cell].first, cells[next_cell].second});
        }
    }
    return recipe;
}

struct TraceDirective {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

struct Directives {
    std::vector<Transition> add;
    std::vector<Transition> remove;
    std::vector<TraceDirective> traces;
};

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    auto flush = [&] {
        std::size_t b = cur.find_first_not_of(" \t\r");
        if (b != std::string::npos) {
            std::size_t e = cur.find_last_not_of(" \t\r");
            lines.push_back(cur.substr(b, e - b + 1));
        }
        cur.clear();
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return lines;
}

// Scans the accumulated prompt for repair fragments, in order of appearance.
Directives scan_directives(const std::string& user_role) {
    struct Marker {
        std::size_t pos;
        int kind;  // 0 add, 1 remove, 2 keep, 3 trace-in, 4 trace-out, 5 format
    };
    const std::pair<const char*, int> headers[] = {
        {prompts::kSyntacticPresentHeader, 0}, {prompts::kSyntacticAbsentHeader, 1},
        {prompts::kSyntacticKeepHeader, 2},    {prompts::kTraceInputHeader, 3},
        {prompts::kTraceOutputHeader, 4},      {"Please keep this format:", 5},
    };
    std::vector<Marker> markers;
    for (const auto& [text, kind] : headers) {
        const std::string header(text);
        std::size_t from = 0;
        while (true) {
            const std::size_t pos = user_role.find(header, from);
            if (pos == std::string::npos) break;
            // The absent-header is a prefix of nothing else, but the present
            // header shares its prefix with it; record both, dedup below.
            markers.push_back({pos, kind});
            from = pos + 1;
        }
    }
    // The "present" header and the "absent" header share the prefix
    // "Correct the automaton so that th..."; they differ later so find()
    // cannot confuse them. Sort by position.
    std::sort(markers.begin(), markers.end(), [](const Marker& a, const Marker& b) { return a.pos < b.pos; });

    auto header_length = [&headers](int kind) {
        for (const auto& [text, k] : headers) {
            if (k == kind) return std::string(text).size();
        }
        return std::size_t{0};
    };

    Directives directives;
    std::optional<std::vector<std::string>> pending_trace_inputs;
    for (std::size_t i = 0; i < markers.size(); ++i) {
        const std::size_t body_begin = markers[i].pos + header_length(markers[i].kind);
        const std::size_t body_end = (i + 1 < markers.size()) ? markers[i + 1].pos : user_role.size();
        const std::string body = user_role.substr(body_begin, body_end - body_begin);
        switch (markers[i].kind) {
            case 0:
                for (const auto& line : nonempty_lines(body)) {
                    directives.add.push_back(parse_transition_sentence(line));
                }
                break;
            case 1:
                for (const auto& line : nonempty_lines(body)) {
                    directives.remove.push_back(parse_transition_sentence(line));
                }
                break;
            case 2:
                break;  // conserving queries need no action
            case 3: {
                const auto lines = nonempty_lines(body);
                if (lines.size() != 1) throw ParseError("trace directive expects one input-sequence line");
                pending_trace_inputs = split_symbols(lines.front());
                break;
            }
            case 4: {
                const auto lines = nonempty_lines(body);
                if (!pending_trace_inputs || lines.size() != 1) {
                    throw ParseError("trace directive expects one output-sequence line after the input line");
                }
                TraceDirective directive{*pending_trace_inputs, split_symbols(lines.front())};
                if (directive.inputs.size() != directive.outputs.size()) {
                    throw ParseError("trace directive input/output lengths differ");
                }
                directives.traces.push_back(std::move(directive));
                pending_trace_inputs.reset();
                break;
            }
            default:
                break;
        }
    }
    return directives;
}

// What an attentive engineer would do with the directives, in order: insert
// the requested transitions, drop the unwanted ones, then fix outputs along
// each directed trace (adding a self-loop guess where a cell is missing).
Fsm apply_directives(Fsm machine, const Directives& directives) {
    std::vector<Transition> transitions = machine.transitions();
    const auto initial = machine.initial();
    auto states = machine.states();
    auto inputs = machine.inputs();
    auto outputs = machine.outputs();

    // Directives may mention symbols the (faulty) machine lost; widen.
    auto note = [](std::vector<std::string>& universe, const std::string& v) {
        if (std::find(universe.begin(), universe.end(), v) == universe.end()) universe.push_back(v);
    };
    for (const auto& t : directives.add) {
        note(states, t.src);
        note(states, t.tgt);
        note(inputs, t.input);
        note(outputs, t.output);
    }
    for (const auto& trace : directives.traces) {
        for (const auto& x : trace.inputs) note(inputs, x);
        for (const auto& y : trace.outputs) note(outputs, y);
    }

    for (const auto& t : directives.add) {
        if (std::find(transitions.begin(), transitions.end(), t) == transitions.end()) transitions.push_back(t);
    }
    for (const auto& t : directives.remove) {
        transitions.erase(std::remove(transitions.begin(), transitions.end(), t), transitions.end());
    }

    for (const auto& trace : directives.traces) {
        std::string cur = initial;
        for (std::size_t i = 0; i < trace.inputs.size(); ++i) {
            auto step = std::find_if(transitions.begin(), transitions.end(), [&](const Transition& t) {
                return t.src == cur && t.input == trace.inputs[i];
            });
            if (step == transitions.end()) {
                transitions.push_back({cur, trace.inputs[i], trace.outputs[i], cur});
                continue;  // self-loop guess keeps cur
            }
            if (step->output != trace.outputs[i]) step->output = trace.outputs[i];
            cur = step->tgt;
        }
    }
    return Fsm(states, initial, inputs, outputs, std::move(transitions));
}

}  // namespace

BackendResponse SimulatorBackend::generate_fsm(const PromptMessage& prompt) {
    const std::string description = template_.extract_description(prompt.user_role);
    const Fsm truth = parse_description(description);

    Rng rng(profile_.seed ^ fnv1a64(description));
    const FaultRates rates = profile_.rates_for(static_cast<int>(truth.states().size()));

    Fsm faulty = truth;
    last_recipe_.clear();
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<FaultSpot> recipe = sample_recipe(truth, rates, rng);
        try {
            faulty = inject_faults(truth, recipe, rng);
            last_recipe_ = std::move(recipe);
            break;
        } catch (const DomainError&) {
            continue;  // resample; the stream advances so retries differ
        }
    }

    if (cooperative_) {
        faulty = apply_directives(std::move(faulty), scan_directives(prompt.user_role));
    }
    return parse_backend_text(serialize_csv(faulty));
}

// ---------------------------------------------------------------------------
// Live backend
// ---------------------------------------------------------------------------

LiveBackendConfig LiveBackendConfig::from_environment() {
    LiveBackendConfig config;
    if (const char* url = std::getenv("FSMKIT_BASE_URL")) config.base_url = url;
    if (const char* key = std::getenv("FSMKIT_API_KEY")) config.api_key = key;
    if (const char* model = std::getenv("FSMKIT_MODEL")) config.model = model;
    return config;
}

LiveBackend::LiveBackend(LiveBackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) {
        throw Error("live backend needs a base URL (FSMKIT_BASE_URL)");
    }
}

std::string LiveBackend::request_body(const PromptMessage& prompt, const std::string& model) {
    json body;
    body["model"] = prompt.model_name.empty() ? model : prompt.model_name;
    body["temperature"] = prompt.temperature;
    body["messages"] = json::array({
        json{{"role", "system"}, {"content", prompt.system_role}},
        json{{"role", "user"}, {"content", prompt.user_role}},
    });
    return body.dump();
}

BackendResponse LiveBackend::generate_fsm(const PromptMessage& prompt) {
    // Split base_url into host part and path prefix.
    std::string base = config_.base_url;
    std::string path_prefix;
    const std::size_t scheme = base.find("://");
    const std::size_t path_at = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (path_at != std::string::npos) {
        path_prefix = base.substr(path_at);
        base = base.substr(0, path_at);
    }
    if (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();

    httplib::Client client(base);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const std::string body = request_body(prompt, config_.model);
    std::string error_note;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(250 * (1 << (attempt - 1))));
        }
        auto result = client.Post(path_prefix + "/chat/completions", headers, body, "application/json");
        if (!result) {
            error_note = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status == 429 || result->status >= 500) {
            error_note = "retriable HTTP status " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw Error("chat completion failed with HTTP " + std::to_string(result->status) + ": " + result->body);
        }
        json doc = json::parse(result->body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
            throw Error("chat completion returned an unexpected body");
        }
        return parse_backend_text(doc["choices"][0]["message"]["content"].get<std::string>());
    }
    throw Error("chat completion failed after retries: " + error_note);
}

}  // namespace fsmkit
