#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fsmkit/diff.hpp"
#include "fsmkit/fsm.hpp"

namespace fsmkit {

struct PromptMessage {
    std::string system_role;
    std::string user_role;
    double temperature = 0.0;
    std::string model_name = "gpt-4o";
};

/// The generation prompt pair: a fixed system role and a user pattern with a
/// {description} placeholder.
struct PromptTemplate {
    std::string system_role;
    std::string user_pattern;

    static const PromptTemplate& standard();
    static PromptTemplate from_json_file(const std::string& path);

    std::string render_user(const std::string& description) const;
    /// Recovers the description a rendered user prompt was built from (the
    /// text between the pattern's fixed prefix and suffix). Repair fragments
    /// appended after the suffix are ignored.
    std::string extract_description(const std::string& user_role) const;
};

PromptMessage build_generation_prompt(const std::string& description,
                                      const PromptTemplate& tpl = PromptTemplate::standard());

struct BackendResponse {
    std::string raw_text;
    std::optional<Fsm> machine;
    std::vector<std::string> diagnostics;
};

/// Turns a prompt into (hopefully) a CSV-encoded machine.
class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResponse generate_fsm(const PromptMessage& prompt) = 0;
    virtual const char* name() const = 0;
};

/// Expected fault counts per machine size, shaped like the observed
/// per-fault-type means and maxima.
struct FaultRates {
    std::array<double, 4> means{0, 0, 0, 0};  // FaultKind order
    std::array<int, 4> maxima{0, 0, 0, 0};
};

struct SimulatorProfile {
    std::map<int, FaultRates> per_size;  // keyed by state count
    std::uint64_t seed = 0;

    /// The observed GPT fault statistics for 5- and 10-state machines.
    static SimulatorProfile observed_defaults();
    static SimulatorProfile zero();
    static SimulatorProfile from_json_file(const std::string& path);

    /// Exact size match, else the nearest size, else zero rates.
    FaultRates rates_for(int num_states) const;
};

/// Reconstructs the machine from the prompt's description (the rule-based
/// "perfect LLM").
class PerfectBackend : public Backend {
public:
    explicit PerfectBackend(PromptTemplate tpl = PromptTemplate::standard()) : template_(std::move(tpl)) {}
    BackendResponse generate_fsm(const PromptMessage& prompt) override;
    const char* name() const override { return "perfect"; }

private:
    PromptTemplate template_;
};

/// Deterministic fault-injecting simulator: reconstructs the described
/// machine, injects faults drawn from the profile (keyed by seed and
/// description, so equal calls give byte-identical responses) and — in
/// cooperative mode — applies the repair directives found in the prompt the
/// way an attentive engineer would. Oblivious mode ignores directives.
class SimulatorBackend : public Backend {
public:
    SimulatorBackend(SimulatorProfile profile, bool cooperative = true,
                     PromptTemplate tpl = PromptTemplate::standard())
        : profile_(std::move(profile)), cooperative_(cooperative), template_(std::move(tpl)) {}

    BackendResponse generate_fsm(const PromptMessage& prompt) override;
    const char* name() const override { return cooperative_ ? "sim" : "sim-oblivious"; }

    /// Fault recipe injected by the most recent call.
    const std::vector<FaultSpot>& last_recipe() const { return last_recipe_; }

private:
    SimulatorProfile profile_;
    bool cooperative_;
    PromptTemplate template_;
    std::vector<FaultSpot> last_recipe_;
};

struct LiveBackendConfig {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string api_key;
    std::string model = "gpt-4o";
    int max_retries = 3;
    int timeout_seconds = 60;

    /// FSMKIT_BASE_URL, FSMKIT_API_KEY, FSMKIT_MODEL.
    static LiveBackendConfig from_environment();
};

/// One chat-completions POST per call; body carries the two-message structure
/// verbatim. Transport failures are retried with backoff; the first choice's
/// text is parsed leniently.
class LiveBackend : public Backend {
public:
    explicit LiveBackend(LiveBackendConfig config);
    BackendResponse generate_fsm(const PromptMessage& prompt) override;
    const char* name() const override { return "live"; }

    /// The exact JSON body for a prompt (also used by the request tests).
    static std::string request_body(const PromptMessage& prompt, const std::string& model);

private:
    LiveBackendConfig config_;
};

/// Lenient parse of backend text into a machine, collecting diagnostics.
BackendResponse parse_backend_text(std::string raw_text);

}  // namespace fsmkit
