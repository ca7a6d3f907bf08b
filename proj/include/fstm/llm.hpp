#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "fstm/generator.hpp"
#include "fstm/metrics.hpp"

namespace fstm {

struct RetryPolicy {
    int max_attempts = 3;
    int backoff_base_ms = 500; // doubled per attempt
};

struct ModelConfig {
    std::string endpoint = "http://127.0.0.1:8080/v1";
    std::string model = "mock:echo";
    double temperature = 0.1;
    int max_tokens = 1024;
    int request_timeout_s = 60;
    RetryPolicy retry;
    std::string api_key_env = "FSTM_API_KEY";
    int max_concurrent = 4;     // per-model cap
    double requests_per_second = 0.0; // 0 = unlimited

    std::string validate() const;
};

enum class PromptTask { Informalize, Autoformalize, Judge };

// Template text with {{VOCABULARY}}, {{EXAMPLES}}, {{PAYLOAD}} and (judge
// only) {{PAYLOAD2}} slots; the default text per task/kind/shots mirrors
// the packaged prompt set.
struct PromptTemplate {
    PromptTask task = PromptTask::Informalize;
    GrammarKind kind = GrammarKind::Pl;
    int shots = 0; // 0 or 2
    std::string text;

    static PromptTemplate builtin(PromptTask task, GrammarKind kind, int shots);
};

// Fills the slots from the sample's vocabulary snapshot.  payload is the
// formula text (informalize), the NL description (autoformalize) or the
// first formula (judge); payload2 is the judge's second formula.
// Throws std::length_error when the result exceeds max_chars (0 = no cap).
std::string render_prompt(const PromptTemplate& t, const Sample& sample,
                          const std::string& payload, const std::string& payload2 = "",
                          size_t max_chars = 0);

JudgeAnswer parse_judge_answer(const std::string& text);
std::string to_string(JudgeAnswer a);

struct TransportError : std::runtime_error {
    explicit TransportError(const std::string& what, int attempts_)
        : std::runtime_error(what), attempts(attempts_) {}
    int attempts = 0;
};

enum class MockKind { Echo, PerfectOracle, NegationDropper, Noncompliant, JudgeAlwaysYes };

std::optional<MockKind> mock_kind_from_model_name(const std::string& model);

// A model is a black box from prompt text to completion text.
using ModelFn = std::function<std::string(const std::string& prompt)>;

ModelFn make_mock_model(MockKind kind);

// Lossless word-only encoding of formal syntax used by the oracle mocks;
// exposed so tests can exercise both directions.
std::string oracle_describe(const Formula& f);
std::string oracle_describe(const RegexAst& r);

// Chat-completion client.  Model names beginning with "mock:" are served
// in-process; anything else goes to {endpoint}/chat/completions with
// retries and exponential backoff on rate limits, 5xx and transport
// failures.  Each call is stateless.
class LlmClient {
public:
    explicit LlmClient(ModelConfig config, std::string audit_log_path = "");
    ~LlmClient();

    std::string complete(const std::string& prompt); // throws TransportError

    long calls_made() const { return calls_.load(); }
    const ModelConfig& config() const { return config_; }

    // test hook: replaces the transport (but not mocks) with a stub
    void set_transport_for_testing(ModelFn fn);

    struct Limiter; // per-model concurrency cap and request-rate limiter

private:
    ModelConfig config_;
    std::string audit_path_;
    std::optional<ModelFn> mock_;
    std::optional<ModelFn> transport_override_;
    std::atomic<long> calls_{0};
    std::shared_ptr<Limiter> limiter_;

    std::string http_complete(const std::string& prompt, int& attempts_out);
    void audit(const std::string& prompt, const std::string& status, long latency_ms,
               size_t response_chars, int attempts);
};

} // namespace fstm
