#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "cuaplan/defenses/checks.hpp"
#include "cuaplan/oracles/perception.hpp"
#include "cuaplan/oracles/planner.hpp"

namespace cuaplan::oracles {

struct EndpointConfig {
    std::string url = "http://127.0.0.1:8080";  // scheme://host:port
    std::string path = "/v1/generate";
    std::string model;  // passed through untouched
    double timeout_s = 60.0;
    int max_concurrent = 4;
    std::string api_key;  // sent as a bearer token when set

    // CUAPLAN_ENDPOINT, CUAPLAN_ENDPOINT_PATH, CUAPLAN_MODEL, CUAPLAN_TIMEOUT,
    // CUAPLAN_MAX_CONCURRENT, CUAPLAN_API_KEY.
    static EndpointConfig from_env();
};

class ExternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class TransportError : public ExternalError {
public:
    using ExternalError::ExternalError;
};
class TimeoutError : public ExternalError {
public:
    using ExternalError::ExternalError;
};
class BadStatusError : public ExternalError {
public:
    BadStatusError(int status, const std::string& body)
        : ExternalError("endpoint answered HTTP " + std::to_string(status)), status_(status), body_(body) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

struct TextResponse {
    std::string text;
    std::uint64_t input_tokens = 0;
    std::uint64_t output_tokens = 0;
    double latency_ms = 0.0;
};

// Out-of-process text generation over HTTP. Requests are POSTed as JSON
// {model, system, prompt}; a JSON reply with a "text" field is unwrapped
// (usage.input_tokens/output_tokens are read when present), any other body
// is returned verbatim.
class ExternalTextClient {
public:
    explicit ExternalTextClient(EndpointConfig cfg);
    TextResponse complete(const std::string& system_prompt, const std::string& prompt) const;
    const EndpointConfig& config() const { return cfg_; }

private:
    EndpointConfig cfg_;
    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    mutable int in_flight_ = 0;
};

using ClientPtr = std::shared_ptr<const ExternalTextClient>;

// Prompt text stored under assets/prompts/<id>.txt.
std::string load_prompt(const std::string& id);

// Perception over the external client. The model receives a text
// rendering of the screen; failures come back as PerceptionAnswer::error.
class ExternalPerception : public PerceptionOracle {
public:
    ExternalPerception(ClientPtr client, std::string viewer = "external");
    PerceptionAnswer answer(const PerceptionQuery& q) const override;
    std::string viewer_id() const override { return viewer_; }

private:
    ClientPtr client_;
    std::string viewer_;
};

// Replies of the form "ATTACKED: <reason>" or "BENIGN". A failed request
// is an UNAVAILABLE verdict.
class ExternalChecker : public defenses::CheckerOracle {
public:
    ExternalChecker(ClientPtr client, std::string prompt_id, std::string name);
    defenses::Verdict check(const defenses::CheckInput& in) const override;
    std::string name() const override { return name_; }

private:
    ClientPtr client_;
    std::string prompt_id_;
    std::string name_;
};

// Planner over the external client. A failed request yields empty plan
// text, which the executor reports as PLAN_ERROR.
class ExternalPlanner : public PlannerOracle {
public:
    explicit ExternalPlanner(ClientPtr client);
    PlannerReply plan(const PlannerRequest& r) const override;

private:
    ClientPtr client_;
};

// Pulls plan source out of a model reply (fenced code block or raw text).
std::string extract_plan_text(const std::string& reply);

}  // namespace cuaplan::oracles
