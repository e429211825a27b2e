#include "cuaplan/oracles/external.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <sstream>

#include "cuaplan/util/files.hpp"
#include "cuaplan/util/text.hpp"

namespace cuaplan::oracles {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

EndpointConfig EndpointConfig::from_env() {
    EndpointConfig c;
    c.url = env_or("CUAPLAN_ENDPOINT", c.url);
    c.path = env_or("CUAPLAN_ENDPOINT_PATH", c.path);
    c.model = env_or("CUAPLAN_MODEL", c.model);
    c.timeout_s = std::stod(env_or("CUAPLAN_TIMEOUT", std::to_string(c.timeout_s)));
    c.max_concurrent = std::stoi(env_or("CUAPLAN_MAX_CONCURRENT", std::to_string(c.max_concurrent)));
    c.api_key = env_or("CUAPLAN_API_KEY", "");
    return c;
}

ExternalTextClient::ExternalTextClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.max_concurrent < 1) cfg_.max_concurrent = 1;
}

TextResponse ExternalTextClient::complete(const std::string& system_prompt, const std::string& prompt) const {
    {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return in_flight_ < cfg_.max_concurrent; });
        ++in_flight_;
    }
    struct Release {
        const ExternalTextClient* c;
        ~Release() {
            std::lock_guard<std::mutex> lock(c->mu_);
            --c->in_flight_;
            c->cv_.notify_one();
        }
    } release{this};

    httplib::Client cli(cfg_.url);
    const auto timeout = std::chrono::duration<double>(cfg_.timeout_s);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    cli.set_connection_timeout(micros);
    cli.set_read_timeout(micros);
    cli.set_write_timeout(micros);
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    json body = {{"model", cfg_.model}, {"system", system_prompt}, {"prompt", prompt}};
    const auto t0 = std::chrono::steady_clock::now();
    auto res = cli.Post(cfg_.path, headers, body.dump(), "application/json");
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && ms >= cfg_.timeout_s * 1000.0 * 0.9)) {
            throw TimeoutError("request to " + cfg_.url + " timed out after " + text::format_number(ms) + " ms");
        }
        throw TransportError("request to " + cfg_.url + " failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300) throw BadStatusError(res->status, res->body);

    TextResponse out;
    out.latency_ms = ms;
    out.text = res->body;
    json j = json::parse(res->body, nullptr, false);
    if (j.is_object() && j.contains("text") && j.at("text").is_string()) {
        out.text = j.at("text").get<std::string>();
        if (j.contains("usage") && j.at("usage").is_object()) {
            out.input_tokens = j.at("usage").value("input_tokens", std::uint64_t{0});
            out.output_tokens = j.at("usage").value("output_tokens", std::uint64_t{0});
        }
    }
    return out;
}

std::string load_prompt(const std::string& id) {
    return read_text_file(repo_root() / "assets" / "prompts" / (id + ".txt"));
}

namespace {

std::string screen_text(const PerceptionQuery& q) {
    std::ostringstream os;
    if (q.visual) os << "Screen summary: " << benign_summary(*q.visual) << "\n";
    if (q.dom) os << "Accessibility tree:\n" << env::render_dom(*q.dom);
    return os.str();
}

json parse_reply_json(const std::string& reply) {
    auto first = reply.find('{');
    auto last = reply.rfind('}');
    if (first == std::string::npos || last == std::string::npos || last < first) return json();
    return json::parse(reply.substr(first, last - first + 1), nullptr, false);
}

}  // namespace

ExternalPerception::ExternalPerception(ClientPtr client, std::string viewer)
    : client_(std::move(client)), viewer_(std::move(viewer)) {}

PerceptionAnswer ExternalPerception::answer(const PerceptionQuery& q) const {
    PerceptionAnswer a;
    std::ostringstream prompt;
    prompt << "Query kind: " << to_string(q.kind) << "\n";
    prompt << (q.kind == QueryKind::Verify ? "Observation: " : "Instruction: ") << q.text << "\n";
    if (q.kind == QueryKind::Verify) prompt << "Hypothesis: " << q.hypothesis << "\n";
    if (q.element_types) {
        prompt << "Element types:";
        for (const auto& t : *q.element_types) prompt << " " << t;
        prompt << "\n";
    }
    if (q.kind != QueryKind::Verify) prompt << screen_text(q);
    try {
        TextResponse r = client_->complete(load_prompt("qvlm_" + to_string(q.kind)), prompt.str());
        a.input_tokens = r.input_tokens;
        a.output_tokens = r.output_tokens;
        json j = parse_reply_json(r.text);
        if (!j.is_object()) {
            if (q.kind == QueryKind::Summarize) {
                a.text = r.text;
                return a;
            }
            a.error = "unparseable reply";
            return a;
        }
        if (j.contains("start") && j.at("start").is_array() && j.at("start").size() == 2) {
            a.start = env::Coord{j.at("start").at(0).get<double>(), j.at("start").at(1).get<double>()};
        }
        a.status = j.value("status", "OK");
        a.thought = j.value("thought", "");
        a.text = j.value("text", "");
        a.done = j.value("done", false);
    } catch (const std::exception& e) {
        a.error = e.what();
    }
    return a;
}

ExternalChecker::ExternalChecker(ClientPtr client, std::string prompt_id, std::string name)
    : client_(std::move(client)), prompt_id_(std::move(prompt_id)), name_(std::move(name)) {}

defenses::Verdict ExternalChecker::check(const defenses::CheckInput& in) const {
    std::ostringstream prompt;
    prompt << "Tool: " << in.tool << "\nInstruction: " << in.instruction << "\n";
    if (!in.observation.empty()) prompt << "Observation: " << in.observation << "\n";
    if (in.start) prompt << "Proposed point: " << in.start->x << ", " << in.start->y << "\n";
    prompt << "Thought: " << in.thought << "\nStatus: " << in.status << "\n";
    if (in.visual) prompt << "Screen summary: " << benign_summary(*in.visual) << "\n";
    if (in.dom) prompt << "Accessibility tree:\n" << env::render_dom(*in.dom);
    try {
        TextResponse r = client_->complete(load_prompt(prompt_id_), prompt.str());
        defenses::Verdict v;
        std::string t = r.text;
        auto colon = t.find(':');
        std::string head = text::to_lower(t.substr(0, colon));
        if (head.find("attacked") != std::string::npos) {
            v = defenses::Verdict::attacked(colon == std::string::npos ? "flagged by " + name_ : t.substr(colon + 1));
        } else {
            v = defenses::Verdict::benign();
        }
        v.costs.push_back({"checker", 1, r.input_tokens, r.output_tokens});
        return v;
    } catch (const std::exception& e) {
        return defenses::Verdict::unavailable(name_ + " failed: " + e.what());
    }
}

ExternalPlanner::ExternalPlanner(ClientPtr client) : client_(std::move(client)) {}

std::string extract_plan_text(const std::string& reply) {
    auto open = reply.find("```");
    if (open == std::string::npos) return reply;
    auto start = reply.find('\n', open);
    if (start == std::string::npos) return reply;
    auto close = reply.find("```", start + 1);
    return reply.substr(start + 1, close == std::string::npos ? std::string::npos : close - start - 1);
}

PlannerReply ExternalPlanner::plan(const PlannerRequest& r) const {
    PlannerReply out;
    std::string prompt = "Task: " + r.task + "\n";
    std::string prompt_id = r.prompt_id;
    if (r.mode == PlannerMode::FidesTurn) {
        prompt_id = "fides_turn";
        prompt += "Turn: " + std::to_string(r.turn + 1) + "\nHistory so far:\n" + r.transcript;
    }
    try {
        TextResponse t = client_->complete(load_prompt(prompt_id), prompt);
        out.text = extract_plan_text(t.text);
        out.cost = {"planner", 1, t.input_tokens, t.output_tokens};
    } catch (const std::exception&) {
        out.text.clear();
    }
    return out;
}

}  // namespace cuaplan::oracles
