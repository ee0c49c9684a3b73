#include "wordlelab/http_api.hpp"

#include <condition_variable>
#include <mutex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "json_io.hpp"
#include "wordlelab/export.hpp"

namespace wordlelab {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
    return json_response(status, {{"error", code}, {"message", message}});
}

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    while (!path.empty()) {
        if (path.front() == '/') {
            path.remove_prefix(1);
            continue;
        }
        auto slash = path.find('/');
        parts.push_back(path.substr(0, slash));
        path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
    }
    return parts;
}

std::optional<std::string> query_param(std::string_view query, std::string_view key) {
    while (!query.empty()) {
        auto amp = query.find('&');
        auto pair = query.substr(0, amp);
        query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
        auto eq = pair.find('=');
        if (pair.substr(0, eq) == key) {
            return eq == std::string_view::npos ? std::string{} : std::string(pair.substr(eq + 1));
        }
    }
    return std::nullopt;
}

json parse_body(std::string_view body) {
    if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::object();
    auto j = json::parse(body);
    if (!j.is_object()) throw json::type_error::create(302, "request body must be a JSON object", nullptr);
    return j;
}

HttpResponse export_table(ExperimentService& service, std::string_view query) {
    const auto table = query_param(query, "table").value_or("events");
    const auto format = query_param(query, "format").value_or("csv");
    if ((table != "events" && table != "participants") || (format != "csv" && format != "jsonl")) {
        return error_response(422, "invalid_request", "table must be events|participants and format csv|jsonl");
    }
    const auto sessions = service.snapshot();
    const auto files = export_sessions(sessions);
    const std::string* body = nullptr;
    if (table == "events") {
        body = format == "csv" ? &files.events_csv : &files.events_jsonl;
    } else {
        body = format == "csv" ? &files.participants_csv : &files.participants_jsonl;
    }
    return {200, *body, format == "csv" ? "text/csv; charset=utf-8" : "application/x-ndjson; charset=utf-8"};
}

HttpResponse session_route(ExperimentService& service, std::string_view method, const std::string& id,
                           std::string_view action, const json& body, TimePoint now) {
    if (action == "state") {
        if (method != "GET") return error_response(405, "method_not_allowed", "use GET");
        return json_response(200, service.session_state(id));
    }
    if (method != "POST") return error_response(405, "method_not_allowed", "use POST");

    if (action == "elicitation") {
        const auto r = service.submit_elicitation(id, body.at("index").get<int>(), body.at("text").get<std::string>(), now);
        return json_response(200, {{"accepted", r.accepted},
                                   {"characters", r.characters},
                                   {"required", r.required},
                                   {"round_started", json_io::round_start(r.round_started)}});
    }
    if (action == "guess") {
        std::optional<std::uint64_t> seq;
        if (body.contains("seq") && !body.at("seq").is_null()) seq = body.at("seq").get<std::uint64_t>();
        const auto r = service.submit_guess(id, body.at("guess").get<std::string>(), now, seq);
        json out = {{"valid", r.valid},
                    {"agent_reaction", json_io::reaction(r.agent_reaction)},
                    {"round_status", json_io::round_status(r.round_status)},
                    {"next_round", json_io::round_start(r.next_round)}};
        out["invalid_reason"] = r.invalid_reason ? json(to_string(*r.invalid_reason)) : json(nullptr);
        out["pattern"] = r.pattern ? json(r.pattern->to_string()) : json(nullptr);
        out["pattern_code"] = r.pattern ? json(r.pattern->code()) : json(nullptr);
        return json_response(200, out);
    }
    if (action == "idle") {
        return json_response(200, {{"agent_reaction", json_io::reaction(service.idle_ping(id, now))}});
    }
    if (action == "questionnaire") {
        const auto r = service.submit_questionnaire(id, body.at("arousal").get<double>(), body.at("valence").get<double>(),
                                                    body.at("crt_answers").get<std::vector<std::string>>(), now);
        return json_response(200, {{"crt_score", r.crt_score}});
    }
    if (action == "bonus") {
        return json_response(200, {{"round_status", json_io::round_status(service.start_bonus_round(id, now))}});
    }
    return error_response(404, "not_found", "unknown route");
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SessionNotFound: return 404;
        case ErrorCode::OutOfRange:
        case ErrorCode::InvalidRequest: return 422;
        case ErrorCode::RoundsAlreadyStarted:
        case ErrorCode::NoActiveRound:
        case ErrorCode::RoundAlreadyOver:
        case ErrorCode::RoundsIncomplete:
        case ErrorCode::QuestionnaireMissing:
        case ErrorCode::AlreadySubmitted:
        case ErrorCode::RoundInProgress: return 409;
    }
    return 500;
}

HttpResponse handle_request(ExperimentService& service, std::string_view method, std::string_view target,
                            std::string_view body, TimePoint now) {
    const auto qmark = target.find('?');
    const auto path = target.substr(0, qmark);
    const auto query = qmark == std::string_view::npos ? std::string_view{} : target.substr(qmark + 1);
    const auto parts = split_path(path);

    try {
        if (parts.size() == 1 && parts[0] == "export") {
            if (method != "GET") return error_response(405, "method_not_allowed", "use GET");
            return export_table(service, query);
        }
        if (parts.empty() || parts[0] != "sessions" || parts.size() > 3 || parts.size() == 2) {
            return error_response(404, "not_found", "unknown route");
        }
        const auto payload = parse_body(body);
        if (parts.size() == 1) {
            if (method != "POST") return error_response(405, "method_not_allowed", "use POST");
            const auto r = service.create_session(json_io::parse_intake(payload), now);
            return json_response(201, {{"session_id", r.session_id},
                                       {"assignment", {{"anger", r.assignment.anger}, {"empathy", r.assignment.empathy}}},
                                       {"elicitation_prompts", r.elicitation_prompts}});
        }
        return session_route(service, method, std::string(parts[1]), parts[2], payload, now);
    } catch (const ServiceError& e) {
        return error_response(http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::parse_error& e) {
        return error_response(400, "malformed_json", e.what());
    } catch (const json::exception& e) {
        return error_response(422, "invalid_request", e.what());
    }
}

struct HttpServer::Impl {
    ExperimentService& service;
    Options options;
    httplib::Server server;
    int port = -1;

    Impl(ExperimentService& s, Options o) : service(s), options(std::move(o)) {}

    void dispatch(const httplib::Request& req, httplib::Response& res) {
        std::string target = req.path;
        if (!req.params.empty()) {
            target += '?';
            bool first = true;
            for (const auto& [k, v] : req.params) {
                if (!first) target += '&';
                first = false;
                target += k + '=' + v;
            }
        }
        const auto out = handle_request(service, req.method, target, req.body, wall_clock_now());
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    }
};

HttpServer::HttpServer(ExperimentService& service, Options options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
    impl_->server.Get(R"(/sessions/.*)", handler);
    impl_->server.Post(R"(/sessions(/.*)?)", handler);
    impl_->server.Get("/export", handler);
    if (!impl_->options.static_dir.empty()) {
        if (!impl_->server.set_mount_point("/", impl_->options.static_dir.string())) {
            throw std::runtime_error("static directory not found: " + impl_->options.static_dir.string());
        }
    }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    if (impl_->options.port == 0) {
        impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
    } else if (impl_->server.bind_to_port(impl_->options.host, impl_->options.port)) {
        impl_->port = impl_->options.port;
    }
    if (impl_->port < 0) {
        throw std::runtime_error("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
    }
    return impl_->port;
}

void HttpServer::listen() {
    if (impl_->port < 0) throw std::logic_error("bind() before listen()");
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace wordlelab
