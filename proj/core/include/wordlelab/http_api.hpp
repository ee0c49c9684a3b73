#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "wordlelab/experiment.hpp"

namespace wordlelab {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/**
 * Socket-free dispatcher for the JSON API.
 *
 *   POST /sessions                          {age, sex, native_english, wordle_experience}
 *   POST /sessions/{id}/elicitation         {index, text}
 *   POST /sessions/{id}/guess               {guess, seq?}
 *   POST /sessions/{id}/idle                {}
 *   POST /sessions/{id}/questionnaire       {arousal, valence, crt_answers}
 *   POST /sessions/{id}/bonus               {}
 *   GET  /sessions/{id}/state
 *   GET  /export?table=events|participants&format=csv|jsonl
 *
 * Errors come back as {"error": code, "message": text} with 404 for unknown
 * sessions, 409 for out-of-order calls, 422 for out-of-range or invalid fields,
 * 400 for malformed JSON and 405/404 for unknown routes.
 */
HttpResponse handle_request(ExperimentService& service, std::string_view method, std::string_view target,
                            std::string_view body, TimePoint now);

int http_status(ErrorCode code) noexcept;

/// Blocking HTTP server around handle_request. Optionally serves static files (the web client) from `static_dir`.
class HttpServer {
public:
    struct Options {
        std::string host = "127.0.0.1";
        int port = 8080;  // 0 picks a free port
        std::filesystem::path static_dir;
    };

    HttpServer(ExperimentService& service, Options options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws std::runtime_error on failure.
    int bind();
    /// Serves until stop(). bind() must have succeeded.
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wordlelab
