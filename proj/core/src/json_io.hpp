#pragma once

// JSON shapes shared by the event log, the HTTP API and the exporters.

#include <nlohmann/json.hpp>

#include "wordlelab/experiment.hpp"

namespace wordlelab::json_io {

inline nlohmann::json reaction(const std::optional<AgentReaction>& r) {
    if (!r) return nullptr;
    nlohmann::json j = {
        {"expression", to_string(r->expression)},
        {"display_expression", to_string(display_expression(r->expression))},
        {"message", r->message},
    };
    j["context"] = r->context ? nlohmann::json(to_string(*r->context)) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json round_status(const RoundStatus& s) {
    return {{"round_index", s.round_index},
            {"is_bonus", s.is_bonus},
            {"outcome", to_string(s.outcome)},
            {"guesses_used", s.guesses_used},
            {"attempts_left", s.attempts_left}};
}

inline nlohmann::json round_start(const std::optional<RoundStart>& s) {
    if (!s) return nullptr;
    return {{"round_status", round_status(s->status)}, {"agent_reaction", reaction(s->agent_reaction)}};
}

inline nlohmann::json intake(const Intake& in) {
    return {{"age", in.age},
            {"sex", in.sex},
            {"native_english", in.native_english},
            {"wordle_experience", to_string(in.wordle_experience)}};
}

inline Intake parse_intake(const nlohmann::json& j) {
    Intake in;
    in.age = j.at("age").get<int>();
    in.sex = j.at("sex").get<std::string>();
    in.native_english = j.at("native_english").get<bool>();
    auto exp = parse_wordle_experience(j.at("wordle_experience").get<std::string>());
    if (!exp) throw ServiceError(ErrorCode::InvalidRequest, "unknown wordle_experience bucket");
    in.wordle_experience = *exp;
    return in;
}

}  // namespace wordlelab::json_io
