#include "wordlelab/export.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace wordlelab {

using nlohmann::json;

namespace {

constexpr int kMainRounds = 4;

std::string anonymized_id(std::size_t position) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "P%05zu", position + 1);
    return buf;
}

// One table row: a value per column, null for missing. Serialized to both formats.
void append_row(const std::vector<std::string>& columns, const json& row, std::string& csv, std::string& jsonl) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const auto& v = row.at(columns[i]);
        if (i > 0) csv += ',';
        if (v.is_null()) {
        } else if (v.is_boolean()) {
            csv += v.get<bool>() ? "1" : "0";
        } else if (v.is_number_integer() || v.is_number_unsigned()) {
            csv += std::to_string(v.get<std::int64_t>());
        } else if (v.is_number_float()) {
            csv += format_number(v.get<double>());
        } else {
            csv += csv_escape(v.get<std::string>());
        }
    }
    csv += '\n';
    // Keys in column order: nlohmann::json sorts object keys, so build the line by hand.
    jsonl += '{';
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) jsonl += ',';
        jsonl += json(columns[i]).dump();
        jsonl += ':';
        jsonl += row.at(columns[i]).dump();
    }
    jsonl += "}\n";
}

std::string header(const std::vector<std::string>& columns) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) out += ',';
        out += columns[i];
    }
    return out + '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

const std::vector<std::string>& event_columns() {
    static const std::vector<std::string> cols = {
        "session_id",   "round_index",     "is_bonus",
        "guess_index",  "raw_input",       "valid",
        "pattern_code", "response_time_s", "remaining_solutions_after",
        "remaining_words_after", "agent_expression", "agent_message",
    };
    return cols;
}

const std::vector<std::string>& participant_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c = {"session_id",   "anger",          "empathy",      "age",
                                      "sex",          "native_english", "wordle_experience",
                                      "arousal",      "valence",        "crt_score",    "bonus_rounds_started",
                                      "started_bonus", "rounds_completed", "rounds_won"};
        for (int t = 1; t <= kMainRounds; ++t) {
            c.push_back("round" + std::to_string(t) + "_won");
            c.push_back("round" + std::to_string(t) + "_guesses");
        }
        return c;
    }();
    return cols;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ExportFiles export_sessions(std::span<const SessionRecord> sessions) {
    ExportFiles files;
    files.events_csv = header(event_columns());
    files.participants_csv = header(participant_columns());

    std::vector<const SessionRecord*> ordered;
    for (const auto& s : sessions) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const SessionRecord* a, const SessionRecord* b) { return a->ordinal < b->ordinal; });

    for (std::size_t pos = 0; pos < ordered.size(); ++pos) {
        const auto& s = *ordered[pos];
        const auto pid = anonymized_id(pos);

        for (const auto& round : s.rounds) {
            for (const auto& g : round.guesses) {
                json row = {
                    {"session_id", pid},
                    {"round_index", round.round_index},
                    {"is_bonus", round.is_bonus},
                    {"guess_index", g.guess_index},
                    {"raw_input", g.raw_input},
                    {"valid", g.valid},
                    {"response_time_s", g.response_time_s},
                    {"remaining_solutions_after", g.remaining_solutions_after},
                    {"remaining_words_after", g.remaining_words_after},
                };
                row["pattern_code"] = g.pattern ? json(g.pattern->code()) : json(nullptr);
                row["agent_expression"] =
                    g.agent_reaction ? json(std::string(to_string(g.agent_reaction->expression))) : json(nullptr);
                row["agent_message"] = g.agent_reaction ? json(g.agent_reaction->message) : json(nullptr);
                append_row(event_columns(), row, files.events_csv, files.events_jsonl);
            }
        }

        int completed = 0;
        int won = 0;
        json row = {
            {"session_id", pid},
            {"anger", s.assignment.anger},
            {"empathy", s.assignment.empathy},
            {"age", s.intake.age},
            {"sex", s.intake.sex},
            {"native_english", s.intake.native_english},
            {"wordle_experience", std::string(to_string(s.intake.wordle_experience))},
            {"bonus_rounds_started", s.bonus_rounds_started},
            {"started_bonus", s.bonus_rounds_started > 0},
        };
        row["arousal"] = s.questionnaire ? json(s.questionnaire->arousal) : json(nullptr);
        row["valence"] = s.questionnaire ? json(s.questionnaire->valence) : json(nullptr);
        row["crt_score"] = s.questionnaire ? json(s.questionnaire->crt_score) : json(nullptr);
        for (int t = 1; t <= kMainRounds; ++t) {
            const RoundRecord* round = nullptr;
            for (const auto& r : s.rounds) {
                if (!r.is_bonus && r.round_index == t) round = &r;
            }
            const auto key = "round" + std::to_string(t);
            if (round != nullptr && round->finished) {
                ++completed;
                won += round->won ? 1 : 0;
                row[key + "_won"] = round->won;
                row[key + "_guesses"] = round->valid_guesses();
            } else {
                row[key + "_won"] = nullptr;
                row[key + "_guesses"] = nullptr;
            }
        }
        row["rounds_completed"] = completed;
        row["rounds_won"] = won;
        append_row(participant_columns(), row, files.participants_csv, files.participants_jsonl);
    }
    return files;
}

void write_export(const ExportFiles& files, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir / "events.csv", files.events_csv);
    write_file(dir / "events.jsonl", files.events_jsonl);
    write_file(dir / "participants.csv", files.participants_csv);
    write_file(dir / "participants.jsonl", files.participants_jsonl);
}

}  // namespace wordlelab
