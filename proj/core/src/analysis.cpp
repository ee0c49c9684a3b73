#include "wordlelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace wordlelab {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_jsonl(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    return ext == ".jsonl" || ext == ".json" || ext == ".ndjson";
}

// RFC 4180 records; quoted fields may contain commas, quotes and newlines.
std::vector<std::vector<std::optional<std::string>>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::optional<std::string>>> rows;
    std::vector<std::optional<std::string>> row;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    bool any = false;
    auto end_field = [&] {
        if (field.empty() && !was_quoted) {
            row.emplace_back(std::nullopt);
        } else {
            row.emplace_back(field);
        }
        field.clear();
        was_quoted = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_field();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (any) {
        end_field();
        rows.push_back(std::move(row));
    }
    return rows;
}

class CsvTable {
public:
    CsvTable(std::string_view text, const std::vector<std::string>& required) : rows_(parse_csv(text)) {
        if (rows_.empty()) throw SchemaMismatch("CSV input has no header");
        const auto& header = rows_.front();
        for (std::size_t i = 0; i < header.size(); ++i) columns_[header[i].value_or("")] = i;
        for (const auto& name : required) {
            if (!columns_.contains(name)) throw SchemaMismatch("missing column '" + name + "'");
        }
    }
    std::size_t size() const noexcept { return rows_.size() - 1; }
    std::optional<std::string> get(std::size_t row, const std::string& name) const {
        const auto& r = rows_[row + 1];
        const auto col = columns_.at(name);
        if (col >= r.size()) throw SchemaMismatch("row " + std::to_string(row + 2) + " is short");
        return r[col];
    }

private:
    std::vector<std::vector<std::optional<std::string>>> rows_;
    std::map<std::string, std::size_t> columns_;
};

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw SchemaMismatch("not a boolean: '" + v + "'");
}

double parse_double(const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw SchemaMismatch("not a number: '" + v + "'");
        return d;
    } catch (const std::logic_error&) {
        throw SchemaMismatch("not a number: '" + v + "'");
    }
}

int parse_int(const std::string& v) {
    double d = parse_double(v);
    if (d != std::floor(d)) throw SchemaMismatch("not an integer: '" + v + "'");
    return static_cast<int>(d);
}

std::string require(const std::optional<std::string>& v, const char* column) {
    if (!v) throw SchemaMismatch(std::string("missing value in column '") + column + "'");
    return *v;
}

// JSON cells: null stays missing; strings and numbers are accepted for every field.
template <typename T>
T json_field(const json& row, const char* key) {
    if (!row.contains(key)) throw SchemaMismatch(std::string("missing key '") + key + "'");
    const auto& v = row.at(key);
    if (v.is_null()) throw SchemaMismatch(std::string("null value for '") + key + "'");
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (v.is_number()) return v.get<double>() != 0.0;
        }
        return v.get<T>();
    } catch (const json::exception&) {
        throw SchemaMismatch(std::string("wrong type for '") + key + "'");
    }
}

template <typename T>
std::optional<T> json_optional(const json& row, const char* key) {
    if (!row.contains(key) || row.at(key).is_null()) return std::nullopt;
    return json_field<T>(row, key);
}

template <typename F>
void for_each_json_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaMismatch("line " + std::to_string(line_no) + ": " + e.what());
        }
        f(row);
    }
}

std::map<std::string, const ParticipantRow*> index_participants(std::span<const ParticipantRow> participants) {
    std::map<std::string, const ParticipantRow*> out;
    for (const auto& p : participants) out.emplace(p.session_id, &p);
    return out;
}

// Stable integer ids for cluster labels, assigned in first-seen order.
std::vector<std::int64_t> cluster_ids(std::span<const TreatmentRow> rows) {
    std::map<std::string, std::int64_t> ids;
    std::vector<std::int64_t> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        auto [it, inserted] = ids.emplace(r.cluster, static_cast<std::int64_t>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Loading

std::vector<EventRow> parse_events_jsonl(std::string_view text) {
    std::vector<EventRow> out;
    for_each_json_line(text, [&](const json& row) {
        EventRow e;
        e.session_id = json_field<std::string>(row, "session_id");
        e.round_index = json_field<int>(row, "round_index");
        e.is_bonus = json_field<bool>(row, "is_bonus");
        e.guess_index = json_field<int>(row, "guess_index");
        e.raw_input = json_field<std::string>(row, "raw_input");
        e.valid = json_field<bool>(row, "valid");
        e.pattern_code = json_optional<int>(row, "pattern_code");
        e.response_time_s = json_field<double>(row, "response_time_s");
        e.remaining_solutions_after = json_field<std::size_t>(row, "remaining_solutions_after");
        e.remaining_words_after = json_field<std::size_t>(row, "remaining_words_after");
        e.agent_expression = json_optional<std::string>(row, "agent_expression").value_or("");
        e.agent_message = json_optional<std::string>(row, "agent_message").value_or("");
        out.push_back(std::move(e));
    });
    return out;
}

std::vector<EventRow> parse_events_csv(std::string_view text) {
    CsvTable t(text, {"session_id", "round_index", "is_bonus", "guess_index", "raw_input", "valid", "pattern_code",
                      "response_time_s", "remaining_solutions_after", "remaining_words_after", "agent_expression",
                      "agent_message"});
    std::vector<EventRow> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        EventRow e;
        e.session_id = require(t.get(i, "session_id"), "session_id");
        e.round_index = parse_int(require(t.get(i, "round_index"), "round_index"));
        e.is_bonus = parse_bool(require(t.get(i, "is_bonus"), "is_bonus"));
        e.guess_index = parse_int(require(t.get(i, "guess_index"), "guess_index"));
        e.raw_input = t.get(i, "raw_input").value_or("");
        e.valid = parse_bool(require(t.get(i, "valid"), "valid"));
        if (auto v = t.get(i, "pattern_code")) e.pattern_code = parse_int(*v);
        e.response_time_s = parse_double(require(t.get(i, "response_time_s"), "response_time_s"));
        e.remaining_solutions_after =
            static_cast<std::size_t>(parse_int(require(t.get(i, "remaining_solutions_after"), "remaining_solutions_after")));
        e.remaining_words_after =
            static_cast<std::size_t>(parse_int(require(t.get(i, "remaining_words_after"), "remaining_words_after")));
        e.agent_expression = t.get(i, "agent_expression").value_or("");
        e.agent_message = t.get(i, "agent_message").value_or("");
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ParticipantRow> parse_participants_jsonl(std::string_view text) {
    std::vector<ParticipantRow> out;
    for_each_json_line(text, [&](const json& row) {
        ParticipantRow p;
        p.session_id = json_field<std::string>(row, "session_id");
        p.anger = json_field<bool>(row, "anger");
        p.empathy = json_field<bool>(row, "empathy");
        p.age = json_optional<int>(row, "age").value_or(0);
        p.sex = json_optional<std::string>(row, "sex").value_or("");
        p.native_english = json_optional<bool>(row, "native_english").value_or(true);
        p.wordle_experience = json_optional<std::string>(row, "wordle_experience").value_or("");
        p.arousal = json_optional<double>(row, "arousal");
        p.valence = json_optional<double>(row, "valence");
        p.crt_score = json_optional<int>(row, "crt_score");
        p.bonus_rounds_started = json_optional<int>(row, "bonus_rounds_started").value_or(0);
        out.push_back(std::move(p));
    });
    return out;
}

std::vector<ParticipantRow> parse_participants_csv(std::string_view text) {
    CsvTable t(text, {"session_id", "anger", "empathy", "age", "sex", "native_english", "wordle_experience", "arousal",
                      "valence", "crt_score", "bonus_rounds_started"});
    std::vector<ParticipantRow> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        ParticipantRow p;
        p.session_id = require(t.get(i, "session_id"), "session_id");
        p.anger = parse_bool(require(t.get(i, "anger"), "anger"));
        p.empathy = parse_bool(require(t.get(i, "empathy"), "empathy"));
        if (auto v = t.get(i, "age")) p.age = parse_int(*v);
        p.sex = t.get(i, "sex").value_or("");
        if (auto v = t.get(i, "native_english")) p.native_english = parse_bool(*v);
        p.wordle_experience = t.get(i, "wordle_experience").value_or("");
        if (auto v = t.get(i, "arousal")) p.arousal = parse_double(*v);
        if (auto v = t.get(i, "valence")) p.valence = parse_double(*v);
        if (auto v = t.get(i, "crt_score")) p.crt_score = parse_int(*v);
        if (auto v = t.get(i, "bonus_rounds_started")) p.bonus_rounds_started = parse_int(*v);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<EventRow> load_events(const std::filesystem::path& path) {
    auto text = read_file(path);
    return is_jsonl(path) ? parse_events_jsonl(text) : parse_events_csv(text);
}

std::vector<ParticipantRow> load_participants(const std::filesystem::path& path) {
    auto text = read_file(path);
    return is_jsonl(path) ? parse_participants_jsonl(text) : parse_participants_csv(text);
}

// ---------------------------------------------------------------------------
// Observations

std::string_view label(HFeature h) noexcept {
    switch (h) {
        case HFeature::Crt: return "CRT";
        case HFeature::NeverPlayed: return "Never Played Wordle";
        case HFeature::Female: return "Female";
    }
    return "H";
}

std::optional<HFeature> parse_hfeature(std::string_view token) noexcept {
    if (token == "crt") return HFeature::Crt;
    if (token == "never-played") return HFeature::NeverPlayed;
    if (token == "female") return HFeature::Female;
    return std::nullopt;
}

std::optional<double> feature_value(const ParticipantRow& p, HFeature h) {
    switch (h) {
        case HFeature::Crt:
            if (!p.crt_score) return std::nullopt;
            return static_cast<double>(*p.crt_score);
        case HFeature::NeverPlayed:
            if (p.wordle_experience.empty()) return std::nullopt;
            return p.wordle_experience == "never" ? 1.0 : 0.0;
        case HFeature::Female:
            if (p.sex.empty()) return std::nullopt;
            return p.sex == "female" ? 1.0 : 0.0;
    }
    return std::nullopt;
}

std::string_view label(RoundDv dv) noexcept {
    switch (dv) {
        case RoundDv::DidWin: return "Did Win";
        case RoundDv::Guesses: return "Guesses";
        case RoundDv::GuessesAdjusted: return "Guesses (Adjusted)";
    }
    return "";
}

double RoundObservation::value(RoundDv dv) const noexcept {
    switch (dv) {
        case RoundDv::DidWin: return did_win ? 1.0 : 0.0;
        case RoundDv::Guesses: return guesses;
        case RoundDv::GuessesAdjusted: return guesses_adjusted;
    }
    return 0.0;
}

std::vector<RoundObservation> build_round_observations(std::span<const EventRow> events,
                                                       std::span<const ParticipantRow> participants,
                                                       std::optional<HFeature> h) {
    const auto people = index_participants(participants);
    // (participant, round) -> valid guesses in file order. std::map keeps output order stable.
    std::map<std::pair<std::string, int>, std::vector<const EventRow*>> rounds;
    for (const auto& e : events) {
        if (e.is_bonus) continue;
        auto& bucket = rounds[{e.session_id, e.round_index}];
        if (e.valid) bucket.push_back(&e);
    }

    std::vector<RoundObservation> out;
    for (const auto& [key, guesses] : rounds) {
        auto person = people.find(key.first);
        if (person == people.end() || guesses.empty()) continue;

        bool contiguous = true;
        for (std::size_t i = 0; i < guesses.size(); ++i) {
            if (guesses[i]->guess_index != static_cast<int>(i) + 1 || !guesses[i]->pattern_code) contiguous = false;
        }
        if (!contiguous) continue;
        const bool won = *guesses.back()->pattern_code == FeedbackPattern::kAllCorrect;
        const int n = static_cast<int>(guesses.size());
        if (!won && n != kMaxGuesses) continue;
        if (n > kMaxGuesses) continue;

        RoundObservation o;
        o.participant = key.first;
        o.round = key.second;
        o.did_win = won;
        o.guesses = n;
        o.guesses_adjusted = won ? n : kMaxGuesses + 1;
        o.anger = person->second->anger;
        o.empathy = person->second->empathy;
        if (h) o.h = feature_value(*person->second, *h);
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<GuessObservation> build_guess_observations(std::span<const EventRow> events,
                                                       std::span<const ParticipantRow> participants) {
    const auto people = index_participants(participants);
    std::vector<GuessObservation> out;
    for (const auto& e : events) {
        if (e.is_bonus || !e.valid) continue;
        auto person = people.find(e.session_id);
        if (person == people.end()) continue;
        if (e.remaining_solutions_after == 0 || e.remaining_words_after == 0) continue;
        GuessObservation g;
        g.participant = e.session_id;
        g.round = e.round_index;
        g.guess = e.guess_index;
        g.bits_solutions = std::log2(static_cast<double>(e.remaining_solutions_after));
        g.bits_words = std::log2(static_cast<double>(e.remaining_words_after));
        g.anger = person->second->anger;
        g.empathy = person->second->empathy;
        out.push_back(std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model specs

RegressionResult run_spec(std::span<const TreatmentRow> all_rows, const SpecOptions& options, std::string dependent) {
    std::vector<TreatmentRow> rows;
    rows.reserve(all_rows.size());
    for (const auto& r : all_rows) {
        if (options.h && !r.h) continue;
        rows.push_back(r);
    }

    std::vector<std::string> names = {"Constant", "Anger", "Empathy", "Anger * Empathy"};
    if (options.h) {
        const std::string h(label(*options.h));
        names.insert(names.end(), {h, h + " * Anger", h + " * Empathy", h + " * Anger * Empathy"});
    }
    std::vector<int> fe_rounds;
    if (options.round_fixed_effects) {
        std::set<int> seen;
        for (const auto& r : rows) seen.insert(r.round);
        fe_rounds.assign(seen.begin(), seen.end());
        if (!fe_rounds.empty()) fe_rounds.erase(fe_rounds.begin());
        for (int t : fe_rounds) names.push_back("Round " + std::to_string(t));
    }

    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto k = static_cast<Eigen::Index>(names.size());
    Eigen::MatrixXd x(n, k);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        const double a = r.anger ? 1.0 : 0.0;
        const double e = r.empathy ? 1.0 : 0.0;
        Eigen::Index c = 0;
        x(i, c++) = 1.0;
        x(i, c++) = a;
        x(i, c++) = e;
        x(i, c++) = a * e;
        if (options.h) {
            const double h = *r.h;
            x(i, c++) = h;
            x(i, c++) = h * a;
            x(i, c++) = h * e;
            x(i, c++) = h * a * e;
        }
        for (int t : fe_rounds) x(i, c++) = r.round == t ? 1.0 : 0.0;
        y(i) = r.y;
    }

    std::vector<std::string> dropped;
    if (n > 0) {
        auto dep = dependent_columns(x);
        if (!dep.empty()) {
            std::vector<Eigen::Index> keep;
            std::vector<std::string> kept_names;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (std::find(dep.begin(), dep.end(), static_cast<std::size_t>(j)) == dep.end()) {
                    keep.push_back(j);
                    kept_names.push_back(names[static_cast<std::size_t>(j)]);
                } else {
                    dropped.push_back(names[static_cast<std::size_t>(j)]);
                }
            }
            Eigen::MatrixXd reduced(n, static_cast<Eigen::Index>(keep.size()));
            for (std::size_t j = 0; j < keep.size(); ++j) reduced.col(static_cast<Eigen::Index>(j)) = x.col(keep[j]);
            x = std::move(reduced);
            names = std::move(kept_names);
        }
    }

    auto clusters = cluster_ids(rows);
    auto result = fit_ols(x, y, clusters, std::move(names), options.correction);
    result.dependent = std::move(dependent);
    result.dropped = std::move(dropped);
    return result;
}

RegressionResult run_round_spec(std::span<const RoundObservation> obs, RoundDv dv, const SpecOptions& options) {
    std::vector<TreatmentRow> rows;
    rows.reserve(obs.size());
    for (const auto& o : obs) rows.push_back({o.participant, o.value(dv), o.anger, o.empathy, o.h, o.round});
    return run_spec(rows, options, std::string(label(dv)));
}

std::vector<RegressionResult> run_guess_level(std::span<const GuessObservation> obs, EntropyPool pool,
                                              const SpecOptions& options) {
    static constexpr std::array<const char*, 6> kOrdinals = {"1st", "2nd", "3rd", "4th", "5th", "6th"};
    SpecOptions base = options;
    base.h.reset();
    std::vector<RegressionResult> out;
    for (int g = 1; g <= kMaxGuesses; ++g) {
        std::vector<TreatmentRow> rows;
        for (const auto& o : obs) {
            if (o.guess != g) continue;
            rows.push_back({o.participant, pool == EntropyPool::Solutions ? o.bits_solutions : o.bits_words, o.anger,
                            o.empathy, std::nullopt, o.round});
        }
        out.push_back(run_spec(rows, base, std::string(kOrdinals[static_cast<std::size_t>(g - 1)]) + " Guess"));
    }
    return out;
}

std::vector<RegressionResult> participant_level_regressions(std::span<const ParticipantRow> participants,
                                                            SmallSampleCorrection correction) {
    SpecOptions options;
    options.correction = correction;
    std::vector<TreatmentRow> arousal, valence, bonus;
    for (const auto& p : participants) {
        if (p.arousal) arousal.push_back({p.session_id, *p.arousal, p.anger, p.empathy, std::nullopt, 0});
        if (p.valence) valence.push_back({p.session_id, *p.valence, p.anger, p.empathy, std::nullopt, 0});
        bonus.push_back({p.session_id, p.bonus_rounds_started > 0 ? 1.0 : 0.0, p.anger, p.empathy, std::nullopt, 0});
    }
    return {run_spec(arousal, options, "Arousal"), run_spec(valence, options, "Valence"),
            run_spec(bonus, options, "Started Bonus Rounds")};
}

// ---------------------------------------------------------------------------
// Auxiliary outcomes

FrequencyTable FrequencyTable::parse(std::string_view csv) {
    FrequencyTable t;
    for (const auto& row : parse_csv(csv)) {
        if (row.size() < 2 || !row[0] || !row[1]) continue;
        try {
            t.table_[*row[0]] = parse_double(*row[1]);
        } catch (const SchemaMismatch&) {
            if (t.table_.empty()) continue;  // header line
            throw;
        }
    }
    return t;
}

FrequencyTable FrequencyTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

FrequencyTable::Lookup FrequencyTable::lookup(std::string_view word) const {
    auto it = table_.find(std::string(word));
    if (it == table_.end()) return {0.0, true};
    return {it->second, false};
}

SentimentAnnotations SentimentAnnotations::parse(std::string_view csv) {
    SentimentAnnotations s;
    bool first = true;
    for (const auto& row : parse_csv(csv)) {
        const bool header = first;
        first = false;
        if (row.size() < 2 || !row[0] || !row[1]) continue;
        const auto& lbl = *row[1];
        if (lbl == "positive") {
            s.table_[*row[0]] = Sentiment::Positive;
        } else if (lbl == "neutral") {
            s.table_[*row[0]] = Sentiment::Neutral;
        } else if (lbl == "negative") {
            s.table_[*row[0]] = Sentiment::Negative;
        } else if (!header) {
            throw SchemaMismatch("unknown sentiment label '" + lbl + "'");
        }
    }
    return s;
}

SentimentAnnotations SentimentAnnotations::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::optional<Sentiment> SentimentAnnotations::lookup(std::string_view word) const {
    auto it = table_.find(std::string(word));
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

AuxiliaryOutcomes auxiliary_outcomes(std::span<const EventRow> events, std::span<const ParticipantRow> participants,
                                     const FrequencyTable* frequencies, const SentimentAnnotations* sentiment,
                                     SmallSampleCorrection correction) {
    const auto people = index_participants(participants);
    SpecOptions options;
    options.correction = correction;

    AuxiliaryOutcomes out;
    std::vector<TreatmentRow> freq, rt, positive, neutral, negative, valid;
    for (const auto& e : events) {
        if (e.is_bonus) continue;
        auto person = people.find(e.session_id);
        if (person == people.end()) continue;
        const bool a = person->second->anger;
        const bool em = person->second->empathy;
        auto row = [&](double y) { return TreatmentRow{e.session_id, y, a, em, std::nullopt, e.round_index}; };

        rt.push_back(row(seconds_to_minutes(e.response_time_s)));
        valid.push_back(row(e.valid ? 1.0 : 0.0));
        if (!e.valid) continue;

        std::string word = e.raw_input;
        word.erase(0, word.find_first_not_of(" \t\r\n"));
        word.erase(word.find_last_not_of(" \t\r\n") + 1);
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (frequencies) {
            auto f = frequencies->lookup(word);
            if (f.missing) ++out.frequency_missing;
            freq.push_back(row(f.value));
        }
        if (sentiment) {
            if (auto s = sentiment->lookup(word)) {
                positive.push_back(row(*s == Sentiment::Positive ? 1.0 : 0.0));
                neutral.push_back(row(*s == Sentiment::Neutral ? 1.0 : 0.0));
                negative.push_back(row(*s == Sentiment::Negative ? 1.0 : 0.0));
            }
        }
    }

    if (frequencies) {
        out.results.push_back(run_spec(freq, options, "Frequency"));
        if (out.frequency_missing > 0) {
            out.warnings.push_back(std::to_string(out.frequency_missing) +
                                   " valid guesses missing from the frequency table were scored 0");
        }
    } else {
        out.warnings.push_back("MissingLexicon: no word-frequency table supplied; Frequency column skipped");
    }
    out.results.push_back(run_spec(rt, options, "Response Time"));
    if (sentiment) {
        out.results.push_back(run_spec(positive, options, "Positive"));
        out.results.push_back(run_spec(neutral, options, "Neutral"));
        out.results.push_back(run_spec(negative, options, "Negative"));
    } else {
        out.warnings.push_back("MissingLexicon: no sentiment annotations supplied; sentiment columns skipped");
    }
    out.results.push_back(run_spec(valid, options, "Valid"));
    return out;
}

}  // namespace wordlelab
