#include "wordlelab/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "event_log.hpp"
#include "json_io.hpp"

namespace wordlelab {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 5> kExperienceTokens = {"never", "once", "2-10", "11-100", "100+"};

std::string hex_token(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::string_view to_string(WordleExperience e) noexcept { return kExperienceTokens[static_cast<std::size_t>(e)]; }

std::optional<WordleExperience> parse_wordle_experience(std::string_view token) noexcept {
    for (std::size_t i = 0; i < kExperienceTokens.size(); ++i) {
        if (kExperienceTokens[i] == token) return static_cast<WordleExperience>(i);
    }
    return std::nullopt;
}

std::string_view to_string(SessionPhase p) noexcept {
    switch (p) {
        case SessionPhase::Elicitation: return "elicitation";
        case SessionPhase::Playing: return "playing";
        case SessionPhase::Questionnaire: return "questionnaire";
        case SessionPhase::Finished: return "finished";
        case SessionPhase::BonusPlaying: return "bonus_playing";
    }
    return "unknown";
}

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SessionNotFound: return "session_not_found";
        case ErrorCode::RoundsAlreadyStarted: return "rounds_already_started";
        case ErrorCode::NoActiveRound: return "no_active_round";
        case ErrorCode::RoundAlreadyOver: return "round_already_over";
        case ErrorCode::RoundsIncomplete: return "rounds_incomplete";
        case ErrorCode::OutOfRange: return "out_of_range";
        case ErrorCode::QuestionnaireMissing: return "questionnaire_missing";
        case ErrorCode::AlreadySubmitted: return "already_submitted";
        case ErrorCode::RoundInProgress: return "round_in_progress";
        case ErrorCode::InvalidRequest: return "invalid_request";
    }
    return "unknown";
}

std::string_view to_string(RoundOutcome o) noexcept {
    switch (o) {
        case RoundOutcome::InProgress: return "in_progress";
        case RoundOutcome::Won: return "won";
        case RoundOutcome::Lost: return "lost";
    }
    return "unknown";
}

int RoundRecord::valid_guesses() const noexcept {
    return static_cast<int>(std::count_if(guesses.begin(), guesses.end(), [](const GuessEvent& g) { return g.valid; }));
}

std::size_t count_characters(std::string_view utf8) {
    // Continuation bytes are 10xxxxxx; everything else starts a code point.
    return static_cast<std::size_t>(
        std::count_if(utf8.begin(), utf8.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

struct ExperimentService::Entry {
    mutable std::mutex mutex;
    SessionRecord record;
    std::unique_ptr<VirtualAgent> agent;
    RevealTracker reveal;
    CandidateSet solutions_left;
    CandidateSet words_left;
    TimePoint last_activity{};
    TimePoint last_event{};
    std::map<std::uint64_t, GuessResult> by_sequence;
};

ExperimentService::ExperimentService(std::shared_ptr<const EntropyEngine> engine, ExperimentConfig config)
    : ExperimentService(std::move(engine), std::move(config),
                        std::make_shared<const ReactionCatalog>(ReactionCatalog::builtin()), Options{}) {}

ExperimentService::ExperimentService(std::shared_ptr<const EntropyEngine> engine, ExperimentConfig config,
                                     std::shared_ptr<const ReactionCatalog> catalog, Options options)
    : engine_(std::move(engine)), config_(std::move(config)), catalog_(std::move(catalog)), rng_(config_.seed) {
    for (const auto& s : config_.fixed_solutions) {
        auto w = Word::parse(s);
        if (!w || !engine_->solutions().contains(*w)) {
            throw std::invalid_argument("fixed solution '" + s + "' is not in the solution pool");
        }
        fixed_solutions_.push_back(*w);
    }
    if (fixed_solutions_.empty()) throw std::invalid_argument("at least one fixed solution is required");

    if (!options.log_path.empty()) {
        std::size_t replayed = 0;
        if (std::filesystem::exists(options.log_path)) {
            replay(options.log_path);
            replayed = sessions_.size();
        }
        // Continue with a fresh stream so restarted services never reissue a session id.
        rng_.seed(derive_seed(config_.seed, replayed + 1));
        log_ = std::make_unique<EventLog>(options.log_path, options.fsync_each_record);
    }
}

ExperimentService::~ExperimentService() = default;

ExperimentService::Entry& ExperimentService::find(const std::string& session_id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw ServiceError(ErrorCode::SessionNotFound, "no session " + session_id);
    return *it->second;
}

void ExperimentService::write_log(const json& record) {
    if (log_) log_->append(record.dump());
}

void ExperimentService::replay(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error&) {
            // A torn final write was never acknowledged.
            if (in.peek() == EOF) break;
            throw;
        }
        apply(record, false);
    }
}

void ExperimentService::apply(const json& r, bool /*log*/) {
    const auto type = r.at("type").get<std::string>();
    const auto at = at_ms(r.at("at").get<std::int64_t>());
    const auto id = r.at("id").get<std::string>();
    if (type == "create") {
        Assignment a{r.at("anger").get<bool>(), r.at("empathy").get<bool>()};
        apply_create(id, a, r.at("agent_seed").get<std::uint64_t>(), json_io::parse_intake(r.at("intake")), at);
        return;
    }
    auto& e = find(id);
    std::lock_guard lock(e.mutex);
    if (type == "elicitation") {
        apply_elicitation(e, r.at("index").get<int>(), r.at("text").get<std::string>(), at);
    } else if (type == "guess") {
        std::optional<std::uint64_t> seq;
        if (r.contains("seq") && !r.at("seq").is_null()) seq = r.at("seq").get<std::uint64_t>();
        apply_guess(e, r.at("raw").get<std::string>(), at, seq);
    } else if (type == "idle") {
        apply_idle(e, at);
    } else if (type == "questionnaire") {
        apply_questionnaire(e, r.at("arousal").get<double>(), r.at("valence").get<double>(),
                            r.at("crt").get<std::vector<std::string>>(), at);
    } else if (type == "bonus") {
        apply_bonus(e, Word::from(r.at("solution").get<std::string>()), at);
    } else {
        throw std::runtime_error("unknown event log record type '" + type + "'");
    }
}

// ---------------------------------------------------------------------------
// Public operations: validate, log, apply.

CreateSessionResult ExperimentService::create_session(const Intake& intake, TimePoint at) {
    if (intake.age <= 0 || intake.age > 130) throw ServiceError(ErrorCode::InvalidRequest, "age out of range");
    if (intake.sex.empty()) throw ServiceError(ErrorCode::InvalidRequest, "sex is required");

    std::string id;
    Assignment assignment;
    std::uint64_t agent_seed = 0;
    {
        std::lock_guard lock(rng_mutex_);
        assignment.anger = coin(rng_);
        assignment.empathy = coin(rng_);
        agent_seed = rng_();
        std::shared_lock sessions(sessions_mutex_);
        do {
            id = hex_token(rng_());
        } while (sessions_.contains(id));
    }
    write_log({{"type", "create"},
               {"id", id},
               {"at", to_ms(at)},
               {"anger", assignment.anger},
               {"empathy", assignment.empathy},
               {"agent_seed", agent_seed},
               {"intake", json_io::intake(intake)}});
    return apply_create(id, assignment, agent_seed, intake, at);
}

ElicitationResult ExperimentService::submit_elicitation(const std::string& session_id, int response_index,
                                                        const std::string& text, TimePoint at) {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    if (e.record.phase != SessionPhase::Elicitation) {
        throw ServiceError(ErrorCode::RoundsAlreadyStarted, "elicitation is closed once rounds have started");
    }
    if (response_index < 0 || response_index > 1) {
        throw ServiceError(ErrorCode::InvalidRequest, "response_index must be 0 or 1");
    }
    const auto chars = count_characters(text);
    if (chars < config_.min_elicitation_chars) {
        return {false, chars, config_.min_elicitation_chars, std::nullopt};
    }
    at = std::max(at, e.last_event);
    write_log({{"type", "elicitation"}, {"id", session_id}, {"at", to_ms(at)}, {"index", response_index}, {"text", text}});
    return apply_elicitation(e, response_index, text, at);
}

GuessResult ExperimentService::submit_guess(const std::string& session_id, const std::string& raw_input, TimePoint at,
                                            std::optional<std::uint64_t> sequence) {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    if (sequence) {
        if (auto it = e.by_sequence.find(*sequence); it != e.by_sequence.end()) return it->second;
    }
    switch (e.record.phase) {
        case SessionPhase::Elicitation:
            throw ServiceError(ErrorCode::NoActiveRound, "rounds have not started");
        case SessionPhase::Questionnaire:
        case SessionPhase::Finished:
            throw ServiceError(ErrorCode::RoundAlreadyOver, "the last round is over");
        case SessionPhase::Playing:
        case SessionPhase::BonusPlaying:
            break;
    }
    at = std::max(at, e.last_event);
    json record = {{"type", "guess"}, {"id", session_id}, {"at", to_ms(at)}, {"raw", raw_input}};
    record["seq"] = sequence ? json(*sequence) : json(nullptr);
    write_log(record);
    return apply_guess(e, raw_input, at, sequence);
}

std::optional<AgentReaction> ExperimentService::idle_ping(const std::string& session_id, TimePoint at) {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    if (e.record.phase != SessionPhase::Playing && e.record.phase != SessionPhase::BonusPlaying) {
        throw ServiceError(ErrorCode::NoActiveRound, "no round in progress");
    }
    if (e.agent->personality() == Personality::Control) return std::nullopt;
    at = std::max(at, e.last_event);
    const double idle_s = std::chrono::duration<double>(at - e.last_activity).count();
    if (idle_s < config_.thresholds.idle_s) return std::nullopt;
    write_log({{"type", "idle"}, {"id", session_id}, {"at", to_ms(at)}});
    return apply_idle(e, at);
}

QuestionnaireResult ExperimentService::submit_questionnaire(const std::string& session_id, double arousal,
                                                            double valence,
                                                            const std::vector<std::string>& crt_answers, TimePoint at) {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    if (e.record.phase == SessionPhase::Elicitation || e.record.phase == SessionPhase::Playing) {
        throw ServiceError(ErrorCode::RoundsIncomplete, "the main rounds are not complete");
    }
    if (e.record.questionnaire) throw ServiceError(ErrorCode::AlreadySubmitted, "questionnaire already submitted");
    if (!(arousal >= 0.0 && arousal <= 100.0) || !(valence >= 0.0 && valence <= 100.0)) {
        throw ServiceError(ErrorCode::OutOfRange, "arousal and valence must lie in [0, 100]");
    }
    if (crt_answers.size() != config_.crt.size()) {
        throw ServiceError(ErrorCode::InvalidRequest,
                           "expected " + std::to_string(config_.crt.size()) + " CRT answers");
    }
    at = std::max(at, e.last_event);
    write_log({{"type", "questionnaire"},
               {"id", session_id},
               {"at", to_ms(at)},
               {"arousal", arousal},
               {"valence", valence},
               {"crt", crt_answers}});
    return apply_questionnaire(e, arousal, valence, crt_answers, at);
}

RoundStatus ExperimentService::start_bonus_round(const std::string& session_id, TimePoint at) {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    if (e.record.phase == SessionPhase::BonusPlaying) {
        throw ServiceError(ErrorCode::RoundInProgress, "finish the current bonus round first");
    }
    if (e.record.phase != SessionPhase::Finished) {
        throw ServiceError(ErrorCode::QuestionnaireMissing, "bonus rounds unlock after the questionnaire");
    }
    const auto& pool = engine_->solutions();
    Word solution = pool[0];
    {
        std::lock_guard lock_rng(rng_mutex_);
        do {
            solution = pool[uniform_index(rng_, pool.size())];
        } while (std::find(fixed_solutions_.begin(), fixed_solutions_.end(), solution) != fixed_solutions_.end());
    }
    at = std::max(at, e.last_event);
    write_log({{"type", "bonus"}, {"id", session_id}, {"at", to_ms(at)}, {"solution", solution.str()}});
    return apply_bonus(e, solution, at);
}

// ---------------------------------------------------------------------------
// State transitions

CreateSessionResult ExperimentService::apply_create(const std::string& id, Assignment assignment,
                                                    std::uint64_t agent_seed, const Intake& intake, TimePoint at) {
    auto entry = std::make_unique<Entry>();
    auto& rec = entry->record;
    rec.session_id = id;
    rec.created_at = at;
    rec.assignment = assignment;
    rec.intake = intake;
    rec.agent_seed = agent_seed;
    entry->agent = std::make_unique<VirtualAgent>(assignment.empathy ? Personality::Empathic : Personality::Control,
                                                  catalog_, config_.thresholds, agent_seed);
    entry->last_activity = at;
    entry->last_event = at;
    {
        std::unique_lock lock(sessions_mutex_);
        rec.ordinal = by_ordinal_.size();
        by_ordinal_.push_back(entry.get());
        sessions_.emplace(id, std::move(entry));
    }
    return {id, assignment, assignment.anger ? config_.anger_prompts : config_.control_prompts};
}

ElicitationResult ExperimentService::apply_elicitation(Entry& e, int index, const std::string& text, TimePoint at) {
    e.record.elicitation[static_cast<std::size_t>(index)] = text;
    e.last_event = at;
    ElicitationResult result{true, count_characters(text), config_.min_elicitation_chars, std::nullopt};
    if (e.record.elicitation[0] && e.record.elicitation[1]) {
        e.record.phase = SessionPhase::Playing;
        result.round_started = begin_round(e, fixed_solutions_.front(), false, at);
    }
    return result;
}

RoundStart ExperimentService::begin_round(Entry& e, const Word& solution, bool is_bonus, TimePoint at) {
    RoundRecord round;
    round.round_index = static_cast<int>(e.record.rounds.size()) + 1;
    round.solution = solution;
    round.is_bonus = is_bonus;
    round.started_at = at;
    e.reveal.reset();
    e.solutions_left = engine_->full(EntropyPool::Solutions);
    e.words_left = engine_->full(EntropyPool::Words);
    e.last_activity = at;
    e.last_event = at;
    e.agent->start_round(round.round_index);
    round.start_reaction = e.agent->react(AgentEvent::round_started());
    e.record.rounds.push_back(std::move(round));
    return {status_of(e.record.rounds.back()), e.record.rounds.back().start_reaction};
}

RoundStatus ExperimentService::status_of(const RoundRecord& round) {
    RoundStatus s;
    s.round_index = round.round_index;
    s.is_bonus = round.is_bonus;
    s.guesses_used = round.valid_guesses();
    s.attempts_left = kMaxGuesses - s.guesses_used;
    s.outcome = !round.finished ? RoundOutcome::InProgress : (round.won ? RoundOutcome::Won : RoundOutcome::Lost);
    return s;
}

GuessResult ExperimentService::apply_guess(Entry& e, const std::string& raw, TimePoint at,
                                           std::optional<std::uint64_t> sequence) {
    auto& round = e.record.rounds.back();
    const TimePoint previous = round.guesses.empty() ? round.started_at : round.guesses.back().submitted_at;
    const int pending = round.valid_guesses() + 1;

    GuessEvent ev;
    ev.raw_input = raw;
    ev.submitted_at = at;
    ev.response_time_s = std::chrono::duration<double>(at - previous).count();

    GuessResult result;
    auto validation = validate_guess(raw, engine_->guesses());
    if (auto* invalid = std::get_if<InvalidGuess>(&validation)) {
        ev.valid = false;
        ev.invalid_reason = invalid->reason;
        ev.guess_index = pending;
        ev.remaining_solutions_after = e.solutions_left.count();
        ev.remaining_words_after = e.words_left.count();
        ev.agent_reaction = e.agent->react(AgentEvent::invalid_guess(pending));
        result.invalid_reason = invalid->reason;
    } else {
        const auto& word = std::get<Word>(validation);
        const auto pattern = feedback(word, round.solution);
        e.solutions_left = engine_->filter(e.solutions_left, word, pattern);
        e.words_left = engine_->filter(e.words_left, word, pattern);
        const bool revealed = e.reveal.observe(word, pattern);

        ev.valid = true;
        ev.word = word;
        ev.pattern = pattern;
        ev.guess_index = pending;
        ev.remaining_solutions_after = e.solutions_left.count();
        ev.remaining_words_after = e.words_left.count();

        const bool won = pattern.all_correct();
        if (won || pending == kMaxGuesses) {
            round.finished = true;
            round.won = won;
            ev.agent_reaction = e.agent->react(AgentEvent::round_ended(won, pending));
        } else {
            ev.agent_reaction = e.agent->react(
                AgentEvent::guess_evaluated(pending + 1, ev.response_time_s, ev.remaining_solutions_after, revealed));
        }
        result.valid = true;
        result.pattern = pattern;
    }
    result.agent_reaction = ev.agent_reaction;
    round.guesses.push_back(std::move(ev));
    e.last_activity = at;
    e.last_event = at;
    result.round_status = status_of(round);

    if (round.finished) {
        if (round.is_bonus) {
            e.record.phase = SessionPhase::Finished;
        } else if (static_cast<std::size_t>(round.round_index) < fixed_solutions_.size()) {
            result.next_round =
                begin_round(e, fixed_solutions_[static_cast<std::size_t>(round.round_index)], false, at);
        } else {
            e.record.phase = SessionPhase::Questionnaire;
        }
    }
    if (sequence) e.by_sequence.emplace(*sequence, result);
    return result;
}

std::optional<AgentReaction> ExperimentService::apply_idle(Entry& e, TimePoint at) {
    const double idle_s = std::chrono::duration<double>(at - e.last_activity).count();
    e.last_event = at;
    auto reaction = e.agent->react(AgentEvent::idle_tick(idle_s));
    if (reaction) {
        e.last_activity = at;
        e.record.rounds.back().idle_reactions.push_back({at, *reaction});
    }
    return reaction;
}

QuestionnaireResult ExperimentService::apply_questionnaire(Entry& e, double arousal, double valence,
                                                           const std::vector<std::string>& answers, TimePoint at) {
    Questionnaire q{arousal, valence, answers, score_crt(config_.crt, answers)};
    e.record.questionnaire = q;
    e.record.phase = SessionPhase::Finished;
    e.last_event = at;
    return {q.crt_score};
}

RoundStatus ExperimentService::apply_bonus(Entry& e, const Word& solution, TimePoint at) {
    ++e.record.bonus_rounds_started;
    e.record.phase = SessionPhase::BonusPlaying;
    return begin_round(e, solution, true, at).status;
}

// ---------------------------------------------------------------------------
// Reads

SessionRecord ExperimentService::session(const std::string& session_id) const {
    auto& e = find(session_id);
    std::lock_guard lock(e.mutex);
    return e.record;
}

json ExperimentService::session_state(const std::string& session_id) const {
    auto rec = session(session_id);
    json rounds = json::array();
    for (const auto& r : rec.rounds) {
        json guesses = json::array();
        for (const auto& g : r.guesses) {
            json gj = {{"raw_input", g.raw_input}, {"valid", g.valid}, {"guess_index", g.guess_index},
                       {"agent_reaction", json_io::reaction(g.agent_reaction)}};
            gj["pattern_code"] = g.pattern ? json(g.pattern->code()) : json(nullptr);
            gj["word"] = g.word ? json(g.word->str()) : json(nullptr);
            guesses.push_back(std::move(gj));
        }
        json rj = {{"round_status", json_io::round_status(status_of(r))},
                   {"start_reaction", json_io::reaction(r.start_reaction)},
                   {"guesses", std::move(guesses)}};
        rj["solution"] = r.finished ? json(r.solution.str()) : json(nullptr);
        rounds.push_back(std::move(rj));
    }
    return {
        {"session_id", rec.session_id},
        {"phase", to_string(rec.phase)},
        {"assignment", {{"anger", rec.assignment.anger}, {"empathy", rec.assignment.empathy}}},
        {"personality", to_string(rec.assignment.empathy ? Personality::Empathic : Personality::Control)},
        {"elicitation_accepted", {rec.elicitation[0].has_value(), rec.elicitation[1].has_value()}},
        {"rounds", std::move(rounds)},
        {"questionnaire_submitted", rec.questionnaire.has_value()},
        {"bonus_rounds_started", rec.bonus_rounds_started},
    };
}

std::vector<SessionRecord> ExperimentService::snapshot() const {
    std::vector<Entry*> entries;
    {
        std::shared_lock lock(sessions_mutex_);
        entries = by_ordinal_;
    }
    std::vector<SessionRecord> out;
    out.reserve(entries.size());
    for (auto* e : entries) {
        std::lock_guard lock(e->mutex);
        out.push_back(e->record);
    }
    return out;
}

std::size_t ExperimentService::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

}  // namespace wordlelab
