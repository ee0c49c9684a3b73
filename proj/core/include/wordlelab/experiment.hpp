#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wordlelab/agent.hpp"
#include "wordlelab/config.hpp"
#include "wordlelab/entropy.hpp"
#include "wordlelab/random.hpp"
#include "wordlelab/word.hpp"

namespace wordlelab {

using TimePoint = std::chrono::sys_time<std::chrono::milliseconds>;

inline TimePoint at_ms(std::int64_t ms) { return TimePoint{std::chrono::milliseconds{ms}}; }
inline std::int64_t to_ms(TimePoint t) { return t.time_since_epoch().count(); }
inline TimePoint wall_clock_now() {
    return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

enum class WordleExperience { Never, Once, TwoToTen, ElevenToHundred, OverHundred };

std::string_view to_string(WordleExperience e) noexcept;
std::optional<WordleExperience> parse_wordle_experience(std::string_view token) noexcept;

struct Intake {
    int age = 0;
    std::string sex;
    bool native_english = true;
    WordleExperience wordle_experience = WordleExperience::Never;
};

struct Assignment {
    bool anger = false;
    bool empathy = false;

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct GuessEvent {
    std::string raw_input;
    bool valid = false;
    std::optional<Word> word;
    std::optional<FeedbackPattern> pattern;
    std::optional<InvalidReason> invalid_reason;
    /// Valid guesses: 1-based attempt number. Invalid ones carry the pending attempt number.
    int guess_index = 0;
    TimePoint submitted_at{};
    double response_time_s = 0.0;
    std::optional<AgentReaction> agent_reaction;
    std::size_t remaining_solutions_after = 0;
    std::size_t remaining_words_after = 0;
};

struct IdleReaction {
    TimePoint at{};
    AgentReaction reaction;
};

struct RoundRecord {
    int round_index = 1;
    Word solution = Word::from("plant");
    bool is_bonus = false;
    TimePoint started_at{};
    std::vector<GuessEvent> guesses;
    bool finished = false;
    bool won = false;
    std::optional<AgentReaction> start_reaction;
    std::vector<IdleReaction> idle_reactions;

    int valid_guesses() const noexcept;
};

struct Questionnaire {
    double arousal = 0.0;
    double valence = 0.0;
    std::vector<std::string> crt_answers;
    int crt_score = 0;
};

enum class SessionPhase { Elicitation, Playing, Questionnaire, Finished, BonusPlaying };

std::string_view to_string(SessionPhase p) noexcept;

struct SessionRecord {
    std::string session_id;
    std::size_t ordinal = 0;  // creation order, used for anonymized export keys
    TimePoint created_at{};
    Assignment assignment;
    Intake intake;
    std::uint64_t agent_seed = 0;
    std::array<std::optional<std::string>, 2> elicitation;
    std::vector<RoundRecord> rounds;
    std::optional<Questionnaire> questionnaire;
    int bonus_rounds_started = 0;
    SessionPhase phase = SessionPhase::Elicitation;
};

enum class ErrorCode {
    SessionNotFound,
    RoundsAlreadyStarted,
    NoActiveRound,
    RoundAlreadyOver,
    RoundsIncomplete,
    OutOfRange,
    QuestionnaireMissing,
    AlreadySubmitted,
    RoundInProgress,
    InvalidRequest,
};

std::string_view to_string(ErrorCode code) noexcept;

class ServiceError : public std::runtime_error {
public:
    ServiceError(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct CreateSessionResult {
    std::string session_id;
    Assignment assignment;
    std::array<std::string, 2> elicitation_prompts;
};

enum class RoundOutcome { InProgress, Won, Lost };

std::string_view to_string(RoundOutcome o) noexcept;

struct RoundStatus {
    int round_index = 0;
    bool is_bonus = false;
    RoundOutcome outcome = RoundOutcome::InProgress;
    int guesses_used = 0;
    int attempts_left = kMaxGuesses;
};

struct RoundStart {
    RoundStatus status;
    std::optional<AgentReaction> agent_reaction;
};

struct ElicitationResult {
    bool accepted = false;
    std::size_t characters = 0;
    std::size_t required = 0;
    std::optional<RoundStart> round_started;  // set when this submission unlocked round 1
};

struct GuessResult {
    bool valid = false;
    std::optional<InvalidReason> invalid_reason;
    std::optional<FeedbackPattern> pattern;
    std::optional<AgentReaction> agent_reaction;
    RoundStatus round_status;
    std::optional<RoundStart> next_round;  // main rounds 2..4 start as soon as the previous one ends
};

struct QuestionnaireResult {
    int crt_score = 0;
};

/// Count of Unicode code points (UTF-8), whitespace included.
std::size_t count_characters(std::string_view utf8);

class EventLog;

/**
 * @brief Session lifecycle for the 2x2 experiment.
 *
 * Ordering per session: intake -> elicitation x2 -> rounds 1..4 -> questionnaire -> bonus rounds.
 * Every operation that changes state is appended to the event log before it is applied, and
 * out-of-order calls throw ServiceError without touching the session.
 *
 * Timestamps are passed in by the caller: the HTTP layer uses the wall clock, simulations
 * supply their own.
 */
class ExperimentService {
public:
    struct Options {
        /// Append-only JSONL log. Empty keeps everything in memory.
        std::filesystem::path log_path;
        bool fsync_each_record = true;
    };

    ExperimentService(std::shared_ptr<const EntropyEngine> engine, ExperimentConfig config,
                      std::shared_ptr<const ReactionCatalog> catalog, Options options);
    ExperimentService(std::shared_ptr<const EntropyEngine> engine, ExperimentConfig config);
    ~ExperimentService();

    ExperimentService(const ExperimentService&) = delete;
    ExperimentService& operator=(const ExperimentService&) = delete;

    CreateSessionResult create_session(const Intake& intake, TimePoint at);
    ElicitationResult submit_elicitation(const std::string& session_id, int response_index, const std::string& text,
                                         TimePoint at);
    /// `sequence`, when given, makes the call idempotent: a repeated number returns the original result.
    GuessResult submit_guess(const std::string& session_id, const std::string& raw_input, TimePoint at,
                             std::optional<std::uint64_t> sequence = std::nullopt);
    std::optional<AgentReaction> idle_ping(const std::string& session_id, TimePoint at);
    QuestionnaireResult submit_questionnaire(const std::string& session_id, double arousal, double valence,
                                             const std::vector<std::string>& crt_answers, TimePoint at);
    RoundStatus start_bonus_round(const std::string& session_id, TimePoint at);

    SessionRecord session(const std::string& session_id) const;
    /// Client-facing view; hides the solution of an unfinished round.
    nlohmann::json session_state(const std::string& session_id) const;
    /// All sessions in creation order.
    std::vector<SessionRecord> snapshot() const;
    std::size_t session_count() const;

    const ExperimentConfig& config() const noexcept { return config_; }
    const EntropyEngine& engine() const noexcept { return *engine_; }

private:
    struct Entry;

    Entry& find(const std::string& session_id) const;
    void replay(const std::filesystem::path& path);
    void apply(const nlohmann::json& record, bool log);

    // Each apply_* assumes the caller holds the session lock and validation passed.
    CreateSessionResult apply_create(const std::string& id, Assignment assignment, std::uint64_t agent_seed,
                                     const Intake& intake, TimePoint at);
    ElicitationResult apply_elicitation(Entry& e, int index, const std::string& text, TimePoint at);
    GuessResult apply_guess(Entry& e, const std::string& raw, TimePoint at, std::optional<std::uint64_t> sequence);
    std::optional<AgentReaction> apply_idle(Entry& e, TimePoint at);
    QuestionnaireResult apply_questionnaire(Entry& e, double arousal, double valence,
                                            const std::vector<std::string>& answers, TimePoint at);
    RoundStatus apply_bonus(Entry& e, const Word& solution, TimePoint at);

    RoundStart begin_round(Entry& e, const Word& solution, bool is_bonus, TimePoint at);
    static RoundStatus status_of(const RoundRecord& round);
    void write_log(const nlohmann::json& record);

    std::shared_ptr<const EntropyEngine> engine_;
    ExperimentConfig config_;
    std::shared_ptr<const ReactionCatalog> catalog_;
    std::vector<Word> fixed_solutions_;

    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::unique_ptr<Entry>> sessions_;
    std::vector<Entry*> by_ordinal_;

    std::mutex rng_mutex_;
    Rng rng_;

    std::unique_ptr<EventLog> log_;
};

}  // namespace wordlelab
