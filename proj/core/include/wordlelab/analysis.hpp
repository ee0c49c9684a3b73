#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordlelab/entropy.hpp"
#include "wordlelab/ols.hpp"

namespace wordlelab {

class SchemaMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One row of the exported guess-event table.
struct EventRow {
    std::string session_id;
    int round_index = 0;
    bool is_bonus = false;
    int guess_index = 0;
    std::string raw_input;
    bool valid = false;
    std::optional<int> pattern_code;
    double response_time_s = 0.0;
    std::size_t remaining_solutions_after = 0;
    std::size_t remaining_words_after = 0;
    std::string agent_expression;
    std::string agent_message;
};

/// One row of the exported participant table (fields the analysis needs).
struct ParticipantRow {
    std::string session_id;
    bool anger = false;
    bool empathy = false;
    int age = 0;
    std::string sex;
    bool native_english = true;
    std::string wordle_experience;
    std::optional<double> arousal;
    std::optional<double> valence;
    std::optional<int> crt_score;
    int bonus_rounds_started = 0;
};

/// Format follows the extension: .jsonl or .csv. Throws SchemaMismatch on missing columns.
std::vector<EventRow> load_events(const std::filesystem::path& path);
std::vector<ParticipantRow> load_participants(const std::filesystem::path& path);
std::vector<EventRow> parse_events_jsonl(std::string_view text);
std::vector<EventRow> parse_events_csv(std::string_view text);
std::vector<ParticipantRow> parse_participants_jsonl(std::string_view text);
std::vector<ParticipantRow> parse_participants_csv(std::string_view text);

/// Heterogeneity features for the interacted model.
enum class HFeature { Crt, NeverPlayed, Female };

std::string_view label(HFeature h) noexcept;
std::optional<HFeature> parse_hfeature(std::string_view token) noexcept;
std::optional<double> feature_value(const ParticipantRow& p, HFeature h);

enum class RoundDv { DidWin, Guesses, GuessesAdjusted };

std::string_view label(RoundDv dv) noexcept;

struct RoundObservation {
    std::string participant;
    int round = 0;
    bool did_win = false;
    int guesses = 0;
    int guesses_adjusted = 0;  // a loss counts as 7
    bool anger = false;
    bool empathy = false;
    std::optional<double> h;

    double value(RoundDv dv) const noexcept;
};

struct GuessObservation {
    std::string participant;
    int round = 0;
    int guess = 0;
    double bits_solutions = 0.0;
    double bits_words = 0.0;
    bool anger = false;
    bool empathy = false;
};

/**
 * One row per completed main round. A round counts as complete when its valid
 * guesses are numbered 1..k without gaps and it either ends on the all-correct
 * pattern or reaches the sixth guess; anything else is dropped.
 */
std::vector<RoundObservation> build_round_observations(std::span<const EventRow> events,
                                                       std::span<const ParticipantRow> participants,
                                                       std::optional<HFeature> h = std::nullopt);

/// Every valid guess in a main round, with bits remaining over both pools.
std::vector<GuessObservation> build_guess_observations(std::span<const EventRow> events,
                                                       std::span<const ParticipantRow> participants);

/// Generic input row: outcome plus treatment flags, clustered on `cluster`.
struct TreatmentRow {
    std::string cluster;
    double y = 0.0;
    bool anger = false;
    bool empathy = false;
    std::optional<double> h;
    int round = 0;
};

struct SpecOptions {
    /// Set for the interacted model; rows missing the feature are dropped.
    std::optional<HFeature> h;
    bool round_fixed_effects = false;
    SmallSampleCorrection correction = SmallSampleCorrection::CR1;
};

/**
 * Intercept, Anger, Empathy, Anger * Empathy, plus the four H terms when
 * `options.h` is set and round dummies (round 1 omitted) when requested.
 * Collinear columns are removed and listed in RegressionResult::dropped.
 */
RegressionResult run_spec(std::span<const TreatmentRow> rows, const SpecOptions& options, std::string dependent);

RegressionResult run_round_spec(std::span<const RoundObservation> obs, RoundDv dv, const SpecOptions& options);

/// One regression per guess index 1..6 on bits remaining over `pool`.
std::vector<RegressionResult> run_guess_level(std::span<const GuessObservation> obs, EntropyPool pool,
                                              const SpecOptions& options);

/// Arousal, Valence and Started Bonus Rounds on one row per participant.
std::vector<RegressionResult> participant_level_regressions(std::span<const ParticipantRow> participants,
                                                            SmallSampleCorrection correction = SmallSampleCorrection::CR1);

inline double seconds_to_minutes(double s) noexcept { return s / 60.0; }

/// Word -> frequency. CSV `word,frequency`, optional header.
class FrequencyTable {
public:
    static FrequencyTable load(const std::filesystem::path& path);
    static FrequencyTable parse(std::string_view csv);

    struct Lookup {
        double value = 0.0;
        bool missing = false;
    };
    /// Unknown words score 0 and are flagged.
    Lookup lookup(std::string_view word) const;
    std::size_t size() const noexcept { return table_.size(); }

private:
    std::unordered_map<std::string, double> table_;
};

enum class Sentiment { Positive, Neutral, Negative };

/// Precomputed sentiment labels. CSV `word,label` with label positive|neutral|negative.
class SentimentAnnotations {
public:
    static SentimentAnnotations load(const std::filesystem::path& path);
    static SentimentAnnotations parse(std::string_view csv);

    std::optional<Sentiment> lookup(std::string_view word) const;
    std::size_t size() const noexcept { return table_.size(); }

private:
    std::unordered_map<std::string, Sentiment> table_;
};

struct AuxiliaryOutcomes {
    std::vector<RegressionResult> results;
    std::vector<std::string> warnings;
    std::size_t frequency_missing = 0;  // valid guesses absent from the frequency table
};

/**
 * Guess-level outcomes under the base model: Frequency (valid guesses),
 * Response Time in minutes (all submissions), Positive/Neutral/Negative (valid
 * guesses with an annotation) and Valid (all submissions). A missing lexicon
 * skips its columns with a warning.
 */
AuxiliaryOutcomes auxiliary_outcomes(std::span<const EventRow> events, std::span<const ParticipantRow> participants,
                                     const FrequencyTable* frequencies, const SentimentAnnotations* sentiment,
                                     SmallSampleCorrection correction = SmallSampleCorrection::CR1);

}  // namespace wordlelab
