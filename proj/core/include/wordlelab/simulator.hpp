#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "wordlelab/entropy.hpp"
#include "wordlelab/experiment.hpp"
#include "wordlelab/export.hpp"
#include "wordlelab/random.hpp"

namespace wordlelab {

class ServiceUnreachable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class PolicyKind { RandomValid, GreedyEntropy, NoisyHeuristic };

std::string_view to_string(PolicyKind k) noexcept;
std::optional<PolicyKind> parse_policy(std::string_view token) noexcept;  // random | greedy | noisy

struct BotPolicy {
    PolicyKind kind = PolicyKind::NoisyHeuristic;
    /// Probability of the greedy move under NoisyHeuristic. Ignored by the other kinds.
    double skill = 1.0;
};

/// Skill offsets per treatment cell, indexed [anger][empathy].
struct EffectInjection {
    std::array<std::array<double, 2>, 2> offsets{};

    double offset(bool anger, bool empathy) const noexcept { return offsets[anger][empathy]; }

    /// Additive terms: anger hits (1,0) and (1,1); empathy hits (0,1) and (1,1); the interaction hits (1,1).
    static EffectInjection additive(double anger, double empathy, double anger_empathy);

    /// Parses "anger=-0.1", "empathy=0.05", "anger_empathy=0.1" or a cell "a1e0=-0.2"; adds to *this.
    void apply(std::string_view spec);
};

/// Index into `pool` minimizing expected_remaining over `candidates`; the lower index wins ties.
std::size_t greedy_index(std::span<const Word> pool, std::span<const Word> candidates);

/// With at most two candidates the first one is guessed directly; otherwise greedy_index over `pool`.
Word greedy_guess(std::span<const Word> candidates, std::span<const Word> pool);

/**
 * Move selection for one bot over the engine's solution pool.
 *
 * GreedyEntropy searches the current candidates (hard-mode style) using the
 * precomputed feedback table. RandomValid draws from the whole guess pool.
 * NoisyHeuristic plays the greedy move with probability `skill`.
 */
class BotBrain {
public:
    explicit BotBrain(std::shared_ptr<const EntropyEngine> engine);

    Word choose(const CandidateSet& candidates, const BotPolicy& policy, Rng& rng) const;
    Word greedy(const CandidateSet& candidates) const;
    Word random_valid(Rng& rng) const;

    const EntropyEngine& engine() const noexcept { return *engine_; }

private:
    std::shared_ptr<const EntropyEngine> engine_;
    std::vector<std::uint32_t> solution_to_guess_;  // solution index -> guess-pool row
    std::optional<Word> opening_;  // greedy move on the full solution set
};

/// Plays one round against `solution` directly (no service). Returns guesses used, or nullopt on a loss.
std::optional<int> play_offline(const BotBrain& brain, const Word& solution, const BotPolicy& policy, Rng& rng);

/// Operations a bot needs from the experiment service.
class ServiceClient {
public:
    virtual ~ServiceClient() = default;

    virtual CreateSessionResult create_session(const Intake& intake, TimePoint at) = 0;
    virtual ElicitationResult submit_elicitation(const std::string& id, int index, const std::string& text,
                                                 TimePoint at) = 0;
    virtual GuessResult submit_guess(const std::string& id, const std::string& guess, TimePoint at,
                                     std::uint64_t seq) = 0;
    virtual std::optional<AgentReaction> idle_ping(const std::string& id, TimePoint at) = 0;
    virtual QuestionnaireResult submit_questionnaire(const std::string& id, double arousal, double valence,
                                                     const std::vector<std::string>& crt, TimePoint at) = 0;
    virtual RoundStatus start_bonus_round(const std::string& id, TimePoint at) = 0;
    virtual ExportFiles export_all() = 0;
};

/// Calls the service directly with the bot's simulated clock.
std::unique_ptr<ServiceClient> make_in_process_client(ExperimentService& service);

/// Talks JSON over HTTP; the server stamps requests with its own clock. Throws ServiceUnreachable.
std::unique_ptr<ServiceClient> make_http_client(const std::string& host, int port);

struct CohortOptions {
    std::size_t n = 100;
    BotPolicy policy;
    EffectInjection injection;
    std::uint64_t seed = 1;
    /// Probability that a bot plays one bonus round after the questionnaire.
    double bonus_probability = 0.3;
    /// Probability of a 90+ s pause (with an idle ping) before a guess.
    double idle_probability = 0.05;
};

/// Effective NoisyHeuristic skill for a cell. Throws std::invalid_argument when outside [0, 1].
double cell_skill(const CohortOptions& options, bool anger, bool empathy);

/// One complete session per bot, run in order. Same seed and service state give byte-identical exports.
ExportFiles run_cohort(ServiceClient& client, const BotBrain& brain, const CohortOptions& options);

/// Convenience: fresh in-memory service seeded from `options.seed`, then run_cohort.
ExportFiles simulate_cohort(std::shared_ptr<const EntropyEngine> engine, const BotBrain& brain,
                            const CohortOptions& options, ExperimentConfig config = ExperimentConfig::defaults());

}  // namespace wordlelab
