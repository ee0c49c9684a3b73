#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wordlelab/word.hpp"

namespace wordlelab {

enum class Expression { Idle, Success, Sadness, SlightlyHappy, Wave, WaveShort, Win };

inline constexpr std::size_t kExpressionCount = 7;

std::string_view to_string(Expression e) noexcept;
std::optional<Expression> parse_expression(std::string_view token) noexcept;

/// Art shown for an expression token. Win has no artwork of its own and reuses Success.
Expression display_expression(Expression e) noexcept;

/// Game contexts in priority order: a lower value trumps every higher one.
enum class GameContext {
    FewerThan6Remaining,
    FastGuess,
    SlowGuess,
    FirstGuess,
    FifthGuess,
    SixthGuess,
    FewerThan101Remaining,
    AdditionalLettersRevealed,
    NoAdditionalLettersRevealed,
    Invalid,
    Win,
    Loss,
    Idle90s,
};

inline constexpr std::size_t kContextCount = 13;

std::string_view to_string(GameContext c) noexcept;
std::optional<GameContext> parse_context(std::string_view token) noexcept;
constexpr int priority_rank(GameContext c) noexcept { return static_cast<int>(c); }

class ContextSet {
public:
    ContextSet() = default;
    ContextSet(std::initializer_list<GameContext> contexts) {
        for (auto c : contexts) insert(c);
    }

    void insert(GameContext c) noexcept { bits_ |= bit(c); }
    bool contains(GameContext c) const noexcept { return (bits_ & bit(c)) != 0; }
    bool empty() const noexcept { return bits_ == 0; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(__builtin_popcount(bits_)); }

    /// Context with the smallest rank, if any.
    std::optional<GameContext> highest_priority() const noexcept;
    std::vector<GameContext> members() const;

    friend bool operator==(const ContextSet&, const ContextSet&) = default;

private:
    static constexpr std::uint32_t bit(GameContext c) noexcept { return std::uint32_t{1} << static_cast<int>(c); }
    std::uint32_t bits_ = 0;
};

struct ReactionRule {
    GameContext context;
    Expression expression;
    std::string message;
    std::optional<int> win_guess_count;  // Win rules only
};

class CatalogInvalid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief The empathic agent's rule table.
 *
 * On disk: one rule per line, tab separated `context<TAB>expression<TAB>message`.
 * Blank lines and lines starting with '#' are ignored. Win rules are indexed by
 * guess count in file order (the first Win row answers a 1-guess win).
 */
class ReactionCatalog {
public:
    static constexpr std::size_t kRuleCount = 39;

    static ReactionCatalog load(const std::filesystem::path& path);
    static ReactionCatalog parse(std::string_view text);
    static const ReactionCatalog& builtin();

    /// Validates counts: 39 rules, 13 contexts, 1/4/6 messages per context, one Win rule per guess count.
    static ReactionCatalog from_rules(std::vector<ReactionRule> rules);

    const std::vector<ReactionRule>& rules() const noexcept { return rules_; }
    const ReactionRule& rule(std::size_t id) const noexcept { return rules_[id]; }
    std::size_t size() const noexcept { return rules_.size(); }

    /// Rule ids for a context in catalog order.
    const std::vector<std::size_t>& rules_for(GameContext c) const noexcept {
        return by_context_[static_cast<std::size_t>(c)];
    }
    std::size_t distinct_contexts() const noexcept;
    std::set<Expression> expressions() const;

    std::string serialize() const;

private:
    std::vector<ReactionRule> rules_;
    std::array<std::vector<std::size_t>, kContextCount> by_context_;
};

enum class Personality { Control, Empathic };

std::string_view to_string(Personality p) noexcept;

struct AgentThresholds {
    double fast_guess_s = 4.0;
    double slow_guess_s = 60.0;
    double idle_s = 90.0;
    std::size_t few_remaining = 6;
    std::size_t narrowed_remaining = 101;
};

enum class AgentEventKind { RoundStarted, GuessRejectedInvalid, GuessEvaluated, RoundEnded, IdleTick };

struct AgentEvent {
    AgentEventKind kind = AgentEventKind::RoundStarted;
    /// Pending guess number (1..6): the next guess the player will make.
    int pending_guess = 1;
    double response_time_s = 0.0;
    /// Solutions still consistent with the round's feedback.
    std::size_t remaining_solutions = 0;
    bool revealed_new_letters = false;
    bool won = false;
    int guesses_used = 0;
    double idle_seconds = 0.0;

    static AgentEvent round_started() { return {}; }
    static AgentEvent invalid_guess(int pending) {
        AgentEvent e;
        e.kind = AgentEventKind::GuessRejectedInvalid;
        e.pending_guess = pending;
        return e;
    }
    static AgentEvent guess_evaluated(int next_pending, double rt, std::size_t remaining, bool revealed) {
        AgentEvent e;
        e.kind = AgentEventKind::GuessEvaluated;
        e.pending_guess = next_pending;
        e.response_time_s = rt;
        e.remaining_solutions = remaining;
        e.revealed_new_letters = revealed;
        return e;
    }
    static AgentEvent round_ended(bool won, int guesses) {
        AgentEvent e;
        e.kind = AgentEventKind::RoundEnded;
        e.won = won;
        e.guesses_used = guesses;
        return e;
    }
    static AgentEvent idle_tick(double seconds) {
        AgentEvent e;
        e.kind = AgentEventKind::IdleTick;
        e.idle_seconds = seconds;
        return e;
    }
};

struct AgentReaction {
    Expression expression = Expression::Idle;
    std::string message;
    std::optional<GameContext> context;  // empty for control status lines

    friend bool operator==(const AgentReaction&, const AgentReaction&) = default;
};

/// Per-session selection state. Rotation permutations are drawn once from `seed`.
class AgentState {
public:
    AgentState(Personality personality, const ReactionCatalog& catalog, std::uint64_t seed);

    Personality personality() const noexcept { return personality_; }
    int round_index() const noexcept { return round_index_; }

    void start_round(int round_index);
    bool used(std::size_t rule_id) const noexcept { return used_.contains(rule_id); }
    void mark_used(std::size_t rule_id) { used_.insert(rule_id); }
    const std::set<std::size_t>& used_this_round() const noexcept { return used_; }

    /// Rule ids of a multi-message context in this session's fixed order.
    const std::vector<std::size_t>& rotation(GameContext c) const noexcept {
        return rotation_[static_cast<std::size_t>(c)];
    }

private:
    Personality personality_;
    int round_index_ = 1;
    std::set<std::size_t> used_;
    std::array<std::vector<std::size_t>, kContextCount> rotation_;
};

ContextSet detect_contexts(const AgentEvent& event, const AgentThresholds& thresholds = {});

/// Picks the message for the top-ranked context, or nothing when every candidate message was already used.
std::optional<AgentReaction> select_reaction(const ContextSet& contexts, const AgentEvent& event,
                                             const ReactionCatalog& catalog, AgentState& state);

/// Status line of the control agent; nothing for idle ticks.
std::optional<std::string> control_status(const AgentEvent& event);

/// Tracks which letters the player has uncovered in the current round.
class RevealTracker {
public:
    /// True when the guess uncovered a new letter or a new correct position.
    bool observe(const Word& guess, FeedbackPattern pattern) noexcept;
    void reset() noexcept { *this = RevealTracker{}; }

private:
    std::array<bool, 26> known_letter_{};
    std::array<bool, kWordLength> known_position_{};
};

/// One personality bound to its catalog and thresholds.
class VirtualAgent {
public:
    VirtualAgent(Personality personality, std::shared_ptr<const ReactionCatalog> catalog, AgentThresholds thresholds,
                 std::uint64_t seed);

    Personality personality() const noexcept { return state_.personality(); }
    const AgentThresholds& thresholds() const noexcept { return thresholds_; }
    const AgentState& state() const noexcept { return state_; }

    void start_round(int round_index) { state_.start_round(round_index); }
    std::optional<AgentReaction> react(const AgentEvent& event);

private:
    std::shared_ptr<const ReactionCatalog> catalog_;
    AgentThresholds thresholds_;
    AgentState state_;
};

}  // namespace wordlelab
