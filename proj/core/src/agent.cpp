#include "wordlelab/agent.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "wordlelab/random.hpp"

namespace wordlelab {

extern const char* const kBuiltinCatalogText;  // generated from data/agent_catalog.tsv

namespace {

constexpr std::array<std::string_view, kExpressionCount> kExpressionTokens = {
    "idle", "success", "sadness", "slightly_happy", "wave", "wave_short", "win"};

constexpr std::array<std::string_view, kContextCount> kContextTokens = {
    "fewer_than_6_remaining",
    "fast_guess",
    "slow_guess",
    "first_guess",
    "fifth_guess",
    "sixth_guess",
    "fewer_than_101_remaining",
    "additional_letters_revealed",
    "no_additional_letters_revealed",
    "invalid",
    "win",
    "loss",
    "idle_90s",
};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string_view to_string(Expression e) noexcept { return kExpressionTokens[static_cast<std::size_t>(e)]; }

std::optional<Expression> parse_expression(std::string_view token) noexcept {
    for (std::size_t i = 0; i < kExpressionTokens.size(); ++i) {
        if (kExpressionTokens[i] == token) return static_cast<Expression>(i);
    }
    return std::nullopt;
}

Expression display_expression(Expression e) noexcept { return e == Expression::Win ? Expression::Success : e; }

std::string_view to_string(GameContext c) noexcept { return kContextTokens[static_cast<std::size_t>(c)]; }

std::optional<GameContext> parse_context(std::string_view token) noexcept {
    for (std::size_t i = 0; i < kContextTokens.size(); ++i) {
        if (kContextTokens[i] == token) return static_cast<GameContext>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Personality p) noexcept { return p == Personality::Control ? "control" : "empathic"; }

std::optional<GameContext> ContextSet::highest_priority() const noexcept {
    if (bits_ == 0) return std::nullopt;
    return static_cast<GameContext>(__builtin_ctz(bits_));
}

std::vector<GameContext> ContextSet::members() const {
    std::vector<GameContext> out;
    for (std::size_t i = 0; i < kContextCount; ++i) {
        if (contains(static_cast<GameContext>(i))) out.push_back(static_cast<GameContext>(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Catalog

ReactionCatalog ReactionCatalog::from_rules(std::vector<ReactionRule> rules) {
    if (rules.size() != kRuleCount) {
        throw CatalogInvalid("catalog must contain " + std::to_string(kRuleCount) + " rules, found " +
                             std::to_string(rules.size()));
    }
    ReactionCatalog cat;
    std::set<std::string> texts;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].message.empty()) throw CatalogInvalid("rule " + std::to_string(i + 1) + " has an empty message");
        if (!texts.insert(rules[i].message).second) {
            throw CatalogInvalid("duplicate message text: " + rules[i].message);
        }
        cat.by_context_[static_cast<std::size_t>(rules[i].context)].push_back(i);
    }
    for (std::size_t c = 0; c < kContextCount; ++c) {
        auto n = cat.by_context_[c].size();
        if (n != 1 && n != 4 && n != 6) {
            throw CatalogInvalid("context " + std::string(kContextTokens[c]) + " has " + std::to_string(n) +
                                 " messages; expected 1, 4 or 6");
        }
    }
    const auto& wins = cat.by_context_[static_cast<std::size_t>(GameContext::Win)];
    if (wins.size() != static_cast<std::size_t>(kMaxGuesses)) {
        throw CatalogInvalid("win context needs one rule per guess count 1..6");
    }
    int count = 0;
    for (auto id : wins) rules[id].win_guess_count = ++count;
    for (auto& r : rules) {
        if (r.context != GameContext::Win) r.win_guess_count.reset();
    }
    cat.rules_ = std::move(rules);
    return cat;
}

ReactionCatalog ReactionCatalog::parse(std::string_view text) {
    std::vector<ReactionRule> rules;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        auto fields = split_tabs(line);
        auto where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != 3) throw CatalogInvalid(where + "expected 3 tab-separated fields");
        auto context = parse_context(fields[0]);
        if (!context) throw CatalogInvalid(where + "unknown context '" + std::string(fields[0]) + "'");
        auto expression = parse_expression(fields[1]);
        if (!expression) throw CatalogInvalid(where + "unknown expression '" + std::string(fields[1]) + "'");
        rules.push_back({*context, *expression, std::string(fields[2]), std::nullopt});
    }
    return from_rules(std::move(rules));
}

ReactionCatalog ReactionCatalog::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CatalogInvalid("cannot open catalog " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const ReactionCatalog& ReactionCatalog::builtin() {
    static const ReactionCatalog cat = parse(kBuiltinCatalogText);
    return cat;
}

std::size_t ReactionCatalog::distinct_contexts() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(by_context_.begin(), by_context_.end(), [](const auto& v) { return !v.empty(); }));
}

std::set<Expression> ReactionCatalog::expressions() const {
    std::set<Expression> out;
    for (const auto& r : rules_) out.insert(r.expression);
    return out;
}

std::string ReactionCatalog::serialize() const {
    std::string out;
    for (const auto& r : rules_) {
        out += to_string(r.context);
        out += '\t';
        out += to_string(r.expression);
        out += '\t';
        out += r.message;
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Selection

AgentState::AgentState(Personality personality, const ReactionCatalog& catalog, std::uint64_t seed)
    : personality_(personality) {
    Rng rng(seed);
    for (std::size_t c = 0; c < kContextCount; ++c) {
        auto ids = catalog.rules_for(static_cast<GameContext>(c));
        // Win rules are keyed by guess count; only rotating contexts get shuffled.
        if (ids.size() > 1 && static_cast<GameContext>(c) != GameContext::Win) {
            for (std::size_t i = ids.size() - 1; i > 0; --i) {
                std::swap(ids[i], ids[uniform_index(rng, i + 1)]);
            }
        }
        rotation_[c] = std::move(ids);
    }
}

void AgentState::start_round(int round_index) {
    round_index_ = round_index;
    used_.clear();
}

ContextSet detect_contexts(const AgentEvent& event, const AgentThresholds& t) {
    ContextSet out;
    switch (event.kind) {
        case AgentEventKind::RoundStarted:
            out.insert(GameContext::FirstGuess);
            break;
        case AgentEventKind::GuessRejectedInvalid:
            out.insert(GameContext::Invalid);
            break;
        case AgentEventKind::RoundEnded:
            out.insert(event.won ? GameContext::Win : GameContext::Loss);
            break;
        case AgentEventKind::IdleTick:
            if (event.idle_seconds >= t.idle_s) out.insert(GameContext::Idle90s);
            break;
        case AgentEventKind::GuessEvaluated:
            if (event.remaining_solutions < t.few_remaining) out.insert(GameContext::FewerThan6Remaining);
            if (event.response_time_s < t.fast_guess_s) out.insert(GameContext::FastGuess);
            if (event.response_time_s > t.slow_guess_s) out.insert(GameContext::SlowGuess);
            if (event.pending_guess == 5) out.insert(GameContext::FifthGuess);
            if (event.pending_guess == 6) out.insert(GameContext::SixthGuess);
            if (event.remaining_solutions < t.narrowed_remaining) out.insert(GameContext::FewerThan101Remaining);
            out.insert(event.revealed_new_letters ? GameContext::AdditionalLettersRevealed
                                                  : GameContext::NoAdditionalLettersRevealed);
            break;
    }
    return out;
}

std::optional<AgentReaction> select_reaction(const ContextSet& contexts, const AgentEvent& event,
                                             const ReactionCatalog& catalog, AgentState& state) {
    auto top = contexts.highest_priority();
    if (!top) return std::nullopt;

    std::optional<std::size_t> chosen;
    if (*top == GameContext::Win) {
        for (auto id : catalog.rules_for(GameContext::Win)) {
            if (catalog.rule(id).win_guess_count == event.guesses_used && !state.used(id)) chosen = id;
        }
    } else {
        const auto& order = state.rotation(*top);
        const auto n = order.size();
        const auto start = static_cast<std::size_t>(std::max(state.round_index() - 1, 0)) % n;
        for (std::size_t step = 0; step < n; ++step) {
            auto id = order[(start + step) % n];
            if (!state.used(id)) {
                chosen = id;
                break;
            }
        }
    }
    if (!chosen) return std::nullopt;

    state.mark_used(*chosen);
    const auto& rule = catalog.rule(*chosen);
    return AgentReaction{rule.expression, rule.message, rule.context};
}

std::optional<std::string> control_status(const AgentEvent& event) {
    switch (event.kind) {
        case AgentEventKind::RoundStarted:
        case AgentEventKind::GuessRejectedInvalid:
        case AgentEventKind::GuessEvaluated:
            return "Guess " + std::to_string(event.pending_guess) + " of 6";
        case AgentEventKind::RoundEnded:
            if (event.won) return "You won after " + std::to_string(event.guesses_used) + " guesses";
            return "You lost after 6 guesses";
        case AgentEventKind::IdleTick:
            return std::nullopt;
    }
    return std::nullopt;
}

bool RevealTracker::observe(const Word& guess, FeedbackPattern pattern) noexcept {
    bool revealed = false;
    for (std::size_t i = 0; i < kWordLength; ++i) {
        auto mark = pattern.cell(i);
        if (mark == Mark::Absent) continue;
        auto& letter = known_letter_[guess[i] - 'a'];
        if (!letter) {
            letter = true;
            revealed = true;
        }
        if (mark == Mark::Correct && !known_position_[i]) {
            known_position_[i] = true;
            revealed = true;
        }
    }
    return revealed;
}

VirtualAgent::VirtualAgent(Personality personality, std::shared_ptr<const ReactionCatalog> catalog,
                           AgentThresholds thresholds, std::uint64_t seed)
    : catalog_(std::move(catalog)), thresholds_(thresholds), state_(personality, *catalog_, seed) {}

std::optional<AgentReaction> VirtualAgent::react(const AgentEvent& event) {
    if (state_.personality() == Personality::Control) {
        auto text = control_status(event);
        if (!text) return std::nullopt;
        return AgentReaction{Expression::Idle, std::move(*text), std::nullopt};
    }
    return select_reaction(detect_contexts(event, thresholds_), event, *catalog_, state_);
}

}  // namespace wordlelab
