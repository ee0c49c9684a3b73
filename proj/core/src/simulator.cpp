#include "wordlelab/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <limits>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "json_io.hpp"

namespace wordlelab {

using nlohmann::json;

namespace {

constexpr std::int64_t kCohortEpochMs = 1'700'000'000'000;
constexpr std::int64_t kSessionSpacingMs = 3'600'000;

// Early exit once the running sum of squared bucket sizes can no longer beat the best.
template <typename CodeOf>
std::size_t argmin_sum_squares(std::size_t pool_size, std::size_t n_candidates, CodeOf&& code_of) {
    std::array<std::uint32_t, FeedbackPattern::kPatternCount> counts{};
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    std::size_t best_index = 0;
    for (std::size_t g = 0; g < pool_size; ++g) {
        counts.fill(0);
        std::uint64_t sum = 0;
        for (std::size_t c = 0; c < n_candidates && sum < best; ++c) {
            // (n+1)^2 - n^2 = 2n + 1
            sum += 2 * static_cast<std::uint64_t>(counts[code_of(g, c)]++) + 1;
        }
        if (sum < best) {
            best = sum;
            best_index = g;
        }
    }
    return best_index;
}

std::string filler_text(Rng& rng, std::size_t min_chars) {
    static constexpr std::array<std::string_view, 24> kWords = {
        "morning", "train",  "coffee", "window", "garden", "letter", "street", "river",
        "weekend", "office", "friend", "market", "rain",   "bridge", "kitchen", "music",
        "evening", "table",  "paper",  "light",  "door",   "phone",  "city",    "walk"};
    std::string out;
    while (out.size() < min_chars) {
        if (!out.empty()) out += ' ';
        out += kWords[uniform_index(rng, kWords.size())];
        if (uniform_index(rng, 8) == 0) out += '.';
    }
    out += '.';
    return out;
}

std::int64_t uniform_ms(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo)));
}

// Roughly a fifth of guesses are fast (< 4 s) and a tenth slow (> 60 s).
std::int64_t response_time_ms(Rng& rng) {
    const double u = uniform01(rng);
    if (u < 0.2) return uniform_ms(rng, 800, 4000);
    if (u < 0.9) return uniform_ms(rng, 4000, 60'000);
    return uniform_ms(rng, 60'001, 150'000);
}

Intake random_intake(Rng& rng) {
    static constexpr std::array<const char*, 3> kSex = {"female", "male", "other"};
    static constexpr std::array<WordleExperience, 5> kExperience = {
        WordleExperience::Never, WordleExperience::Once, WordleExperience::TwoToTen,
        WordleExperience::ElevenToHundred, WordleExperience::OverHundred};
    Intake in;
    in.age = 18 + static_cast<int>(uniform_index(rng, 53));
    in.sex = kSex[uniform01(rng) < 0.04 ? 2 : uniform_index(rng, 2)];
    in.native_english = uniform01(rng) < 0.8;
    in.wordle_experience = kExperience[uniform_index(rng, kExperience.size())];
    return in;
}

// ---------------------------------------------------------------------------

class InProcessClient final : public ServiceClient {
public:
    explicit InProcessClient(ExperimentService& s) : s_(s) {}

    CreateSessionResult create_session(const Intake& intake, TimePoint at) override {
        return s_.create_session(intake, at);
    }
    ElicitationResult submit_elicitation(const std::string& id, int index, const std::string& text,
                                         TimePoint at) override {
        return s_.submit_elicitation(id, index, text, at);
    }
    GuessResult submit_guess(const std::string& id, const std::string& guess, TimePoint at, std::uint64_t seq) override {
        return s_.submit_guess(id, guess, at, seq);
    }
    std::optional<AgentReaction> idle_ping(const std::string& id, TimePoint at) override { return s_.idle_ping(id, at); }
    QuestionnaireResult submit_questionnaire(const std::string& id, double arousal, double valence,
                                             const std::vector<std::string>& crt, TimePoint at) override {
        return s_.submit_questionnaire(id, arousal, valence, crt, at);
    }
    RoundStatus start_bonus_round(const std::string& id, TimePoint at) override {
        return s_.start_bonus_round(id, at);
    }
    ExportFiles export_all() override {
        const auto sessions = s_.snapshot();
        return export_sessions(sessions);
    }

private:
    ExperimentService& s_;
};

std::optional<ErrorCode> parse_error_code(std::string_view token) {
    for (auto code : {ErrorCode::SessionNotFound, ErrorCode::RoundsAlreadyStarted, ErrorCode::NoActiveRound,
                      ErrorCode::RoundAlreadyOver, ErrorCode::RoundsIncomplete, ErrorCode::OutOfRange,
                      ErrorCode::QuestionnaireMissing, ErrorCode::AlreadySubmitted, ErrorCode::RoundInProgress,
                      ErrorCode::InvalidRequest}) {
        if (to_string(code) == token) return code;
    }
    return std::nullopt;
}

std::optional<AgentReaction> reaction_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    AgentReaction r;
    auto expr = parse_expression(j.at("expression").get<std::string>());
    if (!expr) throw std::runtime_error("unknown expression in response");
    r.expression = *expr;
    r.message = j.at("message").get<std::string>();
    if (j.contains("context") && !j.at("context").is_null()) r.context = parse_context(j.at("context").get<std::string>());
    return r;
}

RoundStatus status_from(const json& j) {
    RoundStatus s;
    s.round_index = j.at("round_index").get<int>();
    s.is_bonus = j.at("is_bonus").get<bool>();
    const auto outcome = j.at("outcome").get<std::string>();
    s.outcome = outcome == "won" ? RoundOutcome::Won : outcome == "lost" ? RoundOutcome::Lost : RoundOutcome::InProgress;
    s.guesses_used = j.at("guesses_used").get<int>();
    s.attempts_left = j.at("attempts_left").get<int>();
    return s;
}

std::optional<RoundStart> round_start_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return RoundStart{status_from(j.at("round_status")), reaction_from(j.at("agent_reaction"))};
}

class HttpClient final : public ServiceClient {
public:
    HttpClient(const std::string& host, int port) : client_(host, port) {
        client_.set_connection_timeout(5);
        client_.set_read_timeout(30);
    }

    CreateSessionResult create_session(const Intake& intake, TimePoint) override {
        const auto j = post("/sessions", json_io::intake(intake));
        CreateSessionResult r;
        r.session_id = j.at("session_id").get<std::string>();
        r.assignment.anger = j.at("assignment").at("anger").get<bool>();
        r.assignment.empathy = j.at("assignment").at("empathy").get<bool>();
        r.elicitation_prompts = j.at("elicitation_prompts").get<std::array<std::string, 2>>();
        return r;
    }
    ElicitationResult submit_elicitation(const std::string& id, int index, const std::string& text,
                                         TimePoint) override {
        const auto j = post("/sessions/" + id + "/elicitation", {{"index", index}, {"text", text}});
        return {j.at("accepted").get<bool>(), j.at("characters").get<std::size_t>(), j.at("required").get<std::size_t>(),
                round_start_from(j.at("round_started"))};
    }
    GuessResult submit_guess(const std::string& id, const std::string& guess, TimePoint, std::uint64_t seq) override {
        const auto j = post("/sessions/" + id + "/guess", {{"guess", guess}, {"seq", seq}});
        GuessResult r;
        r.valid = j.at("valid").get<bool>();
        if (!j.at("pattern_code").is_null()) r.pattern = FeedbackPattern::from_code(j.at("pattern_code").get<int>());
        r.agent_reaction = reaction_from(j.at("agent_reaction"));
        r.round_status = status_from(j.at("round_status"));
        r.next_round = round_start_from(j.at("next_round"));
        return r;
    }
    std::optional<AgentReaction> idle_ping(const std::string& id, TimePoint) override {
        return reaction_from(post("/sessions/" + id + "/idle", json::object()).at("agent_reaction"));
    }
    QuestionnaireResult submit_questionnaire(const std::string& id, double arousal, double valence,
                                             const std::vector<std::string>& crt, TimePoint) override {
        const auto j = post("/sessions/" + id + "/questionnaire",
                            {{"arousal", arousal}, {"valence", valence}, {"crt_answers", crt}});
        return {j.at("crt_score").get<int>()};
    }
    RoundStatus start_bonus_round(const std::string& id, TimePoint) override {
        return status_from(post("/sessions/" + id + "/bonus", json::object()).at("round_status"));
    }
    ExportFiles export_all() override {
        ExportFiles f;
        f.events_csv = get("/export?table=events&format=csv");
        f.events_jsonl = get("/export?table=events&format=jsonl");
        f.participants_csv = get("/export?table=participants&format=csv");
        f.participants_jsonl = get("/export?table=participants&format=jsonl");
        return f;
    }

private:
    static void check(const httplib::Result& res) {
        if (!res) throw ServiceUnreachable("service unreachable: " + httplib::to_string(res.error()));
        if (res->status >= 400) {
            std::string message = res->body;
            std::optional<ErrorCode> code;
            try {
                const auto j = json::parse(res->body);
                code = parse_error_code(j.value("error", ""));
                message = j.value("message", message);
            } catch (const json::exception&) {
            }
            if (code) throw ServiceError(*code, message);
            throw std::runtime_error("HTTP " + std::to_string(res->status) + ": " + message);
        }
    }
    json post(const std::string& path, const json& body) {
        auto res = client_.Post(path, body.dump(), "application/json");
        check(res);
        return json::parse(res->body);
    }
    std::string get(const std::string& path) {
        auto res = client_.Get(path);
        check(res);
        return res->body;
    }

    httplib::Client client_;
};

}  // namespace

std::string_view to_string(PolicyKind k) noexcept {
    switch (k) {
        case PolicyKind::RandomValid: return "random";
        case PolicyKind::GreedyEntropy: return "greedy";
        case PolicyKind::NoisyHeuristic: return "noisy";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy(std::string_view token) noexcept {
    if (token == "random") return PolicyKind::RandomValid;
    if (token == "greedy") return PolicyKind::GreedyEntropy;
    if (token == "noisy") return PolicyKind::NoisyHeuristic;
    return std::nullopt;
}

EffectInjection EffectInjection::additive(double anger, double empathy, double anger_empathy) {
    EffectInjection e;
    e.offsets[1][0] = anger;
    e.offsets[0][1] = empathy;
    e.offsets[1][1] = anger + empathy + anger_empathy;
    return e;
}

void EffectInjection::apply(std::string_view spec) {
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("injection must look like key=value");
    const auto key = spec.substr(0, eq);
    const auto text = spec.substr(eq + 1);
    double v = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument("bad injection value '" + std::string(text) + "'");
    }
    if (key == "anger") {
        offsets[1][0] += v;
        offsets[1][1] += v;
    } else if (key == "empathy") {
        offsets[0][1] += v;
        offsets[1][1] += v;
    } else if (key == "anger_empathy") {
        offsets[1][1] += v;
    } else if (key.size() == 4 && key[0] == 'a' && key[2] == 'e' && (key[1] == '0' || key[1] == '1') &&
               (key[3] == '0' || key[3] == '1')) {
        offsets[key[1] - '0'][key[3] - '0'] += v;
    } else {
        throw std::invalid_argument("unknown injection key '" + std::string(key) + "'");
    }
}

std::size_t greedy_index(std::span<const Word> pool, std::span<const Word> candidates) {
    if (pool.empty() || candidates.empty()) throw std::invalid_argument("greedy_index needs a pool and candidates");
    return argmin_sum_squares(pool.size(), candidates.size(),
                              [&](std::size_t g, std::size_t c) { return feedback_code(pool[g], candidates[c]); });
}

Word greedy_guess(std::span<const Word> candidates, std::span<const Word> pool) {
    if (candidates.empty()) throw EmptyCandidateSet();
    if (candidates.size() <= 2) return candidates.front();
    return pool[greedy_index(pool, candidates)];
}

BotBrain::BotBrain(std::shared_ptr<const EntropyEngine> engine) : engine_(std::move(engine)) {
    const auto& solutions = engine_->solutions();
    solution_to_guess_.reserve(solutions.size());
    for (const auto& w : solutions.words()) {
        auto gi = engine_->guesses().index_of(w);
        if (!gi) throw std::invalid_argument("solution '" + w.str() + "' missing from the guess pool");
        solution_to_guess_.push_back(*gi);
    }
    opening_ = greedy(engine_->full(EntropyPool::Solutions));
}

Word BotBrain::greedy(const CandidateSet& candidates) const {
    if (candidates.pool() != EntropyPool::Solutions) throw std::invalid_argument("bots track solution candidates");
    if (candidates.empty()) throw EmptyCandidateSet();
    const auto& solutions = engine_->solutions();
    if (opening_ && candidates.count() == solutions.size()) return *opening_;
    const auto members = candidates.indices();
    if (members.size() <= 2) return solutions[members.front()];
    const auto& table = engine_->table();
    const auto best = argmin_sum_squares(members.size(), members.size(), [&](std::size_t g, std::size_t c) {
        return table.code(solution_to_guess_[members[g]], members[c]);
    });
    return solutions[members[best]];
}

Word BotBrain::random_valid(Rng& rng) const {
    const auto& guesses = engine_->guesses();
    return guesses[uniform_index(rng, guesses.size())];
}

Word BotBrain::choose(const CandidateSet& candidates, const BotPolicy& policy, Rng& rng) const {
    switch (policy.kind) {
        case PolicyKind::GreedyEntropy: return greedy(candidates);
        case PolicyKind::RandomValid: return random_valid(rng);
        case PolicyKind::NoisyHeuristic: {
            // Draw both numbers every time so the stream does not depend on which branch ran.
            const bool play_greedy = uniform01(rng) < policy.skill;
            const auto fallback = random_valid(rng);
            return play_greedy ? greedy(candidates) : fallback;
        }
    }
    return random_valid(rng);
}

std::optional<int> play_offline(const BotBrain& brain, const Word& solution, const BotPolicy& policy, Rng& rng) {
    const auto& engine = brain.engine();
    auto candidates = engine.full(EntropyPool::Solutions);
    for (int g = 1; g <= kMaxGuesses; ++g) {
        const auto word = brain.choose(candidates, policy, rng);
        const auto pattern = feedback(word, solution);
        if (pattern.all_correct()) return g;
        candidates = engine.filter(candidates, word, pattern);
    }
    return std::nullopt;
}

std::unique_ptr<ServiceClient> make_in_process_client(ExperimentService& service) {
    return std::make_unique<InProcessClient>(service);
}

std::unique_ptr<ServiceClient> make_http_client(const std::string& host, int port) {
    return std::make_unique<HttpClient>(host, port);
}

double cell_skill(const CohortOptions& options, bool anger, bool empathy) {
    const double s = options.policy.skill + options.injection.offset(anger, empathy);
    if (!(s >= 0.0 && s <= 1.0)) {
        throw std::invalid_argument("injected skill " + std::to_string(s) + " leaves [0, 1]");
    }
    return s;
}

ExportFiles run_cohort(ServiceClient& client, const BotBrain& brain, const CohortOptions& options) {
    const auto& engine = brain.engine();
    for (bool a : {false, true}) {
        for (bool e : {false, true}) cell_skill(options, a, e);
    }
    const auto crt_items = ExperimentConfig::defaults().crt;

    for (std::size_t i = 0; i < options.n; ++i) {
        Rng rng(derive_seed(options.seed, i));
        std::int64_t clock = kCohortEpochMs + static_cast<std::int64_t>(i) * kSessionSpacingMs;
        auto now = [&] { return at_ms(clock); };

        const auto created = client.create_session(random_intake(rng), now());
        const auto& id = created.session_id;
        BotPolicy policy = options.policy;
        if (policy.kind == PolicyKind::NoisyHeuristic) {
            policy.skill = cell_skill(options, created.assignment.anger, created.assignment.empathy);
        }

        for (int k = 0; k < 2; ++k) {
            clock += uniform_ms(rng, 60'000, 180'000);
            const auto r = client.submit_elicitation(id, k, filler_text(rng, 150), now());
            if (!r.accepted) throw std::logic_error("filler elicitation text was rejected");
        }

        std::uint64_t seq = 0;
        auto play_round = [&] {
            auto candidates = engine.full(EntropyPool::Solutions);
            for (;;) {
                if (uniform01(rng) < options.idle_probability) {
                    clock += uniform_ms(rng, 91'000, 150'000);
                    client.idle_ping(id, now());
                }
                clock += response_time_ms(rng);
                const auto word = brain.choose(candidates, policy, rng);
                const auto r = client.submit_guess(id, word.str(), now(), ++seq);
                if (!r.valid || !r.pattern) throw std::logic_error("bot guess '" + word.str() + "' was rejected");
                if (r.round_status.outcome != RoundOutcome::InProgress) return r;
                candidates = engine.filter(candidates, word, *r.pattern);
            }
        };

        for (;;) {
            const auto last = play_round();
            if (!last.next_round) break;
        }

        std::vector<std::string> answers;
        for (const auto& item : crt_items) {
            const double key = item.accepted.front();
            answers.push_back(format_number(coin(rng) ? key : key * 2.0 + 1.0));
        }
        clock += uniform_ms(rng, 30'000, 120'000);
        client.submit_questionnaire(id, static_cast<double>(uniform_index(rng, 101)),
                                    static_cast<double>(uniform_index(rng, 101)), answers, now());

        if (uniform01(rng) < options.bonus_probability) {
            clock += uniform_ms(rng, 5'000, 30'000);
            client.start_bonus_round(id, now());
            play_round();
        }
    }
    return client.export_all();
}

ExportFiles simulate_cohort(std::shared_ptr<const EntropyEngine> engine, const BotBrain& brain,
                            const CohortOptions& options, ExperimentConfig config) {
    config.seed = options.seed;
    ExperimentService service(std::move(engine), std::move(config));
    auto client = make_in_process_client(service);
    return run_cohort(*client, brain, options);
}

}  // namespace wordlelab
