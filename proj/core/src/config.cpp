#include "wordlelab/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

namespace wordlelab {

using nlohmann::json;

ExperimentConfig ExperimentConfig::defaults() {
    ExperimentConfig c;
    c.fixed_solutions = {"plant", "fuzzy", "diner", "image"};
    c.control_prompts = {
        "What are three to five activities that you did today? Please write two-three sentences about each "
        "activity that you decide to share. (Examples of things you might write about include: walking, eating "
        "lunch, brushing your teeth, etc.)",
        "Now, we’d like you to describe in more detail the way you typically spend your evenings. Begin by "
        "writing down a description of your activities and then figure out how much time you devote to each "
        "activity. Examples of things you might describe include eating dinner, studying for an exam, working, "
        "talking to friends, watching TV, etc. If you can, please write your description so that someone reading "
        "this might be able to reconstruct the way in which you, specifically, spend your evenings.",
    };
    c.anger_prompts = {
        "What are the three to five things that fill you with anger? Please write two-three sentences about each "
        "thing that fills you with anger. (Examples of things you might write about include: being treated "
        "unfairly by someone, being insulted or offended, etc.)",
        "Now, we’d like you to describe in more detail the one situation that makes you (or has made you) "
        "experience the most anger. This could be something you are presently experiencing or something from the "
        "past. Begin by writing down what you remember of the anger-inducing event(s) and continue by writing as "
        "detailed a description of the event(s) as is possible. If you can, please write your description so that "
        "someone reading this might even feel anger just from learning about the situation. What is it like to be "
        "in this situation? Why does it make you so feel such anger?",
    };
    c.crt = {
        {"A bat and a ball cost $1.10 in total. The bat costs $1.00 more than the ball. How much does the ball "
         "cost? (in cents)",
         {5.0, 0.05}},
        {"If it takes 5 machines 5 minutes to make 5 widgets, how long would it take 100 machines to make 100 "
         "widgets? (in minutes)",
         {5.0}},
        {"In a lake, there is a patch of lily pads. Every day, the patch doubles in size. If it takes 48 days for "
         "the patch to cover the entire lake, how long would it take for the patch to cover half of the lake? (in "
         "days)",
         {47.0}},
    };
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    auto c = defaults();
    if (j.contains("fixed_solutions")) c.fixed_solutions = j.at("fixed_solutions").get<std::vector<std::string>>();
    if (j.contains("prompts")) {
        const auto& p = j.at("prompts");
        if (p.contains("control")) c.control_prompts = p.at("control").get<std::array<std::string, 2>>();
        if (p.contains("anger")) c.anger_prompts = p.at("anger").get<std::array<std::string, 2>>();
    }
    c.min_elicitation_chars = j.value("min_elicitation_chars", c.min_elicitation_chars);
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        c.thresholds.fast_guess_s = t.value("fast_guess_s", c.thresholds.fast_guess_s);
        c.thresholds.slow_guess_s = t.value("slow_guess_s", c.thresholds.slow_guess_s);
        c.thresholds.idle_s = t.value("idle_s", c.thresholds.idle_s);
        c.thresholds.few_remaining = t.value("few_remaining", c.thresholds.few_remaining);
        c.thresholds.narrowed_remaining = t.value("narrowed_remaining", c.thresholds.narrowed_remaining);
    }
    if (j.contains("crt")) {
        c.crt.clear();
        for (const auto& item : j.at("crt")) {
            c.crt.push_back({item.at("question").get<std::string>(), item.at("accepted").get<std::vector<double>>()});
        }
    }
    c.seed = j.value("seed", c.seed);
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    return from_json(json::parse(in));
}

json ExperimentConfig::to_json() const {
    json crt_items = json::array();
    for (const auto& item : crt) crt_items.push_back({{"question", item.question}, {"accepted", item.accepted}});
    return {
        {"fixed_solutions", fixed_solutions},
        {"prompts", {{"control", control_prompts}, {"anger", anger_prompts}}},
        {"min_elicitation_chars", min_elicitation_chars},
        {"thresholds",
         {{"fast_guess_s", thresholds.fast_guess_s},
          {"slow_guess_s", thresholds.slow_guess_s},
          {"idle_s", thresholds.idle_s},
          {"few_remaining", thresholds.few_remaining},
          {"narrowed_remaining", thresholds.narrowed_remaining}}},
        {"crt", crt_items},
        {"seed", seed},
    };
}

std::optional<double> parse_numeric_answer(std::string_view answer) {
    for (std::size_t i = 0; i < answer.size(); ++i) {
        const char c = answer[i];
        const bool starts_number = (c >= '0' && c <= '9') ||
                                   (c == '.' && i + 1 < answer.size() && answer[i + 1] >= '0' && answer[i + 1] <= '9');
        if (!starts_number) continue;
        std::string digits;
        bool seen_dot = false;
        for (std::size_t k = i; k < answer.size(); ++k) {
            const char d = answer[k];
            if (d >= '0' && d <= '9') {
                digits += d;
            } else if (d == '.' && !seen_dot) {
                seen_dot = true;
                digits += d;
            } else if (d == ',' && k + 1 < answer.size() && answer[k + 1] >= '0' && answer[k + 1] <= '9') {
                continue;  // thousands separator
            } else {
                break;
            }
        }
        return std::strtod(digits.c_str(), nullptr);
    }
    return std::nullopt;
}

int score_crt(const std::vector<CrtItem>& items, const std::vector<std::string>& answers) {
    int score = 0;
    for (std::size_t i = 0; i < items.size() && i < answers.size(); ++i) {
        auto value = parse_numeric_answer(answers[i]);
        if (!value) continue;
        for (double ok : items[i].accepted) {
            if (std::abs(*value - ok) < 1e-9) {
                ++score;
                break;
            }
        }
    }
    return score;
}

}  // namespace wordlelab
