#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wordlelab/agent.hpp"

namespace wordlelab {

struct CrtItem {
    std::string question;
    std::vector<double> accepted;  // any of these numbers scores the item
};

struct ExperimentConfig {
    std::vector<std::string> fixed_solutions;
    std::array<std::string, 2> control_prompts;
    std::array<std::string, 2> anger_prompts;
    std::size_t min_elicitation_chars = 150;
    AgentThresholds thresholds;
    std::vector<CrtItem> crt;
    std::uint64_t seed = 0;

    /// Four fixed solutions, both prompt sets, the 4/60/90 s and 6/101 thresholds, and the three standard CRT items.
    static ExperimentConfig defaults();

    /// Missing keys fall back to defaults().
    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

/// First number in `answer` after stripping units and currency ("5 cents" -> 5, "$0.05" -> 0.05).
std::optional<double> parse_numeric_answer(std::string_view answer);

/// Number of CRT items answered correctly.
int score_crt(const std::vector<CrtItem>& items, const std::vector<std::string>& answers);

}  // namespace wordlelab
