#include "wordlelab/word.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace wordlelab {

namespace {

constexpr std::array<std::uint8_t, kWordLength> kPow3 = {1, 3, 9, 27, 81};

bool is_lower_alpha(char c) noexcept { return c >= 'a' && c <= 'z'; }

}  // namespace

std::optional<Word> Word::parse(std::string_view text) noexcept {
    if (text.size() != kWordLength) return std::nullopt;
    Word w;
    for (std::size_t i = 0; i < kWordLength; ++i) {
        if (!is_lower_alpha(text[i])) return std::nullopt;
        w.letters_[i] = text[i];
    }
    return w;
}

Word Word::from(std::string_view text) {
    auto w = parse(text);
    if (!w) throw std::invalid_argument("not a 5-letter lowercase word: '" + std::string(text) + "'");
    return *w;
}

std::uint32_t Word::packed() const noexcept {
    std::uint32_t v = 0;
    for (char c : letters_) v = (v << 5) | static_cast<std::uint32_t>(c - 'a');
    return v;
}

FeedbackPattern::FeedbackPattern(const std::array<Mark, kWordLength>& cells) noexcept {
    int code = 0;
    for (std::size_t i = 0; i < kWordLength; ++i) code += static_cast<int>(cells[i]) * kPow3[i];
    code_ = static_cast<std::uint8_t>(code);
}

FeedbackPattern FeedbackPattern::from_code(int code) {
    if (code < 0 || code >= kPatternCount) throw std::out_of_range("pattern code out of range");
    FeedbackPattern p;
    p.code_ = static_cast<std::uint8_t>(code);
    return p;
}

Mark FeedbackPattern::cell(std::size_t i) const noexcept {
    return static_cast<Mark>((code_ / kPow3[i]) % 3);
}

std::array<Mark, kWordLength> FeedbackPattern::cells() const noexcept {
    std::array<Mark, kWordLength> out{};
    for (std::size_t i = 0; i < kWordLength; ++i) out[i] = cell(i);
    return out;
}

std::string FeedbackPattern::to_string() const {
    std::string s(kWordLength, 'A');
    for (std::size_t i = 0; i < kWordLength; ++i) {
        switch (cell(i)) {
            case Mark::Absent: s[i] = 'A'; break;
            case Mark::Present: s[i] = 'P'; break;
            case Mark::Correct: s[i] = 'C'; break;
        }
    }
    return s;
}

std::uint8_t feedback_code(const Word& guess, const Word& solution) noexcept {
    // Letters of the solution not matched in place form the budget for Present marks.
    std::array<std::uint8_t, 26> budget{};
    std::array<std::uint8_t, kWordLength> marks{};
    for (std::size_t i = 0; i < kWordLength; ++i) {
        if (guess[i] == solution[i]) {
            marks[i] = 2;
        } else {
            ++budget[solution[i] - 'a'];
        }
    }
    int code = 0;
    for (std::size_t i = 0; i < kWordLength; ++i) {
        if (marks[i] == 0) {
            auto& left = budget[guess[i] - 'a'];
            if (left > 0) {
                marks[i] = 1;
                --left;
            }
        }
        code += marks[i] * kPow3[i];
    }
    return static_cast<std::uint8_t>(code);
}

WordPool WordPool::from_words(PoolKind kind, std::vector<Word> words) {
    WordPool pool;
    pool.kind_ = kind;
    pool.index_.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto [it, inserted] = pool.index_.emplace(words[i].packed(), static_cast<std::uint32_t>(i));
        if (!inserted) {
            throw PoolError(PoolError::Kind::DuplicateEntry, i + 1,
                            "duplicate word '" + words[i].str() + "' at entry " + std::to_string(i + 1));
        }
    }
    pool.words_ = std::move(words);
    return pool;
}

WordPool WordPool::load(const std::filesystem::path& path, PoolKind kind) {
    std::ifstream in(path);
    if (!in) throw PoolError(PoolError::Kind::FileNotFound, 0, "cannot open word pool " + path.string());

    std::vector<Word> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto w = Word::parse(line);
        if (!w) {
            throw PoolError(PoolError::Kind::MalformedEntry, line_no,
                            path.string() + ":" + std::to_string(line_no) + ": malformed entry '" + line + "'");
        }
        words.push_back(*w);
    }
    try {
        return from_words(kind, std::move(words));
    } catch (const PoolError& e) {
        throw PoolError(e.kind(), e.line(), path.string() + ":" + std::to_string(e.line()) + ": " + e.what());
    }
}

std::optional<std::uint32_t> WordPool::index_of(const Word& w) const noexcept {
    auto it = index_.find(w.packed());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool WordPool::is_subset_of(const WordPool& other) const noexcept {
    return std::all_of(words_.begin(), words_.end(), [&](const Word& w) { return other.contains(w); });
}

std::uint64_t WordPool::digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (const auto& w : words_) {
        for (char c : w.view()) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

CanonicalPools load_canonical_pools(const std::filesystem::path& dir) {
    CanonicalPools pools{WordPool::load(dir / "guesses.txt", PoolKind::Guesses),
                         WordPool::load(dir / "solutions.txt", PoolKind::Solutions)};
    if (pools.guesses.size() != kCanonicalGuessCount || pools.solutions.size() != kCanonicalSolutionCount) {
        throw PoolError(PoolError::Kind::CanonicalMismatch, 0,
                        "canonical pools must hold 12972 guesses and 2315 solutions, got " +
                            std::to_string(pools.guesses.size()) + " and " + std::to_string(pools.solutions.size()));
    }
    if (!pools.solutions.is_subset_of(pools.guesses)) {
        throw PoolError(PoolError::Kind::CanonicalMismatch, 0, "solution pool is not a subset of the guess pool");
    }
    return pools;
}

std::string_view to_string(InvalidReason reason) noexcept {
    switch (reason) {
        case InvalidReason::NotFiveLetters: return "not_five_letters";
        case InvalidReason::NonAlphabetic: return "non_alphabetic";
        case InvalidReason::NotInWordList: return "not_in_word_list";
    }
    return "unknown";
}

GuessValidation validate_guess(std::string_view raw, const WordPool& pool) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!raw.empty() && is_space(raw.front())) raw.remove_prefix(1);
    while (!raw.empty() && is_space(raw.back())) raw.remove_suffix(1);

    std::string normalized(raw);
    for (auto& c : normalized) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }

    if (normalized.size() != kWordLength) return InvalidGuess{InvalidReason::NotFiveLetters, normalized};
    if (!std::all_of(normalized.begin(), normalized.end(), is_lower_alpha)) {
        return InvalidGuess{InvalidReason::NonAlphabetic, normalized};
    }
    auto word = Word::from(normalized);
    if (!pool.contains(word)) return InvalidGuess{InvalidReason::NotInWordList, normalized};
    return word;
}

}  // namespace wordlelab
