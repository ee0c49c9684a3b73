#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace wordlelab {

inline constexpr std::size_t kWordLength = 5;
inline constexpr int kMaxGuesses = 6;

inline constexpr std::size_t kCanonicalGuessCount = 12972;
inline constexpr std::size_t kCanonicalSolutionCount = 2315;

/// A 5-letter lowercase word. Construction is the only place the invariant is checked.
class Word {
public:
    /// Accepts exactly five characters in [a-z]; no normalization.
    static std::optional<Word> parse(std::string_view text) noexcept;

    /// Throws std::invalid_argument when `text` is not a valid word. Handy for literals.
    static Word from(std::string_view text);

    char operator[](std::size_t i) const noexcept { return letters_[i]; }
    std::string_view view() const noexcept { return {letters_.data(), letters_.size()}; }
    std::string str() const { return std::string(view()); }

    /// 25-bit packed form (5 bits per letter), used as a hash key.
    std::uint32_t packed() const noexcept;

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    Word() = default;
    std::array<char, kWordLength> letters_{};
};

enum class Mark : std::uint8_t { Absent = 0, Present = 1, Correct = 2 };

/**
 * @brief Per-position feedback for one guess.
 *
 * Encoded as a base-3 integer with position 0 least significant and
 * Absent=0, Present=1, Correct=2. Export files and the feedback table rely on
 * this exact encoding.
 */
class FeedbackPattern {
public:
    static constexpr int kPatternCount = 243;
    static constexpr std::uint8_t kAllCorrect = 242;

    constexpr FeedbackPattern() = default;
    explicit FeedbackPattern(const std::array<Mark, kWordLength>& cells) noexcept;

    /// Throws std::out_of_range for codes >= 243.
    static FeedbackPattern from_code(int code);

    constexpr std::uint8_t code() const noexcept { return code_; }
    Mark cell(std::size_t i) const noexcept;
    std::array<Mark, kWordLength> cells() const noexcept;
    constexpr bool all_correct() const noexcept { return code_ == kAllCorrect; }

    /// "CPAAA" style rendering, position 0 first.
    std::string to_string() const;

    friend constexpr bool operator==(FeedbackPattern, FeedbackPattern) = default;

private:
    std::uint8_t code_ = 0;
};

/// Pattern code for `guess` scored against `solution` (two-pass letter budget semantics).
std::uint8_t feedback_code(const Word& guess, const Word& solution) noexcept;

inline FeedbackPattern feedback(const Word& guess, const Word& solution) noexcept {
    return FeedbackPattern::from_code(feedback_code(guess, solution));
}

enum class PoolKind { Guesses, Solutions };

class PoolError : public std::runtime_error {
public:
    enum class Kind { FileNotFound, MalformedEntry, DuplicateEntry, CanonicalMismatch };

    PoolError(Kind kind, std::size_t line, const std::string& what)
        : std::runtime_error(what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    /// 1-based line number, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// Ordered, duplicate-free list of words with O(1) index lookup.
class WordPool {
public:
    WordPool() = default;

    /// Throws PoolError{DuplicateEntry} on repeated words.
    static WordPool from_words(PoolKind kind, std::vector<Word> words);

    /// Newline-delimited file, one word per line. Order is preserved.
    static WordPool load(const std::filesystem::path& path, PoolKind kind);

    PoolKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const Word& operator[](std::size_t i) const noexcept { return words_[i]; }
    std::span<const Word> words() const noexcept { return words_; }

    std::optional<std::uint32_t> index_of(const Word& w) const noexcept;
    bool contains(const Word& w) const noexcept { return index_of(w).has_value(); }
    bool is_subset_of(const WordPool& other) const noexcept;

    /// FNV-1a over the newline-joined contents; identifies a pool for cache keys.
    std::uint64_t digest() const noexcept;

private:
    PoolKind kind_ = PoolKind::Guesses;
    std::vector<Word> words_;
    std::unordered_map<std::uint32_t, std::uint32_t> index_;
};

struct CanonicalPools {
    WordPool guesses;
    WordPool solutions;
};

/// Loads guesses.txt and solutions.txt from `dir`, enforcing the canonical sizes and Solutions ⊆ Guesses.
CanonicalPools load_canonical_pools(const std::filesystem::path& dir);

enum class InvalidReason { NotFiveLetters, NonAlphabetic, NotInWordList };

std::string_view to_string(InvalidReason reason) noexcept;

struct InvalidGuess {
    InvalidReason reason;
    std::string normalized;
};

using GuessValidation = std::variant<Word, InvalidGuess>;

/// Trims whitespace and lowercases ASCII before checking length, alphabet and pool membership.
GuessValidation validate_guess(std::string_view raw, const WordPool& pool);

}  // namespace wordlelab
