#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wordlelab/word.hpp"

namespace wordlelab {

/// Which universe a candidate set ranges over: the solution list or every acceptable guess.
enum class EntropyPool { Solutions, Words };

std::string_view to_string(EntropyPool pool) noexcept;
std::optional<EntropyPool> parse_entropy_pool(std::string_view text) noexcept;

class EmptyCandidateSet : public std::runtime_error {
public:
    EmptyCandidateSet() : std::runtime_error("candidate set is empty: feedback history is inconsistent") {}
};

/// Bitset over a pool's index space with a cached population count.
class CandidateSet {
public:
    CandidateSet() = default;

    static CandidateSet full(EntropyPool pool, std::size_t universe);
    static CandidateSet none(EntropyPool pool, std::size_t universe);
    static CandidateSet of(EntropyPool pool, std::size_t universe, std::span<const std::uint32_t> members);

    EntropyPool pool() const noexcept { return pool_; }
    std::size_t universe() const noexcept { return universe_; }
    std::size_t count() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    bool contains(std::uint32_t index) const noexcept;
    std::vector<std::uint32_t> indices() const;

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            auto word = bits_[w];
            while (word != 0) {
                auto bit = static_cast<std::size_t>(__builtin_ctzll(word));
                f(static_cast<std::uint32_t>(w * 64 + bit));
                word &= word - 1;
            }
        }
    }

    friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

private:
    friend class EntropyEngine;
    void insert(std::uint32_t index) noexcept;

    EntropyPool pool_ = EntropyPool::Solutions;
    std::size_t universe_ = 0;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> bits_;
};

/**
 * @brief Dense guess-major matrix of pattern codes, one byte per (guess, solution) pair.
 *
 * For the canonical pools this is 12,972 x 2,315 bytes (~30 MB). The optional
 * disk cache is the raw matrix preceded by a 16-byte header:
 *
 *   bytes  0..3   magic "WLFT"
 *   bytes  4..7   low 32 bits of the guess pool digest (little endian)
 *   bytes  8..11  low 32 bits of the solution pool digest (little endian)
 *   bytes 12..15  format version (little endian, currently 1)
 */
class FeedbackTable {
public:
    FeedbackTable() = default;

    static FeedbackTable build(const WordPool& guesses, const WordPool& solutions);

    /// Reads `cache` when its header matches both pools, otherwise builds and writes it.
    static FeedbackTable load_or_build(const WordPool& guesses, const WordPool& solutions,
                                       const std::filesystem::path& cache);

    std::size_t guess_count() const noexcept { return rows_; }
    std::size_t solution_count() const noexcept { return cols_; }

    std::uint8_t code(std::size_t guess, std::size_t solution) const noexcept { return data_[guess * cols_ + solution]; }
    std::span<const std::uint8_t> row(std::size_t guess) const noexcept { return {data_.data() + guess * cols_, cols_}; }

    void save(const std::filesystem::path& path, const WordPool& guesses, const WordPool& solutions) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> data_;
};

struct EntropyObservation {
    int guess_index;  // 1-based
    std::size_t remaining;
    double bits;
    EntropyPool pool;
};

struct HistoryEntry {
    Word guess;
    FeedbackPattern pattern;
};

using PatternCounts = std::array<std::uint32_t, FeedbackPattern::kPatternCount>;

/// log2 of the candidate count. Throws EmptyCandidateSet.
double bits_remaining(const CandidateSet& candidates);

/**
 * @brief Candidate tracking over the two pools.
 *
 * Filtering over the Solutions pool reads the precomputed table; the Words pool
 * is scored on the fly because a guess-by-guess table would be ~170 MB.
 */
class EntropyEngine {
public:
    EntropyEngine(WordPool guesses, WordPool solutions);
    EntropyEngine(WordPool guesses, WordPool solutions, FeedbackTable table);

    const WordPool& guesses() const noexcept { return guesses_; }
    const WordPool& solutions() const noexcept { return solutions_; }
    const FeedbackTable& table() const noexcept { return table_; }
    const WordPool& pool(EntropyPool kind) const noexcept {
        return kind == EntropyPool::Solutions ? solutions_ : guesses_;
    }

    CandidateSet full(EntropyPool kind) const;

    /// Members c of `candidates` with feedback(guess, c) == pattern.
    CandidateSet filter(const CandidateSet& candidates, const Word& guess, FeedbackPattern pattern) const;

    /// Candidate set after each prefix of `history`; observation k covers guesses 1..k.
    std::vector<EntropyObservation> trajectory(std::span<const HistoryEntry> history, EntropyPool kind) const;

    /// Histogram of feedback codes `guess` would produce against each candidate.
    PatternCounts pattern_counts(const CandidateSet& candidates, const Word& guess) const;

    /// Mean posterior set size under a uniform prior over `candidates`.
    double expected_remaining(const CandidateSet& candidates, const Word& guess) const;

    /// Pattern code of guess-pool word `guess` against member `index` of `kind`'s pool.
    std::uint8_t code_against(std::uint32_t guess, EntropyPool kind, std::uint32_t index) const noexcept;

private:
    WordPool guesses_;
    WordPool solutions_;
    FeedbackTable table_;
};

}  // namespace wordlelab
