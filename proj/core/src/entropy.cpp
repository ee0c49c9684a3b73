#include "wordlelab/entropy.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace wordlelab {

namespace {

constexpr std::array<char, 4> kTableMagic = {'W', 'L', 'F', 'T'};
constexpr std::uint32_t kTableVersion = 1;

void put_u32(std::array<char, 16>& buf, std::size_t offset, std::uint32_t v) {
    for (std::size_t i = 0; i < 4; ++i) buf[offset + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(const std::array<char, 16>& buf, std::size_t offset) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[offset + i])) << (8 * i);
    return v;
}

std::array<char, 16> table_header(const WordPool& guesses, const WordPool& solutions) {
    std::array<char, 16> h{};
    std::memcpy(h.data(), kTableMagic.data(), kTableMagic.size());
    put_u32(h, 4, static_cast<std::uint32_t>(guesses.digest()));
    put_u32(h, 8, static_cast<std::uint32_t>(solutions.digest()));
    put_u32(h, 12, kTableVersion);
    return h;
}

}  // namespace

std::string_view to_string(EntropyPool pool) noexcept {
    return pool == EntropyPool::Solutions ? "solutions" : "words";
}

std::optional<EntropyPool> parse_entropy_pool(std::string_view text) noexcept {
    if (text == "solutions") return EntropyPool::Solutions;
    if (text == "words") return EntropyPool::Words;
    return std::nullopt;
}

CandidateSet CandidateSet::none(EntropyPool pool, std::size_t universe) {
    CandidateSet s;
    s.pool_ = pool;
    s.universe_ = universe;
    s.bits_.assign((universe + 63) / 64, 0);
    return s;
}

CandidateSet CandidateSet::full(EntropyPool pool, std::size_t universe) {
    auto s = none(pool, universe);
    for (auto& w : s.bits_) w = ~std::uint64_t{0};
    if (universe % 64 != 0) s.bits_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
    s.count_ = universe;
    return s;
}

CandidateSet CandidateSet::of(EntropyPool pool, std::size_t universe, std::span<const std::uint32_t> members) {
    auto s = none(pool, universe);
    for (auto m : members) {
        if (m >= universe) throw std::out_of_range("candidate index outside pool");
        s.insert(m);
    }
    return s;
}

bool CandidateSet::contains(std::uint32_t index) const noexcept {
    if (index >= universe_) return false;
    return (bits_[index / 64] >> (index % 64)) & 1U;
}

void CandidateSet::insert(std::uint32_t index) noexcept {
    auto& word = bits_[index / 64];
    auto mask = std::uint64_t{1} << (index % 64);
    if ((word & mask) == 0) {
        word |= mask;
        ++count_;
    }
}

std::vector<std::uint32_t> CandidateSet::indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count_);
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
}

FeedbackTable FeedbackTable::build(const WordPool& guesses, const WordPool& solutions) {
    FeedbackTable t;
    t.rows_ = guesses.size();
    t.cols_ = solutions.size();
    t.data_.resize(t.rows_ * t.cols_);
    for (std::size_t g = 0; g < t.rows_; ++g) {
        auto* row = t.data_.data() + g * t.cols_;
        const auto& guess = guesses[g];
        for (std::size_t s = 0; s < t.cols_; ++s) row[s] = feedback_code(guess, solutions[s]);
    }
    return t;
}

void FeedbackTable::save(const std::filesystem::path& path, const WordPool& guesses, const WordPool& solutions) const {
    // Unique temp name so concurrent writers never share a file; rename is atomic.
    auto tmp = path;
    tmp += ".tmp." + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write feedback table cache " + tmp.string());
        auto header = table_header(guesses, solutions);
        out.write(header.data(), header.size());
        out.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

FeedbackTable FeedbackTable::load_or_build(const WordPool& guesses, const WordPool& solutions,
                                           const std::filesystem::path& cache) {
    const auto expected = table_header(guesses, solutions);
    const auto payload = guesses.size() * solutions.size();
    std::error_code ec;
    if (std::filesystem::file_size(cache, ec) == payload + expected.size() && !ec) {
        std::ifstream in(cache, std::ios::binary);
        std::array<char, 16> header{};
        in.read(header.data(), header.size());
        if (in && header == expected && get_u32(header, 12) == kTableVersion) {
            FeedbackTable t;
            t.rows_ = guesses.size();
            t.cols_ = solutions.size();
            t.data_.resize(payload);
            in.read(reinterpret_cast<char*>(t.data_.data()), static_cast<std::streamsize>(payload));
            if (in) return t;
        }
    }
    auto t = build(guesses, solutions);
    if (!cache.empty()) {
        if (cache.has_parent_path()) std::filesystem::create_directories(cache.parent_path(), ec);
        // An unwritable cache location only costs a rebuild next time.
        try {
            t.save(cache, guesses, solutions);
        } catch (const std::exception&) {
        }
    }
    return t;
}

double bits_remaining(const CandidateSet& candidates) {
    if (candidates.empty()) throw EmptyCandidateSet();
    return std::log2(static_cast<double>(candidates.count()));
}

EntropyEngine::EntropyEngine(WordPool guesses, WordPool solutions)
    : guesses_(std::move(guesses)), solutions_(std::move(solutions)) {
    table_ = FeedbackTable::build(guesses_, solutions_);
}

EntropyEngine::EntropyEngine(WordPool guesses, WordPool solutions, FeedbackTable table)
    : guesses_(std::move(guesses)), solutions_(std::move(solutions)), table_(std::move(table)) {
    if (table_.guess_count() != guesses_.size() || table_.solution_count() != solutions_.size()) {
        throw std::invalid_argument("feedback table dimensions do not match the pools");
    }
}

CandidateSet EntropyEngine::full(EntropyPool kind) const {
    return CandidateSet::full(kind, pool(kind).size());
}

std::uint8_t EntropyEngine::code_against(std::uint32_t guess, EntropyPool kind, std::uint32_t index) const noexcept {
    if (kind == EntropyPool::Solutions) return table_.code(guess, index);
    return feedback_code(guesses_[guess], guesses_[index]);
}

CandidateSet EntropyEngine::filter(const CandidateSet& candidates, const Word& guess, FeedbackPattern pattern) const {
    auto out = CandidateSet::none(candidates.pool(), candidates.universe());
    const auto& universe = pool(candidates.pool());
    const auto code = pattern.code();
    auto guess_index = guesses_.index_of(guess);
    if (candidates.pool() == EntropyPool::Solutions && guess_index) {
        auto row = table_.row(*guess_index);
        candidates.for_each([&](std::uint32_t c) {
            if (row[c] == code) out.insert(c);
        });
    } else {
        candidates.for_each([&](std::uint32_t c) {
            if (feedback_code(guess, universe[c]) == code) out.insert(c);
        });
    }
    return out;
}

std::vector<EntropyObservation> EntropyEngine::trajectory(std::span<const HistoryEntry> history,
                                                          EntropyPool kind) const {
    std::vector<EntropyObservation> out;
    out.reserve(history.size());
    auto candidates = full(kind);
    int k = 0;
    for (const auto& step : history) {
        candidates = filter(candidates, step.guess, step.pattern);
        out.push_back({++k, candidates.count(), bits_remaining(candidates), kind});
    }
    return out;
}

PatternCounts EntropyEngine::pattern_counts(const CandidateSet& candidates, const Word& guess) const {
    PatternCounts counts{};
    const auto& universe = pool(candidates.pool());
    auto guess_index = guesses_.index_of(guess);
    if (candidates.pool() == EntropyPool::Solutions && guess_index) {
        auto row = table_.row(*guess_index);
        candidates.for_each([&](std::uint32_t c) { ++counts[row[c]]; });
    } else {
        candidates.for_each([&](std::uint32_t c) { ++counts[feedback_code(guess, universe[c])]; });
    }
    return counts;
}

double EntropyEngine::expected_remaining(const CandidateSet& candidates, const Word& guess) const {
    if (candidates.empty()) throw EmptyCandidateSet();
    // Each candidate lands in the bucket of its own pattern, so the mean bucket size is sum(n^2)/N.
    auto counts = pattern_counts(candidates, guess);
    double sum_sq = 0.0;
    for (auto n : counts) sum_sq += static_cast<double>(n) * static_cast<double>(n);
    return sum_sq / static_cast<double>(candidates.count());
}

}  // namespace wordlelab
