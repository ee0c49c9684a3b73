#pragma once

#include <cstdio>
#include <filesystem>
#include <mutex>
#include <string>

namespace wordlelab {

/// Append-only JSONL file. Each append is flushed (and optionally fsync'd) before returning.
class EventLog {
public:
    EventLog(const std::filesystem::path& path, bool fsync_each_record);
    ~EventLog();

    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    void append(const std::string& line);

private:
    std::mutex mutex_;
    std::FILE* file_ = nullptr;
    bool fsync_;
};

}  // namespace wordlelab
