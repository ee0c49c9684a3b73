#include "event_log.hpp"

#include <stdexcept>

#include <unistd.h>

namespace wordlelab {

EventLog::EventLog(const std::filesystem::path& path, bool fsync_each_record) : fsync_(fsync_each_record) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    file_ = std::fopen(path.c_str(), "ab");
    if (file_ == nullptr) throw std::runtime_error("cannot open event log " + path.string());
}

EventLog::~EventLog() {
    if (file_ != nullptr) std::fclose(file_);
}

void EventLog::append(const std::string& line) {
    std::lock_guard lock(mutex_);
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fputc('\n', file_) == EOF ||
        std::fflush(file_) != 0) {
        throw std::runtime_error("event log write failed");
    }
    if (fsync_) ::fsync(::fileno(file_));
}

}  // namespace wordlelab
