// session_store.hpp
//
// In-memory store of sequential-search sessions with an optional JSON-lines
// event log. Each line is one event:
//   {"event":"created","session_id":..,"model":{..},"cost":{..},"at_ms":..}
//   {"event":"observation","session_id":..,"measured_worth":..,"at_ms":..}
// Replaying the log rebuilds an identical store.
#pragma once
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "optistop/sequential_advisor.hpp"

namespace optistop {

class UnknownSessionError : public std::out_of_range {
public:
    explicit UnknownSessionError(const std::string& id) : std::out_of_range("unknown session '" + id + "'") {}
};

class SessionStore {
public:
    using Clock = std::function<std::int64_t()>;

    // With a snapshot path, existing events are replayed and new events are
    // appended to the same file.
    explicit SessionStore(std::optional<std::filesystem::path> snapshot = std::nullopt, Clock clock = {});

    SessionStore(const SessionStore&) = delete;
    SessionStore& operator=(const SessionStore&) = delete;

    std::string create(const NoisyModel& model, const CostModel& cost);
    // Records a raw measurement; updates to one session are serialized.
    SessionState observe(const std::string& id, double measured_worth);
    SessionState get(const std::string& id) const;
    std::vector<std::string> ids() const;
    std::size_t size() const;

    const std::optional<std::filesystem::path>& snapshot_path() const noexcept { return snapshot_; }

private:
    struct Entry {
        std::mutex mutex;
        SessionState state;
        explicit Entry(SessionState s) : state(std::move(s)) {}
    };

    std::shared_ptr<Entry> find(const std::string& id) const;
    void replay(const std::filesystem::path& path);
    void append_event(const std::string& line);
    std::string new_id();

    std::optional<std::filesystem::path> snapshot_;
    Clock clock_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::mutex file_mutex_;
    std::mutex id_mutex_;
    std::mt19937_64 id_rng_;
};

// Milliseconds since the Unix epoch.
std::int64_t now_ms();

}  // namespace optistop
