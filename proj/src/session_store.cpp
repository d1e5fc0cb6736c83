#include "optistop/session_store.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include "optistop/errors.hpp"
#include "optistop/json_io.hpp"

namespace optistop {

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

SessionStore::SessionStore(std::optional<std::filesystem::path> snapshot, Clock clock)
    : snapshot_(std::move(snapshot)), clock_(clock ? std::move(clock) : Clock(now_ms)) {
    std::random_device rd;
    id_rng_.seed((std::uint64_t{rd()} << 32) ^ rd());
    if (snapshot_ && std::filesystem::exists(*snapshot_)) replay(*snapshot_);
}

std::string SessionStore::new_id() {
    std::lock_guard lock(id_mutex_);
    for (;;) {
        char buf[33];
        std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(id_rng_()),
                      static_cast<unsigned long long>(id_rng_()));
        std::string id(buf);
        std::shared_lock map_lock(map_mutex_);
        if (!sessions_.contains(id)) return id;
    }
}

std::string SessionStore::create(const NoisyModel& model, const CostModel& cost) {
    const std::string id = new_id();
    const std::int64_t at = clock_();
    auto entry = std::make_shared<Entry>(SessionState(model, cost, at));
    {
        std::unique_lock lock(map_mutex_);
        sessions_.emplace(id, entry);
    }
    Json event;
    event["event"] = "created";
    event["session_id"] = id;
    event["model"] = to_json(model);
    event["cost"] = to_json(cost);
    event["at_ms"] = at;
    append_event(event.dump());
    return id;
}

SessionState SessionStore::observe(const std::string& id, double measured_worth) {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    const std::int64_t at = clock_();
    SessionState next = record_observation(entry->state, measured_worth, at);
    Json event;
    event["event"] = "observation";
    event["session_id"] = id;
    event["measured_worth"] = measured_worth;
    event["at_ms"] = at;
    append_event(event.dump());
    entry->state = next;
    return next;
}

SessionState SessionStore::get(const std::string& id) const {
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return entry->state;
}

std::vector<std::string> SessionStore::ids() const {
    std::shared_lock lock(map_mutex_);
    std::vector<std::string> out;
    out.reserve(sessions_.size());
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(map_mutex_);
    return sessions_.size();
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSessionError(id);
    return it->second;
}

void SessionStore::append_event(const std::string& line) {
    if (!snapshot_) return;
    std::lock_guard lock(file_mutex_);
    std::ofstream out(*snapshot_, std::ios::app | std::ios::binary);
    if (!out) throw std::runtime_error("cannot append to snapshot " + snapshot_->string());
    out << line << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed writing snapshot " + snapshot_->string());
}

void SessionStore::replay(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read snapshot " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Json event;
        try {
            event = Json::parse(line);
        } catch (const Json::parse_error&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed event");
        }
        const auto kind = event.value("event", std::string());
        const auto id = event.value("session_id", std::string());
        const auto at = event.value("at_ms", std::int64_t{0});
        if (kind == "created") {
            SessionState state(noisy_model_from_json(event.at("model")), cost_model_from_json(event.at("cost")), at);
            sessions_.insert_or_assign(id, std::make_shared<Entry>(std::move(state)));
        } else if (kind == "observation") {
            auto it = sessions_.find(id);
            if (it == sessions_.end())
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": observation for unknown session");
            it->second->state =
                record_observation(it->second->state, require_number(event, "measured_worth"), at);
        } else {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": unknown event '" + kind + "'");
        }
    }
}

}  // namespace optistop
