#pragma once

#include "pyreline/engine.hpp"
#include "pyreline/errors.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace pyreline {

enum class HumanRole { Builder, Arsonist, None };

/// An engine error plus structured detail for the HTTP body.
class ServiceError : public Error {
public:
    ServiceError(const Error& e, nlohmann::json detail) : Error(e), detail_(std::move(detail)) {}
    const nlohmann::json& detail() const noexcept { return detail_; }

private:
    nlohmann::json detail_;
};

/// HTTP status for an error code: 404 unknown game, 409 out of turn, 400 otherwise.
int http_status(ErrorCode code) noexcept;
/// {code, message, detail}
nlohmann::json error_json(const Error& e);

struct GameSession {
    std::string id;
    HumanRole role = HumanRole::None;
    nlohmann::json request; // normalized create request
    std::unique_ptr<Game> game;
    std::filesystem::path log_path;
    std::ofstream log;
    std::mutex mutex;
};

/// Session registry. Every sub-step is appended to <data_dir>/<id>.jsonl;
/// an empty data_dir keeps sessions in memory only.
class GameService {
public:
    explicit GameService(std::filesystem::path data_dir = {});

    /// Rebuilds sessions from the logs in data_dir. Returns how many loaded;
    /// logs that fail to replay are reported on stderr and skipped.
    std::size_t restore();

    nlohmann::json create(const nlohmann::json& request);
    nlohmann::json state(const std::string& id, Turn since = 0);
    /// {count, edges:[[u,v],...]} from a human Builder or {vertex} from a human Arsonist.
    nlohmann::json move(const std::string& id, const nlohmann::json& body);
    /// {turns}: engine-only games advance this way.
    nlohmann::json step(const std::string& id, const nlohmann::json& body);
    std::string trace_csv(const std::string& id);
    static nlohmann::json presets();

    std::size_t session_count() const;

private:
    std::shared_ptr<GameSession> find(const std::string& id) const;
    std::shared_ptr<GameSession> build(const nlohmann::json& request, const std::string& id) const;
    std::string fresh_id();

    std::filesystem::path data_dir_;
    mutable std::shared_mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<GameSession>> sessions_;
    std::mutex id_mutex_;
    std::uint64_t id_state_;
};

/// Mounts the /api routes (with CORS) on `server`.
void mount_routes(httplib::Server& server, GameService& service);

} // namespace pyreline
