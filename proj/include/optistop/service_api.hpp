// service_api.hpp
//
// Transport-independent request handling for the JSON service. All routes
// live under /v1:
//
//   POST /v1/plan                       {"model":{..}|"dist":{..}, "cost":{..}, "n_max"?}
//   GET  /v1/rankits?family=..&max_n=.. (+ mean, spread, lo, hi, alpha)
//   POST /v1/sessions                   {"model":{..}, "cost":{..}}  -> {"session_id"}
//   POST /v1/sessions/{id}/observations {"measured_worth":..}        -> Advice
//   GET  /v1/sessions/{id}                                           -> summary + Advice
//   POST /v1/advice                     {"model","cost","measured_worth"} -> Advice (what-if, stateless)
//   POST /v1/simulate                   {"target":..., ...}          -> McEstimate
//
// Errors are JSON objects: {"error":"invalid_parameter","field":..,"message":..},
// {"error":"unknown_session"}, {"error":"divergent_gain"}, {"error":"invalid_json"},
// {"error":"not_found"}.
#pragma once
#include <map>
#include <string>

#include "optistop/json_io.hpp"
#include "optistop/session_store.hpp"

namespace optistop {

struct ApiRequest {
    std::string method;
    std::string path;
    std::string body;
    std::map<std::string, std::string> query;
};

struct ApiResponse {
    int status = 200;
    Json body;
};

struct ServiceLimits {
    int max_n = 100000;
    std::int64_t max_trials = 100'000'000;
};

class ServiceApi {
public:
    explicit ServiceApi(SessionStore& store, ServiceLimits limits = {}) : store_(store), limits_(limits) {}

    ApiResponse handle(const ApiRequest& request) const;

private:
    ApiResponse route(const ApiRequest& request) const;
    ApiResponse plan(const Json& body) const;
    ApiResponse rankit_table(const std::map<std::string, std::string>& query) const;
    ApiResponse create_session(const Json& body) const;
    ApiResponse add_observation(const std::string& id, const Json& body) const;
    ApiResponse session_summary(const std::string& id) const;
    ApiResponse what_if(const Json& body) const;
    ApiResponse simulate(const Json& body) const;

    SessionStore& store_;
    ServiceLimits limits_;
};

// Summary used by GET /v1/sessions/{id}.
Json session_to_json(const std::string& id, const SessionState& session);

}  // namespace optistop
