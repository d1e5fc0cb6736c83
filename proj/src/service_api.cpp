#include "optistop/service_api.hpp"

#include <cmath>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "optistop/errors.hpp"

namespace optistop {

namespace {

ApiResponse ok(Json body, int status = 200) { return {status, std::move(body)}; }

ApiResponse error(int status, std::string code) { return {status, Json{{"error", std::move(code)}}}; }

ApiResponse invalid(const std::string& field, const std::string& message) {
    Json body;
    body["error"] = "invalid_parameter";
    body["field"] = field.empty() ? Json(nullptr) : Json(field);
    body["message"] = message;
    return {400, std::move(body)};
}

std::int64_t require_int(const Json& j, const char* field, std::int64_t lo, std::int64_t hi) {
    const double v = require_number(j, field);
    if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi))
        throw ValidationError(field, std::string("field '") + field + "' must be an integer in [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<std::int64_t>(v);
}

std::int64_t optional_int(const Json& j, const char* field, std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
    if (!j.is_object() || !j.contains(field) || j.at(field).is_null()) return fallback;
    return require_int(j, field, lo, hi);
}

std::uint64_t optional_seed(const Json& j) {
    if (!j.contains("seed") || j.at("seed").is_null()) return 1;
    const Json& s = j.at("seed");
    if (s.is_number_unsigned()) return s.get<std::uint64_t>();
    if (s.is_number_integer() && s.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(s.get<std::int64_t>());
    throw ValidationError("seed", "seed must be a non-negative integer");
}

const Json& require_object(const Json& j, const char* field) {
    if (!j.is_object() || !j.contains(field) || !j.at(field).is_object())
        throw ValidationError(field, std::string("missing object '") + field + "'");
    return j.at(field);
}

double query_number(const std::map<std::string, std::string>& query, const std::string& key,
                    std::optional<double> fallback = std::nullopt) {
    auto it = query.find(key);
    if (it == query.end()) {
        if (fallback) return *fallback;
        throw ValidationError(key, "missing query parameter '" + key + "'");
    }
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (it->second.empty() || end == nullptr || *end != '\0' || !std::isfinite(v))
        throw ValidationError(key, "query parameter '" + key + "' must be a number");
    return v;
}

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    while (!path.empty()) {
        if (path.front() == '/') {
            path.remove_prefix(1);
            continue;
        }
        const auto slash = path.find('/');
        parts.push_back(path.substr(0, slash));
        if (slash == std::string_view::npos) break;
        path.remove_prefix(slash);
    }
    return parts;
}

}  // namespace

Json session_to_json(const std::string& id, const SessionState& session) {
    Json j;
    j["session_id"] = id;
    j["model"] = to_json(session.model());
    j["cost"] = to_json(session.cost());
    j["observations"] = session.observations();
    j["best_measured"] = session.best_measured() ? Json(*session.best_measured()) : Json(nullptr);
    j["created_ms"] = session.created_ms();
    j["updated_ms"] = session.updated_ms();
    j["advice"] = to_json(advise(session));
    return j;
}

ApiResponse ServiceApi::handle(const ApiRequest& request) const {
    try {
        return route(request);
    } catch (const Json::exception& e) {
        return {400, Json{{"error", "invalid_json"}, {"message", e.what()}}};
    } catch (const ValidationError& e) {
        return invalid(e.field(), e.what());
    } catch (const DivergenceError& e) {
        return {422, Json{{"error", "divergent_gain"}, {"message", e.what()}}};
    } catch (const UnknownSessionError&) {
        return error(404, "unknown_session");
    } catch (const DomainError& e) {
        return invalid("", e.what());
    } catch (const DegenerateModelError& e) {
        return invalid("b", e.what());
    } catch (const std::exception& e) {
        return {500, Json{{"error", "internal"}, {"message", e.what()}}};
    }
}

ApiResponse ServiceApi::route(const ApiRequest& req) const {
    const auto parts = split_path(req.path);
    if (parts.empty() || parts[0] != "v1") return error(404, "not_found");
    auto body = [&] { return req.body.empty() ? Json::object() : Json::parse(req.body); };

    if (parts.size() == 2) {
        if (parts[1] == "plan" && req.method == "POST") return plan(body());
        if (parts[1] == "rankits" && req.method == "GET") return rankit_table(req.query);
        if (parts[1] == "sessions" && req.method == "POST") return create_session(body());
        if (parts[1] == "advice" && req.method == "POST") return what_if(body());
        if (parts[1] == "simulate" && req.method == "POST") return simulate(body());
    }
    if (parts.size() >= 3 && parts[1] == "sessions") {
        const std::string id(parts[2]);
        if (parts.size() == 3 && req.method == "GET") return session_summary(id);
        if (parts.size() == 4 && parts[3] == "observations" && req.method == "POST") return add_observation(id, body());
    }
    return error(404, "not_found");
}

ApiResponse ServiceApi::plan(const Json& body) const {
    const auto cost = cost_model_from_json(require_object(body, "cost"));
    const int n_max = static_cast<int>(optional_int(body, "n_max", kDefaultMaxSampleSize, 2, limits_.max_n));
    PlanResult result;
    if (body.contains("dist")) {
        result = optimal_sample_size(distribution_from_json(body.at("dist")), cost, n_max);
    } else {
        result = optimal_sample_size(noisy_model_from_json(require_object(body, "model")), cost, n_max);
    }
    if (result.diverges && !std::isfinite(result.expected_gain))
        return {422, Json{{"error", "divergent_gain"}, {"message", "expected gain grows without bound in n"}}};
    return ok(to_json(result));
}

ApiResponse ServiceApi::rankit_table(const std::map<std::string, std::string>& query) const {
    auto family = query.find("family");
    if (family == query.end()) throw ValidationError("family", "missing query parameter 'family'");
    const double max_n_raw = query_number(query, "max_n");
    if (max_n_raw != std::floor(max_n_raw) || max_n_raw < 1 || max_n_raw > limits_.max_n)
        throw ValidationError("max_n", "max_n must be an integer in [1, " + std::to_string(limits_.max_n) + "]");

    DistributionSpec spec;
    const std::string& f = family->second;
    if (f == "std_normal") {
        spec = DistributionSpec::standard_normal();
    } else if (f == "normal") {
        spec = DistributionSpec::normal(query_number(query, "mean", 0.0), query_number(query, "spread"));
    } else if (f == "uniform") {
        spec = DistributionSpec::uniform(query_number(query, "lo", 0.0), query_number(query, "hi", 1.0));
    } else if (f == "pareto") {
        spec = DistributionSpec::pareto(query_number(query, "alpha"));
    } else {
        spec = distribution_from_json(Json(f));
    }
    return ok(to_json(RankitTable::build(spec, static_cast<int>(max_n_raw))));
}

ApiResponse ServiceApi::create_session(const Json& body) const {
    const auto model = noisy_model_from_json(require_object(body, "model"));
    const auto cost = cost_model_from_json(require_object(body, "cost"));
    return ok(Json{{"session_id", store_.create(model, cost)}}, 201);
}

ApiResponse ServiceApi::add_observation(const std::string& id, const Json& body) const {
    const double measured = require_number(body, "measured_worth");
    return ok(to_json(advise(store_.observe(id, measured))));
}

ApiResponse ServiceApi::session_summary(const std::string& id) const {
    return ok(session_to_json(id, store_.get(id)));
}

ApiResponse ServiceApi::what_if(const Json& body) const {
    const auto model = noisy_model_from_json(require_object(body, "model"));
    const auto cost = cost_model_from_json(require_object(body, "cost"));
    if (!body.contains("measured_worth") || body.at("measured_worth").is_null())
        return ok(to_json(advise(SessionState(model, cost))));
    const double w0 = require_number(body, "measured_worth") - model.worth_mean();
    return ok(to_json(advise_at(model, cost, w0)));
}

ApiResponse ServiceApi::simulate(const Json& body) const {
    if (!body.contains("target") || !body.at("target").is_string())
        throw ValidationError("target", "missing string 'target'");
    const auto target = body.at("target").get<std::string>();
    if (target != "expected_max" && target != "selection" && target != "one_more" && target != "policy")
        throw ValidationError("target", "target must be expected_max, selection, one_more or policy");
    const std::int64_t trials = optional_int(body, "trials", 100000, kMinTrials, limits_.max_trials);
    const std::uint64_t seed = optional_seed(body);
    const auto workers = static_cast<unsigned>(optional_int(body, "workers", 0, 0, 256));

    if (target == "expected_max") {
        const auto spec = distribution_from_json(body.at("dist"));
        const int n = static_cast<int>(require_int(body, "n", 1, limits_.max_n));
        return ok(to_json(simulate_expected_max(spec, n, trials, seed, workers)));
    }
    const auto model = noisy_model_from_json(require_object(body, "model"));
    if (target == "selection") {
        const int n = static_cast<int>(require_int(body, "n", 1, limits_.max_n));
        return ok(to_json(simulate_selection(model, n, trials, seed, workers)));
    }
    if (target == "one_more") {
        return ok(to_json(simulate_one_more(model, require_number(body, "w0"), trials, seed, workers)));
    }
    const auto cost = cost_model_from_json(require_object(body, "cost"));
    const Json& p = require_object(body, "policy");
    const std::string kind = p.value("kind", std::string());
    Policy policy;
    if (kind == "planned") {
        policy = PlannedN{static_cast<int>(require_int(p, "n", 1, limits_.max_n))};
    } else if (kind == "lookahead") {
        policy = OneMoreLookahead{static_cast<int>(require_int(p, "max_n", 1, limits_.max_n))};
    } else {
        throw ValidationError("policy", "policy.kind must be 'planned' or 'lookahead'");
    }
    return ok(to_json(simulate_policy(model, cost, policy, trials, seed, workers)));
}

}  // namespace optistop
