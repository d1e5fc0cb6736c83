#include "optistop/json_io.hpp"

#include <cmath>

#include "optistop/errors.hpp"

namespace optistop {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

}  // namespace

double require_number(const Json& j, const char* field) {
    if (!j.is_object() || !j.contains(field)) throw ValidationError(field, std::string("missing field '") + field + "'");
    const Json& v = j.at(field);
    if (!v.is_number()) throw ValidationError(field, std::string("field '") + field + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(field, std::string("field '") + field + "' must be finite");
    return d;
}

double optional_number(const Json& j, const char* field, double fallback) {
    if (!j.is_object() || !j.contains(field) || j.at(field).is_null()) return fallback;
    return require_number(j, field);
}

Json to_json(const DistributionSpec& spec) {
    Json j;
    j["family"] = spec.family();
    if (const auto* d = spec.get_if<Normal>()) {
        j["mean"] = d->mean;
        j["spread"] = d->spread;
    } else if (const auto* d = spec.get_if<Uniform>()) {
        j["lo"] = d->lo;
        j["hi"] = d->hi;
    } else if (const auto* d = spec.get_if<Pareto>()) {
        j["alpha"] = d->alpha;
    }
    return j;
}

DistributionSpec distribution_from_json(const Json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        if (name == "std_normal") return DistributionSpec::standard_normal();
        if (name == "uniform01") return DistributionSpec::uniform(0.0, 1.0);
        if (name == "uniform_pm1") return DistributionSpec::uniform(-1.0, 1.0);
        throw ValidationError("family", "unknown distribution preset '" + name + "'");
    }
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
        throw ValidationError("family", "distribution needs a string 'family'");
    const auto family = j.at("family").get<std::string>();
    if (family == "std_normal") return DistributionSpec::standard_normal();
    if (family == "normal")
        return DistributionSpec::normal(optional_number(j, "mean", 0.0), require_number(j, "spread"));
    if (family == "uniform") return DistributionSpec::uniform(require_number(j, "lo"), require_number(j, "hi"));
    if (family == "pareto") return DistributionSpec::pareto(require_number(j, "alpha"));
    throw ValidationError("family", "unknown distribution family '" + family + "'");
}

DistributionSpec parse_distribution(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ValidationError("dist", std::string("malformed distribution JSON: ") + e.what());
        }
        return distribution_from_json(j);
    }
    return distribution_from_json(Json(text));
}

Json to_json(const NoisyModel& model) {
    return Json{{"mu", model.worth_mean()}, {"a", model.worth_spread()}, {"b", model.error_spread()}};
}

NoisyModel noisy_model_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("model", "model must be an object {\"mu\",\"a\",\"b\"}");
    return NoisyModel(optional_number(j, "mu", 0.0), require_number(j, "a"), optional_number(j, "b", 0.0));
}

Json to_json(const CostModel& cost) { return Json{{"c", cost.per_item_cost()}}; }

CostModel cost_model_from_json(const Json& j) {
    if (!j.is_object()) throw ValidationError("cost", "cost must be an object {\"c\"}");
    return CostModel(require_number(j, "c"));
}

Json to_json(const PlanResult& plan) {
    Json curve = Json::array();
    for (const auto& [n, g] : plan.gain_curve) curve.push_back(Json::array({n, number_or_null(g)}));
    Json marginals = Json::array();
    for (const auto& [n, k] : plan.marginals) marginals.push_back(Json::array({n, number_or_null(k)}));
    Json j;
    j["n_star"] = plan.n_star;
    j["expected_gain"] = number_or_null(plan.expected_gain);
    j["diverges"] = plan.diverges;
    j["rationale"] = to_string(plan.rationale);
    j["gain_curve"] = std::move(curve);
    j["marginals"] = std::move(marginals);
    return j;
}

Json to_json(const Advice& advice) {
    Json j;
    j["z0"] = optional_or_null(advice.z0);
    j["v_plus"] = optional_or_null(advice.v_plus);
    j["value_of_one_more"] = optional_or_null(advice.value_of_one_more);
    j["cost"] = advice.per_item_cost;
    j["recommendation"] = to_string(advice.recommendation);
    j["posterior_best_worth"] = optional_or_null(advice.posterior_best_worth);
    return j;
}

Json to_json(const McEstimate& est) {
    Json j;
    j["mean"] = number_or_null(est.mean);
    j["std_error"] = number_or_null(est.std_error);
    j["trials"] = est.trials;
    j["seed"] = est.seed;
    j["flags"] = est.flags;
    return j;
}

Json to_json(const RankitTable& table) {
    Json rows = Json::array();
    for (int n = 1; n <= table.max_n(); ++n) {
        Json row;
        row["n"] = n;
        row["K_n"] = table.expected_max(n);
        row["k_n"] = n == 1 ? Json(nullptr) : Json(table.marginal(n));
        rows.push_back(std::move(row));
    }
    Json j;
    j["spec"] = to_json(table.spec());
    j["max_n"] = table.max_n();
    j["tolerance"] = table.tolerance();
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace optistop
