#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "novelty/agent.hpp"
#include "novelty/cartpole.hpp"
#include "novelty/classifier.hpp"
#include "novelty/framework.hpp"
#include "novelty/sweep.hpp"

namespace novelty {

/// Unreadable, unparseable, or semantically invalid configuration input.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

/// Failure writing an output artifact.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

// Scalar grammar shared by the TOML-subset reader: quoted string, boolean,
// integer, or float.
inline nlohmann::json parse_flat_scalar(const std::string& raw, int line_number) {
    const std::string token = trim(raw);
    if (token.empty()) {
        throw ConfigError("line " + std::to_string(line_number) + ": missing value");
    }
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"') {
            throw ConfigError("line " + std::to_string(line_number) + ": unterminated string");
        }
        return token.substr(1, token.size() - 2);
    }
    if (token == "true") return true;
    if (token == "false") return false;
    const bool looks_integral = token.find_first_not_of("+-0123456789") == std::string::npos;
    try {
        if (looks_integral) {
            if (!token.empty() && token.front() == '-') return std::stoll(token);
            return std::stoull(token);
        }
        std::size_t consumed = 0;
        const double value = std::stod(token, &consumed);
        if (consumed != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_number) + ": cannot parse value '" + token + "'");
    }
}

// Flat key = value document: one assignment per line, # comments, arrays
// in single-line [a, b, c] form. No tables, no nesting.
inline nlohmann::json parse_flat_toml(const std::string& text) {
    nlohmann::json out = nlohmann::json::object();
    std::istringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        bool in_string = false;
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (line[k] == '"') in_string = !in_string;
            if (line[k] == '#' && !in_string) {
                line.erase(k);
                break;
            }
        }
        const std::string content = trim(line);
        if (content.empty()) continue;
        const std::size_t eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_number) + ": expected key = value");
        }
        const std::string key = trim(content.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_number) + ": empty key");
        }
        const std::string value = trim(content.substr(eq + 1));
        if (!value.empty() && value.front() == '[') {
            if (value.back() != ']') {
                throw ConfigError("line " + std::to_string(line_number) + ": array must close on the same line");
            }
            nlohmann::json array = nlohmann::json::array();
            const std::string body = trim(value.substr(1, value.size() - 2));
            if (!body.empty()) {
                std::size_t start = 0;
                while (start <= body.size()) {
                    const std::size_t comma = body.find(',', start);
                    const std::string element = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
                    array.push_back(parse_flat_scalar(element, line_number));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            out[key] = array;
        } else {
            out[key] = parse_flat_scalar(value, line_number);
        }
    }
    return out;
}

inline double json_double(const nlohmann::json& value, const std::string& key) {
    if (!value.is_number()) throw ConfigError("key '" + key + "' must be a number");
    return value.get<double>();
}

inline std::int64_t json_integer(const nlohmann::json& value, const std::string& key) {
    if (!value.is_number_integer() && !value.is_number_unsigned()) {
        throw ConfigError("key '" + key + "' must be an integer");
    }
    return value.get<std::int64_t>();
}

inline std::uint64_t json_uint64(const nlohmann::json& value, const std::string& key) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (value.is_number_integer()) {
        const std::int64_t v = value.get<std::int64_t>();
        if (v < 0) throw ConfigError("key '" + key + "' must be non-negative");
        return static_cast<std::uint64_t>(v);
    }
    throw ConfigError("key '" + key + "' must be an integer");
}

inline std::vector<double> json_double_array(const nlohmann::json& value, const std::string& key) {
    if (!value.is_array()) throw ConfigError("key '" + key + "' must be an array");
    std::vector<double> out;
    out.reserve(value.size());
    for (const nlohmann::json& element : value) {
        if (!element.is_number()) throw ConfigError("key '" + key + "' must contain numbers only");
        out.push_back(element.get<double>());
    }
    return out;
}

inline std::string json_string(const nlohmann::json& value, const std::string& key) {
    if (!value.is_string()) throw ConfigError("key '" + key + "' must be a string");
    return value.get<std::string>();
}

// Consume one world-parameter key if recognized. Bounds come in symmetric
// file form: z_max and phi_max_degrees define both ends.
inline bool apply_world_key(WorldParams& params, const std::string& key, const nlohmann::json& value) {
    if (key == "gravity") params.gravity = json_double(value, key);
    else if (key == "cart_mass") params.cart_mass = json_double(value, key);
    else if (key == "pole_mass_per_length") params.pole_mass_per_length = json_double(value, key);
    else if (key == "pole_length") params.pole_length = json_double(value, key);
    else if (key == "push_force") params.push_force = json_double(value, key);
    else if (key == "horizontal_force") params.horizontal_force = json_double(value, key);
    else if (key == "z_max") {
        params.z_max = json_double(value, key);
        params.z_min = -params.z_max;
    } else if (key == "phi_max_degrees") {
        params.phi_max = deg_to_rad(json_double(value, key));
        params.phi_min = -params.phi_max;
    } else if (key == "tau") params.tau = json_double(value, key);
    else if (key == "hidden") params.hidden = json_double_array(value, key);
    else return false;
    return true;
}

inline void require_valid_config(const WorldParams& params, const std::string& what) {
    try {
        params.require_valid();
    } catch (const NoveltyError& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

}  // namespace detail

/// Read a configuration document from disk. JSON when the first meaningful
/// byte is '{', the flat key = value form otherwise.
inline nlohmann::json load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const std::string trimmed = detail::trim(text);
    if (!trimmed.empty() && trimmed.front() == '{') {
        try {
            return nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    try {
        return detail::parse_flat_toml(text);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline WorldParams world_from_document(const nlohmann::json& document) {
    WorldParams params;
    for (const auto& [key, value] : document.items()) {
        if (!detail::apply_world_key(params, key, value)) {
            throw ConfigError("unknown world config key: " + key);
        }
    }
    detail::require_valid_config(params, "world config");
    return params;
}

inline WorldParams load_world_params(const std::string& path) {
    return world_from_document(load_document(path));
}

/// Agent documents hold the agent's assumed world under the world keys plus
/// the agent-specific ones.
inline AgentState agent_from_document(const nlohmann::json& document) {
    AgentState agent;
    for (const auto& [key, value] : document.items()) {
        if (detail::apply_world_key(agent.model, key, value)) continue;
        if (key == "beta") {
            const std::vector<double> beta = detail::json_double_array(value, key);
            if (beta.size() != 4) throw ConfigError("key 'beta' must have exactly 4 entries");
            for (int i = 0; i < 4; ++i) agent.beta[static_cast<std::size_t>(i)] = beta[static_cast<std::size_t>(i)];
        } else if (key == "theta_detect") {
            agent.theta_detect = detail::json_double(value, key);
        } else if (key == "lookahead_depth") {
            agent.lookahead_depth = static_cast<int>(detail::json_integer(value, key));
        } else if (key == "score_rule") {
            const std::string rule = detail::json_string(value, key);
            if (rule == "abs_inner_product") agent.score_rule = ScoreRule::AbsInnerProduct;
            else if (rule == "weighted_norm") agent.score_rule = ScoreRule::WeightedNorm;
            else throw ConfigError("key 'score_rule' must be 'abs_inner_product' or 'weighted_norm'");
        } else {
            throw ConfigError("unknown agent config key: " + key);
        }
    }
    try {
        agent.require_valid();
    } catch (const NoveltyError& e) {
        throw ConfigError(std::string("agent config: ") + e.what());
    }
    return agent;
}

inline AgentState load_agent(const std::string& path) {
    return agent_from_document(load_document(path));
}

inline Thresholds thresholds_from_document(const nlohmann::json& document) {
    Thresholds thresholds;
    for (const auto& [key, value] : document.items()) {
        if (key == "delta_w") thresholds.delta_w = detail::json_double(value, key);
        else if (key == "delta_o") thresholds.delta_o = detail::json_double(value, key);
        else if (key == "eps_w") thresholds.eps_w = detail::json_double(value, key);
        else if (key == "eps_o") thresholds.eps_o = detail::json_double(value, key);
        else if (key == "eps_f") thresholds.eps_f = detail::json_double(value, key);
        else if (key == "theta_detect") thresholds.theta_detect = detail::json_double(value, key);
        else throw ConfigError("unknown thresholds config key: " + key);
    }
    try {
        thresholds.require_valid();
    } catch (const NoveltyError& e) {
        throw ConfigError(std::string("thresholds config: ") + e.what());
    }
    return thresholds;
}

inline Thresholds load_thresholds(const std::string& path) {
    return thresholds_from_document(load_document(path));
}

inline SweepSpec sweep_from_document(const nlohmann::json& document) {
    SweepSpec spec;
    for (const auto& [key, value] : document.items()) {
        try {
            if (key == "parameter") spec.parameter = parse_sweep_parameter(detail::json_string(value, key));
            else if (key == "measure") spec.measure = parse_sweep_measure(detail::json_string(value, key));
            else if (key == "assumed_grid") spec.assumed_grid = detail::json_double_array(value, key);
            else if (key == "actual_grid") spec.actual_grid = detail::json_double_array(value, key);
            else if (key == "n_samples") spec.config.n_samples = static_cast<int>(detail::json_integer(value, key));
            else if (key == "horizon") spec.config.horizon = static_cast<int>(detail::json_integer(value, key));
            else if (key == "master_seed") spec.config.master_seed = detail::json_uint64(value, key);
            else if (key == "reference_depth") spec.config.reference_agent.lookahead_depth = static_cast<int>(detail::json_integer(value, key));
            else throw ConfigError("unknown sweep config key: " + key);
        } catch (const NoveltyError& e) {
            throw ConfigError(std::string("sweep config: ") + e.what());
        }
    }
    if (spec.assumed_grid.empty()) throw ConfigError("sweep config: assumed_grid is required");
    if (spec.actual_grid.empty()) throw ConfigError("sweep config: actual_grid is required");
    try {
        spec.require_valid();
    } catch (const NoveltyError& e) {
        throw ConfigError(std::string("sweep config: ") + e.what());
    }
    return spec;
}

inline SweepSpec load_sweep(const std::string& path) {
    return sweep_from_document(load_document(path));
}

inline nlohmann::json world_to_document(const WorldParams& params) {
    nlohmann::json document = nlohmann::json::object();
    document["gravity"] = params.gravity;
    document["cart_mass"] = params.cart_mass;
    document["pole_mass_per_length"] = params.pole_mass_per_length;
    document["pole_length"] = params.pole_length;
    document["push_force"] = params.push_force;
    document["horizontal_force"] = params.horizontal_force;
    document["z_max"] = params.z_max;
    document["phi_max_degrees"] = params.phi_max * 180.0 / kPi;
    document["tau"] = params.tau;
    document["hidden"] = params.hidden;
    return document;
}

inline nlohmann::json agent_to_document(const AgentState& agent) {
    nlohmann::json document = world_to_document(agent.model);
    document["beta"] = agent.beta;
    document["theta_detect"] = agent.theta_detect;
    document["lookahead_depth"] = agent.lookahead_depth;
    document["score_rule"] = to_string(agent.score_rule);
    return document;
}

inline nlohmann::json thresholds_to_document(const Thresholds& thresholds) {
    nlohmann::json document = nlohmann::json::object();
    document["delta_w"] = thresholds.delta_w;
    document["delta_o"] = thresholds.delta_o;
    document["eps_w"] = thresholds.eps_w;
    document["eps_o"] = thresholds.eps_o;
    document["eps_f"] = thresholds.eps_f;
    document["theta_detect"] = thresholds.theta_detect;
    return document;
}

inline nlohmann::json sweep_to_document(const SweepSpec& spec) {
    nlohmann::json document = nlohmann::json::object();
    document["parameter"] = to_string(spec.parameter);
    document["measure"] = to_string(spec.measure);
    document["assumed_grid"] = spec.assumed_grid;
    document["actual_grid"] = spec.actual_grid;
    document["n_samples"] = spec.config.n_samples;
    document["horizon"] = spec.config.horizon;
    document["master_seed"] = spec.config.master_seed;
    document["reference_depth"] = spec.config.reference_agent.lookahead_depth;
    return document;
}

/// Flat key-value rendering of a classification verdict.
inline std::string report_to_json(const NoveltyReport& report) {
    nlohmann::json document = nlohmann::json::object();
    document["world_novel"] = report.flags.world_novel;
    document["observation_novel"] = report.flags.observation_novel;
    document["agent_novel"] = report.flags.agent_novel;
    document["world_regret"] = report.regrets.world_regret;
    document["observation_regret"] = report.regrets.observation_regret;
    document["agent_regret"] = report.regrets.agent_regret;
    document["world_regret_high"] = report.world_regret_high;
    document["observation_regret_high"] = report.observation_regret_high;
    nlohmann::json labels = nlohmann::json::array();
    for (NoveltyLabel label : report.labels) labels.push_back(to_string(label));
    document["labels"] = labels;
    document["cell_name"] = report.cell_name;
    return document.dump(2) + "\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace novelty
