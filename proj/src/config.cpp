#include "tkge/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tkge/errors.hpp"

namespace tkge {

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["dataset"] = {{"train", train_path},
                    {"valid", valid_path},
                    {"test", test_path},
                    {"dialect", to_string(dialect)}};
    j["model"] = {{"scorer", to_string(train.scorer)},
                  {"d", train.d},
                  {"lstm_biases", train.lstm_biases}};
    j["train"] = {{"lr", train.lr},
                  {"beta1", train.beta1},
                  {"beta2", train.beta2},
                  {"adam_eps", train.adam_eps},
                  {"batch_size", train.batch_size},
                  {"num_negatives", train.num_negatives},
                  {"max_epochs", train.max_epochs},
                  {"validate_every", train.validate_every},
                  {"dropout", train.dropout},
                  {"seed", train.seed}};
    j["eval"] = {{"workers", train.eval_workers}, {"time_agnostic_filter", train.time_agnostic_filter}};
    j["output_dir"] = output_dir;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    try {
        if (j.contains("dataset")) {
            const auto& d = j["dataset"];
            cfg.train_path = d.value("train", cfg.train_path);
            cfg.valid_path = d.value("valid", cfg.valid_path);
            cfg.test_path = d.value("test", cfg.test_path);
            if (d.contains("dialect")) cfg.dialect = dialect_from_string(d["dialect"].get<std::string>());
        }
        if (j.contains("model")) {
            const auto& m = j["model"];
            if (m.contains("scorer")) cfg.train.scorer = scorer_from_string(m["scorer"].get<std::string>());
            cfg.train.d = m.value("d", cfg.train.d);
            cfg.train.lstm_biases = m.value("lstm_biases", cfg.train.lstm_biases);
        }
        if (j.contains("train")) {
            const auto& t = j["train"];
            cfg.train.lr = t.value("lr", cfg.train.lr);
            cfg.train.beta1 = t.value("beta1", cfg.train.beta1);
            cfg.train.beta2 = t.value("beta2", cfg.train.beta2);
            cfg.train.adam_eps = t.value("adam_eps", cfg.train.adam_eps);
            cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
            cfg.train.num_negatives = t.value("num_negatives", cfg.train.num_negatives);
            cfg.train.max_epochs = t.value("max_epochs", cfg.train.max_epochs);
            cfg.train.validate_every = t.value("validate_every", cfg.train.validate_every);
            cfg.train.dropout = t.value("dropout", cfg.train.dropout);
            cfg.train.seed = t.value("seed", cfg.train.seed);
        }
        if (j.contains("eval")) {
            const auto& e = j["eval"];
            cfg.train.eval_workers = e.value("workers", cfg.train.eval_workers);
            cfg.train.time_agnostic_filter = e.value("time_agnostic_filter", cfg.train.time_agnostic_filter);
        }
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

}  // namespace tkge
