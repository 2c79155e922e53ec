#include "hodegeo/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hodegeo {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json parse_json(const std::string& text, const std::string& what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ModelError("invalid JSON in " + what);
    return j;
}

}  // namespace

ModelFile parse_model(const std::string& json_text) {
    ordered_json j = parse_json(json_text, "model");
    ModelFile m;
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw ModelError("model requires integer 'dimension'");
    if (!j.contains("order") || !j["order"].is_number_integer())
        throw ModelError("model requires integer 'order'");
    m.dimension = j["dimension"].get<int>();
    m.order = j["order"].get<int>();
    if (m.dimension < 1) throw ModelError("dimension must be >= 1");
    if (m.order < 1) throw ModelError("order must be >= 1");
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object()) throw ModelError("'parameters' must be an object");
        for (auto& [key, val] : j["parameters"].items()) {
            if (!val.is_number()) throw ModelError("parameter '" + key + "' must be a number");
            m.parameters[key] = val.get<double>();
        }
    }
    if (!j.contains("G") || !j["G"].is_array())
        throw ModelError("model requires array 'G' of expression strings");
    for (const auto& item : j["G"]) {
        if (!item.is_string()) throw ModelError("'G' entries must be strings");
        m.g_text.push_back(item.get<std::string>());
    }
    if (static_cast<int>(m.g_text.size()) != m.dimension)
        throw ModelError("'G' must have exactly 'dimension' entries");
    for (const auto& text : m.g_text) m.g.push_back(parse_expression(text, m.dimension, m.order));

    if (j.contains("metric")) {
        if (!j["metric"].is_array()) throw ModelError("'metric' must be an array of arrays");
        std::vector<std::vector<std::string>> rows;
        for (const auto& row : j["metric"]) {
            if (!row.is_array()) throw ModelError("'metric' rows must be arrays");
            std::vector<std::string> r;
            for (const auto& item : row) {
                if (!item.is_string()) throw ModelError("'metric' entries must be strings");
                r.push_back(item.get<std::string>());
            }
            rows.push_back(std::move(r));
        }
        if (static_cast<int>(rows.size()) != m.dimension)
            throw ModelError("'metric' must be dimension x dimension");
        for (const auto& r : rows)
            if (static_cast<int>(r.size()) != m.dimension)
                throw ModelError("'metric' must be dimension x dimension");
        m.metric_text = std::move(rows);
    }
    if (j.contains("field")) {
        if (!j["field"].is_array()) throw ModelError("'field' must be an array of strings");
        std::vector<std::string> f;
        for (const auto& item : j["field"]) {
            if (!item.is_string()) throw ModelError("'field' entries must be strings");
            f.push_back(item.get<std::string>());
        }
        if (static_cast<int>(f.size()) != m.dimension)
            throw ModelError("'field' must have exactly 'dimension' entries");
        m.field_text = std::move(f);
    }
    return m;
}

ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

std::string model_to_json(const ModelFile& m) {
    ordered_json j;
    j["dimension"] = m.dimension;
    j["order"] = m.order;
    j["parameters"] = ordered_json::object();
    for (const auto& [key, val] : m.parameters) j["parameters"][key] = val;
    j["G"] = m.g_text;
    if (m.metric_text) j["metric"] = *m.metric_text;
    if (m.field_text) j["field"] = *m.field_text;
    return j.dump(2);
}

Semispray ModelFile::semispray() const {
    std::vector<std::string> names;
    names.reserve(parameters.size());
    for (const auto& [key, _] : parameters) names.push_back(key);
    return make_semispray(dimension, order, g, names);
}

std::optional<Metric> ModelFile::metric() const {
    if (!metric_text) return std::nullopt;
    ExprMatrix g(dimension, dimension);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j)
            g.at(i, j) = parse_expression((*metric_text)[static_cast<std::size_t>(i)]
                                                        [static_cast<std::size_t>(j)],
                                          dimension, order);
    return make_metric(std::move(g));
}

std::optional<VectorComponents> ModelFile::field() const {
    if (!field_text) return std::nullopt;
    VectorComponents f;
    for (const std::string& text : *field_text)
        f.push_back(parse_expression(text, dimension, order));
    return f;
}

JetPoint ModelFile::bind(JetPoint p) const {
    p.params = parameters;
    return p;
}

JetPoint load_init(const std::string& path, const ModelFile& m) {
    ordered_json j = parse_json(read_file(path), "init file");
    if (!j.contains("x") || !j["x"].is_array()) throw ModelError("init file requires array 'x'");
    if (!j.contains("y") || !j["y"].is_array())
        throw ModelError("init file requires array of arrays 'y'");
    JetPoint p = JetPoint::make(m.dimension, m.order);
    if (static_cast<int>(j["x"].size()) != m.dimension)
        throw ShapeError("init 'x' must have length 'dimension'");
    for (int i = 0; i < m.dimension; ++i) p.x[static_cast<std::size_t>(i)] = j["x"][i].get<double>();
    if (static_cast<int>(j["y"].size()) != m.order)
        throw ShapeError("init 'y' must have 'order' levels");
    for (int a = 0; a < m.order; ++a) {
        if (!j["y"][a].is_array() || static_cast<int>(j["y"][a].size()) != m.dimension)
            throw ShapeError("init 'y' levels must have length 'dimension'");
        for (int i = 0; i < m.dimension; ++i)
            p.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] =
                j["y"][a][i].get<double>();
    }
    p.params = m.parameters;
    return p;
}

std::vector<std::vector<double>> load_variation(const std::string& path, const ModelFile& m) {
    ordered_json j = parse_json(read_file(path), "variation file");
    if (!j.contains("xi") || !j["xi"].is_array())
        throw ModelError("variation file requires array 'xi'");
    if (!j.contains("nabla") || !j["nabla"].is_array())
        throw ModelError("variation file requires array of arrays 'nabla'");
    if (static_cast<int>(j["xi"].size()) != m.dimension)
        throw ShapeError("variation 'xi' must have length 'dimension'");
    if (static_cast<int>(j["nabla"].size()) != m.order)
        throw ShapeError("variation 'nabla' must have 'order' levels");
    std::vector<std::vector<double>> out;
    std::vector<double> xi;
    for (int i = 0; i < m.dimension; ++i) xi.push_back(j["xi"][i].get<double>());
    out.push_back(std::move(xi));
    for (int a = 0; a < m.order; ++a) {
        if (!j["nabla"][a].is_array() || static_cast<int>(j["nabla"][a].size()) != m.dimension)
            throw ShapeError("variation 'nabla' levels must have length 'dimension'");
        std::vector<double> row;
        for (int i = 0; i < m.dimension; ++i) row.push_back(j["nabla"][a][i].get<double>());
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace hodegeo
