#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodegeo/riemann.hpp"

namespace hodegeo {

/// Parsed model file. JSON layout:
///   {"dimension": 1, "order": 3, "parameters": {"omega": 2.0},
///    "G": ["omega^2*y2_1/12"],
///    "metric": [["1","0"],["0","sin(x1)^2"]],   // optional, over x only
///    "field": ["x1"]}                            // optional symmetry candidate
struct ModelFile {
    int dimension = 1;
    int order = 1;
    std::map<std::string, double> parameters;
    std::vector<std::string> g_text;
    std::vector<Expr> g;
    std::optional<std::vector<std::vector<std::string>>> metric_text;
    std::optional<std::vector<std::string>> field_text;

    Semispray semispray() const;
    std::optional<Metric> metric() const;
    std::optional<VectorComponents> field() const;
    JetPoint bind(JetPoint p) const;  // attach parameter values
};

ModelFile load_model(const std::string& path);
ModelFile parse_model(const std::string& json_text);
std::string model_to_json(const ModelFile& m);

/// Init file {"x": [...], "y": [[level 1], ..., [level k]]}.
JetPoint load_init(const std::string& path, const ModelFile& m);

/// Variation init {"xi": [...], "nabla": [[nabla xi], ..., [nabla^k xi]]}.
std::vector<std::vector<double>> load_variation(const std::string& path, const ModelFile& m);

}  // namespace hodegeo
