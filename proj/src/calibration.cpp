#include "nsforge/calibration.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace nsforge {

using nlohmann::json;

const CalibrationDim& Calibration::dim(int n) const {
    if (n == 2) return d2;
    if (n == 3) return d3;
    throw std::invalid_argument("Calibration: dimension must be 2 or 3");
}

namespace {

CalibrationDim dim_from_json(const json& j) {
    CalibrationDim d;
    d.c1 = j.at("c1").get<double>();
    d.c2 = j.at("c2").get<double>();
    d.gamma = j.at("gamma").get<double>();
    d.delta = j.at("delta").get<double>();
    d.delta_prime = j.at("delta_prime").get<double>();
    d.delta_dblprime = j.at("delta_dblprime").get<double>();
    return d;
}

json dim_to_json(const CalibrationDim& d) {
    return json{{"c1", d.c1},       {"c2", d.c2},
                {"gamma", d.gamma}, {"delta", d.delta},
                {"delta_prime", d.delta_prime}, {"delta_dblprime", d.delta_dblprime}};
}

}  // namespace

Calibration Calibration::defaults() {
    // Values measured by the shipped calibration sweep; see data/calibration.json
    // for provenance and the README for how to regenerate them.
    Calibration c;
    c.version = "2025.1";
    c.d2 = CalibrationDim{1.8362, 0.141047, 0.042, 24.0, 195.0, 1.6};
    c.d3 = CalibrationDim{3.7313, 0.109100, 0.025, 21.7, 620.0, 2.0};
    return c;
}

Calibration Calibration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Calibration: cannot open " + path);
    json j;
    in >> j;
    Calibration c;
    c.version = j.at("version").get<std::string>();
    c.d2 = dim_from_json(j.at("n2"));
    c.d3 = dim_from_json(j.at("n3"));
    return c;
}

void Calibration::save(const std::string& path) const {
    json j{{"version", version}, {"n2", dim_to_json(d2)}, {"n3", dim_to_json(d3)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("Calibration: cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace nsforge
