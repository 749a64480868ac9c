#include "nsforge/config.hpp"

#include <fstream>
#include <sstream>

namespace nsforge {

using nlohmann::json;

json ExperimentConfig::to_json() const {
    json tgj;
    if (timegrid.kind == "uniform") {
        tgj = json{{"kind", "uniform"}, {"t_end", timegrid.t_end}, {"steps", timegrid.steps}};
    } else {
        tgj = json{{"kind", "geometric"},
                   {"t_end", timegrid.t_end},
                   {"t_min", timegrid.t_min},
                   {"ratio", timegrid.ratio}};
    }
    return json{
        {"grid",
         {{"dim", grid.dim},
          {"points", grid.points},
          {"length", grid.length},
          {"dealias_fraction", grid.dealias_fraction}}},
        {"data",
         {{"kind", data_kind},
          {"amplitude", data.amplitude},
          {"width", data.width},
          {"seed", data.seed},
          {"band_modes", data.band_modes}}},
        {"profile",
         {{"source", profile_source},
          {"half_width", profile_half_width},
          {"time_extent", profile_time_extent},
          {"time_samples", profile_time_samples}}},
        {"solver",
         {{"timegrid", tgj},
          {"picard",
           {{"max_iterations", picard.max_iterations}, {"tolerance", picard.tolerance}}},
          {"integrator", integrator}}},
        {"synthesis",
         {{"tol", synthesis.tol},
          {"max_outer", synthesis.max_outer},
          {"override_smallness", synthesis.override_smallness},
          {"auto_R", auto_R},
          {"lambda", lambda}}},
        {"diagnostics", diagnostics},
        {"output_dir", output_dir},
        {"calibration", calibration_path}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    const auto& gj = j.at("grid");
    c.grid.dim = gj.at("dim").get<int>();
    c.grid.points = gj.at("points").get<int>();
    c.grid.length = gj.at("length").get<double>();
    c.grid.dealias_fraction = gj.value("dealias_fraction", 2.0 / 3.0);
    c.grid.validate();

    const auto& dj = j.at("data");
    c.data_kind = dj.at("kind").get<std::string>();
    c.data.amplitude = dj.at("amplitude").get<double>();
    c.data.width = dj.at("width").get<double>();
    c.data.seed = dj.value("seed", std::uint64_t{0});
    c.data.band_modes = dj.value("band_modes", 0);

    const auto& pj = j.at("profile");
    c.profile_source = pj.value("source", std::string("builtin"));
    c.profile_half_width = pj.value("half_width", 1.0);
    c.profile_time_extent = pj.value("time_extent", 0.25);
    c.profile_time_samples = pj.value("time_samples", 33);

    const auto& sj = j.at("solver");
    const auto& tj = sj.at("timegrid");
    const std::string kind = tj.at("kind").get<std::string>();
    if (kind == "uniform")
        c.timegrid = TimeGrid::uniform(tj.at("t_end").get<double>(), tj.at("steps").get<int>());
    else if (kind == "geometric")
        c.timegrid = TimeGrid::geometric(tj.at("t_end").get<double>(),
                                         tj.value("t_min", 1e-3), tj.value("ratio", 1.2));
    else
        throw std::invalid_argument("config: unknown timegrid kind '" + kind + "'");
    c.picard.max_iterations = sj.at("picard").at("max_iterations").get<int>();
    c.picard.tolerance = sj.at("picard").at("tolerance").get<double>();
    c.integrator = sj.value("integrator", std::string("picard"));
    if (c.integrator != "picard" && c.integrator != "etd2")
        throw std::invalid_argument("config: integrator must be 'picard' or 'etd2'");

    const auto& yj = j.at("synthesis");
    c.synthesis.tol = yj.at("tol").get<double>();
    c.synthesis.max_outer = yj.at("max_outer").get<int>();
    c.synthesis.override_smallness = yj.value("override_smallness", false);
    c.synthesis.picard = c.picard;
    c.auto_R = yj.value("auto_R", true);
    c.lambda = yj.value("lambda", 1);

    c.diagnostics = j.value("diagnostics", c.diagnostics);
    c.output_dir = j.value("output_dir", std::string("out"));
    c.calibration_path = j.value("calibration", std::string());
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    in >> j;
    return from_json(j);
}

void ExperimentConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("config: cannot write " + path);
    out << to_json().dump(2) << "\n";
}

void ExperimentConfig::apply_override(json& j, const std::string& keyval) {
    const auto eq = keyval.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("override must look like key.path=value: " + keyval);
    const std::string path = keyval.substr(0, eq);
    const std::string value = keyval.substr(eq + 1);

    json* node = &j;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) throw std::invalid_argument("override: empty key path");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);

    // parse the value as JSON when possible, else take it as a string
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (...) {
        parsed = value;
    }
    (*node)[parts.back()] = parsed;
}

}  // namespace nsforge
