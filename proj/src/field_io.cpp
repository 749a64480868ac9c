#include "nsforge/field_io.hpp"

#include <json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>

namespace nsforge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'N', 'S', 'F', 'F'};
constexpr std::uint32_t kVersion = 1;

struct Header {
    char magic[4];
    std::uint32_t version;
    std::uint32_t dim;
    std::uint32_t points;
    double length;
    std::uint32_t components;
    std::uint8_t representation;  // 0 physical, 1 spectral
    std::uint8_t pad[7];
};
static_assert(sizeof(Header) == 40);

void write_header(std::ofstream& out, const GridSpec& g, int comps, Rep rep) {
    Header h{};
    std::memcpy(h.magic, kMagic, 4);
    h.version = kVersion;
    h.dim = g.dim;
    h.points = g.points;
    h.length = g.length;
    h.components = comps;
    h.representation = rep == Rep::spectral ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
}

Header read_header(std::ifstream& in, const std::string& path) {
    Header h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, kMagic, 4) != 0)
        throw std::runtime_error("field container: bad magic in " + path);
    if (h.version != kVersion)
        throw std::runtime_error("field container: unsupported version in " + path);
    return h;
}

void write_sidecar(const std::string& path, const GridSpec& g, int comps, Rep rep,
                   const json& extra) {
    json j{{"format", "nsforge-field"},
           {"version", kVersion},
           {"dim", g.dim},
           {"points", g.points},
           {"length", g.length},
           {"dealias_fraction", g.dealias_fraction},
           {"components", comps},
           {"representation", rep == Rep::spectral ? "spectral" : "physical"}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    std::ofstream out(path + ".json");
    out << j.dump(2) << "\n";
}

}  // namespace

void save_field(const VectorField& u, const std::string& path, const std::string& description) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    write_header(out, u.grid, u.ncomp(), u.rep);
    if (u.rep == Rep::physical) {
        for (const auto& c : u.phys)
            out.write(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(double));
    } else {
        for (const auto& c : u.spec)
            out.write(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(cplx));
    }
    if (!out) throw std::runtime_error("save_field: write failed for " + path);
    write_sidecar(path, u.grid, u.ncomp(), u.rep,
                  description.empty() ? json::object() : json{{"description", description}});
}

VectorField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    Header h = read_header(in, path);
    GridSpec g;
    g.dim = h.dim;
    g.points = h.points;
    g.length = h.length;
    g.validate();
    if (h.components != static_cast<std::uint32_t>(g.dim))
        throw std::runtime_error("load_field: component count mismatch in " + path);
    VectorField u;
    u.grid = g;
    u.rep = h.representation ? Rep::spectral : Rep::physical;
    if (u.rep == Rep::physical) {
        u.phys.assign(g.dim, std::vector<double>(g.cells()));
        for (auto& c : u.phys)
            in.read(reinterpret_cast<char*>(c.data()), c.size() * sizeof(double));
    } else {
        u.spec.assign(g.dim, std::vector<cplx>(g.spec_size()));
        for (auto& c : u.spec)
            in.read(reinterpret_cast<char*>(c.data()), c.size() * sizeof(cplx));
    }
    if (!in) throw std::runtime_error("load_field: truncated file " + path);
    return u;
}

void save_slices(const GridSpec& g, const std::vector<double>& times,
                 const std::vector<std::vector<double>>& slices, double half_width,
                 double time_extent, const std::string& path) {
    if (times.size() != slices.size())
        throw std::invalid_argument("save_slices: times/slices mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_slices: cannot open " + path);
    write_header(out, g, static_cast<int>(slices.size()), Rep::physical);
    for (const auto& s : slices) {
        if (s.size() != g.cells()) throw std::invalid_argument("save_slices: bad slice size");
        out.write(reinterpret_cast<const char*>(s.data()), s.size() * sizeof(double));
    }
    write_sidecar(path, g, static_cast<int>(slices.size()), Rep::physical,
                  json{{"kind", "profile-slices"},
                       {"times", times},
                       {"half_width", half_width},
                       {"time_extent", time_extent}});
}

void save_components(const GridSpec& g, const std::vector<std::vector<double>>& comps,
                     const std::string& path, const nlohmann::json& sidecar_extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_components: cannot open " + path);
    write_header(out, g, static_cast<int>(comps.size()), Rep::physical);
    for (const auto& c : comps) {
        if (c.size() != g.cells())
            throw std::invalid_argument("save_components: bad component size");
        out.write(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(double));
    }
    write_sidecar(path, g, static_cast<int>(comps.size()), Rep::physical, sidecar_extra);
}

SliceStack load_slices(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_slices: cannot open " + path);
    Header h = read_header(in, path);
    SliceStack st;
    st.grid.dim = h.dim;
    st.grid.points = h.points;
    st.grid.length = h.length;
    st.grid.validate();
    st.slices.assign(h.components, std::vector<double>(st.grid.cells()));
    for (auto& s : st.slices)
        in.read(reinterpret_cast<char*>(s.data()), s.size() * sizeof(double));
    if (!in) throw std::runtime_error("load_slices: truncated file " + path);

    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("load_slices: missing sidecar for " + path);
    json j;
    side >> j;
    st.times = j.at("times").get<std::vector<double>>();
    st.half_width = j.at("half_width").get<double>();
    st.time_extent = j.at("time_extent").get<double>();
    if (st.times.size() != st.slices.size())
        throw std::runtime_error("load_slices: sidecar time count mismatch");
    return st;
}

void save_trajectory(const Trajectory& tr, const std::string& dir) {
    fs::create_directories(dir);
    json index{{"format", "nsforge-trajectory"},
               {"nodes", tr.tg.nodes},
               {"kind", tr.tg.kind},
               {"snapshots", json::array()}};
    for (std::size_t i = 0; i < tr.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04zu.nsf", i);
        save_field(tr.at(i), (fs::path(dir) / name).string());
        index["snapshots"].push_back(name);
    }
    json norms = json::object();
    for (const auto& [p, series] : tr.norm_series) {
        const std::string key = std::isinf(p) ? "inf" : std::to_string(p);
        norms[key] = series;
    }
    index["norm_series"] = norms;
    index["energy_integral"] = tr.energy_integral;
    std::ofstream out(fs::path(dir) / "index.json");
    out << index.dump(2) << "\n";
}

Trajectory load_trajectory(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "index.json");
    if (!in) throw std::runtime_error("load_trajectory: missing index.json in " + dir);
    json index;
    in >> index;
    Trajectory tr;
    tr.tg.nodes = index.at("nodes").get<std::vector<double>>();
    tr.tg.kind = index.value("kind", "loaded");
    tr.tg.t_end = tr.tg.nodes.back();
    tr.tg.steps = static_cast<int>(tr.tg.nodes.size()) - 1;
    for (const auto& name : index.at("snapshots")) {
        tr.snaps.push_back(load_field((fs::path(dir) / name.get<std::string>()).string()));
    }
    if (tr.snaps.empty()) throw std::runtime_error("load_trajectory: no snapshots in " + dir);
    tr.grid = tr.snaps.front().grid;
    tr.finalize();
    return tr;
}

std::uint64_t fnv1a64_bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("fnv1a64_file: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

}  // namespace nsforge
