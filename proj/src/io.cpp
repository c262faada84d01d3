#include "lpwave/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace lpwave {

namespace {

using nlohmann::json;

json grid_json(const GridSpec& g) {
    return json{{"n", g.n()}, {"N_x", g.nx()}, {"L", g.L()}, {"N_t", g.nt()}, {"T", g.T()}};
}

GridSpec grid_from_json(const json& j) {
    return GridSpec(j.at("n").get<int>(), j.at("N_x").get<int>(), j.at("L").get<double>(),
                    j.at("N_t").get<int>(), j.at("T").get<double>());
}

void write_raw(std::ofstream& out, const std::vector<cplx>& data) {
    // Interleaved little-endian float64; this build targets little-endian hosts.
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(cplx)));
}

void read_raw(std::ifstream& in, std::vector<cplx>& data) {
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(cplx)));
    if (!in) throw config_error("field container truncated");
}

}  // namespace

void write_field(const std::string& path, const SpaceTimeField& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    json header{{"format", "lpwave-field"},
                {"kind", "spacetime"},
                {"rep", rep_name(u.rep())},
                {"grid", grid_json(u.grid())}};
    out << header.dump() << '\n';
    write_raw(out, u.data());
}

SpaceTimeField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);
    json header = json::parse(line);
    if (header.value("kind", "") != "spacetime")
        throw config_error("not a space-time field container: " + path);
    GridSpec g = grid_from_json(header.at("grid"));
    const std::string rep = header.value("rep", "physical");
    Rep r = rep == "physical" ? Rep::Physical
            : rep == "spatial-fourier" ? Rep::SpatialFourier
                                       : Rep::SpaceTimeFourier;
    SpaceTimeField u(g, r);
    read_raw(in, u.data());
    return u;
}

void write_field(const std::string& path, const SpatialField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    json header{{"format", "lpwave-field"},
                {"kind", "spatial"},
                {"rep", f.rep() == SpatialField::SRep::Physical ? "physical" : "fourier"},
                {"grid", grid_json(f.grid())}};
    out << header.dump() << '\n';
    write_raw(out, f.data());
}

SpatialField read_spatial_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open: " + path);
    std::string line;
    std::getline(in, line);
    nlohmann::json header = nlohmann::json::parse(line);
    if (header.value("kind", "") != "spatial")
        throw config_error("not a spatial field container: " + path);
    GridSpec g = grid_from_json(header.at("grid"));
    SpatialField f(g, header.value("rep", "physical") == "physical"
                          ? SpatialField::SRep::Physical
                          : SpatialField::SRep::Fourier);
    read_raw(in, f.data());
    return f;
}

namespace {
std::uint64_t fnv1a(const void* bytes, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}
}  // namespace

std::uint64_t content_hash(const SpaceTimeField& u) {
    return fnv1a(u.data().data(), u.data().size() * sizeof(cplx));
}

std::uint64_t content_hash(const SpatialField& u) {
    return fnv1a(u.data().data(), u.data().size() * sizeof(cplx));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_norm_table_csv(const std::string& path, const DyadicNormTable& table) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "norm,lambda,d,value\n";
    for (const auto& row : table.rows) {
        out << row.norm << ',' << format_double(row.lambda) << ',';
        if (row.d) out << format_double(*row.d);
        out << ',' << format_double(row.value) << '\n';
    }
}

void write_norm_table_json(const std::string& path, const DyadicNormTable& table,
                           const std::string& resolved_config, std::uint64_t input_hash) {
    nlohmann::json j;
    j["grid"] = table.grid_desc;
    j["s"] = table.s;
    j["config"] = resolved_config.empty() ? nlohmann::json(nullptr)
                                          : nlohmann::json::parse(resolved_config);
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(input_hash));
    j["input_hash"] = hex;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r{{"norm", row.norm}, {"lambda", row.lambda}, {"value", row.value}};
        if (row.d) r["d"] = *row.d;
        rows.push_back(r);
    }
    j["rows"] = rows;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

void write_profile_csv(const std::string& path, const std::string& value_name, double dt,
                       const std::vector<double>& values) {
    write_profiles_csv(path, {value_name}, dt, {values});
}

void write_profiles_csv(const std::string& path, const std::vector<std::string>& names, double dt,
                        const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << "t";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t m = 0; m < rows; ++m) {
        out << format_double(m * dt);
        for (const auto& col : columns) out << ',' << format_double(col[m]);
        out << '\n';
    }
}

}  // namespace lpwave
