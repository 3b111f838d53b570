#include "dirgeo/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "dirgeo/germ.hpp"

namespace dirgeo {

namespace {

void write_rows(std::ofstream& out, const DirectionSet& set, int dim, double scale) {
    for (const auto& d : set.members) {
        out << scale;
        for (int i = 0; i < dim; ++i) out << "," << d.u[i];
        out << "\n";
    }
}

std::ofstream open_csv(const std::string& path, int dim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "scale,x,y" << (dim == 3 ? ",z" : "") << "\n";
    out.precision(17);
    return out;
}

}  // namespace

void write_directions_csv(const std::string& path, const DirectionScales& ds, int dim) {
    auto out = open_csv(path, dim);
    for (std::size_t k = 0; k < ds.per_scale.size(); ++k)
        write_rows(out, ds.per_scale[k], dim, ds.scales[k]);
    write_rows(out, ds.limit, dim, 0.0);
}

void write_direction_set_csv(const std::string& path, const DirectionSet& set, int dim,
                             double scale) {
    auto out = open_csv(path, dim);
    write_rows(out, set, dim, scale);
}

void write_bundle_csv(const std::string& path, const BundleEstimate& bundle, int dim) {
    auto out = open_csv(path, dim);
    for (std::size_t k = 0; k < bundle.per_scale_unions.size(); ++k)
        write_rows(out, bundle.per_scale_unions[k], dim, bundle.base_scales[k]);
    write_rows(out, bundle.limit, dim, 0.0);
}

SetGerm load_pointcloud_csv(const std::string& csv_path, const std::string& meta_path) {
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw std::runtime_error("cannot open " + meta_path);
    nlohmann::json meta = nlohmann::json::parse(meta_in);
    if (!meta.contains("base_point")) throw std::runtime_error("metadata: base_point required");
    std::vector<double> bp = meta["base_point"].get<std::vector<double>>();
    if (bp.size() < 2 || bp.size() > 3) throw std::runtime_error("metadata: base_point dim 2 or 3");
    std::vector<double> scales;
    if (meta.contains("scales")) scales = meta["scales"].get<std::vector<double>>();
    std::sort(scales.rbegin(), scales.rend());

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    std::string header;
    std::getline(in, header);
    int dim = header.find('z') != std::string::npos ? 3 : 2;
    if (dim != static_cast<int>(bp.size()))
        throw std::runtime_error("metadata base_point dimension does not match CSV header");

    SetGerm g;
    g.dim = dim;
    g.base_point = dim == 2 ? Vec(bp[0], bp[1]) : Vec(bp[0], bp[1], bp[2]);
    g.id = "pointcloud";
    PointCloudRep rep;
    if (scales.empty()) scales.push_back(1.0);
    for (double s : scales) rep.per_scale.push_back({s, {}});

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (static_cast<int>(vals.size()) != dim)
            throw std::runtime_error("CSV row arity mismatch: " + line);
        Vec x = dim == 2 ? Vec(vals[0], vals[1]) : Vec(vals[0], vals[1], vals[2]);
        // bin to the nearest listed scale by radius from the base point
        double r = distance(x, g.base_point);
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rep.per_scale.size(); ++i) {
            double gap = std::fabs(std::log(std::max(r, 1e-300) / rep.per_scale[i].first));
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        rep.per_scale[best].second.push_back(x);
    }
    g.rep = std::move(rep);
    return g;
}

}  // namespace dirgeo
