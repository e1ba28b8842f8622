#include "smean/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "smean/parallel.hpp"

static_assert(std::endian::native == std::endian::little,
              "volume payload is little-endian float64");

namespace smean {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (!is.eof())
        throw std::invalid_argument("config: key '" + key + "' has a non-numeric value");
    if (out.empty())
        throw std::invalid_argument("config: key '" + key + "' needs a numeric value");
    return out;
}

double parse_one_double(const std::string& text, const std::string& key) {
    const std::vector<double> v = parse_doubles(text, key);
    if (v.size() != 1)
        throw std::invalid_argument("config: key '" + key + "' takes a single value");
    return v[0];
}

int parse_one_int(const std::string& text, const std::string& key) {
    const double v = parse_one_double(text, key);
    if (v != std::floor(v))
        throw std::invalid_argument("config: key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Ellipsoid RunConfig::ellipsoid() const { return Ellipsoid(n, semi_axes); }

Phantom RunConfig::phantom() const {
    if (bumps.empty())
        throw std::invalid_argument("config: this operation needs at least one 'bump'");
    return Phantom(ellipsoid(), bumps);
}

SphereQuadrature RunConfig::directions() const {
    return build_sphere_quadrature(n, directions_order);
}

RadialGrid RunConfig::radial_grid() const {
    const Ellipsoid e = ellipsoid();
    if (r_max <= 0.0) return RadialGrid::cover(e, radial_samples);
    RadialGrid grid;
    grid.count = radial_samples;
    grid.staggered = true;
    grid.dr = r_max / (radial_samples - 0.5);
    if (r_max < e.diameter())
        throw std::invalid_argument("config: r_max must cover the ellipsoid diameter");
    return grid;
}

double RunConfig::margin() const {
    if (grid_margin >= 0.0) return grid_margin;
    double amax = semi_axes.empty() ? 1.0 : *std::max_element(semi_axes.begin(), semi_axes.end());
    return 0.05 * amax;
}

VolumeGrid RunConfig::volume_grid() const {
    return VolumeGrid::cover(ellipsoid(), grid_nodes, margin());
}

RunConfig parse_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    RunConfig cfg;
    for (const auto& [key, value] : entries)
        if (key == "n") cfg.n = parse_one_int(value, key);
    if (cfg.n < 2) throw std::invalid_argument("config: 'n' must be given and >= 2");

    bool saw_axes = false;
    std::string pipeline = "auto";
    for (const auto& [key, value] : entries) {
        if (key == "n") {
            continue;
        } else if (key == "semi_axes") {
            cfg.semi_axes = parse_doubles(value, key);
            saw_axes = true;
        } else if (key == "bump") {
            const std::vector<double> v = parse_doubles(value, key);
            if (static_cast<int>(v.size()) != cfg.n + 2)
                throw std::invalid_argument(
                    "config: 'bump' takes n center coordinates, radius, amplitude");
            RadialBump bump;
            bump.center.assign(v.begin(), v.begin() + cfg.n);
            bump.radius = v[cfg.n];
            bump.amplitude = v[cfg.n + 1];
            cfg.bumps.push_back(std::move(bump));
        } else if (key == "directions_order") {
            cfg.directions_order = parse_one_int(value, key);
        } else if (key == "radial_samples") {
            cfg.radial_samples = parse_one_int(value, key);
        } else if (key == "r_max") {
            if (value != "auto") cfg.r_max = parse_one_double(value, key);
        } else if (key == "grid_nodes") {
            const std::vector<double> v = parse_doubles(value, key);
            cfg.grid_nodes.clear();
            for (double x : v) {
                if (x != std::floor(x) || x < 2)
                    throw std::invalid_argument("config: 'grid_nodes' must be integers >= 2");
                cfg.grid_nodes.push_back(static_cast<int>(x));
            }
        } else if (key == "grid_margin") {
            cfg.grid_margin = parse_one_double(value, key);
        } else if (key == "pipeline") {
            pipeline = value;
        } else if (key == "forward_path") {
            if (value == "analytic") cfg.forward_path = ForwardPath::Analytic;
            else if (value == "generic") cfg.forward_path = ForwardPath::Generic;
            else throw std::invalid_argument("config: forward_path is 'analytic' or 'generic'");
        } else if (key == "even_rule") {
            if (value == "product") cfg.even_rule = EvenRadialRule::ProductIntegration;
            else if (value == "midpoint") cfg.even_rule = EvenRadialRule::Midpoint;
            else throw std::invalid_argument("config: even_rule is 'product' or 'midpoint'");
        } else if (key == "odd_integrand") {
            if (value == "proof") cfg.odd_integrand = OddIntegrand::ProofForm;
            else if (value == "literal") cfg.odd_integrand = OddIntegrand::TheoremLiteral;
            else throw std::invalid_argument("config: odd_integrand is 'proof' or 'literal'");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_one_double(value, key));
        } else if (key == "threads") {
            cfg.threads = parse_one_int(value, key);
        } else if (key == "tolerance_scale") {
            cfg.tolerance_scale = parse_one_double(value, key);
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }

    if (!saw_axes) throw std::invalid_argument("config: 'semi_axes' is required");
    if (static_cast<int>(cfg.semi_axes.size()) != cfg.n)
        throw std::invalid_argument("config: 'semi_axes' needs exactly n values");
    for (double a : cfg.semi_axes)
        if (a <= 0.0) throw std::invalid_argument("config: semi-axes must be positive");

    // dimension-based defaults
    if (cfg.directions_order == 0) cfg.directions_order = cfg.n == 2 ? 256 : 24;
    if (cfg.radial_samples == 0) cfg.radial_samples = cfg.n == 2 ? 512 : 384;
    if (cfg.grid_nodes.empty()) cfg.grid_nodes.assign(cfg.n, cfg.n == 2 ? 161 : 49);
    if (static_cast<int>(cfg.grid_nodes.size()) == 1)
        cfg.grid_nodes.assign(cfg.n, cfg.grid_nodes[0]);
    if (static_cast<int>(cfg.grid_nodes.size()) != cfg.n)
        throw std::invalid_argument("config: 'grid_nodes' needs 1 or n values");

    if (cfg.directions_order < 2)
        throw std::invalid_argument("config: 'directions_order' must be >= 2");
    if (cfg.radial_samples < 8)
        throw std::invalid_argument("config: 'radial_samples' must be >= 8");

    if (pipeline != "auto") {
        const bool want_even = pipeline == "even";
        if (!want_even && pipeline != "odd")
            throw std::invalid_argument("config: pipeline is 'auto', 'even' or 'odd'");
        if (want_even != (cfg.n % 2 == 0))
            throw std::invalid_argument("config: pipeline '" + pipeline +
                                        "' does not match the parity of n");
    }

    // support-margin invariant, checked here so misconfigurations fail early
    const Ellipsoid e(cfg.n, cfg.semi_axes);
    for (const RadialBump& b : cfg.bumps) {
        const double margin = e.scaled_norm(b.center) + b.radius / e.min_axis();
        if (margin >= 1.0)
            throw std::invalid_argument(
                "config: bump violates the support-margin rule |A^-1 c| + radius/min(a) < 1");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// --- volume container ---------------------------------------------------------

void write_volume(const std::string& path, const VolumeData& volume) {
    std::size_t total = 1;
    for (int c : volume.counts) total *= static_cast<std::size_t>(c);
    if (total != volume.values.size())
        throw std::invalid_argument("write_volume: payload length != product of counts");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "SMEAN1\n";
    out << "kind " << volume.kind << "\n";
    out << "dim " << volume.dim << "\n";
    out << "counts";
    for (int c : volume.counts) out << " " << c;
    out << "\nspacing";
    for (double s : volume.spacing) out << " " << format_double(s);
    out << "\norigin";
    for (double o : volume.origin) out << " " << format_double(o);
    out << "\npayload float64\ndata\n";
    out.write(reinterpret_cast<const char*>(volume.values.data()),
              static_cast<std::streamsize>(volume.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write: " + path);
}

VolumeData read_volume(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open volume file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "SMEAN1")
        throw std::runtime_error(path + ": magic mismatch, not an SMEAN1 file");
    VolumeData vol;
    bool saw_data = false;
    while (std::getline(in, line)) {
        if (line == "data") {
            saw_data = true;
            break;
        }
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "kind") {
            is >> vol.kind;
        } else if (key == "dim") {
            is >> vol.dim;
        } else if (key == "counts") {
            int c;
            while (is >> c) vol.counts.push_back(c);
        } else if (key == "spacing") {
            double s;
            while (is >> s) vol.spacing.push_back(s);
        } else if (key == "origin") {
            double o;
            while (is >> o) vol.origin.push_back(o);
        } else if (key == "payload") {
            std::string tag;
            is >> tag;
            if (tag != "float64")
                throw std::runtime_error(path + ": unsupported payload tag " + tag);
        } else {
            throw std::runtime_error(path + ": unknown header field " + key);
        }
    }
    if (!saw_data) throw std::runtime_error(path + ": missing data section");
    if (vol.dim <= 0 || static_cast<int>(vol.counts.size()) != vol.dim ||
        static_cast<int>(vol.spacing.size()) != vol.dim ||
        static_cast<int>(vol.origin.size()) != vol.dim)
        throw std::runtime_error(path + ": inconsistent header");
    std::size_t total = 1;
    for (int c : vol.counts) total *= static_cast<std::size_t>(c);
    vol.values.resize(total);
    in.read(reinterpret_cast<char*>(vol.values.data()),
            static_cast<std::streamsize>(total * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != total * sizeof(double))
        throw std::runtime_error(path + ": truncated payload");
    return vol;
}

VolumeData to_volume(const ReconImage& image) {
    VolumeData vol;
    vol.kind = "volume";
    vol.dim = image.grid.n;
    vol.counts = image.grid.counts;
    vol.spacing = image.grid.spacing;
    vol.origin = image.grid.origin;
    vol.values = image.values;
    return vol;
}

VolumeData to_volume(const MeanData& data) {
    VolumeData vol;
    vol.kind = "means";
    vol.dim = 2;
    vol.counts = {static_cast<int>(data.directions.size()), data.radii.count};
    vol.spacing = {1.0, data.radii.dr};
    vol.origin = {0.0, data.radii.r_front()};
    vol.values = data.values;
    return vol;
}

MeanData means_from_volume(const VolumeData& volume, const RunConfig& config) {
    if (volume.kind != "means")
        throw std::runtime_error("means_from_volume: volume kind is not 'means'");
    MeanData data{config.ellipsoid(), config.directions(), config.radial_grid(), {}};
    if (volume.counts.size() != 2 ||
        volume.counts[0] != static_cast<int>(data.directions.size()) ||
        volume.counts[1] != data.radii.count)
        throw std::runtime_error(
            "means_from_volume: file shape does not match the config's grids");
    if (std::abs(volume.spacing[1] - data.radii.dr) > 1e-12 * data.radii.dr)
        throw std::runtime_error("means_from_volume: radial spacing mismatch");
    data.values = volume.values;
    return data;
}

VolumeData render_phantom(const RunConfig& config) {
    const Phantom phantom = config.phantom();
    const VolumeGrid grid = config.volume_grid();
    VolumeData vol;
    vol.kind = "volume";
    vol.dim = grid.n;
    vol.counts = grid.counts;
    vol.spacing = grid.spacing;
    vol.origin = grid.origin;
    vol.values.assign(grid.size(), 0.0);
    parallel_for(grid.size(), config.threads, [&](std::size_t idx) {
        std::vector<double> x(grid.n);
        grid.node(idx, x);
        vol.values[idx] = phantom.eval(x);
    });
    return vol;
}

void export_slice_pgm(const VolumeData& volume, int axis, int index, double wmin,
                      double wmax, const std::string& path) {
    if (volume.dim < 2) throw std::invalid_argument("pgm: need at least 2 axes");
    std::vector<int> rest;
    if (volume.dim == 2) {
        axis = -1;
        rest = {0, 1};
    } else {
        if (axis < 0 || axis >= volume.dim)
            throw std::invalid_argument("pgm: axis out of range");
        if (index < 0 || index >= volume.counts[axis])
            throw std::invalid_argument("pgm: slice index out of range");
        for (int i = 0; i < volume.dim; ++i)
            if (i != axis) rest.push_back(i);
        if (rest.size() != 2)
            throw std::invalid_argument("pgm: slicing needs exactly 2 free axes");
    }
    const int height = volume.counts[rest[0]];
    const int width = volume.counts[rest[1]];

    std::vector<std::size_t> stride(volume.dim, 1);
    for (int i = volume.dim - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * static_cast<std::size_t>(volume.counts[i + 1]);

    const bool degenerate = wmin == wmax;
    if (degenerate)
        std::cerr << "pgm: degenerate window (min == max), writing all-zero image\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    std::vector<unsigned char> row(width);
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j) {
            std::size_t idx = stride[rest[0]] * static_cast<std::size_t>(i) +
                              stride[rest[1]] * static_cast<std::size_t>(j);
            if (axis >= 0) idx += stride[axis] * static_cast<std::size_t>(index);
            double v = 0.0;
            if (!degenerate) {
                v = (volume.values[idx] - wmin) / (wmax - wmin);
                v = std::clamp(v, 0.0, 1.0);
            }
            row[j] = static_cast<unsigned char>(std::lround(255.0 * v));
        }
        out.write(reinterpret_cast<const char*>(row.data()), width);
    }
    if (!out) throw std::runtime_error("short write: " + path);
}

// --- metrics -------------------------------------------------------------------

VolumeMetrics compare_volumes(const VolumeData& test, const VolumeData& reference,
                              const std::vector<double>& semi_axes) {
    if (test.counts != reference.counts)
        throw std::invalid_argument("metrics: volumes have different shapes");
    if (static_cast<int>(semi_axes.size()) != test.dim)
        throw std::invalid_argument("metrics: need one semi-axis per volume axis");
    const int n = test.dim;
    double hmax = 0.0, amin = semi_axes[0];
    for (int i = 0; i < n; ++i) {
        hmax = std::max(hmax, test.spacing[i]);
        amin = std::min(amin, semi_axes[i]);
    }
    const double mask_eps = 2.0 * hmax / amin;

    struct Acc {
        double diff2 = 0.0, ref2 = 0.0, diff_max = 0.0, ref_max = 0.0;
        void add(double d, double r) {
            diff2 += d * d;
            ref2 += r * r;
            diff_max = std::max(diff_max, std::abs(d));
            ref_max = std::max(ref_max, std::abs(r));
        }
    } full, masked, interior;

    std::vector<double> x(n);
    std::vector<int> mi(n, 0);
    const std::size_t total = test.values.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        double sn = 0.0;
        for (int i = n - 1; i >= 0; --i) {
            const int c = test.counts[i];
            const double xi = test.origin[i] + test.spacing[i] * static_cast<double>(rem % c);
            rem /= c;
            const double u = xi / semi_axes[i];
            sn += u * u;
        }
        sn = std::sqrt(sn);
        const double d = test.values[idx] - reference.values[idx];
        const double r = reference.values[idx];
        full.add(d, r);
        if (sn < 1.0 - mask_eps) masked.add(d, r);
        if (sn < 0.8) interior.add(d, r);
    }
    const auto rel_l2 = [](const Acc& a) {
        return a.ref2 > 0.0 ? std::sqrt(a.diff2 / a.ref2) : std::sqrt(a.diff2);
    };
    const auto rel_linf = [](const Acc& a) {
        return a.ref_max > 0.0 ? a.diff_max / a.ref_max : a.diff_max;
    };
    VolumeMetrics m;
    m.rel_l2_masked = rel_l2(masked);
    m.rel_linf_masked = rel_linf(masked);
    m.rel_l2_interior = rel_l2(interior);
    m.rel_linf_interior = rel_linf(interior);
    m.rel_l2_full = rel_l2(full);
    m.rel_linf_full = rel_linf(full);
    return m;
}

void write_metrics_csv(const std::string& path, const VolumeMetrics& metrics) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "metric,value\n";
    out << "rel_l2_masked," << format_double(metrics.rel_l2_masked) << "\n";
    out << "rel_linf_masked," << format_double(metrics.rel_linf_masked) << "\n";
    out << "rel_l2_interior," << format_double(metrics.rel_l2_interior) << "\n";
    out << "rel_linf_interior," << format_double(metrics.rel_linf_interior) << "\n";
    out << "rel_l2_full," << format_double(metrics.rel_l2_full) << "\n";
    out << "rel_linf_full," << format_double(metrics.rel_linf_full) << "\n";
}

void write_reports_csv(const std::string& path, const std::vector<CheckReport>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "check,n,params,error,tolerance,pass\n";
    for (const CheckReport& rep : reports) {
        std::string params = rep.params;
        std::replace(params.begin(), params.end(), ',', ';');
        out << rep.name << "," << rep.n << "," << params << "," << format_double(rep.error)
            << "," << format_double(rep.tolerance) << "," << (rep.pass ? "true" : "false")
            << "\n";
    }
}

}  // namespace smean
