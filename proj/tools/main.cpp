#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "smean/io.hpp"

namespace fs = std::filesystem;
using namespace smean;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "run configuration file");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config out_dir)");
    cmd->add_option("--seed", flags.seed, "rng seed (overrides config)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags.config_path);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.threads >= 0) cfg.threads = flags.threads;
    fs::create_directories(cfg.out_dir);
    return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void maybe_pgm(const VolumeData& vol, bool want, const std::string& path) {
    if (!want) return;
    double lo = vol.values.empty() ? 0.0 : vol.values[0];
    double hi = lo;
    for (double v : vol.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const int axis = vol.dim > 2 ? vol.dim - 1 : 0;
    const int index = vol.dim > 2 ? vol.counts[axis] / 2 : 0;
    export_slice_pgm(vol, axis, index, lo, hi, path);
    std::cout << "wrote " << path << "\n";
}

int run_phantom(const CommonFlags& flags, bool pgm) {
    const RunConfig cfg = resolve_config(flags);
    const VolumeData truth = render_phantom(cfg);
    write_volume(out_path(cfg, "phantom.vol"), truth);
    std::cout << "wrote " << out_path(cfg, "phantom.vol") << "\n";
    maybe_pgm(truth, pgm, out_path(cfg, "phantom.pgm"));
    return 0;
}

int run_forward(const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const MeanData data = forward_transform(cfg.phantom(), cfg.ellipsoid(), cfg.directions(),
                                            cfg.radial_grid(), cfg.forward_path, cfg.threads);
    write_volume(out_path(cfg, "means.vol"), to_volume(data));
    std::cout << "wrote " << out_path(cfg, "means.vol") << "\n";
    return 0;
}

int run_reconstruct(const CommonFlags& flags, const std::string& means_path, bool pgm) {
    const RunConfig cfg = resolve_config(flags);
    const std::string in_path =
        means_path.empty() ? out_path(cfg, "means.vol") : means_path;
    const MeanData data = means_from_volume(read_volume(in_path), cfg);
    ReconstructOptions options;
    options.even_rule = cfg.even_rule;
    options.odd_integrand = cfg.odd_integrand;
    options.threads = cfg.threads;
    const VolumeGrid grid = cfg.volume_grid();
    const ReconImage image = reconstruct(data, grid, options);
    write_volume(out_path(cfg, "recon.vol"), to_volume(image));
    std::cout << "wrote " << out_path(cfg, "recon.vol") << "\n";
    if (image.skipped_singular_terms != 0)
        std::cout << "skipped singular kernel terms: " << image.skipped_singular_terms
                  << "\n";
    if (image.dropped_nodes != 0)
        std::cout << "dropped masked nodes without full stencil: " << image.dropped_nodes
                  << "\n";
    maybe_pgm(to_volume(image), pgm, out_path(cfg, "recon.pgm"));
    return 0;
}

int run_verify(const CommonFlags& flags, const std::vector<int>& dims, double tol_scale) {
    VerifyConfig vcfg;
    std::string out_dir = "out";
    if (!flags.config_path.empty()) {
        const RunConfig cfg = load_config(flags.config_path);
        vcfg.seed = cfg.seed;
        vcfg.tolerance_scale = cfg.tolerance_scale;
        vcfg.threads = cfg.threads;
        out_dir = cfg.out_dir;
    }
    if (flags.seed_set) vcfg.seed = flags.seed;
    if (flags.threads >= 0) vcfg.threads = flags.threads;
    if (tol_scale > 0.0) vcfg.tolerance_scale = tol_scale;
    if (!flags.out_dir.empty()) out_dir = flags.out_dir;
    vcfg.dims = dims;
    fs::create_directories(out_dir);

    const std::vector<CheckReport> reports = run_all(vcfg);
    const std::string csv = (fs::path(out_dir) / "checks.csv").string();
    write_reports_csv(csv, reports);
    bool all_pass = true;
    for (const CheckReport& rep : reports) {
        std::printf("%-24s n=%d  error=%-12.3e tol=%-10.2e %s  [%s]\n", rep.name.c_str(),
                    rep.n, rep.error, rep.tolerance, rep.pass ? "pass" : "FAIL",
                    rep.params.c_str());
        all_pass = all_pass && rep.pass;
    }
    std::cout << "wrote " << csv << "\n";
    return all_pass ? 0 : 1;
}

int run_metrics(const CommonFlags& flags, const std::string& a, const std::string& b) {
    const VolumeData va = read_volume(a);
    const VolumeData vb = read_volume(b);
    std::vector<double> semi_axes;
    std::string out_dir = flags.out_dir.empty() ? "." : flags.out_dir;
    if (!flags.config_path.empty()) {
        const RunConfig cfg = load_config(flags.config_path);
        semi_axes = cfg.semi_axes;
        if (flags.out_dir.empty()) out_dir = cfg.out_dir;
    } else {
        // no geometry given: mask against the volume's own bounding box
        semi_axes.resize(va.dim);
        for (int i = 0; i < va.dim; ++i)
            semi_axes[i] = std::abs(va.origin[i]);
    }
    const VolumeMetrics m = compare_volumes(va, vb, semi_axes);
    fs::create_directories(out_dir);
    const std::string csv = (fs::path(out_dir) / "metrics.csv").string();
    write_metrics_csv(csv, m);
    std::printf("rel_l2_masked=%.6e rel_linf_masked=%.6e\n", m.rel_l2_masked,
                m.rel_linf_masked);
    std::printf("rel_l2_interior=%.6e rel_linf_interior=%.6e\n", m.rel_l2_interior,
                m.rel_linf_interior);
    std::printf("rel_l2_full=%.6e rel_linf_full=%.6e\n", m.rel_l2_full, m.rel_linf_full);
    std::cout << "wrote " << csv << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical mean transform toolkit: simulate means over spheres centered "
                 "on an ellipsoid boundary and invert them by filtered back-projection"};
    app.require_subcommand(1);

    CommonFlags phantom_flags, forward_flags, recon_flags, verify_flags, metrics_flags;
    bool phantom_pgm = false, recon_pgm = false;
    std::string means_path;
    std::vector<int> verify_dims;
    double verify_tol_scale = 0.0;
    std::string metrics_a, metrics_b;

    CLI::App* phantom_cmd =
        app.add_subcommand("phantom", "render the ground-truth phantom to a volume file");
    add_common(phantom_cmd, phantom_flags, true);
    phantom_cmd->add_flag("--pgm", phantom_pgm, "also write a PGM slice preview");

    CLI::App* forward_cmd =
        app.add_subcommand("forward", "compute spherical mean data (the sinogram)");
    add_common(forward_cmd, forward_flags, true);

    CLI::App* recon_cmd =
        app.add_subcommand("reconstruct", "invert mean data back to a volume");
    add_common(recon_cmd, recon_flags, true);
    recon_cmd->add_option("means", means_path, "input means file (default <out>/means.vol)");
    recon_cmd->add_flag("--pgm", recon_pgm, "also write a PGM slice preview");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the numerical lemma suite and write a CSV report");
    add_common(verify_cmd, verify_flags, false);
    verify_cmd->add_option("--n", verify_dims, "restrict checks to these dimensions");
    verify_cmd->add_option("--tolerance-scale", verify_tol_scale,
                           "scale all tolerances by this factor");

    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "compare two volume files (relative L2 / Linf)");
    add_common(metrics_cmd, metrics_flags, false);
    metrics_cmd->add_option("a", metrics_a, "test volume")->required();
    metrics_cmd->add_option("b", metrics_b, "reference volume")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (phantom_cmd->parsed()) return run_phantom(phantom_flags, phantom_pgm);
        if (forward_cmd->parsed()) return run_forward(forward_flags);
        if (recon_cmd->parsed()) return run_reconstruct(recon_flags, means_path, recon_pgm);
        if (verify_cmd->parsed())
            return run_verify(verify_flags, verify_dims, verify_tol_scale);
        if (metrics_cmd->parsed()) return run_metrics(metrics_flags, metrics_a, metrics_b);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
