// Single-binary command line front end: bounds, feasibility, rf, place,
// count-regions, gen-data, train, attack, report.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "patchfeas/archspec.hpp"
#include "patchfeas/attack.hpp"
#include "patchfeas/dataset.hpp"
#include "patchfeas/errors.hpp"
#include "patchfeas/geometry.hpp"
#include "patchfeas/manifest.hpp"
#include "patchfeas/model.hpp"
#include "patchfeas/pnm.hpp"
#include "patchfeas/regions.hpp"
#include "patchfeas/report.hpp"
#include "patchfeas/rfield.hpp"
#include "patchfeas/train.hpp"

namespace fs = std::filesystem;
using namespace patchfeas;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

std::string out_dir_of(const std::string& file_path) {
    std::string dir = fs::path(file_path).parent_path().string();
    return dir.empty() ? "." : dir;
}

void parse_hw(const std::string& s, int& h, int& w) {
    size_t x = s.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("expected HxW, got '" + s + "'");
    try {
        h = std::stoi(s.substr(0, x));
        w = std::stoi(s.substr(x + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected HxW, got '" + s + "'");
    }
    if (h < 1 || w < 1) throw CLI::ValidationError("patch dims must be >= 1");
}

struct PatchArg {
    int h = 0, w = 0;
    bool auto_place = false;
    bool has_origin = false;
    int top = 0, left = 0;
};

PatchArg parse_patch_arg(const std::string& s) {
    PatchArg p;
    size_t at = s.find('@');
    parse_hw(s.substr(0, at), p.h, p.w);
    if (at == std::string::npos) return p;
    std::string loc = s.substr(at + 1);
    if (loc == "auto") {
        p.auto_place = true;
        return p;
    }
    size_t comma = loc.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected @top,left or @auto, got '@" + loc + "'");
    try {
        p.top = std::stoi(loc.substr(0, comma));
        p.left = std::stoi(loc.substr(comma + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected @top,left or @auto, got '@" + loc + "'");
    }
    p.has_origin = true;
    return p;
}

std::string frac_str(const Frac& f) {
    if (f.den == 1) return std::to_string(f.num);
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

std::vector<std::string> collect_argv(int argc, char** argv) {
    return std::vector<std::string>(argv, argv + argc);
}

// ---------------------------------------------------------------- bounds ---

int run_bounds(const std::string& spec_path, const std::string& patch_hw,
               const std::string& mode_str, const std::string& out_path,
               const std::vector<std::string>& argv) {
    NetworkSpec net = parse_spec_file(spec_path);
    int ph = 0, pw = 0;
    parse_hw(patch_hw, ph, pw);
    BoundMode mode = bound_mode_from_string(mode_str);
    Shape3 patch{net.input.c, ph, pw};
    ConvRegionBound b = conv_region_bound(net, patch, mode);

    std::ostringstream csv;
    csv << "layer_index,in_vol,out_vol,log10_factor,cumulative_log10\n";
    double cum = 0.0;
    for (const BoundFactor& f : b.factors) {
        double lf = f.factor.log10();
        cum += lf;
        csv << f.layer_index << ',' << f.in_vol << ',' << f.out_vol << ',' << lf << ','
            << cum << '\n';
    }
    if (out_path.empty()) {
        std::cout << csv.str();
        std::cerr << "total log10 bound: " << b.total.log10() << " (" << b.total.digits()
                  << " digits)\n";
    } else {
        spit(out_path, csv.str());
        write_manifest(out_dir_of(out_path), argv, 0,
                       {fs::path(out_path).filename().string()});
    }
    return 0;
}

// ----------------------------------------------------------- feasibility ---

int run_feasibility(double log10_bound, bool has_log10, const std::string& bound_str,
                    const std::string& spec_path, const std::vector<std::string>& patches,
                    const std::string& mode_str, unsigned classes,
                    const std::string& out_path, const std::vector<std::string>& argv) {
    std::ostringstream csv;
    csv << "arch,patch_h,patch_w,mode,log10_bound,classes,max_area,max_side\n";

    auto emit = [&](const std::string& arch, int ph, int pw, const std::string& mode,
                    double l10, const FeasibilityResult& r) {
        csv << arch << ',' << ph << ',' << pw << ',' << mode << ',' << l10 << ','
            << classes << ',' << r.max_area << ',' << r.max_side << '\n';
        if (r.warn_band)
            std::cerr << "warning: log10/log10(D) within 1e-9 of an integer; max_area "
                         "could be off by one\n";
    };

    if (!spec_path.empty()) {
        NetworkSpec net = parse_spec_file(spec_path);
        BoundMode mode = bound_mode_from_string(mode_str);
        if (patches.empty()) throw CLI::ValidationError("--spec requires at least one --patch");
        for (const std::string& s : patches) {
            int ph = 0, pw = 0;
            parse_hw(s, ph, pw);
            ConvRegionBound b = conv_region_bound(net, Shape3{net.input.c, ph, pw}, mode);
            FeasibilityQuery q;
            q.bound = b.total;
            q.classes = classes;
            emit(net.name, ph, pw, mode_str, b.total.log10(), feasible_region(q));
        }
    } else if (!bound_str.empty()) {
        FeasibilityQuery q;
        q.bound = BigCount::from_decimal(bound_str);
        q.classes = classes;
        emit("manual", 0, 0, "as_printed", q.bound->log10(), feasible_region(q));
    } else if (has_log10) {
        FeasibilityQuery q;
        q.log10_bound = log10_bound;
        q.classes = classes;
        emit("manual", 0, 0, "as_printed", log10_bound, feasible_region(q));
    } else {
        throw CLI::ValidationError("one of --spec, --bound, --log10 is required");
    }

    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        spit(out_path, csv.str());
        write_manifest(out_dir_of(out_path), argv, 0,
                       {fs::path(out_path).filename().string()});
    }
    return 0;
}

// --------------------------------------------------------------------- rf ---

int run_rf(const std::string& spec_path) {
    NetworkSpec net = parse_spec_file(spec_path);
    net = propagate_shapes(net, net.input);
    RFDescriptor rf = receptive_field(net);
    std::cout << "layer,rf_h,rf_w,jump,offset_h,offset_w\n";
    for (size_t i = 0; i < rf.layers.size(); ++i) {
        const RFLayer& l = rf.layers[i];
        std::cout << i << ',' << frac_str(l.rf_h) << ',' << frac_str(l.rf_w) << ','
                  << frac_str(l.jump) << ',' << frac_str(l.offset_h) << ','
                  << frac_str(l.offset_w) << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------ place ---

int run_place(const std::string& mask_path, int class_id, const std::string& patch_hw) {
    GrayImage mask = read_pgm(mask_path);
    BinaryMask bm(mask.height, mask.width);
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            bm.set(y, x, mask.pixels[static_cast<size_t>(y) * mask.width + x] == class_id);
    auto rect = largest_inscribed_rect(bm);
    if (!rect) throw DataError("class " + std::to_string(class_id) + " absent from the mask");

    nlohmann::json out;
    out["rect"] = {{"top", rect->top}, {"left", rect->left}, {"height", rect->height},
                   {"width", rect->width}};
    if (!patch_hw.empty()) {
        int ph = 0, pw = 0;
        parse_hw(patch_hw, ph, pw);
        PatchOrigin o = center_patch(*rect, ph, pw);
        out["patch"] = {{"top", o.top}, {"left", o.left}, {"height", ph}, {"width", pw}};
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------- count-regions ---

int run_count_regions(const std::string& spec_path, uint64_t seed, int resolution,
                      double lo, double hi) {
    NetworkSpec net = parse_spec_file(spec_path);
    FcParams params = random_fc_params(net, seed);
    long dim = net.input.vol();
    InputBox box{Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi)};
    long count = count_regions_exact(net, params, box, resolution);
    ConvRegionBound bound = conv_region_bound(net, net.input, BoundMode::per_layer_input);
    std::cout << "count " << count << "\nbound " << bound.total.to_string() << '\n';
    return 0;
}

// --------------------------------------------------------------- gen-data ---

int run_gen_data(int count, int size, uint64_t seed, const std::string& out_dir,
                 const std::vector<std::string>& argv) {
    auto samples = gen_shapes_dataset(count, size, seed);
    fs::create_directories(out_dir);
    write_dataset(out_dir, samples, size, seed);
    std::vector<std::string> artifacts = {"meta.json"};
    for (int i = 0; i < count; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "%05d", i);
        artifacts.push_back(std::string(name) + ".ppm");
        artifacts.push_back(std::string(name) + ".pgm");
    }
    write_manifest(out_dir, argv, seed, artifacts);
    std::cerr << "wrote " << count << " samples to " << out_dir << '\n';
    return 0;
}

// ------------------------------------------------------------------ train ---

int run_train(const std::string& spec_path, const std::string& data_dir,
              const std::string& val_dir, const TrainConfig& cfg, const std::string& out_path,
              const std::vector<std::string>& argv) {
    NetworkSpec net = parse_spec_file(spec_path);
    net = propagate_shapes(net, net.input);
    auto train_data = load_dataset(data_dir);
    auto val_data = load_dataset(val_dir);
    TrainResult result = train(net, train_data, val_data, cfg,
                               [](const std::string& line) { std::cerr << line << '\n'; });
    save_model(out_path, net, result.params);
    std::cout << "final val pixel accuracy: " << result.val_acc.back() << '\n';
    write_manifest(out_dir_of(out_path), argv, cfg.seed,
                   {fs::path(out_path).filename().string()});
    return 0;
}

// ----------------------------------------------------------------- attack ---

AttackTarget parse_target(const std::string& spec, const std::vector<uint8_t>& labels,
                          int h, int w, int num_classes) {
    size_t colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "class_switch") {
        size_t comma = args.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("class_switch needs from,to");
        int from = std::stoi(args.substr(0, comma));
        int to = std::stoi(args.substr(comma + 1));
        return build_target_class_switch(labels, h, w, static_cast<uint8_t>(from),
                                         static_cast<uint8_t>(to));
    }
    if (kind == "erase") {
        return build_target_erase(labels, h, w, static_cast<uint8_t>(std::stoi(args)));
    }
    if (kind == "custom") {
        GrayImage m = read_pgm(args);
        if (m.height != h || m.width != w) throw DataError("custom mask shape mismatch");
        return build_target_custom(m.pixels, h, w, num_classes);
    }
    throw CLI::ValidationError("unknown target kind '" + kind + "'");
}

// target class whose mask drives @auto placement
int placement_class(const std::string& target_spec) {
    size_t colon = target_spec.find(':');
    std::string kind = target_spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : target_spec.substr(colon + 1);
    if (kind == "class_switch") return std::stoi(args.substr(0, args.find(',')));
    if (kind == "erase") return std::stoi(args);
    throw DataError("@auto placement needs a class_switch or erase target");
}

int run_attack(const std::string& model_path, const std::string& image_path,
               const std::string& labels_path, const std::string& target_spec,
               const std::string& patch_arg, AttackConfig cfg, const std::string& out_prefix,
               const std::vector<std::string>& argv) {
    LoadedModel model = load_model(model_path);
    const int h = model.spec.input.h, w = model.spec.input.w;

    RgbImage rgb = read_ppm(image_path);
    if (rgb.height != h || rgb.width != w) throw DataError("image shape mismatch with model");
    std::vector<float> pix = from_rgb8(rgb);
    Tensor<float> image(1, 3, h, w);
    std::copy(pix.begin(), pix.end(), image.data.begin());

    GrayImage labels_img = read_pgm(labels_path);
    if (labels_img.height != h || labels_img.width != w)
        throw DataError("label shape mismatch with model");
    int num_classes = model.spec.shapes.back().c;
    AttackTarget target = parse_target(target_spec, labels_img.pixels, h, w, num_classes);

    PatchArg pa = parse_patch_arg(patch_arg);
    int top = pa.top, left = pa.left;
    if (pa.auto_place) {
        int cls = placement_class(target_spec);
        BinaryMask bm(h, w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                bm.set(y, x, labels_img.pixels[static_cast<size_t>(y) * w + x] == cls);
        auto rect = largest_inscribed_rect(bm);
        if (!rect) throw DataError("placement class absent from the labels");
        PatchOrigin o = center_patch(*rect, pa.h, pa.w);
        top = o.top;
        left = o.left;
    } else if (!pa.has_origin) {
        top = (h - pa.h) / 2;
        left = (w - pa.w) / 2;
    }

    PatchSpec patch0 = PatchSpec::gray(pa.h, pa.w, top, left);
    AttackResult result = momentum_patch_attack(model.spec, model.params, image, target,
                                                patch0, cfg);
    EffectResult effect = measure_effect(model.spec, model.params, image, result.patch,
                                         target, cfg.smooth);

    // artifacts
    fs::path prefix(out_prefix);
    fs::path dir = prefix.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    std::string base = prefix.filename().string();
    auto name = [&](const std::string& suffix) { return base + "_" + suffix; };
    auto path = [&](const std::string& suffix) { return (dir / name(suffix)).string(); };

    Tensor<float> patched = apply_patch(image, result.patch, 0, 0, cfg.smooth, 0.0f, nullptr);
    std::vector<float> pvec(patched.data.begin(), patched.data.end());
    write_ppm(path("patched.ppm"), to_rgb8(pvec, h, w));
    write_ppm(path("patch.ppm"), to_rgb8(result.patch.pixels, pa.h, pa.w));
    write_pgm(path("before.pgm"), GrayImage{h, w, effect.argmax_before});
    write_pgm(path("after.pgm"), GrayImage{h, w, effect.argmax_after});
    GrayImage changed{h, w, std::vector<uint8_t>(static_cast<size_t>(h) * w, 0)};
    for (size_t i = 0; i < changed.pixels.size(); ++i)
        changed.pixels[i] = effect.changed_mask.bits[i] ? 255 : 0;
    write_pgm(path("changed.pgm"), changed);

    nlohmann::json metrics;
    metrics["arch"] = model.spec.name;
    metrics["patch_h"] = pa.h;
    metrics["patch_w"] = pa.w;
    metrics["top"] = top;
    metrics["left"] = left;
    metrics["changed_pixels"] = effect.changed_pixels;
    metrics["agreement"] = effect.agreement;
    metrics["best_loss"] = result.best_loss;
    metrics["best_iteration"] = result.best_iteration;
    metrics["iterations"] = cfg.iterations;
    metrics["seed"] = cfg.seed;
    spit(path("metrics.json"), metrics.dump(2) + "\n");

    std::ostringstream trace;
    trace << "iteration,loss\n";
    for (size_t i = 0; i < result.loss_trace.size(); ++i)
        trace << i << ',' << result.loss_trace[i] << '\n';
    spit(path("trace.csv"), trace.str());

    write_manifest(dir.empty() ? "." : dir.string(), argv, cfg.seed,
                   {name("patched.ppm"), name("patch.ppm"), name("before.pgm"),
                    name("after.pgm"), name("changed.pgm"), name("metrics.json"),
                    name("trace.csv")});

    std::cout << "changed_pixels " << effect.changed_pixels << "\nagreement "
              << effect.agreement << '\n';
    return 0;
}

// ----------------------------------------------------------------- report ---

int run_report(const std::string& feasibility_path, const std::vector<std::string>& metrics,
               const std::string& out_path, const std::vector<std::string>& argv) {
    std::vector<std::string> texts;
    for (const std::string& m : metrics) texts.push_back(slurp(m));
    FeasibilityReport rep = build_report(slurp(feasibility_path), texts);
    std::string csv = report_to_csv(rep);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        spit(out_path, csv);
        write_manifest(out_dir_of(out_path), argv, 0,
                       {fs::path(out_path).filename().string()});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> full_argv = collect_argv(argc, argv);
    CLI::App app{"patch-attack feasibility bounds and desk-scale segmentation attacks"};
    app.require_subcommand(1);

    int workers = 1;
    app.add_option("--workers", workers, "worker count (1 guarantees determinism)")
        ->envname("PATCHFEAS_WORKERS");

    // bounds
    std::string b_spec, b_patch, b_mode = "as_printed", b_out;
    auto* bounds = app.add_subcommand("bounds", "per-layer linear-region bound factors");
    bounds->add_option("--spec", b_spec, "architecture json")->required();
    bounds->add_option("--patch", b_patch, "patch size HxW")->required();
    bounds->add_option("--mode", b_mode, "as_printed | per_layer_input");
    bounds->add_option("--out", b_out, "write csv here (with manifest)");

    // feasibility
    double f_log10 = 0.0;
    std::string f_bound, f_spec, f_mode = "as_printed", f_out;
    std::vector<std::string> f_patches;
    unsigned f_classes = 2;
    auto* feas = app.add_subcommand("feasibility", "maximal arbitrary-output area");
    auto* f_log10_opt = feas->add_option("--log10", f_log10, "log10 of the region bound");
    feas->add_option("--bound", f_bound, "exact decimal region bound");
    feas->add_option("--spec", f_spec, "architecture json (bound computed exactly)");
    feas->add_option("--patch", f_patches, "patch size HxW (repeatable with --spec)");
    feas->add_option("--mode", f_mode, "as_printed | per_layer_input");
    feas->add_option("--classes", f_classes, "number of output classes D")->required();
    feas->add_option("--out", f_out, "write csv here (with manifest)");

    // rf
    std::string rf_spec;
    auto* rf = app.add_subcommand("rf", "receptive field per layer");
    rf->add_option("--spec", rf_spec, "architecture json")->required();

    // place
    std::string p_mask, p_patch;
    int p_class = 0;
    auto* place = app.add_subcommand("place", "inscribed-rectangle patch placement");
    place->add_option("--mask", p_mask, "class-index pgm mask")->required();
    place->add_option("--class-id", p_class, "object class index")->required();
    place->add_option("--patch", p_patch, "patch size HxW to center");

    // count-regions
    std::string c_spec;
    uint64_t c_seed = 0;
    int c_res = 1001;
    double c_lo = -2.0, c_hi = 2.0;
    auto* count = app.add_subcommand("count-regions", "grid region counter for tiny fc nets");
    count->add_option("--spec", c_spec, "architecture json (fully connected)")->required();
    count->add_option("--seed", c_seed, "weight seed");
    count->add_option("--resolution", c_res, "grid samples per axis");
    count->add_option("--lo", c_lo, "box lower bound");
    count->add_option("--hi", c_hi, "box upper bound");

    // gen-data
    int g_count = 0, g_size = 64;
    uint64_t g_seed = 0;
    std::string g_out;
    auto* gen = app.add_subcommand("gen-data", "synthetic shapes segmentation data");
    gen->add_option("--count", g_count, "number of samples")->required();
    gen->add_option("--size", g_size, "image size (pixels)");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--out", g_out, "output directory")->required();

    // train
    std::string t_spec, t_data, t_val, t_out;
    TrainConfig t_cfg;
    auto* tr = app.add_subcommand("train", "train the toy segmentation model");
    tr->add_option("--spec", t_spec, "architecture json")->required();
    tr->add_option("--data", t_data, "training dataset directory")->required();
    tr->add_option("--val", t_val, "validation dataset directory")->required();
    tr->add_option("--epochs", t_cfg.epochs, "epochs");
    tr->add_option("--lr", t_cfg.lr, "learning rate");
    tr->add_option("--momentum", t_cfg.momentum, "momentum");
    tr->add_option("--batch", t_cfg.batch, "batch size");
    tr->add_option("--seed", t_cfg.seed, "init/shuffle seed");
    tr->add_option("--out", t_out, "model output path")->required();

    // attack
    std::string a_model, a_image, a_labels, a_target, a_patch, a_prefix;
    AttackConfig a_cfg;
    auto* at = app.add_subcommand("attack", "momentum-iterative patch attack");
    at->add_option("--model", a_model, "model file")->required();
    at->add_option("--image", a_image, "input ppm")->required();
    at->add_option("--labels", a_labels, "label pgm (target construction)")->required();
    at->add_option("--target", a_target,
                   "class_switch:from,to | erase:class | custom:mask.pgm")->required();
    at->add_option("--patch", a_patch, "HxW[@top,left | @auto]")->required();
    at->add_option("--iters", a_cfg.iterations, "iterations");
    at->add_option("--step", a_cfg.step, "sign step size");
    at->add_option("--momentum", a_cfg.momentum, "gradient momentum");
    at->add_flag("--eot", a_cfg.eot, "jitter/brightness/noise transforms");
    at->add_option("--jitter", a_cfg.max_jitter, "max jitter (pixels)");
    at->add_option("--noise", a_cfg.noise_sigma, "patch noise sigma");
    at->add_flag("--smooth", a_cfg.smooth, "optimize through 3x3 average pooling");
    at->add_option("--seed", a_cfg.seed, "attack seed");
    at->add_option("--out-prefix", a_prefix, "artifact path prefix")->required();

    // report
    std::string r_feas, r_out;
    std::vector<std::string> r_metrics;
    auto* rep = app.add_subcommand("report", "join feasibility table with attack metrics");
    rep->add_option("--feasibility", r_feas, "feasibility csv")->required();
    rep->add_option("--metrics", r_metrics, "attack metrics json files");
    rep->add_option("--out", r_out, "write csv here (with manifest)");

    try {
        app.parse(argc, argv);
        if (workers < 1) throw CLI::ValidationError("--workers must be >= 1");
        if (bounds->parsed()) return run_bounds(b_spec, b_patch, b_mode, b_out, full_argv);
        if (feas->parsed())
            return run_feasibility(f_log10, f_log10_opt->count() > 0, f_bound, f_spec,
                                   f_patches, f_mode, f_classes, f_out, full_argv);
        if (rf->parsed()) return run_rf(rf_spec);
        if (place->parsed()) return run_place(p_mask, p_class, p_patch);
        if (count->parsed()) return run_count_regions(c_spec, c_seed, c_res, c_lo, c_hi);
        if (gen->parsed()) return run_gen_data(g_count, g_size, g_seed, g_out, full_argv);
        if (tr->parsed()) return run_train(t_spec, t_data, t_val, t_cfg, t_out, full_argv);
        if (at->parsed())
            return run_attack(a_model, a_image, a_labels, a_target, a_patch, a_cfg, a_prefix,
                              full_argv);
        if (rep->parsed()) return run_report(r_feas, r_metrics, r_out, full_argv);
        return 1;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
