// gaze-bench: transformation engine, saliency metric suite, invariance
// analysis, augmentation pipeline, and the desk-scale GazeGAN training /
// gradient-check harness behind one command-line entry point.

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "gaze/analysis/analysis.hpp"
#include "gaze/cli/dataset.hpp"
#include "gaze/cli/manifest.hpp"
#include "gaze/cli/report.hpp"
#include "gaze/core/fixation_csv.hpp"
#include "gaze/core/image_ops.hpp"
#include "gaze/core/png_io.hpp"
#include "gaze/gazegan/gradcheck.hpp"
#include "gaze/gazegan/train.hpp"
#include "gaze/metrics/metrics.hpp"
#include "gaze/transforms/catalog.hpp"
#include "gaze/transforms/jpeg.hpp"

namespace fs = std::filesystem;
using namespace gaze;

namespace {

// Data-parallel map over an index range; output writing stays serialized in
// the caller. Work items must be pure.
void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  const int n = std::min<int>(jobs, static_cast<int>(count));
  std::vector<std::exception_ptr> errors(n);
  for (int t = 0; t < n; ++t)
    workers.emplace_back([&, t] {
      try {
        for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t stimulus_seed(std::uint64_t base, const std::string& group,
                            const std::string& sid) {
  // Stable per-(group, stimulus) stream so --jobs does not affect outputs.
  const std::string key = group + "/" + sid;
  return base ^ cli::fnv1a64(key.data(), key.size());
}

struct GlobalOpts {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string manifest_path;
};

void finish_manifest(cli::RunManifest& m, const GlobalOpts& g) {
  if (!g.manifest_path.empty()) m.write(g.manifest_path);
}

int cmd_transform(const GlobalOpts& g, const std::string& in_dir, const std::string& out_dir,
                  const std::string& group, const std::string& crop_mode) {
  std::vector<std::string> stems;
  for (const auto& e : fs::directory_iterator(in_dir)) {
    if (!e.is_regular_file()) continue;
    const std::string ext = e.path().extension().string();
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") stems.push_back(e.path().string());
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw std::runtime_error("transform: no images under " + in_dir);

  const auto catalog = transforms::transform_catalog();
  std::vector<transforms::TransformRecord> selected;
  if (group == "all") {
    selected = catalog;
  } else {
    selected.push_back(transforms::catalog_record(transforms::transform_id_from_string(group)));
  }

  cli::RunManifest manifest;
  manifest.command = "transform";
  manifest.seed = g.seed;
  manifest.config = {{"in", in_dir}, {"out", out_dir}, {"group", group}, {"crop-mode", crop_mode}};

  struct Job {
    const transforms::TransformRecord* rec;
    std::string in_path;
  };
  std::vector<Job> jobs_list;
  for (const auto& rec : selected) {
    fs::create_directories(fs::path(out_dir) / rec.name());
    for (const auto& path : stems) jobs_list.push_back({&rec, path});
  }

  std::vector<std::string> outputs(jobs_list.size());
  std::mutex write_mu;  // computation is data-parallel, output writing serialized
  parallel_for(jobs_list.size(), g.jobs, [&](size_t i) {
    const Job& job = jobs_list[i];
    const std::string sid = fs::path(job.in_path).stem().string();
    core::ColorImage img = fs::path(job.in_path).extension() == ".png"
                               ? core::read_png(job.in_path)
                               : transforms::read_jpeg(job.in_path);
    transforms::ApplyOptions opt;
    opt.seed = stimulus_seed(g.seed, job.rec->name(), sid);
    opt.crop_mode =
        crop_mode == "keep" ? transforms::CropMode::Keep : transforms::CropMode::Remove;
    const core::ColorImage out = transforms::apply_transform(img, *job.rec, opt);
    const std::string out_path = (fs::path(out_dir) / job.rec->name() / (sid + ".png")).string();
    {
      std::lock_guard<std::mutex> lock(write_mu);
      core::write_png(out, out_path);
    }
    outputs[i] = out_path;
  });

  for (const auto& path : stems) manifest.add_input(path);
  for (const auto& path : outputs) manifest.add_output(path);
  std::cout << "transform: wrote " << outputs.size() << " images across " << selected.size()
            << " group(s) under " << out_dir << "\n";
  finish_manifest(manifest, g);
  return 0;
}

int cmd_evaluate(const GlobalOpts& g, const std::string& pred_dir, const std::string& fix_csv,
                 const std::string& gt_density_dir, const std::string& metrics_list,
                 const std::string& baseline_path, const std::string& out_csv,
                 const std::string& format) {
  std::vector<metrics::Metric> wanted;
  {
    std::stringstream ss(metrics_list);
    std::string item;
    while (std::getline(ss, item, ',')) wanted.push_back(metrics::metric_from_string(item));
  }
  if (wanted.empty()) throw std::runtime_error("evaluate: no metrics requested");

  auto fixations = core::read_fixation_csv(fix_csv);

  std::vector<std::string> pred_files;
  for (const auto& e : fs::directory_iterator(pred_dir))
    if (e.is_regular_file() && e.path().extension() == ".png")
      pred_files.push_back(e.path().string());
  std::sort(pred_files.begin(), pred_files.end());
  if (pred_files.empty()) throw std::runtime_error("evaluate: no predictions under " + pred_dir);

  core::DensityMap baseline;
  const bool have_baseline = !baseline_path.empty();
  if (have_baseline) baseline = core::read_density(baseline_path);

  const std::string group = fs::path(pred_dir).filename().string();
  std::vector<std::vector<cli::ReportRow>> rows_per_file(pred_files.size());
  parallel_for(pred_files.size(), g.jobs, [&](size_t i) {
    const std::string& path = pred_files[i];
    const std::string sid = fs::path(path).stem().string();
    const core::LuminanceGrid sm_raw = core::read_png16(path);
    const core::DensityMap sm_sum = core::normalize(sm_raw, core::Normalization::SumToOne);

    core::FixationSet fix;
    fix.stimulus_id = sid;
    fix.canvas_width = sm_raw.width;
    fix.canvas_height = sm_raw.height;
    if (auto it = fixations.find(sid); it != fixations.end()) fix.points = it->second;

    core::DensityMap gt;
    bool have_gt = false;
    if (!gt_density_dir.empty()) {
      const fs::path gt_path = fs::path(gt_density_dir) / (sid + ".png");
      if (fs::exists(gt_path)) {
        gt = core::read_density(gt_path.string());
        have_gt = true;
      }
    }

    metrics::ShuffleConfig cfg;
    cfg.seed = stimulus_seed(g.seed, group, sid);
    std::vector<core::FixationSet> others;
    for (const auto& [osid, pts] : fixations) {
      if (osid == sid) continue;
      core::FixationSet o;
      o.stimulus_id = osid;
      o.canvas_width = sm_raw.width;
      o.canvas_height = sm_raw.height;
      o.points = pts;
      others.push_back(std::move(o));
    }

    for (const metrics::Metric m : wanted) {
      double v = 0.0;
      switch (m) {
        case metrics::Metric::CC:
          if (!have_gt) continue;
          v = metrics::cc(gt, sm_sum);
          break;
        case metrics::Metric::SIM:
          if (!have_gt) continue;
          v = metrics::sim(gt, sm_sum);
          break;
        case metrics::Metric::KL:
          if (!have_gt) continue;
          v = metrics::kl_div(gt, sm_sum);
          break;
        case metrics::Metric::NSS:
          if (fix.empty()) continue;
          v = metrics::nss(sm_raw, fix);
          break;
        case metrics::Metric::AUC_Judd:
          if (fix.empty()) continue;
          v = metrics::auc_judd(sm_raw, fix);
          break;
        case metrics::Metric::AUC_Borji:
          if (fix.empty()) continue;
          v = metrics::auc_borji(sm_raw, fix, cfg);
          break;
        case metrics::Metric::SAUC:
          if (fix.empty() || others.empty()) continue;
          v = metrics::sauc(sm_raw, fix, others, cfg);
          break;
        case metrics::Metric::IG: {
          if (fix.empty()) continue;
          core::DensityMap base =
              have_baseline ? baseline
                            : core::normalize(core::LuminanceGrid(sm_raw.width, sm_raw.height, 1.0),
                                              core::Normalization::SumToOne);
          v = metrics::info_gain(sm_sum, fix, base);
          break;
        }
      }
      rows_per_file[i].push_back({sid, group, metrics::to_string(m), v});
    }
  });

  std::vector<cli::ReportRow> rows;
  for (auto& rf : rows_per_file) rows.insert(rows.end(), rf.begin(), rf.end());
  if (rows.empty()) throw std::runtime_error("evaluate: no (stimulus, metric) pair was computable");
  if (format == "json")
    cli::write_report_json(out_csv, rows);
  else
    cli::write_report_csv(out_csv, rows);

  cli::RunManifest manifest;
  manifest.command = "evaluate";
  manifest.seed = g.seed;
  manifest.config = {{"pred", pred_dir}, {"fix", fix_csv}, {"metrics", metrics_list},
                     {"out", out_csv}};
  manifest.add_input(fix_csv);
  manifest.add_output(out_csv);
  std::cout << "evaluate: wrote " << rows.size() << " rows to " << out_csv << "\n";
  finish_manifest(manifest, g);
  return 0;
}

int cmd_invariance(const GlobalOpts& g, const std::string& dataset_dir,
                   const std::string& metric_name, const std::string& out_csv,
                   const std::string& heatmap_dir) {
  const cli::DatasetLayout layout = cli::ingest(dataset_dir);
  const analysis::GazeDataset ds = cli::load_gaze_dataset(layout, g.jobs);
  const metrics::Metric metric = metrics::metric_from_string(metric_name);
  const analysis::InvarianceMatrix matrix = analysis::invariance_matrix(ds, metric);
  cli::write_matrix_csv(out_csv, matrix);
  std::cout << "invariance: " << matrix.groups.size() << " groups x "
            << matrix.stimulus_ids.size() << " stimuli -> " << out_csv << "\n";
  for (size_t i = 0; i < matrix.groups.size(); ++i)
    std::cout << "  " << (i + 1) << ". " << transforms::to_string(matrix.groups[i]) << " mean "
              << matrix.group_means[i] << "\n";

  if (!heatmap_dir.empty()) {
    fs::create_directories(heatmap_dir);
    cli::write_matrix_heatmap_png(matrix, (fs::path(heatmap_dir) / "matrix.png").string());
    const auto& ref = ds.densities.at(transforms::TransformId::Reference);
    for (const auto& [gid, stimuli] : ds.densities) {
      if (gid == transforms::TransformId::Reference) continue;
      for (const auto& [sid, den] : stimuli) {
        const auto rit = ref.find(sid);
        if (rit == ref.end()) continue;
        const core::LuminanceGrid heat = analysis::kl_heatmap(rit->second, den);
        cli::write_heatmap_png(heat, (fs::path(heatmap_dir) /
                                      (transforms::to_string(gid) + "_" + sid + ".png"))
                                         .string());
      }
    }
  }

  cli::RunManifest manifest;
  manifest.command = "invariance";
  manifest.seed = g.seed;
  manifest.config = {{"dataset", dataset_dir}, {"metric", metric_name}, {"out", out_csv}};
  manifest.add_output(out_csv);
  finish_manifest(manifest, g);
  return 0;
}

int cmd_augment(const GlobalOpts& g, const std::string& images_dir, const std::string& labels_dir,
                const std::string& set_name, const std::string& out_dir) {
  std::vector<std::string> stems;
  for (const auto& e : fs::directory_iterator(images_dir))
    if (e.is_regular_file() && e.path().extension() == ".png")
      stems.push_back(e.path().stem().string());
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw std::runtime_error("augment: no images under " + images_dir);

  const analysis::PartitionSide side = set_name == "valid" ? analysis::PartitionSide::Valid
                                                           : analysis::PartitionSide::Invalid;

  size_t emitted = 0;
  for (const auto& sid : stems) {
    const core::ColorImage img =
        core::read_png((fs::path(images_dir) / (sid + ".png")).string());
    const fs::path label_path = fs::path(labels_dir) / (sid + ".png");
    if (!fs::exists(label_path))
      throw std::runtime_error("augment: missing label for stimulus '" + sid + "'");
    const core::DensityMap gaze = core::read_density(label_path.string());

    const auto pairs = analysis::augment_dataset({img}, {gaze}, side,
                                                 stimulus_seed(g.seed, set_name, sid));
    for (const auto& pair : pairs) {
      const std::string gname = transforms::to_string(pair.group);
      fs::create_directories(fs::path(out_dir) / gname);
      fs::create_directories(fs::path(out_dir) / gname / "density");
      core::write_png(pair.image, (fs::path(out_dir) / gname / (sid + ".png")).string());
      core::write_png16(pair.label.grid,
                        (fs::path(out_dir) / gname / "density" / (sid + ".png")).string());
      ++emitted;
    }
  }
  std::cout << "augment: emitted " << emitted << " (image, label) pairs under " << out_dir
            << "\n";

  cli::RunManifest manifest;
  manifest.command = "augment";
  manifest.seed = g.seed;
  manifest.config = {{"images", images_dir}, {"labels", labels_dir}, {"set", set_name},
                     {"out", out_dir}};
  finish_manifest(manifest, g);
  return 0;
}

int cmd_train_toy(const GlobalOpts& g, const std::string& data_dir, int size, int steps,
                  const std::string& variant_name, const std::string& out_dir) {
  std::vector<gazegan::TrainSample> data;
  if (data_dir.empty()) {
    data = gazegan::make_toy_dataset(8, size, g.seed + 7);
  } else {
    // Expects <sid>.png stimuli with density/<sid>.png labels.
    std::vector<std::string> stems;
    for (const auto& e : fs::directory_iterator(data_dir))
      if (e.is_regular_file() && e.path().extension() == ".png")
        stems.push_back(e.path().stem().string());
    std::sort(stems.begin(), stems.end());
    for (const auto& sid : stems) {
      const core::ColorImage img =
          core::read_png((fs::path(data_dir) / (sid + ".png")).string());
      const fs::path den_path = fs::path(data_dir) / "density" / (sid + ".png");
      if (!fs::exists(den_path)) continue;
      const core::LuminanceGrid den = core::read_png16(den_path.string());
      if (img.width != size || img.height != size)
        throw std::runtime_error("train-toy: stimulus '" + sid + "' is not " +
                                 std::to_string(size) + "x" + std::to_string(size));
      gazegan::TrainSample s;
      s.image = gazegan::Tensor(gazegan::Shape{1, 3, size, size});
      s.density = gazegan::Tensor(gazegan::Shape{1, 1, size, size});
      s.fixations = gazegan::Tensor(gazegan::Shape{1, 1, size, size});
      double maxv = 0.0;
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          for (int c = 0; c < 3; ++c) s.image.at(0, c, y, x) = img.at(x, y, c);
          s.density.at(0, 0, y, x) = den.at(x, y);
          maxv = std::max(maxv, den.at(x, y));
        }
      if (maxv <= 0.0) throw std::runtime_error("train-toy: all-zero density for '" + sid + "'");
      double peak = 0.0;
      int px = 0, py = 0;
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          s.density.at(0, 0, y, x) /= maxv;
          if (s.density.at(0, 0, y, x) > peak) {
            peak = s.density.at(0, 0, y, x);
            px = x;
            py = y;
          }
        }
      s.fixations.at(0, 0, py, px) = 1.0;  // density peak stands in for gaze
      data.push_back(std::move(s));
    }
    if (data.empty()) throw std::runtime_error("train-toy: no usable samples in " + data_dir);
  }

  const gazegan::Variant variant = gazegan::variant_from_string(variant_name);

  gazegan::GazeGanModel model(variant, size, g.seed);
  double first_l_cont = 0.0, last_l_cont = 0.0;
  for (int step = 0; step < steps; ++step) {
    const gazegan::StepRecord rec = model.train_step(data[step % data.size()]);
    if (step == 0) first_l_cont = rec.l_cont;
    last_l_cont = rec.l_cont;
  }
  const double final_mean = model.mean_content_loss(data);

  std::cout << "train-toy " << to_string(variant) << ": steps=" << steps
            << " L_cont first=" << first_l_cont << " last=" << last_l_cont
            << " final(mean)=" << final_mean << "\n";

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string cfg = std::string("{\"variant\":\"") + to_string(variant) +
                            "\",\"size\":" + std::to_string(size) +
                            ",\"steps\":" + std::to_string(steps) +
                            ",\"seed\":" + std::to_string(g.seed) + "}";
    std::vector<std::pair<std::string, gazegan::Var>> all;
    for (const auto& entry : model.generator_params().entries()) all.push_back(entry);
    for (const auto& entry : model.discriminator_params().entries()) all.push_back(entry);
    const std::string ckpt = (fs::path(out_dir) / "model.gzck").string();
    gazegan::save_checkpoint(ckpt, cfg, all);
    std::cout << "train-toy: checkpoint -> " << ckpt << "\n";
  }

  cli::RunManifest manifest;
  manifest.command = "train-toy";
  manifest.seed = g.seed;
  manifest.config = {{"variant", variant_name}, {"steps", std::to_string(steps)},
                     {"size", std::to_string(size)}};
  finish_manifest(manifest, g);
  return 0;
}

int cmd_gradcheck(const GlobalOpts& g, const std::string& op, int seeds) {
  std::vector<gazegan::GradCheckReport> reports;
  if (op == "acs") {
    reports.push_back(gazegan::grad_check_acs(seeds, g.seed + 1));
  } else if (op == "csc") {
    reports = gazegan::grad_check_csc(seeds, g.seed + 1);
  } else if (op == "content") {
    reports.push_back(gazegan::grad_check_content(seeds, g.seed + 1));
  } else if (op == "all") {
    reports = gazegan::grad_check_all(seeds, g.seed + 1);
  } else {
    throw std::runtime_error("gradcheck: unknown op '" + op + "' (all|acs|csc|content)");
  }

  bool ok = true;
  for (const auto& r : reports) {
    const double tol = r.group == "acs_loss"       ? 1e-6
                       : r.group == "content_loss" ? 1e-4
                                                   : 1e-5;
    const bool pass = r.max_rel_err <= tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << r.group << " max_rel_err=" << r.max_rel_err
              << " tol=" << tol << " checked=" << r.coords_checked
              << " skipped=" << r.coords_skipped << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_io_score(const GlobalOpts& g, const std::string& fix_csv, int canvas_w, int canvas_h,
                 const std::string& metric_name, const std::string& out_csv) {
  const metrics::Metric metric = metrics::metric_from_string(metric_name);
  const auto by_stimulus = core::read_fixation_csv(fix_csv);
  if (by_stimulus.empty()) throw std::runtime_error("io-score: no fixations in " + fix_csv);

  std::vector<cli::ReportRow> rows;
  double total = 0.0;
  for (const auto& [sid, points] : by_stimulus) {
    std::map<int, core::FixationSet> per_observer;
    for (const auto& p : points) {
      auto& obs = per_observer[p.observer_id];
      obs.stimulus_id = sid;
      obs.canvas_width = canvas_w;
      obs.canvas_height = canvas_h;
      obs.points.push_back(p);
    }
    if (per_observer.size() < 2)
      throw std::runtime_error("io-score: stimulus '" + sid + "' has fewer than 2 observers");
    std::vector<core::FixationSet> observers;
    for (auto& [oid, fx] : per_observer) observers.push_back(std::move(fx));

    // Negative pool for sAUC: fixations of all the other stimuli in the file.
    std::vector<core::FixationSet> others;
    for (const auto& [osid, opts] : by_stimulus) {
      if (osid == sid) continue;
      core::FixationSet o;
      o.stimulus_id = osid;
      o.canvas_width = canvas_w;
      o.canvas_height = canvas_h;
      o.points = opts;
      others.push_back(std::move(o));
    }

    metrics::ShuffleConfig cfg;
    cfg.seed = stimulus_seed(g.seed, "io", sid);
    const double v = metrics::io_score(observers, metric, {}, others, cfg);
    rows.push_back({sid, "io", metric_name, v});
    total += v;
  }
  if (!out_csv.empty()) cli::write_report_csv(out_csv, rows);
  std::cout << "io-score(" << metric_name << "): mean over " << rows.size()
            << " stimuli = " << total / rows.size() << "\n";

  cli::RunManifest manifest;
  manifest.command = "io-score";
  manifest.seed = g.seed;
  manifest.config = {{"fix", fix_csv}, {"metric", metric_name}};
  manifest.add_input(fix_csv);
  finish_manifest(manifest, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaze-bench: image-transformation gaze benchmark toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for data-parallel maps")
      ->capture_default_str();
  app.add_option("--manifest", g.manifest_path, "write a run manifest JSON to this path");

  auto* t = app.add_subcommand("transform", "apply catalog transformations to a stimulus set");
  std::string t_in, t_out, t_group = "all", t_crop = "remove";
  t->add_option("--in", t_in, "input image directory")->required();
  t->add_option("--out", t_out, "output root directory")->required();
  t->add_option("--group", t_group, "transform group name or 'all'")->capture_default_str();
  t->add_option("--crop-mode", t_crop, "remove|keep")
      ->check(CLI::IsMember({"remove", "keep"}))
      ->capture_default_str();

  auto* e = app.add_subcommand("evaluate", "score saliency predictions");
  std::string e_pred, e_fix, e_gt, e_metrics = "cc,sim,kl,nss,auc_judd", e_baseline, e_out;
  std::string e_format = "csv";
  e->add_option("--pred", e_pred, "directory of predicted maps (PNG)")->required();
  e->add_option("--fix", e_fix, "fixation CSV")->required();
  e->add_option("--gt-density", e_gt, "directory of ground-truth density maps");
  e->add_option("--metrics", e_metrics, "comma list: cc,sim,kl,nss,auc_judd,auc_borji,sauc,ig")
      ->capture_default_str();
  e->add_option("--ig-baseline", e_baseline, "baseline density map for IG (default uniform)");
  e->add_option("--out", e_out, "output report path")->required();
  e->add_option("--format", e_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* iv = app.add_subcommand("invariance", "gaze invariance matrix + KL heatmaps");
  std::string iv_dataset, iv_metric = "cc", iv_out, iv_heatmaps;
  iv->add_option("--dataset", iv_dataset, "dataset root (per-group directories)")->required();
  iv->add_option("--metric", iv_metric, "cc|sim|kl")->capture_default_str();
  iv->add_option("--out", iv_out, "matrix CSV path")->required();
  iv->add_option("--heatmaps", iv_heatmaps, "directory for KL heatmap PNGs");

  auto* au = app.add_subcommand("augment", "emit augmented (image, label) pairs");
  std::string au_images, au_labels, au_set = "valid", au_out;
  au->add_option("--images", au_images, "stimulus directory")->required();
  au->add_option("--labels", au_labels, "density label directory")->required();
  au->add_option("--set", au_set, "valid|invalid")
      ->check(CLI::IsMember({"valid", "invalid"}))
      ->capture_default_str();
  au->add_option("--out", au_out, "output root")->required();

  auto* tr = app.add_subcommand("train-toy", "desk-scale GazeGAN training run");
  std::string tr_data, tr_variant = "v4", tr_out;
  int tr_size = 64, tr_steps = 50;
  tr->add_option("--data", tr_data, "sample directory (default: synthetic toy set)");
  tr->add_option("--size", tr_size, "square input resolution")->capture_default_str();
  tr->add_option("--steps", tr_steps, "training steps")->capture_default_str();
  tr->add_option("--variant", tr_variant, "v1|v2|v3|v4")
      ->check(CLI::IsMember({"v1", "v2", "v3", "v4"}))
      ->capture_default_str();
  tr->add_option("--out", tr_out, "checkpoint directory");

  auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient verification");
  std::string gc_op = "all";
  int gc_seeds = 100;
  gc->add_option("--op", gc_op, "all|acs|csc|content")->capture_default_str();
  gc->add_option("--seeds", gc_seeds, "random instances per op")->capture_default_str();

  auto* io = app.add_subcommand("io-score", "leave-one-observer-out upper bound");
  std::string io_fix, io_metric = "sauc", io_out;
  int io_w = 1920, io_h = 1080;
  io->add_option("--fix", io_fix, "fixation CSV")->required();
  io->add_option("--canvas-w", io_w, "stimulus width")->capture_default_str();
  io->add_option("--canvas-h", io_h, "stimulus height")->capture_default_str();
  io->add_option("--metric", io_metric, "metric name")->capture_default_str();
  io->add_option("--out", io_out, "per-stimulus CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (t->parsed()) return cmd_transform(g, t_in, t_out, t_group, t_crop);
    if (e->parsed()) return cmd_evaluate(g, e_pred, e_fix, e_gt, e_metrics, e_baseline, e_out, e_format);
    if (iv->parsed()) return cmd_invariance(g, iv_dataset, iv_metric, iv_out, iv_heatmaps);
    if (au->parsed()) return cmd_augment(g, au_images, au_labels, au_set, au_out);
    if (tr->parsed()) return cmd_train_toy(g, tr_data, tr_size, tr_steps, tr_variant, tr_out);
    if (gc->parsed()) return cmd_gradcheck(g, gc_op, gc_seeds);
    if (io->parsed()) return cmd_io_score(g, io_fix, io_w, io_h, io_metric, io_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
