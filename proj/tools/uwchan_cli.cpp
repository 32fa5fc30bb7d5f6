// SPDX-License-Identifier: Apache-2.0
//
// uwchan: synthetic underwater acoustic channel data generation plus
// data-driven channel model training and evaluation.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "uwchan/config.hpp"
#include "uwchan/dataset.hpp"
#include "uwchan/eval.hpp"
#include "uwchan/models/checkpoint.hpp"
#include "uwchan/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

struct GlobalOpts {
  std::string config_path;
  long long seed = -1;  // -1: take from config/default
  std::string out;
  int threads = 1;
};

uwchan::KeyValueConfig load_kv(const GlobalOpts& g) {
  uwchan::KeyValueConfig kv;
  if (!g.config_path.empty())
    kv = uwchan::KeyValueConfig::parse_file(g.config_path);
  if (g.seed >= 0) kv.set("run.seed", std::to_string(g.seed));
  if (!g.out.empty()) kv.set("run.out", g.out);
  return kv;
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
  return buf;
}

void print_report_table(std::vector<uwchan::EvalReport> reports, int n_s,
                        bool sort) {
  if (sort)
    std::sort(reports.begin(), reports.end(),
              [](const auto& a, const auto& b) {
                return a.mape_percent < b.mape_percent;
              });
  std::printf("%-8s %-16s %-14s %10s %12s\n", "Model", "Scenario", "Data size",
              "MAPE(%)", "MSE");
  for (const auto& r : reports)
    std::printf("%-8s %-16s %lldx%-8d %10.4f %12.6g\n", r.model.c_str(),
                r.scenario.c_str(), static_cast<long long>(r.n), n_s,
                r.mape_percent, r.mse);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"underwater acoustic channel modeling toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "config file (dotted keys)");
  app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--out", g.out, "output path or directory");
  app.add_option("--threads", g.threads, "worker threads (reserved)");

  // generate
  auto* cmd_gen = app.add_subcommand("generate", "synthesize a paired dataset");
  std::string gen_scenario;
  long long gen_frames = -1;
  long long gen_ns = -1;
  cmd_gen->add_option("--scenario", gen_scenario,
                      "tank-clean | lake-clean | lake-disturbed | identity");
  cmd_gen->add_option("--frames", gen_frames, "number of symbol frames");
  cmd_gen->add_option("--ns", gen_ns, "samples per frame");

  // train
  auto* cmd_train = app.add_subcommand("train", "train one model");
  std::string train_model_name, train_data;
  long long train_epochs = -1, train_batch = -1, train_hidden = -1,
            train_window = -1, train_k = -1, train_trees = -1;
  double train_lr = -1.0, train_ridge = -1.0;
  cmd_train->add_option("--model", train_model_name, "model name")->required();
  cmd_train->add_option("--data", train_data, "dataset file")->required();
  cmd_train->add_option("--epochs", train_epochs, "training epochs");
  cmd_train->add_option("--batch", train_batch, "batch size");
  cmd_train->add_option("--lr", train_lr, "learning rate");
  cmd_train->add_option("--hidden", train_hidden, "hidden width");
  cmd_train->add_option("--window", train_window, "window N_T");
  cmd_train->add_option("--k", train_k, "k for k-NN (0 = sweep)");
  cmd_train->add_option("--ridge", train_ridge, "ridge strength");
  cmd_train->add_option("--trees", train_trees, "forest size");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "evaluate one checkpoint");
  std::string eval_ckpt, eval_data;
  cmd_eval->add_option("--model-file", eval_ckpt, "checkpoint")->required();
  cmd_eval->add_option("--data", eval_data, "dataset file")->required();

  // compare
  auto* cmd_cmp = app.add_subcommand("compare", "rank checkpoints by MAPE");
  std::string cmp_data;
  std::vector<std::string> cmp_ckpts;
  cmd_cmp->add_option("--data", cmp_data, "dataset file")->required();
  cmd_cmp->add_option("checkpoints", cmp_ckpts, "checkpoint files")
      ->required();

  // plot
  auto* cmd_plot = app.add_subcommand("plot", "export figures");
  std::string plot_kind = "loss", plot_ckpt, plot_data;
  long long plot_frame = 0;
  cmd_plot->add_option("--kind", plot_kind, "loss | triptych");
  cmd_plot->add_option("--model-file", plot_ckpt, "checkpoint")->required();
  cmd_plot->add_option("--data", plot_data, "dataset (triptych only)");
  cmd_plot->add_option("--frame", plot_frame, "test frame index (triptych)");

  // pipeline
  auto* cmd_pipe = app.add_subcommand(
      "pipeline", "generate, train all configured models, evaluate, plot");

  CLI11_PARSE(app, argc, argv);

  try {
    uwchan::KeyValueConfig kv = load_kv(g);

    if (cmd_gen->parsed()) {
      if (!gen_scenario.empty()) kv.set("run.scenario", gen_scenario);
      if (gen_frames > 0) kv.set("run.frames", std::to_string(gen_frames));
      if (gen_ns > 0) kv.set("run.ns", std::to_string(gen_ns));
      uwchan::RunConfig rc = uwchan::run_config_from_kv(kv);
      const std::string out =
          g.out.empty() ? rc.scenario + ".uwac" : g.out;
      const uwchan::Dataset ds = uwchan::generate_dataset(rc, kv);
      uwchan::save(ds, out);
      uwchan::write_sidecar_meta(rc, ds, out);
      std::cout << "wrote " << out << " (" << ds.rows() << "x"
                << ds.frame_len() << ")\n";
      return kExitOk;
    }

    if (cmd_train->parsed()) {
      const std::string pre = "model." + train_model_name + ".";
      if (train_epochs >= 0) kv.set(pre + "epochs", std::to_string(train_epochs));
      if (train_batch > 0) kv.set(pre + "batch", std::to_string(train_batch));
      if (train_lr > 0) kv.set(pre + "lr", std::to_string(train_lr));
      if (train_hidden > 0) kv.set(pre + "hidden", std::to_string(train_hidden));
      if (train_window > 0) kv.set(pre + "window", std::to_string(train_window));
      if (train_k >= 0) kv.set(pre + "k", std::to_string(train_k));
      if (train_ridge >= 0) kv.set(pre + "ridge", std::to_string(train_ridge));
      if (train_trees > 0) kv.set(pre + "trees", std::to_string(train_trees));
      uwchan::RunConfig rc = uwchan::run_config_from_kv(kv);
      const uwchan::ModelSpec spec =
          uwchan::model_spec_from_config(kv, train_model_name, rc.seed);
      const uwchan::Dataset ds = uwchan::load(train_data);
      uwchan::TrainedModel model =
          uwchan::train_on_dataset(spec, ds, rc.split, true);
      const std::string out =
          g.out.empty() ? train_model_name + ".uwam" : g.out;
      uwchan::save_model(model, out);
      if (!model.curve.train_loss.empty())
        uwchan::export_loss_curve(model.curve, out + ".loss");
      std::cout << "wrote " << out << "\n";
      return kExitOk;
    }

    if (cmd_eval->parsed()) {
      const uwchan::TrainedModel model = uwchan::load_model(eval_ckpt);
      const uwchan::Dataset ds = uwchan::load(eval_data);
      uwchan::EvalReport r = uwchan::evaluate_on_dataset(model, ds);
      r.timestamp = now_iso8601();
      print_report_table({r}, static_cast<int>(ds.frame_len()), false);
      if (!g.out.empty()) uwchan::write_report_csv({r}, g.out);
      return kExitOk;
    }

    if (cmd_cmp->parsed()) {
      const uwchan::Dataset ds = uwchan::load(cmp_data);
      std::vector<uwchan::EvalReport> reports;
      for (const std::string& path : cmp_ckpts) {
        const uwchan::TrainedModel model = uwchan::load_model(path);
        reports.push_back(uwchan::evaluate_on_dataset(model, ds));
      }
      std::sort(reports.begin(), reports.end(),
                [](const auto& a, const auto& b) {
                  return a.mape_percent < b.mape_percent;
                });
      print_report_table(reports, static_cast<int>(ds.frame_len()), false);
      if (!g.out.empty()) uwchan::write_report_csv(reports, g.out);
      return kExitOk;
    }

    if (cmd_plot->parsed()) {
      const uwchan::TrainedModel model = uwchan::load_model(plot_ckpt);
      const std::string base = g.out.empty() ? "plot" : g.out;
      if (plot_kind == "loss") {
        if (model.curve.train_loss.empty())
          throw std::invalid_argument("plot: checkpoint has no loss curve");
        uwchan::export_loss_curve(model.curve, base);
      } else if (plot_kind == "triptych") {
        if (plot_data.empty())
          throw uwchan::ConfigError("plot --kind triptych needs --data");
        const uwchan::Dataset ds = uwchan::load(plot_data);
        const auto parts = uwchan::split(ds, model.split_spec);
        const Eigen::MatrixXd pred =
            uwchan::predict_frames(model, parts[2].X);
        const Eigen::Index offset = uwchan::prediction_offset(model);
        const Eigen::Index frame =
            std::min<Eigen::Index>(plot_frame, pred.rows() - 1);
        uwchan::export_triptych(parts[2].X.row(frame + offset).transpose(),
                                parts[2].Y.row(frame + offset).transpose(),
                                pred.row(frame).transpose(), base);
      } else {
        throw uwchan::ConfigError("plot: unknown kind '" + plot_kind + "'");
      }
      std::cout << "wrote " << base << ".csv and " << base << ".svg\n";
      return kExitOk;
    }

    if (cmd_pipe->parsed()) {
      const uwchan::RunConfig rc = uwchan::run_config_from_kv(kv);
      const uwchan::PipelineResult result =
          uwchan::run_pipeline(rc, kv, true);
      print_report_table(result.reports, rc.n_s, true);
      std::cout << "artifacts under " << result.dir << "\n";
      return kExitOk;
    }
  } catch (const uwchan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const uwchan::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitIo;
  } catch (const uwchan::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const uwchan::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
