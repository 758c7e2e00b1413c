#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "handover/dataset.hpp"
#include "handover/error.hpp"
#include "handover/eval.hpp"
#include "handover/feature.hpp"
#include "handover/mlp.hpp"
#include "handover/synthetic.hpp"

namespace {

using namespace handover;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("failed while writing " + path);
  }
}

std::pair<double, double> parse_shift(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 == text.size()) {
    throw ConfigError("--shift expects dx,dy");
  }
  double dx = 0.0;
  double dy = 0.0;
  try {
    std::size_t used = 0;
    const std::string head = text.substr(0, comma);
    const std::string tail = text.substr(comma + 1);
    dx = std::stod(head, &used);
    if (used != head.size()) {
      throw ConfigError("--shift expects dx,dy");
    }
    dy = std::stod(tail, &used);
    if (used != tail.size()) {
      throw ConfigError("--shift expects dx,dy");
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("--shift expects dx,dy");
  } catch (const std::out_of_range&) {
    throw ConfigError("--shift values are out of range");
  }
  if (!std::isfinite(dx) || !std::isfinite(dy)) {
    throw ConfigError("--shift values must be finite");
  }
  return {dx, dy};
}

Dataset load_labeled(const std::string& path) {
  const Dataset labeled = labeled_subset(load_records(path));
  if (labeled.size() == 0) {
    throw ConfigError("no labeled records in " + path);
  }
  return labeled;
}

int run_generate(const SceneConfig& config, const std::string& out) {
  const Dataset dataset = generate(config);
  save_records(dataset, out);
  std::cout << "wrote " << dataset.size() << " records to " << out << "\n";
  return 0;
}

int run_train(const std::string& in, const std::string& out, const std::string& history,
              TrainConfig config, const std::string& layout) {
  config.layout = layout_from_name(layout);
  validate_config(config);
  const Dataset labeled = load_labeled(in);
  TrainingSet data = encode_dataset(labeled, config.layout);
  std::optional<NormStats> stats;
  if (config.normalize) {
    stats = fit_norm_stats(data);
    data = apply_norm_stats(data, *stats);
  }
  const TrainResult result = train(data, config);
  save_checkpoint(Checkpoint{result.network, config, stats}, out);

  Json history_json;
  history_json["epochs"] = result.loss_history.size();
  history_json["mean_bce"] = result.loss_history;
  const std::string history_path = history.empty() ? out + ".history.json" : history;
  write_file(history_path, history_json.dump(2) + "\n");

  char final_loss[32];
  std::snprintf(final_loss, sizeof final_loss, "%.6f", result.loss_history.back());
  std::cout << "trained on " << data.size() << " records; final mean bce " << final_loss
            << "\n";
  std::cout << "checkpoint: " << out << "\n";
  return 0;
}

int run_eval(const std::string& in, const std::string& out, const std::string& csv,
             TrainConfig config, const std::string& layout, std::size_t splits,
             const std::string& split_mode) {
  config.layout = layout_from_name(layout);
  config.split_mode = split_mode_from_name(split_mode);
  const EvalReport report = multi_seed_eval(load_labeled(in), config, splits);
  std::cout << report_to_text(report);
  if (!out.empty()) {
    write_file(out, report_to_json(report).dump(2) + "\n");
  }
  if (!csv.empty()) {
    write_file(csv, report_to_csv(report));
  }
  return 0;
}

int run_compare(const std::string& in, const std::string& out, const std::string& csv,
                TrainConfig config, std::size_t splits, const std::string& split_mode,
                const std::string& shift) {
  config.split_mode = split_mode_from_name(split_mode);
  const auto [dx, dy] = parse_shift(shift);
  const LayoutComparison comparison = compare_layouts(load_labeled(in), config, splits, dx, dy);
  std::cout << comparison_to_text(comparison);
  if (!out.empty()) {
    write_file(out, comparison_to_json(comparison).dump(2) + "\n");
  }
  if (!csv.empty()) {
    write_file(csv, comparison_to_csv(comparison));
  }
  return 0;
}

int run_predict(const std::string& in, const std::string& model, const std::string& out,
                std::optional<double> threshold_override) {
  const Checkpoint checkpoint = load_checkpoint(model);
  const double threshold =
      threshold_override ? *threshold_override : checkpoint.config.threshold;
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie strictly between 0 and 1");
  }
  const Dataset dataset = load_records(in);
  std::string lines;
  for (const FeatureRecord& record : dataset.records) {
    FeatureVector x = encode(record, checkpoint.network.layout);
    if (checkpoint.norm_stats) {
      x = apply_norm_stats(x, *checkpoint.norm_stats);
    }
    const Prediction prediction = predict(checkpoint.network, x, threshold);
    Json line;
    line["frame_id"] = record.frame_id;
    line["probability"] = prediction.probability;
    line["label"] = prediction.label;
    lines += line.dump() + "\n";
  }
  if (out.empty()) {
    std::cout << lines;
  } else {
    write_file(out, lines);
    std::cout << "wrote " << dataset.size() << " predictions to " << out << "\n";
  }
  return 0;
}

int run_inspect(const std::string& in) {
  const Dataset dataset = load_records(in);
  std::unordered_set<std::string> videos;
  std::size_t with_objects = 0;
  for (const FeatureRecord& record : dataset.records) {
    videos.insert(record.source_video);
    with_objects += record.objects.empty() ? 0 : 1;
  }
  const std::size_t positive = dataset.count_label(1);
  const std::size_t negative = dataset.count_label(0);
  std::cout << "records: " << dataset.size() << "\n";
  std::cout << "positive: " << positive << "\n";
  std::cout << "negative: " << negative << "\n";
  std::cout << "unlabeled: " << dataset.size() - positive - negative << "\n";
  std::cout << "videos: " << videos.size() << "\n";
  std::cout << "with objects: " << with_objects << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"handover gesture classifier: generate, train, evaluate, predict"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic labeled record file");
  SceneConfig scene;
  std::string gen_out;
  gen->add_option("--out", gen_out, "output record file")->required();
  gen->add_option("--n", scene.n_records, "number of records")->capture_default_str();
  gen->add_option("--seed", scene.seed, "generator seed")->capture_default_str();
  gen->add_option("--pos-frac", scene.positive_fraction, "positive class fraction")
      ->capture_default_str();
  gen->add_option("--noise", scene.noise_sigma, "pixel noise sigma")->capture_default_str();
  gen->add_option("--corner-frac", scene.corner_fraction, "corner scenario fraction")
      ->capture_default_str();
  gen->add_option("--width", scene.image_width, "image width in pixels")->capture_default_str();
  gen->add_option("--height", scene.image_height, "image height in pixels")
      ->capture_default_str();

  // train
  auto* tr = app.add_subcommand("train", "train a classifier on every labeled record");
  std::string tr_in, tr_out, tr_history;
  std::string tr_layout = "relative";
  TrainConfig tr_config;
  tr->add_option("--in", tr_in, "input record file")->required();
  tr->add_option("--out", tr_out, "output checkpoint file")->required();
  tr->add_option("--history", tr_history, "loss history file (default <out>.history.json)");
  tr->add_option("--layout", tr_layout, "absolute|relative")->capture_default_str();
  tr->add_option("--hidden", tr_config.hidden_dims, "hidden layer sizes a,b,c,d")
      ->delimiter(',')
      ->capture_default_str();
  tr->add_option("--lr", tr_config.learning_rate, "Adam learning rate")->capture_default_str();
  tr->add_option("--epochs", tr_config.epochs, "training epochs")->capture_default_str();
  tr->add_option("--batch", tr_config.batch_size, "minibatch size")->capture_default_str();
  tr->add_option("--threshold", tr_config.threshold, "decision threshold")
      ->capture_default_str();
  tr->add_flag("--normalize", tr_config.normalize, "z-score features with train-set stats");
  tr->add_option("--seed", tr_config.seed, "random seed")->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "multi-seed split evaluation");
  std::string ev_in, ev_out, ev_csv;
  std::string ev_layout = "relative";
  std::string ev_split_mode = "frame";
  std::size_t ev_splits = 5;
  TrainConfig ev_config;
  ev->add_option("--in", ev_in, "input record file")->required();
  ev->add_option("--out", ev_out, "report JSON file");
  ev->add_option("--csv", ev_csv, "per-split CSV file");
  ev->add_option("--layout", ev_layout, "absolute|relative")->capture_default_str();
  ev->add_option("--splits", ev_splits, "number of random splits")->capture_default_str();
  ev->add_option("--ratio", ev_config.split_ratio, "train fraction")->capture_default_str();
  ev->add_option("--split-mode", ev_split_mode, "frame|video")->capture_default_str();
  ev->add_option("--hidden", ev_config.hidden_dims, "hidden layer sizes a,b,c,d")
      ->delimiter(',')
      ->capture_default_str();
  ev->add_option("--lr", ev_config.learning_rate, "Adam learning rate")->capture_default_str();
  ev->add_option("--epochs", ev_config.epochs, "training epochs")->capture_default_str();
  ev->add_option("--batch", ev_config.batch_size, "minibatch size")->capture_default_str();
  ev->add_option("--threshold", ev_config.threshold, "decision threshold")
      ->capture_default_str();
  ev->add_flag("--normalize", ev_config.normalize, "z-score features with train-set stats");
  ev->add_option("--seed", ev_config.seed, "base seed; split i uses seed + i")
      ->capture_default_str();

  // compare
  auto* cp = app.add_subcommand("compare", "absolute vs relative layout comparison");
  std::string cp_in, cp_out, cp_csv;
  std::string cp_split_mode = "frame";
  std::string cp_shift = "160,120";
  std::size_t cp_splits = 5;
  TrainConfig cp_config;
  cp->add_option("--in", cp_in, "input record file")->required();
  cp->add_option("--out", cp_out, "report JSON file");
  cp->add_option("--csv", cp_csv, "per-split CSV file");
  cp->add_option("--shift", cp_shift, "test-set translation dx,dy")->capture_default_str();
  cp->add_option("--splits", cp_splits, "number of random splits")->capture_default_str();
  cp->add_option("--ratio", cp_config.split_ratio, "train fraction")->capture_default_str();
  cp->add_option("--split-mode", cp_split_mode, "frame|video")->capture_default_str();
  cp->add_option("--hidden", cp_config.hidden_dims, "hidden layer sizes a,b,c,d")
      ->delimiter(',')
      ->capture_default_str();
  cp->add_option("--lr", cp_config.learning_rate, "Adam learning rate")->capture_default_str();
  cp->add_option("--epochs", cp_config.epochs, "training epochs")->capture_default_str();
  cp->add_option("--batch", cp_config.batch_size, "minibatch size")->capture_default_str();
  cp->add_option("--threshold", cp_config.threshold, "decision threshold")
      ->capture_default_str();
  cp->add_flag("--normalize", cp_config.normalize, "z-score features with train-set stats");
  cp->add_option("--seed", cp_config.seed, "base seed; split i uses seed + i")
      ->capture_default_str();

  // predict
  auto* pr = app.add_subcommand("predict", "score records with a trained checkpoint");
  std::string pr_in, pr_model, pr_out;
  double pr_threshold = 0.5;
  pr->add_option("--in", pr_in, "input record file (labels optional)")->required();
  auto* pr_threshold_opt =
      pr->add_option("--threshold", pr_threshold, "override the checkpoint threshold");
  pr->add_option("--model", pr_model, "checkpoint file")->required();
  pr->add_option("--out", pr_out, "output JSON-lines file (stdout when omitted)");

  // inspect
  auto* in_cmd = app.add_subcommand("inspect", "validate a record file and print class counts");
  std::string in_in;
  in_cmd->add_option("--in", in_in, "input record file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 3;
  }

  try {
    if (gen->parsed()) {
      return run_generate(scene, gen_out);
    }
    if (tr->parsed()) {
      return run_train(tr_in, tr_out, tr_history, tr_config, tr_layout);
    }
    if (ev->parsed()) {
      return run_eval(ev_in, ev_out, ev_csv, ev_config, ev_layout, ev_splits, ev_split_mode);
    }
    if (cp->parsed()) {
      return run_compare(cp_in, cp_out, cp_csv, cp_config, cp_splits, cp_split_mode, cp_shift);
    }
    if (pr->parsed()) {
      const std::optional<double> threshold_override =
          pr_threshold_opt->count() > 0 ? std::optional<double>(pr_threshold) : std::nullopt;
      return run_predict(pr_in, pr_model, pr_out, threshold_override);
    }
    if (in_cmd->parsed()) {
      return run_inspect(in_in);
    }
    std::cerr << "error: config: no command selected\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return 1;
  } catch (const SchemaError& e) {
    std::cerr << "error: schema: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: numeric: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 70;
  }
}
