#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "grade/commands.hpp"

// Command-line front end. All heavy lifting lives in the library so the
// subcommands stay testable in-process; this file only maps flags onto
// grade::run_cli_command.
int main(int argc, char** argv) {
  CLI::App app{"Cross-network transfer learning with subtree discrepancy regularization"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  grade::CliOverrides ov;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
  };
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", ov.seed, "random seed");
  };
  const auto add_depth = [&](CLI::App* sub) {
    sub->add_option("--depth", ov.depth, "subtree depth M");
  };
  const auto add_training = [&](CLI::App* sub) {
    sub->add_option("--lambda", ov.lambda, "discrepancy weight");
    sub->add_option("--base", ov.base, "base discrepancy (mmd or coral)");
    sub->add_option("--variant", ov.variant, "representation variant (plain, degree, label)");
  };
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", ov.out, "output directory");
  };

  CLI::App* train_node = app.add_subcommand(
      "train-node", "Train a node classifier or regressor with transfer regularization");
  add_common(train_node);
  add_seed(train_node);
  add_depth(train_node);
  add_training(train_node);
  add_out(train_node);

  CLI::App* train_rec = app.add_subcommand(
      "train-rec", "Train a link-prediction recommender with transfer regularization");
  add_common(train_rec);
  add_seed(train_rec);
  add_depth(train_rec);
  add_training(train_rec);
  add_out(train_rec);
  train_rec->add_option("--k", ov.k, "ranking cutoff");

  CLI::App* kernel = app.add_subcommand("kernel", "Subtree kernel between two graphs");
  add_common(kernel);
  add_depth(kernel);

  CLI::App* gsd = app.add_subcommand("gsd", "Per-depth subtree discrepancy between two graphs");
  add_common(gsd);
  add_depth(gsd);
  gsd->add_option("--base", ov.base, "base discrepancy (tv, mmd or coral)");
  gsd->add_option("--variant", ov.variant, "representation variant (plain, degree, label)");

  CLI::App* bench = app.add_subcommand("bench", "Per-epoch training cost across graph sizes");
  add_common(bench);
  add_seed(bench);
  add_depth(bench);
  add_training(bench);
  add_out(bench);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic source/target graph pair");
  add_common(synth);
  add_seed(synth);
  add_out(synth);

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return grade::run_cli_command(name, config_path, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
