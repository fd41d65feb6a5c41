// Batch front door for the flow-tube solver and the lattice machinery:
// reads JSON problem descriptions, runs steady/transient solves and
// convergence studies, prints lattice demonstrations, and writes CSV
// artifacts. Exit codes: 0 success, 2 parse or usage error, 3 ill-posed
// problem, 4 stability refusal.

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "fluxion/commands.hpp"
#include "fluxion/config.hpp"
#include "fluxion/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Integrated finite differences on flow tubes, with exact-rational "
      "lattice demonstrations"};
  app.require_subcommand(1);

  std::string output_dir = ".";
  app.add_option("--output-dir", output_dir,
                 "Directory CSV artifacts are written into")
      ->capture_default_str();

  std::string steady_config;
  auto* steady = app.add_subcommand(
      "steady", "Solve the steady problem and write nodal temperatures");
  steady->add_option("config", steady_config, "Problem description file")
      ->required();

  std::string transient_config;
  auto* transient = app.add_subcommand(
      "transient",
      "March the transient problem, writing a profile per record time and "
      "a heat-content series");
  transient
      ->add_option("config", transient_config, "Problem description file")
      ->required();

  std::string converge_config;
  int levels = 0;
  std::string mode = "auto";
  int dt_power = 1;
  auto* converge = app.add_subcommand(
      "converge", "Measure spatial accuracy across mesh refinements");
  converge->add_option("config", converge_config, "Problem description file")
      ->required();
  converge->add_option("--levels", levels, "Refinement levels (at least 3)")
      ->required();
  converge
      ->add_option("--mode", mode,
                   "oracle (decaying sine reference), self (Richardson "
                   "differences), or auto")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "oracle", "self"}));
  converge
      ->add_option("--dt-power", dt_power,
                   "Shrink dt by 2^power at each refinement")
      ->capture_default_str();

  auto* lattice = app.add_subcommand(
      "lattice", "Exact difference-equation demonstrations");
  lattice->require_subcommand(1);

  long long binomial_m = 0;
  long long binomial_n = 0;
  std::string binomial_p;
  auto* binomial = lattice->add_subcommand(
      "binomial",
      "Exact probability of m successes and n failures at probability p");
  binomial->add_option("m", binomial_m, "Success count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  binomial->add_option("n", binomial_n, "Failure count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  binomial->add_option("p", binomial_p, "Probability, e.g. 1/2 or 0.3")
      ->required();

  long long evolve_steps = 0;
  auto* evolve = lattice->add_subcommand(
      "evolve",
      "Run the divergent second-difference recursion from a unit spike");
  evolve->add_option("steps", evolve_steps, "Step count")
      ->required()
      ->check(CLI::NonNegativeNumber);

  long long walk_steps = 0;
  std::string walk_lambda;
  auto* walk = lattice->add_subcommand(
      "walk", "Run the mass-preserving walk from a unit spike");
  walk->add_option("steps", walk_steps, "Step count")
      ->required()
      ->check(CLI::NonNegativeNumber);
  walk->add_option("lambda", walk_lambda, "Step ratio in (0, 1/2]")
      ->required();

  double kernel_x = 0.0;
  double kernel_x_prime = 0.0;
  auto* kernel = lattice->add_subcommand(
      "kernel", "Evaluate the continuum density exp(-x^2/4x')/sqrt(4 pi x')");
  kernel->add_option("x", kernel_x, "Position")->required();
  kernel->add_option("xprime", kernel_x_prime, "Evolution index")->required();

  long long compare_trials = 0;
  std::string compare_p;
  auto* compare = lattice->add_subcommand(
      "compare", "Largest gap between the binomial and its normal limit");
  compare->add_option("mu", compare_trials, "Trial count")
      ->required()
      ->check(CLI::PositiveNumber);
  compare->add_option("p", compare_p, "Probability, e.g. 1/2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::filesystem::path out_dir = output_dir;
    if (steady->parsed()) {
      const auto config = fluxion::load_problem_config(steady_config);
      const auto path = fluxion::cmd_steady(config, out_dir);
      std::cout << "wrote " << path.string() << "\n";
    } else if (transient->parsed()) {
      const auto config = fluxion::load_problem_config(transient_config);
      const auto artifacts = fluxion::cmd_transient(config, out_dir);
      for (const auto& path : artifacts.profiles) {
        std::cout << "wrote " << path.string() << "\n";
      }
      std::cout << "wrote " << artifacts.series.string() << "\n";
    } else if (converge->parsed()) {
      const auto config = fluxion::load_problem_config(converge_config);
      const auto path =
          fluxion::cmd_converge(config, out_dir, levels, mode, dt_power);
      std::cout << "wrote " << path.string() << "\n";
    } else if (binomial->parsed()) {
      fluxion::cmd_lattice_binomial(binomial_m, binomial_n, binomial_p,
                                    std::cout);
    } else if (evolve->parsed()) {
      fluxion::cmd_lattice_evolve(evolve_steps, std::cout);
    } else if (walk->parsed()) {
      fluxion::cmd_lattice_walk(walk_steps, walk_lambda, std::cout);
    } else if (kernel->parsed()) {
      fluxion::cmd_lattice_kernel(kernel_x, kernel_x_prime, std::cout);
    } else if (compare->parsed()) {
      fluxion::cmd_lattice_compare(compare_trials, compare_p, std::cout);
    }
    return 0;
  } catch (const fluxion::IllPosedError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  } catch (const fluxion::StabilityError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  } catch (const fluxion::ConfigError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::domain_error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
}
