#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "qikdv/io.hpp"

int main(int argc, char** argv) {
  using qikdv::cli::Invocation;
  CLI::App app{"Quasi-integrable KdV toolkit"};
  app.set_version_flag("--version", qikdv::kVersion);
  app.require_subcommand(1);

  Invocation inv;
  std::uint64_t seed = 0;
  int orders = 0;
  const std::pair<const char*, const char*> subs[] = {
      {"simulate", "evolve a field; write trajectory, fields and charges"},
      {"charges", "evolve and tabulate charges, drifts and rate consistency"},
      {"verify-algebra", "check loop algebra identities on seeded samples"},
      {"map-nls", "KdV/NLS weak-coupling scaling study"},
      {"coupled", "coupled complex KdV run with R charges"},
  };
  for (const auto& [name, help] : subs) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", inv.config_path, "flat key = value config file");
    sc->add_option("--out", inv.out_dir, "output directory")->capture_default_str();
    sc->add_option("--seed", seed, "random seed (overrides run.seed)");
    sc->add_option("--orders", orders, "charge orders 0..2 (overrides charges.orders)");
    sc->callback([&inv, sc, &seed, &orders] {
      inv.command = sc->get_name();
      if (sc->count("--seed")) inv.seed = seed;
      if (sc->count("--orders")) inv.orders = orders;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    nlohmann::json err{{"type", "validation"}, {"message", e.what()}, {"exit_code", qikdv::cli::kValidation}};
    std::cerr << nlohmann::json{{"error", err}}.dump() << "\n";
    return qikdv::cli::kValidation;
  }
  return qikdv::cli::run(inv);
}
