// Runs the bundled rooftop-party config for two simulated hours against the
// scripted backend and prints each agent's unsafe-slot count over time.
#include <iostream>

#include "agentsafe/agentsafe.hpp"

int main(int argc, char** argv) {
  using namespace agentsafe;
  const std::filesystem::path config_file = argc > 1 ? argv[1] : "data/configs/default.json";
  SimConfig config = SimConfig::load(config_file);
  config.total_steps = 120;

  Simulator sim(config);
  sim.run();

  for (const auto& p : safety_trajectory(sim.log().events()))
    std::cout << "step " << p.step << "  mean unsafe slots " << p.mean_unsafe << "\n";
  for (const auto& id : sim.metrics().agents()) {
    const auto c = sim.metrics().conversion(id);
    std::cout << id << ": " << c.converted << " of " << c.originally_unsafe << " unsafe slots converted\n";
  }
  return 0;
}
