// Threshold and depth of a random starting set on a preferential-attachment network.
#include <iostream>

#include "netcontagion/netcontagion.hpp"

using namespace netcontagion;

int main() {
  auto net = std::make_shared<const Network>(generate_ba(500, 4, RngSeed{1}));
  Rng rng(RngSeed{2});
  auto picks = rng.sample_without_replacement<Node>(net->node_count(), 50);
  PlayerSet s(net->node_count(), std::span<const Node>(picks));

  for (Rational alpha : {Rational(0), Rational(1, 2), Rational(1)}) {
    auto cfg = GameConfig::parametric(net, alpha, s);
    auto thr = full_contagion_threshold(cfg, s);
    DepthFunction depth(thr, net->node_count());
    std::cout << "alpha=" << alpha.to_string() << "  q*=" << thr.q_star.to_string() << " (" << thr.q_star.to_decimal(4)
              << ")  depth at q=1/2: " << depth.at(Rational(1, 2)).to_decimal(4) << '\n';
  }
}
