// Shared synthetic instances for the training tests and the acceptance
// suite.

#pragma once

#include "spgat/dataset.hpp"
#include "spgat/graph.hpp"
#include "spgat/model.hpp"

namespace fixtures {

// Two-block stochastic block model with clearly separable smoothed features.
inline spgat::Dataset substitute_sbm() {
  auto [graph, split] = spgat::sbm_graph({50, 50}, 0.2, 0.01, 7);
  spgat::Dataset ds;
  ds.features = spgat::sbm_features(split, 8, 0.6, 1.0, 7);
  ds.graph = std::move(graph);
  ds.split = std::move(split);
  return ds;
}

// MEAN pooling: on this desk-scale instance the max-pooled variant is
// sensitive to the noise-dominated high branch early in training.
inline spgat::ModelConfig substitute_config(std::uint64_t seed = 0) {
  spgat::ModelConfig cfg;
  cfg.variant = spgat::Variant::exact;
  cfg.hidden = 64;
  cfg.scale = 1.0;
  cfg.threshold = 1e-4;
  cfg.d_fraction = 0.05;
  cfg.agg = spgat::Aggregator::mean;
  cfg.dropout = 0.5;
  cfg.weight_decay = 5e-4;
  cfg.learning_rate = 0.01;
  cfg.seed = seed;
  cfg.max_epochs = 500;
  cfg.patience = 100;
  return cfg;
}

// Sparse graph with the node count and edge density of a citation network.
inline spgat::Graph citation_scale_graph() {
  auto [graph, split] = spgat::sbm_graph({677, 677, 677, 677}, 0.0055, 0.00002, 42);
  (void)split;
  return graph;
}

}  // namespace fixtures
