#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "graphcf/graph.hpp"

namespace graphcf {

struct AdamState {
    Eigen::MatrixXd m; // first moment
    Eigen::MatrixXd v; // second moment
    long step = 0;
};

struct GaeTrainConfig {
    int epochs = 50;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0; // weight initialization stream
};

enum class TrainDirection { minimize, maximize };

/// Graph autoencoder for one class: a 2-layer GCN encoder
/// Z = A_hat * relu(A_hat * X * W1) * W2 with an inner-product decoder
/// sigma(Z Z^T) reconstructing the binarized adjacency.
struct GaeModel {
    Eigen::MatrixXd w1; // d_in x hidden
    Eigen::MatrixXd w2; // hidden x hidden
    AdamState adam_w1;
    AdamState adam_w2;
    int class_tag = 0;

    static constexpr int kInputDim = 2;

    static GaeModel zeros(int hidden, int class_tag);
    static GaeModel glorot(int hidden, int class_tag, std::uint64_t seed);

    int hidden_dim() const { return static_cast<int>(w1.cols()); }
};

// n x 2 feature matrix: a constant column and the weighted degree divided by
// the graph's maximum weighted degree (all zeros when there are no edges)
Eigen::MatrixXd node_features(const Graph& g);

// A_hat = D^{-1/2} (A + I) D^{-1/2} with D the row sums of A + I
Eigen::MatrixXd normalized_adjacency(const Graph& g);

Eigen::MatrixXd encode(const GaeModel& m, const Graph& g);

// mean binary cross-entropy of sigma(z_i . z_j) against 1[w_ij > 0] over all
// ordered off-diagonal vertex pairs
double embedding_reconstruction_error(const Eigen::MatrixXd& z, const Graph& g);
double reconstruction_error(const GaeModel& m, const Graph& g);

struct GaeGradients {
    Eigen::MatrixXd w1;
    Eigen::MatrixXd w2;
    double loss = 0.0;
};

// analytic gradients of the reconstruction error on one graph
GaeGradients loss_gradients(const GaeModel& m, const Graph& g);
// mean loss and gradients over a batch
GaeGradients batch_gradients(const GaeModel& m, const std::vector<Graph>& graphs);

// central finite differences of the reconstruction error
GaeGradients finite_difference_gradients(const GaeModel& m, const Graph& g,
                                         double eps = 1e-5);

// max over entries of |a - b| / max(|a|, |b|, 1e-8)
double max_relative_gradient_error(const GaeGradients& a, const GaeGradients& b);

// analytic vs central finite differences on one (model, graph) pair
double gradient_check(const GaeModel& m, const Graph& g);

void adam_step(Eigen::MatrixXd& param, AdamState& state,
               const Eigen::MatrixXd& grad, const GaeTrainConfig& cfg);

// Full-batch training. One Adam step per epoch on the mean gradient; the
// maximize direction clips each parameter gradient to L2 norm <= 1 and
// ascends instead.
GaeModel train(GaeModel m, const std::vector<Graph>& graphs,
               const GaeTrainConfig& cfg, TrainDirection direction);

} // namespace graphcf
