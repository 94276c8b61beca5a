#include "graphcf/gae.hpp"

#include <cmath>

#include "graphcf/rng.hpp"

namespace graphcf {

namespace {

double stable_softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

Eigen::MatrixXd glorot_matrix(int rows, int cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) w(i, j) = rng.uniform(-limit, limit);
    return w;
}

void clip_to_unit_norm(Eigen::MatrixXd& grad) {
    const double norm = grad.norm();
    if (norm > 1.0) grad /= norm;
}

} // namespace

GaeModel GaeModel::zeros(int hidden, int class_tag) {
    GaeModel m;
    m.w1 = Eigen::MatrixXd::Zero(kInputDim, hidden);
    m.w2 = Eigen::MatrixXd::Zero(hidden, hidden);
    m.adam_w1 = {Eigen::MatrixXd::Zero(kInputDim, hidden),
                 Eigen::MatrixXd::Zero(kInputDim, hidden), 0};
    m.adam_w2 = {Eigen::MatrixXd::Zero(hidden, hidden),
                 Eigen::MatrixXd::Zero(hidden, hidden), 0};
    m.class_tag = class_tag;
    return m;
}

GaeModel GaeModel::glorot(int hidden, int class_tag, std::uint64_t seed) {
    GaeModel m = zeros(hidden, class_tag);
    Rng rng(Rng::derive_seed(seed, 0x6ae0 + static_cast<std::uint64_t>(class_tag)));
    m.w1 = glorot_matrix(kInputDim, hidden, rng);
    m.w2 = glorot_matrix(hidden, hidden, rng);
    return m;
}

Eigen::MatrixXd node_features(const Graph& g) {
    const int n = g.num_nodes();
    Eigen::MatrixXd x(n, GaeModel::kInputDim);
    double max_deg = 0.0;
    for (int i = 0; i < n; ++i) max_deg = std::max(max_deg, g.weighted_degree(i));
    for (int i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = max_deg > 0.0 ? g.weighted_degree(i) / max_deg : 0.0;
    }
    return x;
}

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
    const int n = g.num_nodes();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = i == j ? 1.0 : g.weight(i, j);
    Eigen::VectorXd inv_sqrt_deg(n);
    for (int i = 0; i < n; ++i) inv_sqrt_deg(i) = 1.0 / std::sqrt(a.row(i).sum());
    return inv_sqrt_deg.asDiagonal() * a * inv_sqrt_deg.asDiagonal();
}

Eigen::MatrixXd encode(const GaeModel& m, const Graph& g) {
    const Eigen::MatrixXd a_hat = normalized_adjacency(g);
    const Eigen::MatrixXd x = node_features(g);
    const Eigen::MatrixXd h1 = (a_hat * x * m.w1).cwiseMax(0.0);
    return a_hat * h1 * m.w2;
}

double embedding_reconstruction_error(const Eigen::MatrixXd& z, const Graph& g) {
    const int n = g.num_nodes();
    if (n < 2) return 0.0; // no vertex pairs to reconstruct
    const Eigen::MatrixXd logits = z * z.transpose();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double target = g.has_edge(i, j) ? 1.0 : 0.0;
            const double l = logits(i, j);
            sum += stable_softplus(l) - target * l;
        }
    }
    return sum / static_cast<double>(n * (n - 1));
}

double reconstruction_error(const GaeModel& m, const Graph& g) {
    return embedding_reconstruction_error(encode(m, g), g);
}

GaeGradients loss_gradients(const GaeModel& m, const Graph& g) {
    const int n = g.num_nodes();
    const Eigen::MatrixXd a_hat = normalized_adjacency(g);
    const Eigen::MatrixXd x = node_features(g);
    const Eigen::MatrixXd s1 = a_hat * x * m.w1;
    const Eigen::MatrixXd h1 = s1.cwiseMax(0.0);
    const Eigen::MatrixXd ah1 = a_hat * h1;
    const Eigen::MatrixXd z = ah1 * m.w2;

    GaeGradients grads;
    grads.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
    grads.w2 = Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols());
    grads.loss = embedding_reconstruction_error(z, g);
    if (n < 2) return grads;

    // d(loss)/d(logits): (sigma(l) - target) / #pairs on off-diagonal entries
    const Eigen::MatrixXd logits = z * z.transpose();
    Eigen::MatrixXd g_logits = Eigen::MatrixXd::Zero(n, n);
    const double scale = 1.0 / static_cast<double>(n * (n - 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double p = 1.0 / (1.0 + std::exp(-logits(i, j)));
            const double target = g.has_edge(i, j) ? 1.0 : 0.0;
            g_logits(i, j) = (p - target) * scale;
        }
    }

    // logits = Z Z^T with symmetric g_logits, so dZ = 2 * g_logits * Z
    const Eigen::MatrixXd d_z = 2.0 * g_logits * z;
    grads.w2 = ah1.transpose() * d_z;
    const Eigen::MatrixXd d_h1 = a_hat * d_z * m.w2.transpose();
    const Eigen::MatrixXd d_s1 =
        d_h1.cwiseProduct((s1.array() > 0.0).cast<double>().matrix());
    grads.w1 = (a_hat * x).transpose() * d_s1;
    return grads;
}

GaeGradients batch_gradients(const GaeModel& m, const std::vector<Graph>& graphs) {
    if (graphs.empty()) {
        throw Error(Status::invalid_arg, "gae training batch is empty");
    }
    GaeGradients total;
    total.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
    total.w2 = Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols());
    for (const Graph& g : graphs) {
        const GaeGradients one = loss_gradients(m, g);
        total.w1 += one.w1;
        total.w2 += one.w2;
        total.loss += one.loss;
    }
    const double inv = 1.0 / static_cast<double>(graphs.size());
    total.w1 *= inv;
    total.w2 *= inv;
    total.loss *= inv;
    return total;
}

GaeGradients finite_difference_gradients(const GaeModel& m, const Graph& g,
                                         double eps) {
    GaeGradients fd;
    fd.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
    fd.w2 = Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols());
    fd.loss = reconstruction_error(m, g);
    GaeModel probe = m;
    auto central = [&](Eigen::MatrixXd& param, int i, int j) {
        const double saved = param(i, j);
        param(i, j) = saved + eps;
        const double up = reconstruction_error(probe, g);
        param(i, j) = saved - eps;
        const double down = reconstruction_error(probe, g);
        param(i, j) = saved;
        return (up - down) / (2.0 * eps);
    };
    for (int i = 0; i < m.w1.rows(); ++i)
        for (int j = 0; j < m.w1.cols(); ++j) fd.w1(i, j) = central(probe.w1, i, j);
    for (int i = 0; i < m.w2.rows(); ++i)
        for (int j = 0; j < m.w2.cols(); ++j) fd.w2(i, j) = central(probe.w2, i, j);
    return fd;
}

double max_relative_gradient_error(const GaeGradients& a, const GaeGradients& b) {
    double worst = 0.0;
    auto scan = [&worst](const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs) {
        for (int i = 0; i < lhs.rows(); ++i) {
            for (int j = 0; j < lhs.cols(); ++j) {
                const double denom =
                    std::max({std::abs(lhs(i, j)), std::abs(rhs(i, j)), 1e-8});
                worst = std::max(worst, std::abs(lhs(i, j) - rhs(i, j)) / denom);
            }
        }
    };
    scan(a.w1, b.w1);
    scan(a.w2, b.w2);
    return worst;
}

double gradient_check(const GaeModel& m, const Graph& g) {
    return max_relative_gradient_error(loss_gradients(m, g),
                                       finite_difference_gradients(m, g));
}

void adam_step(Eigen::MatrixXd& param, AdamState& state,
               const Eigen::MatrixXd& grad, const GaeTrainConfig& cfg) {
    state.step += 1;
    state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grad;
    state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    const Eigen::ArrayXXd m_hat = state.m.array() / bias1;
    const Eigen::ArrayXXd v_hat = state.v.array() / bias2;
    param.array() -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
}

GaeModel train(GaeModel m, const std::vector<Graph>& graphs,
               const GaeTrainConfig& cfg, TrainDirection direction) {
    if (graphs.empty()) {
        throw Error(Status::invalid_arg, "gae training batch is empty");
    }
    if (cfg.epochs <= 0 || cfg.learning_rate < 0.0) {
        throw Error(Status::invalid_arg,
                    "gae training config: epochs must be > 0 and learning_rate >= 0");
    }
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        GaeGradients grads = batch_gradients(m, graphs);
        if (!std::isfinite(grads.loss) || !grads.w1.allFinite() ||
            !grads.w2.allFinite()) {
            throw Error(Status::numeric,
                        "non-finite loss or gradient at epoch " +
                            std::to_string(epoch));
        }
        if (direction == TrainDirection::maximize) {
            clip_to_unit_norm(grads.w1);
            clip_to_unit_norm(grads.w2);
            grads.w1 = -grads.w1;
            grads.w2 = -grads.w2;
        }
        adam_step(m.w1, m.adam_w1, grads.w1, cfg);
        adam_step(m.w2, m.adam_w2, grads.w2, cfg);
    }
    return m;
}

} // namespace graphcf
