#include "grade/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace grade {

namespace {

[[noreturn]] void non_finite(const std::string& term) {
  throw std::runtime_error("loss_and_gradients: " + term + " is non-finite");
}

// MLP forward keeping every activation for the backward sweep.
struct HeadForward {
  std::vector<Eigen::MatrixXd> activations;  // a_0 = input .. a_L = output
};

HeadForward head_forward(const Eigen::MatrixXd& input, const ModelParams& p) {
  HeadForward hf;
  hf.activations.push_back(input);
  for (size_t l = 0; l < p.head_weights.size(); ++l) {
    Eigen::MatrixXd z =
        (hf.activations.back() * p.head_weights[l]).rowwise() + p.head_biases[l].transpose();
    hf.activations.push_back(l + 1 < p.head_weights.size() ? z.cwiseMax(0.0) : std::move(z));
  }
  return hf;
}

// dL/d(output) -> dL/d(input), accumulating head weight/bias gradients.
Eigen::MatrixXd head_backward(const HeadForward& hf, const ModelParams& p,
                              Eigen::MatrixXd d_out, ModelParams* grad) {
  for (size_t l = p.head_weights.size(); l-- > 0;) {
    if (l + 1 < p.head_weights.size())  // hidden layer: ReLU mask (0 at kinks)
      d_out = d_out.cwiseProduct(
          (hf.activations[l + 1].array() > 0.0).cast<double>().matrix());
    if (grad) {
      grad->head_weights[l] += hf.activations[l].transpose() * d_out;
      grad->head_biases[l] += d_out.colwise().sum().transpose();
    }
    d_out = d_out * p.head_weights[l].transpose();
  }
  return d_out;
}

// Propagates accumulated dL/df_m down through the GCN stack, adding weight
// gradients. df[0] receives the input gradient but is never used.
void gcn_backward(const NormalizedAdjacency& adj, const SubtreeEmbeddingSequence& seq,
                  const ModelParams& p, std::vector<Eigen::MatrixXd>& df, ModelParams* grad) {
  for (size_t m = p.gcn_weights.size(); m-- > 0;) {
    const Eigen::MatrixXd masked = df[m + 1].cwiseProduct(
        (seq.f[m + 1].array() > 0.0).cast<double>().matrix());
    const Eigen::MatrixXd agg = adj.matrix * seq.f[m];  // A_hat f_{m-1}
    if (grad) grad->gcn_weights[m] += agg.transpose() * masked;
    if (m > 0) df[m] += adj.matrix * (masked * p.gcn_weights[m].transpose());
  }
}

double stable_softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  return z > 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Mean BCE-with-logits over one graph's sampled pairs; empty mean is 0.
double link_loss_one_graph(const std::vector<LinkExample>& links,
                           const SubtreeEmbeddingSequence& seq, const ModelParams& p,
                           Eigen::MatrixXd* df_final, ModelParams* grad) {
  if (links.empty()) return 0.0;
  const int d = static_cast<int>(seq.f.back().cols());
  const int n_pairs = static_cast<int>(links.size());

  Eigen::MatrixXd input(n_pairs, 2 * d);
  for (int k = 0; k < n_pairs; ++k) {
    input.row(k).head(d) = seq.f.back().row(links[k].u);
    input.row(k).tail(d) = seq.f.back().row(links[k].v);
  }

  HeadForward hf = head_forward(input, p);
  const Eigen::MatrixXd& z = hf.activations.back();
  if (z.cols() != 1) throw std::invalid_argument("link head output must be one column");

  double loss = 0.0;
  Eigen::MatrixXd dz(n_pairs, 1);
  for (int k = 0; k < n_pairs; ++k) {
    loss += stable_softplus(z(k, 0)) - links[k].label * z(k, 0);
    dz(k, 0) = (sigmoid(z(k, 0)) - links[k].label) / n_pairs;
  }
  loss /= n_pairs;

  if (df_final) {
    const Eigen::MatrixXd d_input = head_backward(hf, p, std::move(dz), grad);
    for (int k = 0; k < n_pairs; ++k) {
      df_final->row(links[k].u) += d_input.row(k).head(d);
      df_final->row(links[k].v) += d_input.row(k).tail(d);
    }
  }
  return loss;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<int>& rows) {
  if (rows.empty()) return x;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
  return out;
}

}  // namespace

ObjectiveEval loss_and_gradients(const ObjectiveSpec& spec, const ModelParams& params,
                                 ModelParams* gradients) {
  if (!spec.adj_source || !spec.x_source)
    throw std::invalid_argument("loss_and_gradients: missing source graph");
  const bool wants_target = spec.gsd.lambda != 0.0 || spec.task == TaskKind::Link;
  if (wants_target && (!spec.adj_target || !spec.x_target))
    throw std::invalid_argument("loss_and_gradients: missing target graph");

  if (gradients) gradients->set_zero();

  const SubtreeEmbeddingSequence seq_s = gcn_forward(*spec.adj_source, *spec.x_source, params);
  SubtreeEmbeddingSequence seq_t;
  if (wants_target) seq_t = gcn_forward(*spec.adj_target, *spec.x_target, params);

  const int depth = seq_s.depth();
  std::vector<Eigen::MatrixXd> df_s(depth + 1), df_t(depth + 1);
  for (int m = 0; m <= depth; ++m) {
    df_s[m] = Eigen::MatrixXd::Zero(seq_s.f[m].rows(), seq_s.f[m].cols());
    if (wants_target) df_t[m] = Eigen::MatrixXd::Zero(seq_t.f[m].rows(), seq_t.f[m].cols());
  }

  ObjectiveEval eval;

  // ---- task term ----
  switch (spec.task) {
    case TaskKind::NodeClass: {
      if (!spec.class_labels)
        throw std::invalid_argument("loss_and_gradients: node classification needs labels");
      const Eigen::VectorXi& y = *spec.class_labels;
      if (y.size() != seq_s.num_nodes())
        throw std::invalid_argument("loss_and_gradients: label count mismatch");

      HeadForward hf = head_forward(seq_s.f.back(), params);
      const Eigen::MatrixXd& logits = hf.activations.back();
      if (y.size() > 0 && y.maxCoeff() >= logits.cols())
        throw std::invalid_argument("loss_and_gradients: class index exceeds head width");

      const int n = static_cast<int>(logits.rows());
      double loss = 0.0;
      Eigen::MatrixXd dlogits(n, logits.cols());
      for (int i = 0; i < n; ++i) {
        const double mx = logits.row(i).maxCoeff();
        const Eigen::ArrayXd shifted = logits.row(i).transpose().array() - mx;
        const double lse = mx + std::log(shifted.exp().sum());
        loss += lse - logits(i, y(i));
        dlogits.row(i) = ((logits.row(i).array() - lse).exp() / n).matrix();
        dlogits(i, y(i)) -= 1.0 / n;
      }
      eval.task_loss = loss / n;
      if (gradients) df_s[depth] += head_backward(hf, params, std::move(dlogits), gradients);
      break;
    }
    case TaskKind::NodeRegress: {
      if (!spec.regress_targets)
        throw std::invalid_argument("loss_and_gradients: regression needs targets");
      const Eigen::VectorXd& y = *spec.regress_targets;
      if (y.size() != seq_s.num_nodes())
        throw std::invalid_argument("loss_and_gradients: target count mismatch");

      HeadForward hf = head_forward(seq_s.f.back(), params);
      const Eigen::MatrixXd& pred = hf.activations.back();
      if (pred.cols() != 1)
        throw std::invalid_argument("loss_and_gradients: regression head must output one value");

      const int n = static_cast<int>(pred.rows());
      const Eigen::VectorXd resid = pred.col(0) - y;
      eval.task_loss = resid.squaredNorm() / n;
      if (gradients) {
        Eigen::MatrixXd dpred = (2.0 / n) * resid;
        df_s[depth] += head_backward(hf, params, std::move(dpred), gradients);
      }
      break;
    }
    case TaskKind::Link: {
      const double ls = link_loss_one_graph(spec.links_source, seq_s, params,
                                            gradients ? &df_s[depth] : nullptr, gradients);
      const double lt = link_loss_one_graph(spec.links_target, seq_t, params,
                                            gradients ? &df_t[depth] : nullptr, gradients);
      eval.task_loss = ls + lt;
      break;
    }
  }
  if (!std::isfinite(eval.task_loss)) non_finite("task loss");

  // ---- alignment term ----
  eval.gsd_per_depth.assign(depth + 1, 0.0);
  if (spec.gsd.lambda != 0.0) {
    const GsdTerm& g = spec.gsd;
    const bool has_extra = g.extra_source.size() > 0;
    if (has_extra) {
      if (g.extra_source.rows() != seq_s.num_nodes() || g.extra_target.rows() != seq_t.num_nodes())
        throw std::invalid_argument("loss_and_gradients: extra block rows mismatch");
      if (g.extra_source.cols() != g.extra_target.cols())
        throw std::invalid_argument("loss_and_gradients: extra block widths differ");
    }
    if (!g.bandwidths.empty() && static_cast<int>(g.bandwidths.size()) != depth + 1)
      throw std::invalid_argument("loss_and_gradients: pinned bandwidth count mismatch");

    const Eigen::MatrixXd extra_s_sel = has_extra ? select_rows(g.extra_source, g.rows_source)
                                                  : Eigen::MatrixXd();
    const Eigen::MatrixXd extra_t_sel = has_extra ? select_rows(g.extra_target, g.rows_target)
                                                  : Eigen::MatrixXd();

    const double weight = g.lambda / static_cast<double>(depth + 1);
    double gsd_sum = 0.0;
    for (int m = 0; m <= depth; ++m) {
      const Eigen::MatrixXd fs = select_rows(seq_s.f[m], g.rows_source);
      const Eigen::MatrixXd ft = select_rows(seq_t.f[m], g.rows_target);
      Eigen::MatrixXd a_s, a_t;
      if (has_extra) {
        a_s.resize(fs.rows(), fs.cols() + extra_s_sel.cols());
        a_s << fs, extra_s_sel;
        a_t.resize(ft.rows(), ft.cols() + extra_t_sel.cols());
        a_t << ft, extra_t_sel;
      } else {
        a_s = fs;
        a_t = ft;
      }

      double value;
      Eigen::MatrixXd ga_s = Eigen::MatrixXd::Zero(a_s.rows(), a_s.cols());
      Eigen::MatrixXd ga_t = Eigen::MatrixXd::Zero(a_t.rows(), a_t.cols());
      if (g.base == BaseKind::Mmd) {
        const double sigma =
            g.bandwidths.empty() ? median_bandwidth(a_s, a_t) : g.bandwidths[m];
        eval.bandwidths_used.push_back(sigma);
        value = gradients
                    ? mmd2_with_grad(a_s, a_t, sigma, g.estimator, weight, ga_s, ga_t)
                    : mmd2(a_s, a_t, sigma, g.estimator);
      } else {
        value = gradients ? coral_with_grad(a_s, a_t, weight, ga_s, ga_t) : coral(a_s, a_t);
      }
      if (!std::isfinite(value))
        non_finite("depth-" + std::to_string(m) + " base discrepancy");

      eval.gsd_per_depth[m] = value;
      gsd_sum += value;

      if (gradients) {
        // scatter subsampled, possibly concatenated gradients back into df_m
        const int wm = static_cast<int>(seq_s.f[m].cols());
        if (g.rows_source.empty()) {
          df_s[m] += ga_s.leftCols(wm);
        } else {
          for (size_t k = 0; k < g.rows_source.size(); ++k)
            df_s[m].row(g.rows_source[k]) += ga_s.row(static_cast<Eigen::Index>(k)).head(wm);
        }
        if (g.rows_target.empty()) {
          df_t[m] += ga_t.leftCols(wm);
        } else {
          for (size_t k = 0; k < g.rows_target.size(); ++k)
            df_t[m].row(g.rows_target[k]) += ga_t.row(static_cast<Eigen::Index>(k)).head(wm);
        }
      }
    }
    eval.gsd_value = gsd_sum / static_cast<double>(depth + 1);
  }

  eval.total = eval.task_loss + spec.gsd.lambda * eval.gsd_value;
  if (!std::isfinite(eval.total)) non_finite("total loss");

  if (gradients) {
    gcn_backward(*spec.adj_source, seq_s, params, df_s, gradients);
    if (wants_target) gcn_backward(*spec.adj_target, seq_t, params, df_t, gradients);
  }
  return eval;
}

Eigen::VectorXi predict_classes(const NormalizedAdjacency& adj, const Eigen::MatrixXd& features,
                                const ModelParams& params) {
  const SubtreeEmbeddingSequence seq = gcn_forward(adj, features, params);
  const Eigen::MatrixXd logits = classify_head(seq.f.back(), params);
  Eigen::VectorXi out(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    int best = 0;  // ties resolve to the smallest class index
    for (Eigen::Index c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, best)) best = static_cast<int>(c);
    out(i) = best;
  }
  return out;
}

Eigen::VectorXd predict_values(const NormalizedAdjacency& adj, const Eigen::MatrixXd& features,
                               const ModelParams& params) {
  const SubtreeEmbeddingSequence seq = gcn_forward(adj, features, params);
  const Eigen::MatrixXd pred = classify_head(seq.f.back(), params);
  if (pred.cols() != 1)
    throw std::invalid_argument("predict_values: head must output one value");
  return pred.col(0);
}

Eigen::VectorXd link_scores(const Eigen::MatrixXd& f_final,
                            const std::vector<std::pair<int, int>>& pairs,
                            const ModelParams& params) {
  const int d = static_cast<int>(f_final.cols());
  Eigen::MatrixXd input(static_cast<Eigen::Index>(pairs.size()), 2 * d);
  for (size_t k = 0; k < pairs.size(); ++k) {
    input.row(static_cast<Eigen::Index>(k)).head(d) = f_final.row(pairs[k].first);
    input.row(static_cast<Eigen::Index>(k)).tail(d) = f_final.row(pairs[k].second);
  }
  const Eigen::MatrixXd out = classify_head(input, params);
  if (out.cols() != 1) throw std::invalid_argument("link_scores: head must output one value");
  return out.col(0);
}

}  // namespace grade
