#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace lapdog::nn {

using Mat = Eigen::MatrixXd;

// Named trainable tensor. Gradients accumulate across tapes until the
// optimizer consumes them.
struct Parameter {
    std::string name;
    Mat value;
    Mat grad;
};

// Owns model parameters in registration order. The version counter advances
// on every optimizer step, which lets dependents (the story index) detect
// staleness.
class ParamStore {
  public:
    Parameter &add(const std::string &name, Eigen::Index rows, Eigen::Index cols);
    Parameter *find(const std::string &name);
    const Parameter *find(const std::string &name) const;

    std::size_t count() const { return params_.size(); }
    Parameter &at(std::size_t i) { return *params_[i]; }
    const Parameter &at(std::size_t i) const { return *params_[i]; }

    std::size_t scalar_count() const;
    void zero_grads();

    std::uint64_t version() const { return version_; }
    void bump_version() { ++version_; }

    void save(const std::string &path) const;
    void load(const std::string &path);

    // Copies values (not grads) from another store with identical layout.
    void copy_values_from(const ParamStore &other);
    bool values_equal(const ParamStore &other) const;

  private:
    std::vector<std::unique_ptr<Parameter>> params_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::uint64_t version_ = 0;
};

// Handle to a node on a Tape.
struct Var {
    int idx = -1;
};

// Reverse-mode autodiff over matrix-valued nodes. One tape per forward pass;
// backward() seeds a scalar root and accumulates into Parameter::grad.
class Tape {
  public:
    Var constant(Mat value);
    Var param(Parameter &p);

    // Gathers rows of an embedding table; backward scatter-adds into the
    // table's grad.
    Var rows_of(Parameter &table, const std::vector<int> &ids);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);              // same shape
    Var add_rowvec(Var a, Var bias);    // bias is 1 x cols, broadcast over rows
    Var add_const(Var a, const Mat &m); // e.g. positional encodings, masks
    Var mul_const(Var a, const Mat &m); // elementwise, e.g. dropout masks
    Var scale(Var a, double s);
    Var transpose(Var a);
    Var relu(Var a);
    Var softmax_rows(Var a);
    Var log_softmax_rows(Var a);
    Var layer_norm_rows(Var x, Var gain, Var bias); // gain/bias are 1 x cols
    Var concat_rows(const std::vector<Var> &parts);
    Var concat_cols(const std::vector<Var> &parts);
    Var slice_cols(Var a, Eigen::Index c0, Eigen::Index n);
    Var slice_rows(Var a, Eigen::Index r0, Eigen::Index n);
    Var mean_rows(Var a); // 1 x cols
    Var dot(Var a, Var b); // 1x1 from two equal-shape matrices

    // Sum of elementwise product with a constant weight matrix -> 1x1.
    Var weighted_sum(Var a, const Mat &weights);

    // Negative sum of log-probabilities picked per row: -sum_t a(t, ids[t]).
    Var pick_negative(Var a, const std::vector<int> &ids);

    const Mat &value(Var v) const { return nodes_[static_cast<std::size_t>(v.idx)].value; }

    // Runs reverse accumulation from a scalar root (1x1).
    void backward(Var root);

    std::size_t size() const { return nodes_.size(); }

  private:
    struct Node {
        Mat value;
        Mat grad;
        bool has_grad = false;
        Parameter *param = nullptr;
        std::function<void(Tape &, const Node &)> back;
    };

    Var push(Mat value, std::function<void(Tape &, const Node &)> back,
             Parameter *param = nullptr);
    Mat &grad_of(Var v);
    void add_grad(int idx, const Mat &g);

    std::vector<Node> nodes_;
    friend struct TapeTestAccess;
};

} // namespace lapdog::nn
