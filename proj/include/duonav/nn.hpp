#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "duonav/rng.hpp"

namespace duonav::nn {

// Dense row-major matrix in double precision. Small-model scale: clarity
// over blocking tricks.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }

    size_t size() const { return a.size(); }
    bool finite() const;
};

Mat matmul(const Mat& A, const Mat& B);     // (n,k) x (k,m) -> (n,m)
Mat matmul_nt(const Mat& A, const Mat& B);  // A * B^T
Mat matmul_tn(const Mat& A, const Mat& B);  // A^T * B
void add_inplace(Mat& dst, const Mat& src);
void scale_inplace(Mat& m, double s);

// Parameter tensor with gradient and momentum buffers.
struct Param {
    std::string name;
    Mat value;
    Mat grad;
    Mat vel;

    void setup(const std::string& n, int r, int c) {
        name = n;
        value = Mat(r, c);
        grad = Mat(r, c);
        vel = Mat(r, c);
    }
    void init_xavier(Rng& rng) {
        double s = std::sqrt(6.0 / (value.rows + value.cols));
        for (auto& v : value.a) v = rng.uniform(-s, s);
    }
};

struct ParamRegistry {
    std::vector<Param*> items;
    void add(Param& p) { items.push_back(&p); }
    void zero_grads() {
        for (auto* p : items) std::fill(p->grad.a.begin(), p->grad.a.end(), 0.0);
    }
    size_t total_size() const {
        size_t n = 0;
        for (auto* p : items) n += p->value.size();
        return n;
    }
};

// SGD with momentum and global-norm gradient clipping. Gradients are
// averaged over the accumulated batch before the update.
struct Sgd {
    double lr = 0.01;
    double momentum = 0.9;
    double clip = 5.0;

    void step(ParamRegistry& reg, int batch_size) const;
};

struct Linear {
    Param W;  // (out, in)
    Param b;  // (1, out)
    Mat x_;   // forward cache

    void init(const std::string& name, int in, int out, Rng& rng,
              ParamRegistry& reg) {
        W.setup(name + ".w", out, in);
        b.setup(name + ".b", 1, out);
        W.init_xavier(rng);
        reg.add(W);
        reg.add(b);
    }
    Mat forward(const Mat& x);
    Mat backward(const Mat& dy);
};

struct LayerNorm {
    Param gamma;  // (1, D)
    Param beta;   // (1, D)
    Mat xhat_;
    std::vector<double> inv_std_;

    void init(const std::string& name, int dim, ParamRegistry& reg) {
        gamma.setup(name + ".gamma", 1, dim);
        beta.setup(name + ".beta", 1, dim);
        std::fill(gamma.value.a.begin(), gamma.value.a.end(), 1.0);
        reg.add(gamma);
        reg.add(beta);
    }
    Mat forward(const Mat& x);
    Mat backward(const Mat& dy);
};

// tanh-approximated GELU; smooth, so finite-difference checks behave.
double gelu(double x);
double gelu_grad(double x);
Mat gelu_forward(const Mat& x);
Mat gelu_backward(const Mat& x, const Mat& dy);

struct MultiHeadAttention {
    int heads = 4;
    Linear wq, wk, wv, wo;
    Mat q_, k_, v_;              // projected caches
    std::vector<Mat> attn_;      // per-head softmax weights

    void init(const std::string& name, int dim, int n_heads, Rng& rng,
              ParamRegistry& reg) {
        heads = n_heads;
        wq.init(name + ".wq", dim, dim, rng, reg);
        wk.init(name + ".wk", dim, dim, rng, reg);
        wv.init(name + ".wv", dim, dim, rng, reg);
        wo.init(name + ".wo", dim, dim, rng, reg);
    }
    Mat forward(const Mat& q_in, const Mat& kv_in);
    // Returns d(q_in); the kv-side gradient is accumulated into dkv.
    Mat backward(const Mat& dy, Mat& dkv);
};

struct FeedForward {
    Linear fc1, fc2;
    Mat h_pre_;  // pre-activation cache

    void init(const std::string& name, int dim, int hidden, Rng& rng,
              ParamRegistry& reg) {
        fc1.init(name + ".fc1", dim, hidden, rng, reg);
        fc2.init(name + ".fc2", hidden, dim, rng, reg);
    }
    Mat forward(const Mat& x);
    Mat backward(const Mat& dy);
};

// Sinusoidal embeddings shared by token positions and the flow time.
void sinusoidal(double position, int dim, double* out);
Mat positional_table(int count, int dim);

}  // namespace duonav::nn
