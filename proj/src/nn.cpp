#include "duonav/nn.hpp"

#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"

namespace duonav::nn {

bool Mat::finite() const {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

Mat matmul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) raise(ErrorCode::invalid_argument, "matmul shape mismatch");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        const double* ar = A.row(i);
        double* cr = C.row(i);
        for (int k = 0; k < A.cols; ++k) {
            double av = ar[k];
            if (av == 0.0) continue;
            const double* br = B.row(k);
            for (int j = 0; j < B.cols; ++j) cr[j] += av * br[j];
        }
    }
    return C;
}

Mat matmul_nt(const Mat& A, const Mat& B) {
    if (A.cols != B.cols) raise(ErrorCode::invalid_argument, "matmul_nt shape mismatch");
    Mat C(A.rows, B.rows);
    for (int i = 0; i < A.rows; ++i) {
        const double* ar = A.row(i);
        double* cr = C.row(i);
        for (int j = 0; j < B.rows; ++j) {
            const double* br = B.row(j);
            double s = 0.0;
            for (int k = 0; k < A.cols; ++k) s += ar[k] * br[k];
            cr[j] = s;
        }
    }
    return C;
}

Mat matmul_tn(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) raise(ErrorCode::invalid_argument, "matmul_tn shape mismatch");
    Mat C(A.cols, B.cols);
    for (int k = 0; k < A.rows; ++k) {
        const double* ar = A.row(k);
        const double* br = B.row(k);
        for (int i = 0; i < A.cols; ++i) {
            double av = ar[i];
            if (av == 0.0) continue;
            double* cr = C.row(i);
            for (int j = 0; j < B.cols; ++j) cr[j] += av * br[j];
        }
    }
    return C;
}

void add_inplace(Mat& dst, const Mat& src) {
    if (dst.rows != src.rows || dst.cols != src.cols)
        raise(ErrorCode::invalid_argument, "add_inplace shape mismatch");
    for (size_t i = 0; i < dst.a.size(); ++i) dst.a[i] += src.a[i];
}

void scale_inplace(Mat& m, double s) {
    for (auto& v : m.a) v *= s;
}

void Sgd::step(ParamRegistry& reg, int batch_size) const {
    if (batch_size < 1) raise(ErrorCode::invalid_argument, "batch_size must be >= 1");
    double inv = 1.0 / batch_size;
    double sq = 0.0;
    for (auto* p : reg.items)
        for (double g : p->grad.a) sq += (g * inv) * (g * inv);
    double norm = std::sqrt(sq);
    double scale = inv;
    if (clip > 0.0 && norm > clip) scale *= clip / norm;
    for (auto* p : reg.items) {
        for (size_t i = 0; i < p->value.a.size(); ++i) {
            double g = p->grad.a[i] * scale;
            p->vel.a[i] = momentum * p->vel.a[i] - lr * g;
            p->value.a[i] += p->vel.a[i];
        }
    }
    reg.zero_grads();
}

Mat Linear::forward(const Mat& x) {
    x_ = x;
    Mat y = matmul_nt(x, W.value);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) y(i, j) += b.value(0, j);
    return y;
}

Mat Linear::backward(const Mat& dy) {
    // dW = dy^T x, db = column sums of dy, dx = dy W
    add_inplace(W.grad, matmul_tn(dy, x_));
    for (int i = 0; i < dy.rows; ++i)
        for (int j = 0; j < dy.cols; ++j) b.grad(0, j) += dy(i, j);
    return matmul(dy, W.value);
}

Mat LayerNorm::forward(const Mat& x) {
    const double eps = 1e-5;
    int d = x.cols;
    xhat_ = Mat(x.rows, d);
    inv_std_.assign(x.rows, 0.0);
    Mat y(x.rows, d);
    for (int i = 0; i < x.rows; ++i) {
        const double* xr = x.row(i);
        double mu = 0.0;
        for (int j = 0; j < d; ++j) mu += xr[j];
        mu /= d;
        double var = 0.0;
        for (int j = 0; j < d; ++j) var += (xr[j] - mu) * (xr[j] - mu);
        var /= d;
        double is = 1.0 / std::sqrt(var + eps);
        inv_std_[i] = is;
        for (int j = 0; j < d; ++j) {
            double xh = (xr[j] - mu) * is;
            xhat_(i, j) = xh;
            y(i, j) = gamma.value(0, j) * xh + beta.value(0, j);
        }
    }
    return y;
}

Mat LayerNorm::backward(const Mat& dy) {
    int d = dy.cols;
    Mat dx(dy.rows, d);
    for (int i = 0; i < dy.rows; ++i) {
        double sum_dxh = 0.0, sum_dxh_xh = 0.0;
        for (int j = 0; j < d; ++j) {
            double dxh = dy(i, j) * gamma.value(0, j);
            sum_dxh += dxh;
            sum_dxh_xh += dxh * xhat_(i, j);
            gamma.grad(0, j) += dy(i, j) * xhat_(i, j);
            beta.grad(0, j) += dy(i, j);
        }
        for (int j = 0; j < d; ++j) {
            double dxh = dy(i, j) * gamma.value(0, j);
            dx(i, j) = inv_std_[i] * (dxh - sum_dxh / d - xhat_(i, j) * sum_dxh_xh / d);
        }
    }
    return dx;
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluA = 0.044715;
}  // namespace

double gelu(double x) {
    double u = kGeluC * (x + kGeluA * x * x * x);
    return 0.5 * x * (1.0 + std::tanh(u));
}

double gelu_grad(double x) {
    double u = kGeluC * (x + kGeluA * x * x * x);
    double t = std::tanh(u);
    double du = kGeluC * (1.0 + 3.0 * kGeluA * x * x);
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
}

Mat gelu_forward(const Mat& x) {
    Mat y(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) y.a[i] = gelu(x.a[i]);
    return y;
}

Mat gelu_backward(const Mat& x, const Mat& dy) {
    Mat dx(x.rows, x.cols);
    for (size_t i = 0; i < x.a.size(); ++i) dx.a[i] = dy.a[i] * gelu_grad(x.a[i]);
    return dx;
}

Mat MultiHeadAttention::forward(const Mat& q_in, const Mat& kv_in) {
    int d = q_in.cols;
    if (d % heads != 0) raise(ErrorCode::invalid_argument, "dim not divisible by heads");
    int dh = d / heads;
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));

    q_ = wq.forward(q_in);
    k_ = wk.forward(kv_in);
    v_ = wv.forward(kv_in);

    int n = q_.rows, m = k_.rows;
    attn_.assign(heads, Mat());
    Mat concat(n, d);
    for (int h = 0; h < heads; ++h) {
        int off = h * dh;
        Mat& A = attn_[h];
        A = Mat(n, m);
        for (int i = 0; i < n; ++i) {
            double mx = -1e300;
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int t = 0; t < dh; ++t) s += q_(i, off + t) * k_(j, off + t);
                s *= inv_sqrt;
                A(i, j) = s;
                mx = std::max(mx, s);
            }
            double z = 0.0;
            for (int j = 0; j < m; ++j) {
                A(i, j) = std::exp(A(i, j) - mx);
                z += A(i, j);
            }
            for (int j = 0; j < m; ++j) A(i, j) /= z;
            for (int t = 0; t < dh; ++t) {
                double s = 0.0;
                for (int j = 0; j < m; ++j) s += A(i, j) * v_(j, off + t);
                concat(i, off + t) = s;
            }
        }
    }
    return wo.forward(concat);
}

Mat MultiHeadAttention::backward(const Mat& dy, Mat& dkv) {
    int d = q_.cols;
    int dh = d / heads;
    double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
    int n = q_.rows, m = k_.rows;

    Mat dconcat = wo.backward(dy);
    Mat dq(n, d), dk(m, d), dv(m, d);
    for (int h = 0; h < heads; ++h) {
        int off = h * dh;
        const Mat& A = attn_[h];
        for (int i = 0; i < n; ++i) {
            // dV += A^T dO ; dA = dO V^T
            std::vector<double> dA(m, 0.0);
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int t = 0; t < dh; ++t) {
                    s += dconcat(i, off + t) * v_(j, off + t);
                    dv(j, off + t) += A(i, j) * dconcat(i, off + t);
                }
                dA[j] = s;
            }
            // softmax backward: ds_j = A_j (dA_j - sum_k A_k dA_k)
            double dot = 0.0;
            for (int j = 0; j < m; ++j) dot += A(i, j) * dA[j];
            for (int j = 0; j < m; ++j) {
                double ds = A(i, j) * (dA[j] - dot) * inv_sqrt;
                for (int t = 0; t < dh; ++t) {
                    dq(i, off + t) += ds * k_(j, off + t);
                    dk(j, off + t) += ds * q_(i, off + t);
                }
            }
        }
    }
    Mat dq_in = wq.backward(dq);
    add_inplace(dkv, wk.backward(dk));
    add_inplace(dkv, wv.backward(dv));
    return dq_in;
}

Mat FeedForward::forward(const Mat& x) {
    h_pre_ = fc1.forward(x);
    return fc2.forward(gelu_forward(h_pre_));
}

Mat FeedForward::backward(const Mat& dy) {
    Mat dh = fc2.backward(dy);
    return fc1.backward(gelu_backward(h_pre_, dh));
}

void sinusoidal(double position, int dim, double* out) {
    for (int k = 0; k < dim / 2; ++k) {
        double freq = std::pow(10000.0, -2.0 * k / dim);
        out[2 * k] = std::sin(position * freq);
        out[2 * k + 1] = std::cos(position * freq);
    }
    if (dim % 2 == 1) {
        double freq = std::pow(10000.0, -static_cast<double>(dim - 1) / dim);
        out[dim - 1] = std::sin(position * freq);
    }
}

Mat positional_table(int count, int dim) {
    Mat t(count, dim);
    for (int i = 0; i < count; ++i) sinusoidal(static_cast<double>(i), dim, t.row(i));
    return t;
}

}  // namespace duonav::nn
