#include "pixelgrasp/nn/ops.hpp"

#include <algorithm>
#include <cstring>
#include <memory>

namespace pixelgrasp::nn {
namespace {

enum class GemmInit { Zero, Bias, Accumulate };

template <typename T>
struct SimdTraits {
  typedef T Vec __attribute__((vector_size(64)));
  static constexpr std::size_t kLanes = 64 / sizeof(T);

  static Vec load(const T* p) {
    Vec v;
    std::memcpy(&v, p, sizeof(Vec));
    return v;
  }
  static void store(T* p, const Vec& v) { std::memcpy(p, &v, sizeof(Vec)); }
  static Vec splat(T x) {
    Vec v;
    for (std::size_t l = 0; l < kLanes; ++l) v[l] = x;
    return v;
  }
};

// Register tile of MR rows x two vectors; partial sums live in C between k blocks.
template <typename T, std::size_t MR>
void micro_kernel(const T* A, std::size_t lda, const T* B, std::size_t ldb, T* C, std::size_t ldc,
                  std::size_t kn) {
  using S = SimdTraits<T>;
  using Vec = typename S::Vec;
  constexpr std::size_t L = S::kLanes;
  Vec acc[MR][2];
  for (std::size_t i = 0; i < MR; ++i) {
    acc[i][0] = S::load(C + i * ldc);
    acc[i][1] = S::load(C + i * ldc + L);
  }
  for (std::size_t k = 0; k < kn; ++k) {
    const Vec b0 = S::load(B + k * ldb);
    const Vec b1 = S::load(B + k * ldb + L);
#pragma GCC unroll 8
    for (std::size_t i = 0; i < MR; ++i) {
      const Vec a = S::splat(A[i * lda + k]);
      acc[i][0] += a * b0;
      acc[i][1] += a * b1;
    }
  }
  for (std::size_t i = 0; i < MR; ++i) {
    S::store(C + i * ldc, acc[i][0]);
    S::store(C + i * ldc + L, acc[i][1]);
  }
}

template <typename T>
void micro_dispatch(std::size_t mr, const T* A, std::size_t lda, const T* B, std::size_t ldb, T* C,
                    std::size_t ldc, std::size_t kn) {
  switch (mr) {
    case 8: micro_kernel<T, 8>(A, lda, B, ldb, C, ldc, kn); break;
    case 7: micro_kernel<T, 7>(A, lda, B, ldb, C, ldc, kn); break;
    case 6: micro_kernel<T, 6>(A, lda, B, ldb, C, ldc, kn); break;
    case 5: micro_kernel<T, 5>(A, lda, B, ldb, C, ldc, kn); break;
    case 4: micro_kernel<T, 4>(A, lda, B, ldb, C, ldc, kn); break;
    case 3: micro_kernel<T, 3>(A, lda, B, ldb, C, ldc, kn); break;
    case 2: micro_kernel<T, 2>(A, lda, B, ldb, C, ldc, kn); break;
    default: micro_kernel<T, 1>(A, lda, B, ldb, C, ldc, kn); break;
  }
}

// C[M x P] (=|+=) A[M x K] * B[K x P], all row-major, optionally seeded with a
// per-row bias. Every output element sums over k in ascending order whatever
// the blocking, so results do not depend on tile sizes.
template <typename T>
void gemm_nn(const T* A, const T* B, const T* bias, T* C, std::size_t M, std::size_t K,
             std::size_t P, GemmInit init) {
  constexpr std::size_t MR = 8;
  constexpr std::size_t NR = 2 * SimdTraits<T>::kLanes;
  constexpr std::size_t PB = 256;
  constexpr std::size_t KB = 256;
  std::vector<T> panel(P % NR == 0 ? 0 : KB * NR);
  if (init != GemmInit::Accumulate)
    for (std::size_t m = 0; m < M; ++m)
      std::fill(C + m * P, C + (m + 1) * P, init == GemmInit::Bias ? bias[m] : T{0});

  for (std::size_t p0 = 0; p0 < P; p0 += PB) {
    const std::size_t pe = std::min(P, p0 + PB);
    for (std::size_t k0 = 0; k0 < K; k0 += KB) {
      const std::size_t kn = std::min(K, k0 + KB) - k0;
      for (std::size_t m = 0; m < M; m += MR) {
        const std::size_t mr = std::min(MR, M - m);
        const T* a = A + m * K + k0;
        std::size_t p = p0;
        for (; p + NR <= pe; p += NR)
          micro_dispatch(mr, a, K, B + k0 * P + p, P, C + m * P + p, P, kn);
        if (p < pe) {
          // Ragged columns go through a zero-padded copy of the panel.
          const std::size_t tail = pe - p;
          if (m == 0) {
            std::fill(panel.begin(), panel.end(), T{0});
            for (std::size_t k = 0; k < kn; ++k)
              std::copy_n(B + (k0 + k) * P + p, tail, panel.data() + k * NR);
          }
          T tile[MR * NR] = {};
          for (std::size_t i = 0; i < mr; ++i) std::copy_n(C + (m + i) * P + p, tail, tile + i * NR);
          micro_dispatch(mr, a, K, panel.data(), NR, tile, NR, kn);
          for (std::size_t i = 0; i < mr; ++i) std::copy_n(tile + i * NR, tail, C + (m + i) * P + p);
        }
      }
    }
  }
}

template <typename T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst) {
  constexpr std::size_t TB = 32;
  for (std::size_t r0 = 0; r0 < rows; r0 += TB)
    for (std::size_t c0 = 0; c0 < cols; c0 += TB) {
      const std::size_t re = std::min(rows, r0 + TB), ce = std::min(cols, c0 + TB);
      for (std::size_t r = r0; r < re; ++r)
        for (std::size_t c = c0; c < ce; ++c) dst[c * rows + r] = src[r * cols + c];
    }
}

struct ConvGeometry {
  std::size_t in_c, in_h, in_w;
  std::size_t out_c, out_h, out_w;
  std::size_t k, stride, pad;

  std::size_t col_rows() const { return in_c * k * k; }
  std::size_t out_pixels() const { return out_h * out_w; }
  bool direct() const { return k == 1 && stride == 1 && pad == 0; }
};

ConvGeometry geometry(const Shape& in, const Shape& kernel, Conv2dOptions opt) {
  const Shape out = conv2d_output_shape(in, kernel, opt);
  const std::size_t pad = opt.padding == Padding::Same ? kernel.h / 2 : 0;
  return {in.c, in.h, in.w, out.c, out.h, out.w, kernel.h, opt.stride, pad};
}

template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* col) {
  const std::size_t P = g.out_pixels();
  for (std::size_t c = 0; c < g.in_c; ++c)
    for (std::size_t ky = 0; ky < g.k; ++ky)
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        T* dst = col + ((c * g.k + ky) * g.k + kx) * P;
        for (std::size_t oy = 0; oy < g.out_h; ++oy) {
          T* row = dst + oy * g.out_w;
          const long iy = static_cast<long>(oy * g.stride + ky) - static_cast<long>(g.pad);
          if (iy < 0 || iy >= static_cast<long>(g.in_h)) {
            std::fill(row, row + g.out_w, T{0});
            continue;
          }
          const T* src = x + (c * g.in_h + static_cast<std::size_t>(iy)) * g.in_w;
          for (std::size_t ox = 0; ox < g.out_w; ++ox) {
            const long ix = static_cast<long>(ox * g.stride + kx) - static_cast<long>(g.pad);
            row[ox] = (ix >= 0 && ix < static_cast<long>(g.in_w)) ? src[ix] : T{0};
          }
        }
      }
}

template <typename T>
void col2im_acc(const T* col, const ConvGeometry& g, T* dx) {
  const std::size_t P = g.out_pixels();
  for (std::size_t c = 0; c < g.in_c; ++c)
    for (std::size_t ky = 0; ky < g.k; ++ky)
      for (std::size_t kx = 0; kx < g.k; ++kx) {
        const T* srcrow = col + ((c * g.k + ky) * g.k + kx) * P;
        for (std::size_t oy = 0; oy < g.out_h; ++oy) {
          const long iy = static_cast<long>(oy * g.stride + ky) - static_cast<long>(g.pad);
          if (iy < 0 || iy >= static_cast<long>(g.in_h)) continue;
          T* dst = dx + (c * g.in_h + static_cast<std::size_t>(iy)) * g.in_w;
          const T* row = srcrow + oy * g.out_w;
          for (std::size_t ox = 0; ox < g.out_w; ++ox) {
            const long ix = static_cast<long>(ox * g.stride + kx) - static_cast<long>(g.pad);
            if (ix >= 0 && ix < static_cast<long>(g.in_w)) dst[ix] += row[ox];
          }
        }
      }
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (!(a == b))
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + a.to_string() + " vs " + b.to_string());
}

template <typename T>
void add_into(Tensor<T>& dst, const Tensor<T>& src) {
  T* d = dst.data();
  const T* s = src.data();
  for (std::size_t i = 0; i < dst.size(); ++i) d[i] += s[i];
}

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  h ^= v;
  return h * 0x100000001b3ull;
}

}  // namespace

// ---------------------------------------------------------------------------

Shape conv2d_output_shape(const Shape& in, const Shape& kernel, Conv2dOptions opt) {
  if (kernel.c != in.c)
    throw Error(ErrorCode::ShapeMismatch, "kernel expects " + std::to_string(kernel.c) +
                                              " input channels, input has " +
                                              std::to_string(in.c));
  if (kernel.h != kernel.w || kernel.h == 0)
    throw Error(ErrorCode::ShapeMismatch, "kernel must be square, got " + kernel.to_string());
  if (opt.stride == 0) throw Error(ErrorCode::ShapeMismatch, "stride must be positive");
  std::size_t pad = 0;
  if (opt.padding == Padding::Same) {
    if (kernel.h % 2 == 0)
      throw Error(ErrorCode::ShapeMismatch, "same padding needs an odd kernel size");
    pad = kernel.h / 2;
  }
  if (in.h + 2 * pad < kernel.h || in.w + 2 * pad < kernel.w)
    throw Error(ErrorCode::ShapeMismatch, "kernel larger than padded input");
  return {in.n, kernel.n, (in.h + 2 * pad - kernel.h) / opt.stride + 1,
          (in.w + 2 * pad - kernel.w) / opt.stride + 1};
}

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                         Conv2dOptions options) {
  const ConvGeometry geo = geometry(input.shape(), kernel.shape(), options);
  if (!bias.empty() && bias.size() != geo.out_c)
    throw Error(ErrorCode::ShapeMismatch, "bias length " + std::to_string(bias.size()) +
                                              " != out channels " + std::to_string(geo.out_c));
  const std::size_t N = input.shape().n;
  const std::size_t P = geo.out_pixels();
  const std::size_t R = geo.col_rows();
  Tensor<T> out(Shape{N, geo.out_c, geo.out_h, geo.out_w});
  std::vector<T> col(geo.direct() ? 0 : R * P);
  for (std::size_t n = 0; n < N; ++n) {
    const T* x = input.data() + n * input.shape().image_size();
    const T* cols = x;
    if (!geo.direct()) {
      im2col(x, geo, col.data());
      cols = col.data();
    }
    gemm_nn(kernel.data(), cols, bias.empty() ? nullptr : bias.data(),
            out.data() + n * geo.out_c * P, geo.out_c, R, P,
            bias.empty() ? GemmInit::Zero : GemmInit::Bias);
  }
  return out;
}

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernel,
                               const Tensor<T>& upstream, Conv2dOptions options, bool want_input) {
  const ConvGeometry geo = geometry(input.shape(), kernel.shape(), options);
  const std::size_t N = input.shape().n;
  const std::size_t P = geo.out_pixels();
  const std::size_t R = geo.col_rows();
  require_same_shape(upstream.shape(), Shape{N, geo.out_c, geo.out_h, geo.out_w}, "conv2d upstream");

  Conv2dGrads<T> grads{Tensor<T>(want_input ? input.shape() : Shape{0, 0, 0, 0}),
                       Tensor<T>(kernel.shape()), Tensor<T>(Shape{1, geo.out_c, 1, 1})};

  // Transposed kernel [R x out_c] for the data gradient.
  std::vector<T> wt;
  if (want_input) {
    wt.resize(R * geo.out_c);
    for (std::size_t o = 0; o < geo.out_c; ++o)
      for (std::size_t r = 0; r < R; ++r) wt[r * geo.out_c + o] = kernel[o * R + r];
  }
  std::vector<T> col(geo.direct() ? 0 : R * P);
  std::vector<T> col_t(R * P);
  std::vector<T> dcol(want_input && !geo.direct() ? R * P : 0);

  for (std::size_t n = 0; n < N; ++n) {
    const T* x = input.data() + n * input.shape().image_size();
    const T* dy = upstream.data() + n * geo.out_c * P;

    for (std::size_t o = 0; o < geo.out_c; ++o) {
      T s{0};
      const T* row = dy + o * P;
      for (std::size_t p = 0; p < P; ++p) s += row[p];
      grads.bias[o] += s;
    }

    const T* cols = x;
    if (!geo.direct()) {
      im2col(x, geo, col.data());
      cols = col.data();
    }
    transpose(cols, R, P, col_t.data());
    gemm_nn<T>(dy, col_t.data(), nullptr, grads.kernel.data(), geo.out_c, P, R,
               GemmInit::Accumulate);

    if (want_input) {
      T* dx = grads.input.data() + n * input.shape().image_size();
      if (geo.direct()) {
        // dx is still zero for this image, so writing it directly is an accumulation.
        gemm_nn<T>(wt.data(), dy, nullptr, dx, R, geo.out_c, P, GemmInit::Zero);
      } else {
        gemm_nn<T>(wt.data(), dy, nullptr, dcol.data(), R, geo.out_c, P, GemmInit::Zero);
        col2im_acc(dcol.data(), geo, dx);
      }
    }
  }
  return grads;
}

// ---------------------------------------------------------------------------

template <typename T>
NodeId conv2d(Graph<T>& g, NodeId input, NodeId kernel, NodeId bias, Conv2dOptions options) {
  Tensor<T> out = conv2d_forward(g.value(input), g.value(kernel), g.value(bias), options);
  return g.record(std::move(out), {input, kernel, bias},
                  [input, kernel, bias, options](Graph<T>& gr, NodeId self) {
                    const bool want_input = gr.requires_grad(input);
                    auto grads = conv2d_backward(gr.value(input), gr.value(kernel), gr.grad(self),
                                                 options, want_input);
                    if (want_input) add_into(gr.grad(input), grads.input);
                    if (gr.requires_grad(kernel)) add_into(gr.grad(kernel), grads.kernel);
                    if (gr.requires_grad(bias)) {
                      auto& gb = gr.grad(bias);
                      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += grads.bias[i];
                    }
                  });
}

template <typename T>
NodeId relu(Graph<T>& g, NodeId x) {
  const Tensor<T>& in = g.value(x);
  Tensor<T> out(in.shape());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > T{0} ? in[i] : T{0};
  if (g.tracking_decisions()) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < in.size(); ++i) h = fnv_mix(h, in[i] > T{0} ? i + 1 : 0);
    g.note_decision(h);
  }
  return g.record(std::move(out), {x}, [x](Graph<T>& gr, NodeId self) {
    const Tensor<T>& in = gr.value(x);
    const Tensor<T>& up = gr.grad(self);
    Tensor<T>& dx = gr.grad(x);
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i] > T{0}) dx[i] += up[i];
  });
}

template <typename T>
NodeId linear(Graph<T>& g, NodeId x) {
  Tensor<T> out = g.value(x);
  return g.record(std::move(out), {x},
                  [x](Graph<T>& gr, NodeId self) { add_into(gr.grad(x), gr.grad(self)); });
}

template <typename T>
NodeId maxpool2(Graph<T>& g, NodeId x) {
  const Tensor<T>& in = g.value(x);
  const Shape s = in.shape();
  if (s.h % 2 != 0 || s.w % 2 != 0)
    throw Error(ErrorCode::OddSpatialDims, "maxpool2 needs even H and W, got " + s.to_string());
  const Shape os{s.n, s.c, s.h / 2, s.w / 2};
  Tensor<T> out(os);
  auto argmax = std::make_shared<std::vector<std::uint32_t>>(os.numel());
  std::size_t o = 0;
  for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
    const T* plane = in.data() + nc * s.spatial();
    for (std::size_t y = 0; y < os.h; ++y)
      for (std::size_t xx = 0; xx < os.w; ++xx, ++o) {
        const std::size_t base = (2 * y) * s.w + 2 * xx;
        const std::size_t cand[4] = {base, base + 1, base + s.w, base + s.w + 1};
        std::size_t best = cand[0];
        for (int k = 1; k < 4; ++k)
          if (plane[cand[k]] > plane[best]) best = cand[k];
        out[o] = plane[best];
        (*argmax)[o] = static_cast<std::uint32_t>(nc * s.spatial() + best);
      }
  }
  if (g.tracking_decisions()) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto a : *argmax) h = fnv_mix(h, a);
    g.note_decision(h);
  }
  return g.record(std::move(out), {x}, [x, argmax](Graph<T>& gr, NodeId self) {
    const Tensor<T>& up = gr.grad(self);
    Tensor<T>& dx = gr.grad(x);
    for (std::size_t i = 0; i < up.size(); ++i) dx[(*argmax)[i]] += up[i];
  });
}

template <typename T>
NodeId upsample_nearest2(Graph<T>& g, NodeId x) {
  const Tensor<T>& in = g.value(x);
  const Shape s = in.shape();
  const Shape os{s.n, s.c, s.h * 2, s.w * 2};
  Tensor<T> out(os);
  for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
    const T* src = in.data() + nc * s.spatial();
    T* dst = out.data() + nc * os.spatial();
    for (std::size_t y = 0; y < s.h; ++y) {
      T* r0 = dst + (2 * y) * os.w;
      T* r1 = r0 + os.w;
      for (std::size_t xx = 0; xx < s.w; ++xx) {
        const T v = src[y * s.w + xx];
        r0[2 * xx] = r0[2 * xx + 1] = r1[2 * xx] = r1[2 * xx + 1] = v;
      }
    }
  }
  return g.record(std::move(out), {x}, [x](Graph<T>& gr, NodeId self) {
    const Tensor<T>& up = gr.grad(self);
    Tensor<T>& dx = gr.grad(x);
    const Shape s = dx.shape();
    const std::size_t ow = 2 * s.w;
    for (std::size_t nc = 0; nc < s.n * s.c; ++nc) {
      const T* src = up.data() + nc * 4 * s.spatial();
      T* dst = dx.data() + nc * s.spatial();
      for (std::size_t y = 0; y < s.h; ++y)
        for (std::size_t xx = 0; xx < s.w; ++xx) {
          const T* r0 = src + (2 * y) * ow + 2 * xx;
          const T* r1 = r0 + ow;
          dst[y * s.w + xx] += ((r0[0] + r0[1]) + r1[0]) + r1[1];
        }
    }
  });
}

template <typename T>
NodeId concat_channels(Graph<T>& g, NodeId a, NodeId b) {
  const Tensor<T>& ta = g.value(a);
  const Tensor<T>& tb = g.value(b);
  const Shape sa = ta.shape(), sb = tb.shape();
  if (sa.n != sb.n || sa.h != sb.h || sa.w != sb.w)
    throw Error(ErrorCode::ShapeMismatch,
                "concat_channels: " + sa.to_string() + " vs " + sb.to_string());
  const Shape os{sa.n, sa.c + sb.c, sa.h, sa.w};
  Tensor<T> out(os);
  const std::size_t na = sa.image_size(), nb = sb.image_size();
  for (std::size_t n = 0; n < sa.n; ++n) {
    std::copy_n(ta.data() + n * na, na, out.data() + n * (na + nb));
    std::copy_n(tb.data() + n * nb, nb, out.data() + n * (na + nb) + na);
  }
  return g.record(std::move(out), {a, b}, [a, b, na, nb](Graph<T>& gr, NodeId self) {
    const Tensor<T>& up = gr.grad(self);
    const std::size_t N = up.shape().n;
    if (gr.requires_grad(a)) {
      Tensor<T>& da = gr.grad(a);
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t i = 0; i < na; ++i) da[n * na + i] += up[n * (na + nb) + i];
    }
    if (gr.requires_grad(b)) {
      Tensor<T>& db = gr.grad(b);
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t i = 0; i < nb; ++i) db[n * nb + i] += up[n * (na + nb) + na + i];
    }
  });
}

template <typename T>
NodeId mse(Graph<T>& g, NodeId a, NodeId b) {
  const Tensor<T>& ta = g.value(a);
  const Tensor<T>& tb = g.value(b);
  require_same_shape(ta.shape(), tb.shape(), "mse");
  const std::size_t n = ta.size();
  if (n == 0) throw Error(ErrorCode::ShapeMismatch, "mse of empty tensors");
  T acc{0};
  for (std::size_t i = 0; i < n; ++i) {
    const T d = ta[i] - tb[i];
    acc += d * d;
  }
  return g.record(Tensor<T>::scalar(acc / static_cast<T>(n)), {a, b},
                  [a, b, n](Graph<T>& gr, NodeId self) {
                    const Tensor<T>& ta = gr.value(a);
                    const Tensor<T>& tb = gr.value(b);
                    const T scale = T{2} * gr.grad(self)[0] / static_cast<T>(n);
                    if (gr.requires_grad(a)) {
                      Tensor<T>& da = gr.grad(a);
                      for (std::size_t i = 0; i < n; ++i) da[i] += scale * (ta[i] - tb[i]);
                    }
                    if (gr.requires_grad(b)) {
                      Tensor<T>& db = gr.grad(b);
                      for (std::size_t i = 0; i < n; ++i) db[i] -= scale * (ta[i] - tb[i]);
                    }
                  });
}

template <typename T>
NodeId weighted_sum(Graph<T>& g, std::span<const NodeId> scalars, std::span<const double> weights) {
  if (scalars.size() != weights.size())
    throw Error(ErrorCode::ShapeMismatch, "weighted_sum: one weight per term required");
  T acc{0};
  for (std::size_t i = 0; i < scalars.size(); ++i)
    acc += static_cast<T>(weights[i]) * g.value(scalars[i]).item();
  std::vector<NodeId> ins(scalars.begin(), scalars.end());
  std::vector<double> ws(weights.begin(), weights.end());
  return g.record(Tensor<T>::scalar(acc), ins, [ins, ws](Graph<T>& gr, NodeId self) {
    const T up = gr.grad(self)[0];
    for (std::size_t i = 0; i < ins.size(); ++i)
      if (gr.requires_grad(ins[i])) gr.grad(ins[i])[0] += static_cast<T>(ws[i]) * up;
  });
}

template <typename T>
NodeId select_channel(Graph<T>& g, NodeId x, std::size_t channel) {
  const Tensor<T>& in = g.value(x);
  const Shape s = in.shape();
  if (channel >= s.c)
    throw Error(ErrorCode::ShapeMismatch, "channel " + std::to_string(channel) + " of " + s.to_string());
  Tensor<T> out(Shape{s.n, 1, s.h, s.w});
  for (std::size_t n = 0; n < s.n; ++n)
    std::copy_n(in.data() + (n * s.c + channel) * s.spatial(), s.spatial(),
                out.data() + n * s.spatial());
  return g.record(std::move(out), {x}, [x, channel](Graph<T>& gr, NodeId self) {
    const Tensor<T>& up = gr.grad(self);
    Tensor<T>& dx = gr.grad(x);
    const Shape s = dx.shape();
    for (std::size_t n = 0; n < s.n; ++n) {
      T* dst = dx.data() + (n * s.c + channel) * s.spatial();
      const T* src = up.data() + n * s.spatial();
      for (std::size_t i = 0; i < s.spatial(); ++i) dst[i] += src[i];
    }
  });
}

#define PIXELGRASP_INSTANTIATE_OPS(T)                                                          \
  template Tensor<T> conv2d_forward(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,      \
                                    Conv2dOptions);                                            \
  template Conv2dGrads<T> conv2d_backward(const Tensor<T>&, const Tensor<T>&,                  \
                                          const Tensor<T>&, Conv2dOptions, bool);              \
  template NodeId conv2d(Graph<T>&, NodeId, NodeId, NodeId, Conv2dOptions);                    \
  template NodeId relu(Graph<T>&, NodeId);                                                     \
  template NodeId linear(Graph<T>&, NodeId);                                                   \
  template NodeId maxpool2(Graph<T>&, NodeId);                                                 \
  template NodeId upsample_nearest2(Graph<T>&, NodeId);                                        \
  template NodeId concat_channels(Graph<T>&, NodeId, NodeId);                                  \
  template NodeId mse(Graph<T>&, NodeId, NodeId);                                              \
  template NodeId weighted_sum(Graph<T>&, std::span<const NodeId>, std::span<const double>);   \
  template NodeId select_channel(Graph<T>&, NodeId, std::size_t);

PIXELGRASP_INSTANTIATE_OPS(float)
PIXELGRASP_INSTANTIATE_OPS(double)

#undef PIXELGRASP_INSTANTIATE_OPS

}  // namespace pixelgrasp::nn
