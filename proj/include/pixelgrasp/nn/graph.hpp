#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/nn/tensor.hpp"

namespace pixelgrasp::nn {

using NodeId = std::size_t;

/// Named trainable tensors, each with a gradient slot of identical shape.
template <typename T>
class ParameterSet {
 public:
  struct Entry {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;
  };

  std::size_t add(std::string name, Tensor<T> value) {
    Tensor<T> grad(value.shape());
    entries_.push_back({std::move(name), std::move(value), std::move(grad)});
    return entries_.size() - 1;
  }

  std::size_t size() const { return entries_.size(); }
  Entry& operator[](std::size_t i) { return entries_[i]; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }
  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }

  void zero_grad() {
    for (auto& e : entries_) e.grad.fill(T{0});
  }

  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.value.size();
    return n;
  }

  template <typename U>
  ParameterSet<U> cast() const {
    ParameterSet<U> out;
    for (const auto& e : entries_) out.add(e.name, e.value.template cast<U>());
    return out;
  }

 private:
  std::vector<Entry> entries_;
};

/// Reverse-mode tape. Nodes are appended in evaluation order, so the tape is
/// already topologically sorted; backward() walks it in reverse.
template <typename T>
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, NodeId)>;

  explicit Graph(bool track_decisions = false) : track_decisions_(track_decisions) {}

  NodeId constant(Tensor<T> value) { return push(std::move(value), {}, nullptr, false); }

  NodeId parameter(ParameterSet<T>& set, std::size_t index) {
    NodeId id = push(set[index].value, {}, nullptr, true);
    nodes_[id].owner = &set;
    nodes_[id].param_index = index;
    return id;
  }

  NodeId parameter(const ParameterSet<T>& set, std::size_t index) {
    return constant(set[index].value);
  }

  /// Appends an op result. `backward` is only kept when some input needs a gradient.
  NodeId record(Tensor<T> value, std::vector<NodeId> inputs, BackwardFn backward) {
    for (const T v : value.values())
      if (!std::isfinite(v))
        throw Error(ErrorCode::NonFiniteValue, "op produced a non-finite value");
    bool needs = false;
    for (NodeId in : inputs) needs = needs || nodes_.at(in).requires_grad;
    return push(std::move(value), std::move(inputs), needs ? std::move(backward) : nullptr, needs);
  }

  const Tensor<T>& value(NodeId id) const { return nodes_.at(id).value; }
  bool requires_grad(NodeId id) const { return nodes_.at(id).requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Gradient accumulator for a node, zero-initialised on first access.
  Tensor<T>& grad(NodeId id) {
    Node& n = nodes_.at(id);
    if (!n.has_grad) {
      n.grad = Tensor<T>(n.value.shape());
      n.has_grad = true;
    }
    return n.grad;
  }

  /// Propagates d(root)/d(node) to every node and accumulates parameter
  /// gradients into their owning ParameterSet.
  void backward(NodeId root) {
    if (value(root).size() != 1)
      throw Error(ErrorCode::NonScalarOutput,
                  "backward needs a scalar root, got " + value(root).shape().to_string());
    grad(root).fill(T{1});
    for (NodeId id = root + 1; id-- > 0;) {
      Node& n = nodes_[id];
      if (!n.has_grad || !n.requires_grad) continue;
      if (n.backward) n.backward(*this, id);
      if (n.owner) {
        auto& slot = (*n.owner)[n.param_index].grad;
        const auto& g = n.grad;
        for (std::size_t i = 0; i < g.size(); ++i) slot[i] += g[i];
      }
    }
  }

  // Discrete branch decisions (relu signs, pool argmax) hashed together; the
  // gradient checker compares signatures to spot perturbations crossing a kink.
  bool tracking_decisions() const { return track_decisions_; }
  void note_decision(std::uint64_t v) {
    signature_ ^= v + 0x9E3779B97F4A7C15ull + (signature_ << 6) + (signature_ >> 2);
  }
  std::uint64_t decision_signature() const { return signature_; }

 private:
  struct Node {
    Tensor<T> value;
    Tensor<T> grad;
    bool has_grad = false;
    bool requires_grad = false;
    std::vector<NodeId> inputs;
    BackwardFn backward;
    ParameterSet<T>* owner = nullptr;
    std::size_t param_index = 0;
  };

  NodeId push(Tensor<T> value, std::vector<NodeId> inputs, BackwardFn backward, bool needs_grad) {
    Node n;
    n.value = std::move(value);
    n.inputs = std::move(inputs);
    n.backward = std::move(backward);
    n.requires_grad = needs_grad;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  std::vector<Node> nodes_;
  bool track_decisions_ = false;
  std::uint64_t signature_ = 0;
};

}  // namespace pixelgrasp::nn
