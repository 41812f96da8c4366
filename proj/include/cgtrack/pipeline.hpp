#pragma once

// Typed dataflow graph. Every node publishes exactly one output interface and
// consumes zero or more interfaces published by other nodes. A plan is built
// once, then driven one tick at a time.

#include <any>
#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cgtrack::pipeline {

struct InterfaceId {
  std::string name;
  auto operator<=>(const InterfaceId&) const = default;
};

/// A value flowing along an edge, or the absent marker.
class Datum {
 public:
  Datum() = default;

  template <class T>
  static Datum of(T value) {
    Datum d;
    d.value_ = std::make_shared<const std::any>(std::move(value));
    return d;
  }
  static Datum absent() { return {}; }

  bool present() const { return value_ != nullptr; }
  explicit operator bool() const { return present(); }

  // Throws std::bad_any_cast on a type mismatch and std::logic_error when absent.
  template <class T>
  const T& get() const {
    if (!value_) throw std::logic_error("read of an absent datum");
    return std::any_cast<const T&>(*value_);
  }

  template <class T>
  const T* get_if() const {
    return value_ ? std::any_cast<T>(value_.get()) : nullptr;
  }

 private:
  std::shared_ptr<const std::any> value_;
};

/// Values a node sees on one tick, in the order of its declared inputs.
class NodeInputs {
 public:
  NodeInputs(std::uint64_t tick, const std::vector<const Datum*>& values)
      : tick_(tick), values_(values) {}

  std::uint64_t tick() const { return tick_; }
  std::size_t size() const { return values_.size(); }
  const Datum& operator[](std::size_t i) const { return *values_.at(i); }

 private:
  std::uint64_t tick_;
  const std::vector<const Datum*>& values_;
};

using NodeFn = std::function<Datum(const NodeInputs&)>;

struct NodeSpec {
  std::string name;
  InterfaceId output;
  std::vector<InterfaceId> inputs;
  NodeFn fn;  // empty for source nodes

  /// A node that republishes the tick input keyed by its own output.
  static NodeSpec source(std::string name, InterfaceId output) {
    return {std::move(name), std::move(output), {}, {}};
  }
  bool is_source() const { return !fn; }
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphPlan {
  std::vector<NodeSpec> nodes;
  // (producer, consumer) node indices, one per declared input.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  // Node indices in execution order.
  std::vector<std::size_t> order;
  // For each node, producer indices matching its inputs.
  std::vector<std::vector<std::size_t>> producers;

  std::vector<std::string> order_names() const;
  std::size_t index_of(const std::string& node_name) const;
};

/// Validates the specs and computes a topological order. Ready nodes are
/// taken in node-name order, so the plan is a pure function of the specs.
GraphPlan build_graph(std::vector<NodeSpec> specs);

using TickInputs = std::map<InterfaceId, Datum>;

struct NodeFailure {
  std::string node;
  std::uint64_t tick;
  std::string message;
};

struct TickResult {
  std::map<InterfaceId, Datum> values;
  std::vector<NodeFailure> failures;

  const Datum& at(const std::string& interface) const;
};

struct NodeProfile {
  std::string node;
  std::uint64_t invocations = 0;
  double total_ms = 0;
  double mean_ms = 0;
};

struct ProfileReport {
  std::vector<NodeProfile> nodes;  // sorted by node name
  std::uint64_t ticks = 0;
  double elapsed_ms = 0;           // wall time inside run_tick, summed
  double ticks_per_second = 0;
  double mean_overhead_ms = 0;     // dispatch time per tick excluding node work

  std::string to_csv() const;
};

using Clock = std::function<std::chrono::nanoseconds()>;

Clock steady_clock();

class Runner {
 public:
  explicit Runner(GraphPlan plan, Clock clock = steady_clock());

  /// Runs every node once in plan order. A throwing node is reported in
  /// `failures` and its consumers see an absent value.
  TickResult run_tick(const TickInputs& inputs);

  ProfileReport profile_report() const;
  const GraphPlan& plan() const { return plan_; }
  std::uint64_t ticks() const { return ticks_; }

 private:
  GraphPlan plan_;
  Clock clock_;
  std::uint64_t ticks_ = 0;
  std::vector<std::uint64_t> invocations_;
  std::vector<std::chrono::nanoseconds> node_time_;
  std::chrono::nanoseconds elapsed_{0};
  std::chrono::nanoseconds overhead_{0};
  std::vector<Datum> slots_;
  std::vector<std::vector<const Datum*>> input_views_;
};

}  // namespace cgtrack::pipeline
