#include "cgtrack/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace cgtrack::pipeline {

std::vector<std::string> GraphPlan::order_names() const {
  std::vector<std::string> out;
  out.reserve(order.size());
  for (const auto i : order) out.push_back(nodes[i].name);
  return out;
}

std::size_t GraphPlan::index_of(const std::string& node_name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == node_name) return i;
  }
  throw GraphError("no node named '" + node_name + "'");
}

GraphPlan build_graph(std::vector<NodeSpec> specs) {
  GraphPlan plan;
  std::map<InterfaceId, std::size_t> producer_of;
  std::set<std::string> names;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (!names.insert(s.name).second) throw GraphError("duplicate node name '" + s.name + "'");
    const auto [it, fresh] = producer_of.emplace(s.output, i);
    if (!fresh) {
      throw GraphError("interface '" + s.output.name + "' has two producers: '" +
                       specs[it->second].name + "' and '" + s.name + "'");
    }
  }

  const auto n = specs.size();
  plan.producers.resize(n);
  std::vector<std::vector<std::size_t>> consumers(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = specs[i];
    if (s.is_source() && !s.inputs.empty()) {
      throw GraphError("source node '" + s.name + "' may not declare inputs");
    }
    for (const auto& in : s.inputs) {
      const auto it = producer_of.find(in);
      if (it == producer_of.end()) {
        throw GraphError("node '" + s.name + "' needs interface '" + in.name +
                         "' but nothing produces it");
      }
      if (it->second == i) {
        throw GraphError("cycle detected: node '" + s.name + "' consumes its own output");
      }
      plan.producers[i].push_back(it->second);
      plan.edges.emplace_back(it->second, i);
      consumers[it->second].push_back(i);
      ++indegree[i];
    }
  }

  std::set<std::pair<std::string, std::size_t>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.emplace(specs[i].name, i);
  }
  while (!ready.empty()) {
    const auto i = ready.begin()->second;
    ready.erase(ready.begin());
    plan.order.push_back(i);
    for (const auto c : consumers[i]) {
      if (--indegree[c] == 0) ready.emplace(specs[c].name, c);
    }
  }
  if (plan.order.size() != n) {
    std::string stuck;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] > 0) stuck += (stuck.empty() ? "" : ", ") + specs[i].name;
    }
    throw GraphError("cycle detected among nodes: " + stuck);
  }
  plan.nodes = std::move(specs);
  return plan;
}

const Datum& TickResult::at(const std::string& interface) const {
  const auto it = values.find(InterfaceId{interface});
  if (it == values.end()) throw GraphError("no interface named '" + interface + "'");
  return it->second;
}

Clock steady_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now().time_since_epoch());
  };
}

Runner::Runner(GraphPlan plan, Clock clock)
    : plan_(std::move(plan)),
      clock_(std::move(clock)),
      invocations_(plan_.nodes.size(), 0),
      node_time_(plan_.nodes.size(), std::chrono::nanoseconds{0}),
      slots_(plan_.nodes.size()),
      input_views_(plan_.nodes.size()) {
  for (std::size_t i = 0; i < plan_.nodes.size(); ++i) {
    for (const auto p : plan_.producers[i]) input_views_[i].push_back(&slots_[p]);
  }
}

TickResult Runner::run_tick(const TickInputs& inputs) {
  const auto tick = ticks_;
  TickResult result;
  const auto start = clock_();
  std::chrono::nanoseconds work{0};

  for (const auto i : plan_.order) {
    const auto& node = plan_.nodes[i];
    const auto t0 = clock_();
    if (node.is_source()) {
      const auto it = inputs.find(node.output);
      slots_[i] = it == inputs.end() ? Datum::absent() : it->second;
    } else {
      try {
        slots_[i] = node.fn(NodeInputs(tick, input_views_[i]));
      } catch (const std::exception& e) {
        slots_[i] = Datum::absent();
        result.failures.push_back({node.name, tick, e.what()});
      } catch (...) {
        slots_[i] = Datum::absent();
        result.failures.push_back({node.name, tick, "unknown exception"});
      }
    }
    const auto dt = clock_() - t0;
    node_time_[i] += dt;
    work += dt;
    ++invocations_[i];
  }

  for (std::size_t i = 0; i < plan_.nodes.size(); ++i) {
    result.values.emplace(plan_.nodes[i].output, slots_[i]);
  }
  const auto total = clock_() - start;
  elapsed_ += total;
  overhead_ += total - work;
  ++ticks_;
  return result;
}

ProfileReport Runner::profile_report() const {
  ProfileReport r;
  r.ticks = ticks_;
  r.elapsed_ms = std::chrono::duration<double, std::milli>(elapsed_).count();
  r.ticks_per_second = r.elapsed_ms > 0 ? static_cast<double>(ticks_) * 1000.0 / r.elapsed_ms : 0;
  r.mean_overhead_ms =
      ticks_ > 0 ? std::chrono::duration<double, std::milli>(overhead_).count() / ticks_ : 0;
  for (std::size_t i = 0; i < plan_.nodes.size(); ++i) {
    NodeProfile p;
    p.node = plan_.nodes[i].name;
    p.invocations = invocations_[i];
    p.total_ms = std::chrono::duration<double, std::milli>(node_time_[i]).count();
    p.mean_ms = p.invocations > 0 ? p.total_ms / static_cast<double>(p.invocations) : 0;
    r.nodes.push_back(std::move(p));
  }
  std::sort(r.nodes.begin(), r.nodes.end(),
            [](const NodeProfile& a, const NodeProfile& b) { return a.node < b.node; });
  return r;
}

std::string ProfileReport::to_csv() const {
  std::ostringstream out;
  char buf[64];
  out << "node,invocations,total_ms,mean_ms\n";
  for (const auto& n : nodes) {
    out << n.node << ',' << n.invocations << ',';
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", n.total_ms, n.mean_ms);
    out << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.2f", ticks_per_second);
  out << "#ticks=" << ticks << ",tps=" << buf << '\n';
  return out.str();
}

}  // namespace cgtrack::pipeline
