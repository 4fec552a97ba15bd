#include "hmlbn/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace hmlbn {

FlowMetrics Metrics::totals() const {
  FlowMetrics t;
  for (const auto& [id, f] : flows) {
    t.ingress += f.ingress;
    t.delivered += f.delivered;
    t.dropped += f.dropped;
    t.in_flight += f.in_flight;
    t.hop_sum += f.hop_sum;
    t.latency_sum_ms += f.latency_sum_ms;
    t.max_gap_ms = std::max(t.max_gap_ms, f.max_gap_ms);
    t.stale_after_withdrawal += f.stale_after_withdrawal;
    for (const auto& [r, n] : f.drops_by_reason) t.drops_by_reason[r] += n;
  }
  return t;
}

namespace {

std::string reasons(const FlowMetrics& f) {
  std::string out;
  for (const auto& [r, n] : f.drops_by_reason) {
    if (!out.empty()) out += ';';
    out += std::string(to_string(r)) + ':' + std::to_string(n);
  }
  return out;
}

void row(std::ostringstream& os, const std::string& id, const FlowMetrics& f) {
  os << id << ',' << f.ingress << ',' << f.delivered << ',' << f.dropped << ',' << f.in_flight << ',' << f.mean_hops()
     << ',' << f.mean_latency_ms() << ',' << f.max_gap_ms << ','
     << f.stale_after_withdrawal << ',' << reasons(f);
}

}  // namespace

std::string Metrics::to_csv() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "flow,ingress,delivered,dropped,in_flight,mean_hops,mean_latency_ms,max_gap_ms,stale_after_withdrawal,drops_by_reason,ctrl_total,"
        "ctrl_intra_area,ctrl_area_crossing,ctrl_by_kind\n";
  for (const auto& [id, f] : flows) {
    row(os, id, f);
    os << ",,,,\n";
  }
  row(os, "total", totals());
  std::string kinds;
  for (const auto& [k, n] : ctrl_by_kind) {
    if (!kinds.empty()) kinds += ';';
    kinds += std::string(to_string(k)) + ':' + std::to_string(n);
  }
  os << ',' << ctrl_total << ',' << ctrl_intra_area << ',' << ctrl_area_crossing << ',' << kinds << '\n';
  return os.str();
}

std::string Metrics::summary() const {
  const auto t = totals();
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  const double pct = t.ingress ? 100.0 * static_cast<double>(t.delivered) / static_cast<double>(t.ingress) : 0.0;
  os << "delivered " << t.delivered << "/" << t.ingress << " (" << pct << "%), dropped " << t.dropped
     << ", in flight " << t.in_flight << ", mean hops " << t.mean_hops() << ", control messages " << ctrl_total
     << " (intra-area " << ctrl_intra_area << ", area-crossing " << ctrl_area_crossing << ")";
  return os.str();
}

}  // namespace hmlbn
