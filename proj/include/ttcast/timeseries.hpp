#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ttcast {

// Dense grid of travel times: rows advance in fixed 5-minute steps, one
// column per corridor, values in minutes. Cells that were imputed rather
// than observed carry a gap-mask bit. `segments` lists the row ranges that
// windowing may use; gaps too long to trust splitting the series leave rows
// outside every segment.
struct TravelTimeMatrix {
  std::int64_t start_time = 0;      // epoch seconds UTC of row 0
  std::int64_t step_seconds = 300;  // 5-minute frequency
  std::vector<std::string> corridor_ids;
  std::size_t rows = 0;
  std::vector<double> values;          // rows x corridors, row-major
  std::vector<std::uint8_t> gap_mask;  // rows x corridors
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // valid [begin,end)

  std::size_t cols() const { return corridor_ids.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  bool gap(std::size_t r, std::size_t c) const { return gap_mask[r * cols() + c] != 0; }
  std::int64_t time_at(std::size_t r) const {
    return start_time + static_cast<std::int64_t>(r) * step_seconds;
  }

  void init(std::int64_t start, std::int64_t step, std::vector<std::string> ids,
            std::size_t n_rows) {
    start_time = start;
    step_seconds = step;
    corridor_ids = std::move(ids);
    rows = n_rows;
    values.assign(rows * cols(), 0.0);
    gap_mask.assign(rows * cols(), 0);
    segments = {{0, rows}};
  }

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
    return out;
  }

  // Mean over corridors per row; the network-level series.
  std::vector<double> network_mean() const {
    std::vector<double> out(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < cols(); ++c) s += at(r, c);
      out[r] = s / static_cast<double>(cols());
    }
    return out;
  }
};

}  // namespace ttcast
