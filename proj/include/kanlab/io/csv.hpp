#pragma once

#include <functional>
#include <ostream>
#include <span>
#include <string>

#include "kanlab/lab/lab.hpp"
#include "kanlab/train/train.hpp"

namespace kanlab::io {

// All report writers emit a CSV table ('.' decimal separator, LF line
// endings, header row), a blank line, and a key=value summary block.
// Numbers use format_double, so reruns are byte-identical; wall-clock time
// is deliberately serialized as wall_ms=0 (the in-memory report carries the
// real measurement) to keep the files deterministic.

void write_train_report(std::ostream& os, const train::TrainReport& report);
void write_scaling_report(std::ostream& os, const lab::ScalingReport& report);
void write_dimension_report(std::ostream& os,
                            const lab::DimensionReport& report);

struct InterpRow {
  double x = 0.0;
  double f_true = 0.0;
  double f_interp = 0.0;
};

// Columns x,f_true,f_interp,abs_err plus a summary with the max-abs and RMS
// errors and the extra key=value pairs (already formatted).
void write_interp_table(
    std::ostream& os, std::span<const InterpRow> rows,
    std::span<const std::pair<std::string, std::string>> summary);

// Opens path for writing and runs the writer; failures throw
// std::runtime_error naming the path.
void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer);

}  // namespace kanlab::io
