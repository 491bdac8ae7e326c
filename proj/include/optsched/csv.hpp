#pragma once

#include <string>
#include <vector>

namespace optsched {

// RFC-4180-flavoured CSV: comma separated, header row, LF line endings.
// All values written by this project are numeric or plain identifiers, so no
// quoting is required.

/// Parses a headerless numeric CSV into rows of doubles; rows must be square.
std::vector<std::vector<double>> read_matrix_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const std::vector<std::vector<double>>& rows);

/// Deterministic double formatting ("%.12g") shared by every CSV writer.
std::string format_double(double value);

std::string join_csv_row(const std::vector<std::string>& fields);

}  // namespace optsched
