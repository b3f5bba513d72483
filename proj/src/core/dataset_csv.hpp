#pragma once

#include <iosfwd>
#include <string>

#include "core/types.hpp"

namespace hybridloc {

// Fingerprint CSV layout, one row per reference point:
//   point_id,true_x,true_y,true_z,est_x_<t1>,est_y_<t1>,est_z_<t1>,...
// Doubles use '.' as decimal separator and shortest round-trip formatting;
// lines end with LF.

void write_dataset_csv(const FingerprintDataset& dataset, std::ostream& out);
void write_dataset_csv_file(const FingerprintDataset& dataset,
                            const std::string& path);

FingerprintDataset read_dataset_csv(std::istream& in);
FingerprintDataset read_dataset_csv_file(const std::string& path);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace hybridloc
