// Copyright 2026 The su11 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SU11_FRINGE_SCAN_H
#define SU11_FRINGE_SCAN_H

#include <cstddef>
#include <vector>

namespace su11 {

/// Per-position statistics of one crystal-separation scan.
struct ScanRow {
    double position_mm = 0;
    double phi = 0;
    std::size_t n_pulses_kept = 0;
    std::size_t n_pulses_total = 0;
    double mean_photons = 0;
    double std_photons = 0;
};

/// Rows are ordered by strictly increasing position.
struct FringeScan {
    std::vector<ScanRow> rows;

    /// Throws std::invalid_argument if positions are not strictly increasing
    /// or a row keeps more pulses than it recorded.
    void validate() const;
};

}  // namespace su11

#endif
