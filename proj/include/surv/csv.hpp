#pragma once

#include <string>

#include "surv/curve.hpp"
#include "surv/types.hpp"

namespace surv {

/// Reads an event log from CSV with the schema
/// `individual_id,receive_ts,open_ts,<feature...>`; an empty open_ts cell
/// means the open was never observed. Throws DataError naming the row and
/// column on schema violations.
RawEventLog load_csv(const std::string& path);

/// Writes the same schema back. Doubles are printed with enough digits to
/// round-trip bit-exactly for finite values.
void save_csv(const RawEventLog& log, const std::string& path);

/// Two-column `time,survival` export for plotting.
void save_curve_csv(const StepSurvivalCurve& curve, const std::string& path);

}  // namespace surv
