#pragma once

// CSV writers shared by the CLI and the tests.  All numeric fields are
// rendered with %.17g so that a value survives a write/parse round trip
// bit-exactly.  Each writer accepts an optional list of "key=value" strings
// that is emitted verbatim as leading "# key=value" comment lines, which the
// CLI uses to record the fully resolved configuration of a run.

#include <iosfwd>
#include <string>
#include <vector>

#include "fracpath/bv.hpp"
#include "fracpath/experiments.hpp"
#include "fracpath/fraccalc.hpp"
#include "fracpath/path.hpp"

namespace fracpath::csv {

// %.17g rendering of a double; "nan"/"inf" follow printf conventions.
std::string format_double(double v);

// Emits one "# key=value" line per entry.
void write_comments(std::ostream& os, const std::vector<std::string>& comments);

// Header "t,value"; one row per sample point.
void write_path(std::ostream& os, const SampledPath& path,
                const std::vector<std::string>& comments = {});

// Header "t,value"; one row per knot.
void write_pl(std::ostream& os, const bv::PiecewiseLinearFn& f,
              const std::vector<std::string>& comments = {});

// Comments "# initial=<v>" and "# horizon=<T>", header "t,jump",
// one row per jump.
void write_step(std::ostream& os, const bv::StepFn& f,
                const std::vector<std::string>& comments = {});

// Header "beta,norm_w1,norm_w2,grid_points"; one row per report.
void write_norms(std::ostream& os, const std::vector<fraccalc::BesovReport>& reports,
                 const std::vector<std::string>& comments = {});

// Header "experiment,grid,eps,estimate,std_err,slope,slope_err".
// NaN fields are rendered as empty cells; grid 0 marks an aggregate row.
void write_report(std::ostream& os, const experiments::ExperimentReport& report,
                  const std::vector<std::string>& comments = {});

// Opens `file` for writing, throwing std::runtime_error on failure.
void save(const std::string& file, const std::string& contents);

} // namespace fracpath::csv
