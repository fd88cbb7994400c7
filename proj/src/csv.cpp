#include "fracpath/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace fracpath::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

// NaN marks an inapplicable field and is rendered as an empty cell.
std::string field(double v) { return std::isnan(v) ? std::string() : format_double(v); }

} // namespace

void write_comments(std::ostream& os, const std::vector<std::string>& comments) {
    for (const std::string& c : comments) os << "# " << c << '\n';
}

void write_path(std::ostream& os, const SampledPath& path,
                const std::vector<std::string>& comments) {
    write_comments(os, comments);
    os << "t,value\n";
    for (std::size_t i = 0; i < path.size(); ++i)
        os << format_double(path.times[i]) << ',' << format_double(path.values[i]) << '\n';
}

void write_pl(std::ostream& os, const bv::PiecewiseLinearFn& f,
              const std::vector<std::string>& comments) {
    write_comments(os, comments);
    os << "t,value\n";
    for (std::size_t i = 0; i < f.knots.size(); ++i)
        os << format_double(f.knots[i]) << ',' << format_double(f.values[i]) << '\n';
}

void write_step(std::ostream& os, const bv::StepFn& f,
                const std::vector<std::string>& comments) {
    write_comments(os, comments);
    os << "# initial=" << format_double(f.initial_value) << '\n';
    os << "# horizon=" << format_double(f.horizon) << '\n';
    os << "t,jump\n";
    for (const bv::Jump& j : f.jumps)
        os << format_double(j.time) << ',' << format_double(j.size) << '\n';
}

void write_norms(std::ostream& os, const std::vector<fraccalc::BesovReport>& reports,
                 const std::vector<std::string>& comments) {
    write_comments(os, comments);
    os << "beta,norm_w1,norm_w2,grid_points\n";
    for (const fraccalc::BesovReport& r : reports)
        os << format_double(r.beta) << ',' << format_double(r.norm_w1) << ','
           << format_double(r.norm_w2) << ',' << r.grid_points << '\n';
}

void write_report(std::ostream& os, const experiments::ExperimentReport& report,
                  const std::vector<std::string>& comments) {
    write_comments(os, comments);
    os << "experiment,grid,eps,estimate,std_err,slope,slope_err\n";
    for (const experiments::ReportRow& r : report.rows)
        os << r.experiment << ',' << r.grid << ',' << field(r.eps) << ',' << field(r.estimate)
           << ',' << field(r.std_err) << ',' << field(r.slope) << ',' << field(r.slope_err)
           << '\n';
}

void save(const std::string& file, const std::string& contents) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + file);
    os << contents;
    if (!os) throw std::runtime_error("write failed: " + file);
}

} // namespace fracpath::csv
