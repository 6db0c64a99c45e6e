#pragma once

// CSV and JSON serialization.
//
// Paths:  replica,t,kind,value_0..value_{d-1},delta_0..delta_{d-1}
//         one "grid" row per grid knot and one "jump" row per jump knot
//         (deltas are zero on grid rows).
// PRM:    replica,time,shell,mark_0..mark_{d-1}
// Reals are written in shortest round-trip form, so reading back
// reproduces every double exactly.

#include "levy/charfn.hpp"
#include "levy/decomp.hpp"
#include "levy/jumprm.hpp"
#include "levy/paths.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace levy::io {

std::string format_real(double x);
double parse_real(const std::string& text);

void write_paths_csv(std::ostream& out, const std::vector<const CadlagPath*>& paths,
                     Eigen::Index dim);
/// Paths keyed by replica index.
std::map<long, CadlagPath> read_paths_csv(std::istream& in);

void write_prm_csv(std::ostream& out, const std::vector<const PRMSample*>& samples,
                   Eigen::Index dim);
std::map<long, PRMSample> read_prm_csv(std::istream& in, double horizon, int shell_cutoff);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Complex& z);
nlohmann::json to_json(const CFReport& r);
nlohmann::json to_json(const IndependenceStat& s);
nlohmann::json to_json(const ReducibilityReport& r);

}  // namespace levy::io
