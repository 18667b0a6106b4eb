#pragma once

// JSON round-trips for the persisted artifacts (schedules, profiles) and a
// small CSV writer. Schedules serialize as {m, eps[], radii[], kappas[],
// safety} plus log-space companions, since linear eps/kappa values underflow
// for deep schedules.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wermerlab/profile.hpp"
#include "wermerlab/schedule.hpp"

namespace wermerlab {

using njson = nlohmann::json;

inline njson to_json(const EpsilonSchedule& s) {
    njson j;
    j["m"] = s.m;
    j["eps"] = s.eps;
    j["radii"] = std::vector<double>(s.radii.begin() + std::min<size_t>(1, s.radii.size()),
                                     s.radii.end());
    j["kappas"] = std::vector<double>(s.kappas.begin() + std::min<size_t>(1, s.kappas.size()),
                                      s.kappas.end());
    j["safety"] = s.safety;
    j["log_eps"] = s.log_eps;
    j["log_kappas"] = std::vector<double>(
        s.log_kappas.begin() + std::min<size_t>(1, s.log_kappas.size()), s.log_kappas.end());
    j["kappa_sampled"] = std::vector<int>(
        s.kappa_sampled.begin() + std::min<size_t>(1, s.kappa_sampled.size()),
        s.kappa_sampled.end());
    return j;
}

inline EpsilonSchedule schedule_from_json(const njson& j) {
    EpsilonSchedule s;
    s.m = j.at("m").get<int>();
    s.eps = j.at("eps").get<std::vector<double>>();
    s.safety = j.at("safety").get<double>();
    auto offset1 = [&](const std::vector<double>& tail) {
        std::vector<double> v(1, 0.0);
        v.insert(v.end(), tail.begin(), tail.end());
        return v;
    };
    s.radii = offset1(j.at("radii").get<std::vector<double>>());
    s.kappas = offset1(j.at("kappas").get<std::vector<double>>());
    if (j.contains("log_eps")) {
        s.log_eps = j.at("log_eps").get<std::vector<double>>();
    } else {
        for (double e : s.eps) s.log_eps.push_back(std::log(e));
    }
    if (j.contains("log_kappas")) {
        s.log_kappas = offset1(j.at("log_kappas").get<std::vector<double>>());
    } else {
        s.log_kappas.assign(1, -kInf);
        for (size_t i = 1; i < s.kappas.size(); ++i)
            s.log_kappas.push_back(std::log(s.kappas[i]));
    }
    s.kappa_sampled.assign(s.kappas.size(), 1);
    if (j.contains("kappa_sampled")) {
        const auto v = j.at("kappa_sampled").get<std::vector<int>>();
        s.kappa_sampled.assign(1, 0);
        for (int x : v) s.kappa_sampled.push_back(static_cast<std::uint8_t>(x));
    }
    if (static_cast<int>(s.eps.size()) != s.m || static_cast<int>(s.radii.size()) != s.m)
        throw std::invalid_argument("schedule json: field lengths inconsistent with m");
    // rebuild the level-1 placeholders dropped by serialization
    s.log_kappas[0] = -kInf;
    s.kappas[0] = 0.0;
    s.radii[0] = 0.0;
    return s;
}

inline njson to_json(const ConvexProfile& p) {
    njson j;
    njson knots = njson::array();
    for (size_t i = 0; i < p.knots.size(); ++i)
        knots.push_back({{"t", static_cast<double>(i)}, {"value", p.knots[i]}});
    j["knots"] = knots;
    j["slopes"] = p.slopes;
    j["intercepts"] = p.intercepts;
    j["mollifier_halfwidth"] = p.mollifier_halfwidth;
    j["quadratic"] = p.quadratic;
    j["mollifier_nodes"] = p.mollifier_nodes;
    return j;
}

inline ConvexProfile profile_from_json(const njson& j) {
    ConvexProfile p;
    for (const auto& k : j.at("knots")) p.knots.push_back(k.at("value").get<double>());
    p.slopes = j.at("slopes").get<std::vector<double>>();
    p.intercepts = j.at("intercepts").get<std::vector<double>>();
    p.mollifier_halfwidth = j.at("mollifier_halfwidth").get<double>();
    p.quadratic = j.at("quadratic").get<bool>();
    if (j.contains("mollifier_nodes")) p.mollifier_nodes = j.at("mollifier_nodes").get<int>();
    validate_profile(p);
    return p;
}

/// Fixed shortest-roundtrip float formatting; CSV files are stable across
/// reruns because no timestamps or locale-dependent formatting are involved.
inline std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + path);
    }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row_strings(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';  // LF endings
    }

    template <typename... T>
    void row(T... vals) {
        std::vector<std::string> cells;
        (cells.push_back(cell(vals)), ...);
        row_strings(cells);
    }

  private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(std::uint64_t v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }
    std::ofstream out_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace wermerlab
