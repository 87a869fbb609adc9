#include "axisym/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace axisym {

namespace {

// JSON has no infinity; unbounded values are written as strings.
nlohmann::json num(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::string g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json to_json(const NormSpec& spec)
{
    return {{"p", num(spec.p)}, {"region", describe(spec.region)}};
}

nlohmann::json to_json(const EstimateReport& rep)
{
    nlohmann::json extra = nlohmann::json::object();
    for (auto& [k, v] : rep.extra)
        extra[k] = num(v);
    return {{"estimate_id", rep.estimate_id},
            {"lhs", num(rep.lhs)},
            {"rhs_norm", num(rep.rhs_norm)},
            {"empirical_C", num(rep.empirical_C)},
            {"region", to_json(rep.region)},
            {"data_label", rep.data_label},
            {"refinement_level", rep.refinement_level},
            {"extra", extra}};
}

nlohmann::json to_json(const ResidualReport& rep)
{
    nlohmann::json res = nlohmann::json::object();
    for (std::size_t k = 0; k < rep.names.size(); ++k)
        res[rep.names[k]] = num(rep.residuals[k]);
    return {{"residuals", res}, {"probe_h", rep.probe_h}, {"time_samples", rep.time_samples}, {"meta", rep.meta}};
}

nlohmann::json to_json(const EpsilonStudyReport& rep)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        nlohmann::json d = nlohmann::json::array();
        for (double v : rep.differences[k])
            d.push_back(num(v));
        rows.push_back({{"R", rep.radii[k]}, {"differences", d}, {"monotone", bool(rep.monotone[k])}});
    }
    return {{"eps", rep.eps}, {"table", rows}, {"passed", rep.passed}, {"particles", rep.particles_finest}};
}

nlohmann::json monitor_table(const TrajectoryRecord& rec, const std::vector<NormSpec>& norms)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < rec.monitors.size(); ++k) {
        const Monitor& m = rec.monitors[k];
        nlohmann::json n = nlohmann::json::array();
        for (double v : m.norms)
            n.push_back(num(v));
        rows.push_back({{"t", rec.times[k]},
                        {"norms", n},
                        {"divergence", num(m.divergence)},
                        {"circulation", m.circulation},
                        {"impulse", m.impulse}});
    }
    nlohmann::json specs = nlohmann::json::array();
    for (auto& s : norms)
        specs.push_back(to_json(s));
    return {{"norm_specs", specs}, {"rows", rows}, {"steps", rec.steps}, {"remesh_events", rec.remesh_events}};
}

nlohmann::json envelope(const std::string& kind, nlohmann::json payload)
{
    return {{"schema", kReportSchema}, {"kind", kind}, {"data", std::move(payload)}};
}

std::string estimates_csv(const std::vector<EstimateReport>& reports)
{
    std::ostringstream os;
    os << "estimate_id,data_label,refinement_level,p,region,lhs,rhs_norm,empirical_C\n";
    for (auto& r : reports)
        os << r.estimate_id << ',' << r.data_label << ',' << r.refinement_level << ',' << g17(r.region.p) << ",\""
           << describe(r.region.region) << "\"," << g17(r.lhs) << ',' << g17(r.rhs_norm) << ','
           << g17(r.empirical_C) << '\n';
    return os.str();
}

std::string residuals_csv(const std::vector<ResidualReport>& reports)
{
    std::ostringstream os;
    os << "level,test,residual\n";
    for (std::size_t l = 0; l < reports.size(); ++l)
        for (std::size_t k = 0; k < reports[l].names.size(); ++k)
            os << l << ',' << reports[l].names[k] << ',' << g17(reports[l].residuals[k]) << '\n';
    return os.str();
}

std::string epsilon_csv(const EpsilonStudyReport& rep)
{
    std::ostringstream os;
    os << "R,eps_a,eps_b,difference\n";
    for (std::size_t k = 0; k < rep.radii.size(); ++k)
        for (std::size_t i = 0; i < rep.differences[k].size(); ++i)
            os << g17(rep.radii[k]) << ',' << g17(rep.eps[i]) << ',' << g17(rep.eps[i + 1]) << ','
               << g17(rep.differences[k][i]) << '\n';
    return os.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f)
        throw Error("cannot write " + path);
    f << text;
    if (!f)
        throw Error("write failed: " + path);
}

}  // namespace axisym
