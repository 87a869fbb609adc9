#include "axisym/fields.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace axisym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int cells_for(double extent, double h)
{
    return std::max(1, int(std::ceil(extent / h - 1e-9)));
}

struct RegionBox {
    double r_hi, z_lo, z_hi;
    bool cylindrical;
    bool bounded;
};

RegionBox box_of(const Region& region)
{
    if (auto c = std::get_if<CylinderRegion>(&region))
        return {c->R, c->z0 - c->R, c->z0 + c->R, true, true};
    if (auto hp = std::get_if<HalfPlaneRect>(&region))
        return {hp->R, hp->z0 - hp->R, hp->z0 + hp->R, false, true};
    return {kInf, -kInf, kInf, true, false};
}

void check_spec(const NormSpec& spec)
{
    if (!(spec.p >= 1.0))
        throw Error("norm exponent must be >= 1");
    if (auto c = std::get_if<CylinderRegion>(&spec.region); c && !(c->R > 0))
        throw Error("cylinder radius must be positive");
    if (auto hp = std::get_if<HalfPlaneRect>(&spec.region); hp && !(hp->R > 0))
        throw Error("half-plane rectangle size must be positive");
}

double finish(double acc, double p)
{
    if (std::isinf(p))
        return acc;
    return std::pow(acc, 1.0 / p);
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Grid Grid::make(double r_max, double z_min, double z_max, double h)
{
    if (!(h > 0) || !(r_max > 0) || !(z_max > z_min))
        throw Error("invalid grid extents");
    Grid g;
    g.h = h;
    g.nr = cells_for(r_max, h);
    g.nz = cells_for(z_max - z_min, h);
    g.r_max = g.nr * h;
    g.z_min = z_min;
    g.z_max = z_min + g.nz * h;
    return g;
}

ParticleField to_particles(const GridField& g, bool keep_zero)
{
    ParticleField out;
    out.particles.reserve(g.q.size());
    for (int j = 0; j < g.grid.nz; ++j)
        for (int i = 0; i < g.grid.nr; ++i) {
            double q = g.at(i, j);
            if (q == 0.0 && !keep_zero)
                continue;
            out.particles.push_back({g.grid.node(i, j), q, g.grid.cell_volume(i)});
        }
    return out;
}

ParticleField as_particles(const RelativeVorticityField& f)
{
    if (auto p = std::get_if<ParticleField>(&f))
        return *p;
    return to_particles(std::get<GridField>(f));
}

double circulation_moment(const ParticleField& f)
{
    double s = 0;
    for (auto& p : f.particles)
        s += p.q * p.vol;
    return s;
}

double circulation_moment(const GridField& f)
{
    double s = 0;
    for (int j = 0; j < f.grid.nz; ++j)
        for (int i = 0; i < f.grid.nr; ++i)
            s += f.at(i, j) * f.grid.cell_volume(i);
    return s;
}

double impulse_moment(const ParticleField& f)
{
    double s = 0;
    for (auto& p : f.particles)
        s += p.q * p.pos.r * p.pos.r * p.vol;
    return s;
}

double max_abs_q(const ParticleField& f)
{
    double m = 0;
    for (auto& p : f.particles)
        m = std::max(m, std::abs(p.q));
    return m;
}

std::string describe(const Region& region)
{
    std::ostringstream os;
    if (auto c = std::get_if<CylinderRegion>(&region))
        os << "cylinder(R=" << c->R << ",z0=" << c->z0 << ")";
    else if (auto hp = std::get_if<HalfPlaneRect>(&region))
        os << "halfplane(R=" << hp->R << ",z0=" << hp->z0 << ")";
    else
        os << "whole";
    return os.str();
}

double SampleSet::magnitude(std::size_t k) const
{
    if (ncomp == 1)
        return std::abs(values[k]);
    double s = 0;
    for (int c = 0; c < ncomp; ++c)
        s += values[k * ncomp + c] * values[k * ncomp + c];
    return std::sqrt(s);
}

ProbeGrid ProbeGrid::covering(double r_max, double z_lo, double z_hi, double h)
{
    if (!(h > 0) || !(r_max >= 0) || !(z_hi >= z_lo))
        throw Error("invalid probe grid extents");
    ProbeGrid g;
    g.h = h;
    g.z_lo = z_lo;
    g.nr = int(std::ceil(r_max / h - 1e-9)) + 1;
    g.nz = int(std::ceil((z_hi - z_lo) / h - 1e-9)) + 1;
    return g;
}

std::vector<MeridianPoint> ProbeGrid::points() const
{
    std::vector<MeridianPoint> pts;
    pts.reserve(size());
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nr; ++i)
            pts.push_back(node(i, j));
    return pts;
}

SampleCell ProbeGrid::cell(int i, int j) const
{
    double r = i * h, z = z_lo + j * h;
    return {std::max(0.0, r - 0.5 * h), r + 0.5 * h, z - 0.5 * h, z + 0.5 * h};
}

SampleSet samples(const ProbeGrid& g, const std::vector<double>& values, int ncomp)
{
    if (values.size() != g.size() * std::size_t(ncomp))
        throw Error("sample count does not match probe grid");
    SampleSet s;
    s.ncomp = ncomp;
    s.values = values;
    s.cells.reserve(g.size());
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i)
            s.cells.push_back(g.cell(i, j));
    return s;
}

SampleSet samples(const VelocityGrid& v)
{
    std::vector<double> vals;
    vals.reserve(2 * v.u.size());
    for (auto& u : v.u) {
        vals.push_back(u.u_r);
        vals.push_back(u.u_z);
    }
    return samples(v.grid, vals, 2);
}

SampleSet samples(const GridField& f)
{
    SampleSet s;
    s.values = f.q;
    s.cells.reserve(f.grid.size());
    double h = f.grid.h;
    for (int j = 0; j < f.grid.nz; ++j)
        for (int i = 0; i < f.grid.nr; ++i) {
            double z = f.grid.z_min + j * h;
            s.cells.push_back({i * h, (i + 1) * h, z, z + h});
        }
    return s;
}

double lp_norm(const SampleSet& s, const NormSpec& spec)
{
    check_spec(spec);
    if (s.cells.empty())
        throw Error("empty field");
    RegionBox box = box_of(spec.region);
    if (box.bounded) {
        double r_hi = -kInf, z_lo = kInf, z_hi = -kInf, r_lo = kInf;
        for (auto& c : s.cells) {
            r_lo = std::min(r_lo, c.r_lo);
            r_hi = std::max(r_hi, c.r_hi);
            z_lo = std::min(z_lo, c.z_lo);
            z_hi = std::max(z_hi, c.z_hi);
        }
        double tol = 1e-9 * std::max(1.0, box.r_hi);
        if (r_lo > tol || r_hi < box.r_hi - tol || z_lo > box.z_lo + tol || z_hi < box.z_hi - tol)
            throw Error("region exceeds field support");
    }
    double p = spec.p;
    double acc = 0;
    for (std::size_t k = 0; k < s.cells.size(); ++k) {
        const auto& c = s.cells[k];
        double a = std::max(c.r_lo, 0.0), b = std::min(c.r_hi, box.r_hi);
        double zl = std::max(c.z_lo, box.z_lo), zh = std::min(c.z_hi, box.z_hi);
        if (!(b > a) || !(zh > zl))
            continue;
        double f = s.magnitude(k);
        if (std::isinf(p)) {
            acc = std::max(acc, f);
            continue;
        }
        double w = box.cylindrical ? std::numbers::pi * (b * b - a * a) * (zh - zl) : (b - a) * (zh - zl);
        acc += std::pow(f, p) * w;
    }
    return finish(acc, p);
}

double lp_norm(const GridField& f, const NormSpec& spec)
{
    return lp_norm(samples(f), spec);
}

double lp_norm(const ParticleField& f, const NormSpec& spec)
{
    check_spec(spec);
    if (f.particles.empty())
        throw Error("empty field");
    RegionBox box = box_of(spec.region);
    double p = spec.p;
    double acc = 0;
    for (auto& pt : f.particles) {
        if (box.bounded && (pt.pos.r > box.r_hi || pt.pos.z < box.z_lo || pt.pos.z > box.z_hi))
            continue;
        double a = std::abs(pt.q);
        if (std::isinf(p)) {
            acc = std::max(acc, a);
            continue;
        }
        double w = box.cylindrical ? pt.vol : pt.vol / (kTwoPi * pt.pos.r);
        acc += std::pow(a, p) * w;
    }
    return finish(acc, p);
}

double lp_norm(const RelativeVorticityField& f, const NormSpec& spec)
{
    return std::visit([&](const auto& v) { return lp_norm(v, spec); }, f);
}

double lp_norm(const VelocityGrid& v, const NormSpec& spec)
{
    return lp_norm(samples(v), spec);
}

double divergence_residual(const VelocityGrid& v)
{
    const ProbeGrid& g = v.grid;
    if (g.nr < 3 || g.nz < 3)
        throw Error("grid too small for divergence stencil (need 3 nodes per axis)");
    if (v.u.size() != g.size())
        throw Error("velocity count does not match probe grid");
    double h = g.h;
    auto fr = [&](int i, int j) { return i * h * v.u[g.index(i, j)].u_r; };
    auto uz = [&](int i, int j) { return v.u[g.index(i, j)].u_z; };
    double acc = 0;
    for (int j = 0; j < g.nz; ++j)
        for (int i = 0; i < g.nr; ++i) {
            double dr;
            if (i == 0)
                dr = 0.0;  // r u_r is even in r
            else if (i == g.nr - 1)
                dr = (3 * fr(i, j) - 4 * fr(i - 1, j) + fr(i - 2, j)) / (2 * h);
            else
                dr = (fr(i + 1, j) - fr(i - 1, j)) / (2 * h);
            double dz;
            if (j == 0)
                dz = (-3 * uz(i, 0) + 4 * uz(i, 1) - uz(i, 2)) / (2 * h);
            else if (j == g.nz - 1)
                dz = (3 * uz(i, j) - 4 * uz(i, j - 1) + uz(i, j - 2)) / (2 * h);
            else
                dz = (uz(i, j + 1) - uz(i, j - 1)) / (2 * h);
            double d = dr + i * h * dz;
            SampleCell c = g.cell(i, j);
            acc += d * d * std::numbers::pi * (c.r_hi * c.r_hi - c.r_lo * c.r_lo) * h;
        }
    return std::sqrt(acc);
}

double m4prime(double x)
{
    x = std::abs(x);
    if (x <= 1.0)
        return 1.0 - 2.5 * x * x + 1.5 * x * x * x;
    if (x <= 2.0)
        return 0.5 * (2.0 - x) * (2.0 - x) * (1.0 - x);
    return 0.0;
}

GridField remesh_to_grid(const ParticleField& particles, const Grid& target)
{
    if (particles.particles.empty())
        throw Error("empty field");
    GridField out{target, std::vector<double>(target.size(), 0.0)};
    const double h = target.h;
    std::vector<std::size_t> bad;
    for (std::size_t k = 0; k < particles.particles.size(); ++k) {
        const auto& p = particles.particles[k];
        double x = p.pos.r / h - 0.5;
        double y = (p.pos.z - target.z_min) / h - 0.5;
        int i0 = int(std::floor(x)), j0 = int(std::floor(y));
        if (i0 + 2 >= target.nr || j0 - 1 < 0 || j0 + 2 >= target.nz || !(p.pos.r >= 0)) {
            bad.push_back(k);
            continue;
        }
        double wr[4], wz[4];
        for (int a = 0; a < 4; ++a) {
            wr[a] = m4prime(x - (i0 - 1 + a));
            wz[a] = m4prime(y - (j0 - 1 + a));
        }
        double mass = p.q * p.vol;
        for (int b = 0; b < 4; ++b) {
            int j = j0 - 1 + b;
            for (int a = 0; a < 4; ++a) {
                int i = i0 - 1 + a;
                if (i < 0)
                    i = -1 - i;  // ghost node folds onto its mirror image
                out.at(i, j) += mass * wr[a] * wz[b];
            }
        }
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os << "particles outside remesh grid (" << bad.size() << "):";
        for (std::size_t n = 0; n < std::min<std::size_t>(bad.size(), 8); ++n) {
            const auto& p = particles.particles[bad[n]];
            os << " #" << bad[n] << "(" << p.pos.r << "," << p.pos.z << ")";
        }
        if (bad.size() > 8)
            os << " ...";
        throw Error(os.str());
    }
    for (int j = 0; j < target.nz; ++j)
        for (int i = 0; i < target.nr; ++i)
            out.at(i, j) /= target.cell_volume(i);
    return out;
}

ParticleField remesh(const ParticleField& particles, const Grid& target, const RemeshOptions& opt)
{
    GridField g = remesh_to_grid(particles, target);
    double qmax = 0;
    for (double q : g.q)
        qmax = std::max(qmax, std::abs(q));
    double cut = opt.floor * qmax;
    ParticleField out;
    for (int j = 0; j < target.nz; ++j)
        for (int i = 0; i < target.nr; ++i) {
            double q = g.at(i, j);
            if (q == 0.0 || std::abs(q) <= cut)
                continue;
            out.particles.push_back({target.node(i, j), q, target.cell_volume(i)});
        }
    return out;
}

void write_particles_csv(const ParticleField& f, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write " + path);
    os << "r,z,q,vol\n";
    for (auto& p : f.particles)
        os << fmt17(p.pos.r) << ',' << fmt17(p.pos.z) << ',' << fmt17(p.q) << ',' << fmt17(p.vol) << '\n';
}

ParticleField read_particles_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("cannot read " + path);
    std::string line;
    std::getline(is, line);
    if (line.rfind("r,z,q,vol", 0) != 0)
        throw Error("particle CSV must start with header r,z,q,vol");
    ParticleField f;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        VortexParticle p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.pos.r, &p.pos.z, &p.q, &p.vol) != 4)
            throw Error("malformed particle row: " + line);
        f.particles.push_back(p);
    }
    return f;
}

void write_grid_json(const GridField& f, const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw Error("cannot write " + path);
    // dumped by hand so every float carries 17 significant digits
    os << "{\"type\":\"grid\",\"r_max\":" << fmt17(f.grid.r_max) << ",\"z_min\":" << fmt17(f.grid.z_min)
       << ",\"z_max\":" << fmt17(f.grid.z_max) << ",\"h\":" << fmt17(f.grid.h) << ",\"nr\":" << f.grid.nr
       << ",\"nz\":" << f.grid.nz << ",\"values\":[";
    for (std::size_t k = 0; k < f.q.size(); ++k)
        os << (k ? "," : "") << fmt17(f.q[k]);
    os << "]}\n";
}

GridField read_grid_json(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error("cannot read " + path);
    auto j = nlohmann::json::parse(is);
    if (j.value("type", "") != "grid")
        throw Error("not a grid descriptor: " + path);
    GridField f;
    f.grid = Grid::make(j.at("r_max"), j.at("z_min"), j.at("z_max"), j.at("h"));
    f.q = j.at("values").get<std::vector<double>>();
    if (f.q.size() != f.grid.size())
        throw Error("grid values do not match extents");
    return f;
}

}  // namespace axisym
