#include "axisym/initdata.hpp"

#include <algorithm>
#include <array>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace axisym {

namespace {

constexpr double kPi = std::numbers::pi;

const std::map<std::string, double>& defaults(Family f)
{
    static const std::map<std::string, double> ring{
        {"r_c", 1.0}, {"z_c", 0.0}, {"sigma", 0.25}, {"amplitude", 1.0}, {"dilation", 1.0}};
    static const std::map<std::string, double> two{{"r1", 1.0}, {"z1", -0.4}, {"r2", 1.0},       {"z2", 0.4},
                                                   {"sigma", 0.2}, {"a1", 1.0}, {"a2", 1.0}, {"dilation", 1.0}};
    static const std::map<std::string, double> sheet{
        {"amplitude", 1.0}, {"r0", 0.25}, {"a", 2.5}, {"w", 0.3}, {"extent", 16.0}, {"dilation", 1.0}};
    static const std::map<std::string, double> mms{{"amplitude", 1.0}, {"dilation", 1.0}};
    switch (f) {
    case Family::GaussianRing: return ring;
    case Family::DoubleRing: return two;
    case Family::NearSheet: return sheet;
    case Family::Manufactured: return mms;
    }
    return mms;
}

double ring_profile(double r, double z, double rc, double zc, double sigma)
{
    double dz2 = (z - zc) * (z - zc);
    double s2 = sigma * sigma;
    // mirror image keeps q even across the axis
    return std::exp(-((r - rc) * (r - rc) + dz2) / s2) + std::exp(-((r + rc) * (r + rc) + dz2) / s2);
}

double raw_bump(Profile p, double t)
{
    if (t >= 1.0)
        return 0.0;
    if (p == Profile::StandardBump)
        return std::exp(-1.0 / (1.0 - t * t));
    double u = 1.0 - t * t;
    return u * u;
}

double bump_norm(Profile p)
{
    static const std::array<double, 2> norms = [] {
        std::array<double, 2> out{};
        boost::math::quadrature::tanh_sinh<double> ts;
        for (int k = 0; k < 2; ++k) {
            Profile pr = k == 0 ? Profile::StandardBump : Profile::QuarticBump;
            double m = ts.integrate([pr](double t) { return 4.0 * kPi * t * t * raw_bump(pr, t); }, 0.0, 1.0, 1e-15);
            out[k] = 1.0 / m;
        }
        return out;
    }();
    return norms[p == Profile::StandardBump ? 0 : 1];
}

}  // namespace

Family parse_family(const std::string& name)
{
    if (name == "gaussian_ring")
        return Family::GaussianRing;
    if (name == "double_ring")
        return Family::DoubleRing;
    if (name == "near_sheet")
        return Family::NearSheet;
    if (name == "manufactured")
        return Family::Manufactured;
    throw Error("unknown data family: " + name);
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::GaussianRing: return "gaussian_ring";
    case Family::DoubleRing: return "double_ring";
    case Family::NearSheet: return "near_sheet";
    case Family::Manufactured: return "manufactured";
    }
    return "?";
}

double DataFamily::param(const std::string& key) const
{
    if (auto it = params.find(key); it != params.end())
        return it->second;
    const auto& d = defaults(name);
    if (auto it = d.find(key); it != d.end())
        return it->second;
    throw Error("unknown parameter '" + key + "' for family " + family_name(name));
}

void validate(const DataFamily& fam)
{
    const auto& d = defaults(fam.name);
    for (auto& [k, v] : fam.params) {
        if (!d.count(k))
            throw Error("unknown parameter '" + k + "' for family " + family_name(fam.name));
        if (!std::isfinite(v))
            throw Error("parameter '" + k + "' is not finite");
    }
    if (!(fam.param("dilation") > 0))
        throw Error(family_name(fam.name) + ": dilation must be positive");
    switch (fam.name) {
    case Family::GaussianRing:
        if (!(fam.param("sigma") > 0))
            throw Error("gaussian_ring: sigma must be positive");
        if (!(fam.param("r_c") >= 0))
            throw Error("gaussian_ring: r_c must be nonnegative");
        break;
    case Family::DoubleRing:
        if (!(fam.param("sigma") > 0))
            throw Error("double_ring: sigma must be positive");
        break;
    case Family::NearSheet:
        if (!(fam.param("a") > 2))
            throw Error("near_sheet: q not in L^1 (decay exponent a must exceed 2)");
        if (!(fam.param("r0") > 0))
            throw Error("near_sheet: q not in L^1 (core radius r0 must be positive)");
        if (!(fam.param("w") > 0))
            throw Error("near_sheet: q not in L^1 (axial width w must be positive)");
        break;
    case Family::Manufactured: break;
    }
}

double family_q(const DataFamily& fam, double r, double z)
{
    double lambda = fam.param("dilation");
    r *= lambda;
    z *= lambda;
    switch (fam.name) {
    case Family::GaussianRing:
        return fam.param("amplitude") * ring_profile(r, z, fam.param("r_c"), fam.param("z_c"), fam.param("sigma"));
    case Family::DoubleRing: {
        double s = fam.param("sigma");
        return fam.param("a1") * ring_profile(r, z, fam.param("r1"), fam.param("z1"), s) +
               fam.param("a2") * ring_profile(r, z, fam.param("r2"), fam.param("z2"), s);
    }
    case Family::NearSheet: {
        double r0 = fam.param("r0"), w = fam.param("w");
        return fam.param("amplitude") * std::pow(r0 * r0 + r * r, -0.5 * fam.param("a")) * std::exp(-z * z / (w * w));
    }
    case Family::Manufactured: {
        double r2 = r * r;
        return -fam.param("amplitude") * (3.0 - 14.0 * r2 + 4.0 * r2 * r2 + 4.0 * r2 * z * z) * std::exp(-r2 - z * z) /
               r;
    }
    }
    return 0.0;
}

GridField make_initial(const DataFamily& fam, const Grid& grid)
{
    validate(fam);
    GridField f{grid, std::vector<double>(grid.size(), 0.0)};
    for (int j = 0; j < grid.nz; ++j)
        for (int i = 0; i < grid.nr; ++i) {
            MeridianPoint x = grid.node(i, j);
            f.at(i, j) = family_q(fam, x.r, x.z);
        }
    return f;
}

Grid default_grid(const DataFamily& fam, double h)
{
    if (!(h > 0))
        throw Error("grid spacing must be positive");
    // extents of the undilated data; z_min is snapped to a multiple of h
    double r_max = 0, z_lo = 0, z_hi = 0;
    switch (fam.name) {
    case Family::GaussianRing: {
        double pad = 6.5 * fam.param("sigma"), zc = fam.param("z_c");
        r_max = fam.param("r_c") + pad;
        z_lo = zc - pad;
        z_hi = zc + pad;
        break;
    }
    case Family::DoubleRing: {
        double pad = 6.5 * fam.param("sigma");
        r_max = std::max(fam.param("r1"), fam.param("r2")) + pad;
        z_lo = std::min(fam.param("z1"), fam.param("z2")) - pad;
        z_hi = std::max(fam.param("z1"), fam.param("z2")) + pad;
        break;
    }
    case Family::NearSheet:
        r_max = fam.param("extent");
        z_hi = 6.0 * fam.param("w");
        z_lo = -z_hi;
        break;
    case Family::Manufactured:
        r_max = z_hi = 6.0;
        z_lo = -6.0;
        break;
    }
    double lambda = fam.param("dilation");
    r_max /= lambda;
    z_lo /= lambda;
    z_hi /= lambda;
    if (fam.name == Family::NearSheet || fam.name == Family::Manufactured)
        z_hi = std::ceil(z_hi / h) * h;
    double z0 = std::floor(z_lo / h + 1e-9) * h;
    if (fam.name == Family::NearSheet || fam.name == Family::Manufactured)
        z0 = -z_hi;
    return Grid::make(r_max, z0, z_hi, h);
}

double manufactured_psi(double r, double z)
{
    return r * r * std::exp(-r * r - z * z);
}

VelocitySample manufactured_velocity(double r, double z)
{
    double e = std::exp(-r * r - z * z);
    return {2.0 * z * r * r * e, (3.0 * r - 2.0 * r * r * r) * e};
}

double mollifier_profile(Profile p, double t)
{
    return bump_norm(p) * raw_bump(p, std::abs(t));
}

double cutoff_profile(double t)
{
    if (t <= 1.0)
        return 1.0;
    if (t >= 2.0)
        return 0.0;
    double a = std::exp(-1.0 / (2.0 - t)), b = std::exp(-1.0 / (t - 1.0));
    return a / (a + b);
}

GridField mollify(const GridField& field, const MollifierSpec& spec)
{
    const Grid& g = field.grid;
    const double eps = spec.eps;
    if (!(eps > 0))
        throw Error("mollifier eps must be positive");
    if (g.h > 0.5 * eps * (1 + 1e-12))
        throw Error("grid spacing h = " + std::to_string(g.h) + " too coarse for eps = " + std::to_string(eps) +
                    " (need h <= eps/2)");
    const int L = int(std::ceil(eps / g.h));
    const int W = 2 * L + 1;
    const double h = g.h;
    const double scale = 1.0 / (eps * eps * eps);

    // azimuthal mean of rho_eps(|X - Y|) for cell centres (i, j) and (i + di, j + dj)
    std::vector<double> kbar(std::size_t(g.nr) * W * (L + 1), 0.0);
    auto kidx = [&](int i, int di, int dj) { return (std::size_t(i) * W + (di + L)) * (L + 1) + std::abs(dj); };
    using GL = boost::math::quadrature::gauss<double, 30>;
    for (int i = 0; i < g.nr; ++i) {
        double ri = (i + 0.5) * h;
        for (int di = -L; di <= L; ++di) {
            int j = i + di;
            if (j < 0 || j >= g.nr)
                continue;
            double rj = (j + 0.5) * h;
            for (int dj = 0; dj <= L; ++dj) {
                double dz = dj * h;
                double base = ri * ri + rj * rj + dz * dz;
                double c = (base - eps * eps) / (2.0 * ri * rj);
                if (c >= 1.0)
                    continue;
                double tmax = c <= -1.0 ? kPi : std::acos(c);
                auto f = [&](double t) {
                    double d2 = base - 2.0 * ri * rj * std::cos(t);
                    return mollifier_profile(spec.profile, std::sqrt(std::max(d2, 0.0)) / eps);
                };
                kbar[kidx(i, di, dj)] = scale * GL::integrate(f, 0.0, tmax) / kPi;
            }
        }
    }

    const int nr = g.nr, nz = g.nz;
    auto apply = [&](const std::vector<double>& d, const std::vector<double>& x, std::vector<double>& y) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < nz; ++j)
            for (int i = 0; i < nr; ++i) {
                double s = 0;
                for (int dj = -L; dj <= L; ++dj) {
                    int jj = j + dj;
                    if (jj < 0 || jj >= nz)
                        continue;
                    for (int di = -L; di <= L; ++di) {
                        int ii = i + di;
                        if (ii < 0 || ii >= nr)
                            continue;
                        std::size_t n = g.index(ii, jj);
                        s += kbar[kidx(i, di, dj)] * g.cell_volume(ii) * d[n] * x[n];
                    }
                }
                y[g.index(i, j)] = d[g.index(i, j)] * s;
            }
    };

    // symmetric balancing: d_i sum_j k_ij vol_j d_j = 1
    std::size_t n = g.size();
    std::vector<double> d(n, 1.0), ones(n, 1.0), row(n);
    for (int it = 0; it < 500; ++it) {
        apply(d, ones, row);
        double worst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            worst = std::max(worst, std::abs(row[k] - 1.0));
            d[k] /= std::sqrt(row[k]);
        }
        if (worst < 1e-15)
            break;
    }
    GridField out{g, std::vector<double>(n)};
    apply(d, field.q, out.q);
    return out;
}

GridField cutoff(const GridField& field, const MollifierSpec& spec)
{
    if (!(spec.eps > 0))
        throw Error("cutoff eps must be positive");
    GridField out = field;
    for (int j = 0; j < field.grid.nz; ++j)
        for (int i = 0; i < field.grid.nr; ++i) {
            MeridianPoint x = field.grid.node(i, j);
            double rho = std::hypot(x.r, x.z);
            double t = spec.cutoff_scale_mode == CutoffMode::Grow ? spec.eps * rho : rho / spec.eps;
            double chi = cutoff_profile(t);
            if (chi != 1.0)
                out.at(i, j) = chi * field.at(i, j);
        }
    return out;
}

Composition parse_composition(const std::string& s)
{
    if (s == "mollify")
        return Composition::MollifyOnly;
    if (s == "mollify_then_cutoff")
        return Composition::MollifyThenCutoff;
    if (s == "cutoff_then_mollify")
        return Composition::CutoffThenMollify;
    throw Error("unknown composition: " + s);
}

GridField regularize(const GridField& field, const MollifierSpec& spec, Composition order)
{
    switch (order) {
    case Composition::MollifyOnly: return mollify(field, spec);
    case Composition::MollifyThenCutoff: return cutoff(mollify(field, spec), spec);
    case Composition::CutoffThenMollify: return mollify(cutoff(field, spec), spec);
    }
    throw Error("unknown composition");
}

}  // namespace axisym
