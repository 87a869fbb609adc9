// Serial reference vs batched (OpenMP + SIMD, tabulated shape) Biot-Savart sums.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "axisym/kernel.hpp"

using namespace axisym;
using clk = std::chrono::steady_clock;

static Sources random_ring(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.25);
    Sources s;
    s.delta = 0.05;
    for (int k = 0; k < n; ++k) {
        double r = std::abs(1.0 + g(rng));
        s.r.push_back(r);
        s.z.push_back(g(rng));
        s.a.push_back(1.0 / n);
    }
    return s;
}

static double seconds(clk::time_point a, clk::time_point b)
{
    return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv)
{
    int n = argc > 1 ? std::atoi(argv[1]) : 4000;
    int n_ref = argc > 2 ? std::atoi(argv[2]) : 800;
    Sources src = random_ring(n, 7);
    std::vector<MeridianPoint> targets;
    for (int k = 0; k < n; ++k)
        targets.push_back({src.r[k] + 0.013, src.z[k] - 0.007});

    Sources small = random_ring(n_ref, 7);
    std::vector<MeridianPoint> small_t(targets.begin(), targets.begin() + std::min(n, n_ref));

    auto t0 = clk::now();
    auto ref = velocities(small, small_t, Backend::Reference);
    auto t1 = clk::now();
    auto fast = velocities(small, small_t, Backend::Batched);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        err = std::max({err, std::abs(ref[i].u_r - fast[i].u_r), std::abs(ref[i].u_z - fast[i].u_z)});
        scale = std::max({scale, std::abs(ref[i].u_r), std::abs(ref[i].u_z)});
    }
    double pairs_ref = double(small.size()) * small_t.size();
    std::printf("reference  %8.2f ns/pair  (%zu x %zu)\n", 1e9 * seconds(t0, t1) / pairs_ref, small_t.size(),
                small.size());
    std::printf("max |fast - ref| / max|u| = %.3g\n", err / scale);

    t0 = clk::now();
    auto u = velocities(src, targets, Backend::Batched);
    t1 = clk::now();
    std::printf("batched    %8.2f ns/pair  (%d x %d)\n", 1e9 * seconds(t0, t1) / (double(n) * n), n, n);

    t0 = clk::now();
    auto us = self_velocities(src, Backend::Batched);
    t1 = clk::now();
    std::printf("self pairs %8.2f ns/pair  (%d x %d, symmetric)\n", 1e9 * seconds(t0, t1) / (double(n) * n), n, n);

    t0 = clk::now();
    auto jets = phi_eval(src, targets, Backend::Batched, true);
    t1 = clk::now();
    std::printf("gradients  %8.2f ns/pair\n", 1e9 * seconds(t0, t1) / (double(n) * n));
    return 0;
}
