// Compares the OpenMP kernels against the serial reference implementations
// on a large image and reports throughput and speedup.

#include "scadtv/flow_kernels.hpp"
#include "scadtv/grid.hpp"
#include "scadtv/noise.hpp"
#include "scadtv/solvers.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace scadtv;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
    std::printf("%-22s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx\n", name.c_str(),
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 1024;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 10;

#ifdef _OPENMP
    std::printf("image %dx%d, %d reps, %d OpenMP threads\n", n, n, reps, omp_get_max_threads());
#else
    std::printf("image %dx%d, %d reps, OpenMP disabled\n", n, n, reps);
#endif

    const Image u = gaussian_image(n, n, 7);
    const Image f = gaussian_image(n, n, 8);
    const Image w(n, n, 1.5);
    const double beta = 1e-3;

    Image px(n, n), py(n, n), slope(n, n), out(n, n);
    std::vector<double> row_buf;

    report("gradient",
           time_ms([&] { (void)reference::gradient(u, beta); }, reps),
           time_ms([&] { (void)gradient(u, beta); }, reps));

    const GradientField g = gradient(u, beta);
    report("smoothed_magnitude",
           time_ms([&] { (void)reference::smoothed_magnitude(g); }, reps),
           time_ms([&] { (void)smoothed_magnitude(g); }, reps));

    report("divergence",
           time_ms([&] { (void)reference::divergence(g.gx, g.gy); }, reps),
           time_ms([&] { (void)divergence(g.gx, g.gy); }, reps));

    report("flux_and_energy",
           time_ms([&] { (void)reference::flux_and_energy(u, f, w, beta, px, py, slope); }, reps),
           time_ms([&] { (void)flux_and_energy(u, f, w, beta, px, py, slope, row_buf); }, reps));

    report("flow_step",
           time_ms([&] { (void)reference::flow_step(u, f, px, py, 0.1, out); }, reps),
           time_ms([&] { (void)flow_step(u, f, px, py, 0.1, out, row_buf); }, reps));

    report("flow_step_jacobi",
           time_ms([&] { (void)reference::flow_step_jacobi(u, f, px, py, slope, 0.1, 0.9, out); },
                   reps),
           time_ms([&] { (void)flow_step_jacobi(u, f, px, py, slope, 0.1, 0.9, out, row_buf); },
                   reps));

    // Whole-solver timing on a smaller image (fixed iteration budget).
    const int ns = 256;
    const Image noisy = add_gaussian_noise(Image(ns, ns, 128.0), 20.0, 3);
    SolverConfig cfg;
    cfg.max_inner_iters = 200;
    cfg.rel_tol = 1e-12;
    const double solver_ms = time_ms([&] { (void)tv_denoise(noisy, 10.0, cfg); }, 3);
    std::printf("%-22s %8.3f ms per 200-iteration solve at %dx%d\n", "tv_denoise", solver_ms, ns,
                ns);
    return 0;
}
