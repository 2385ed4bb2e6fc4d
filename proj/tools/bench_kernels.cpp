// Times the OpenMP lattice/grid kernels against their serial references and
// checks that both return bit-identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include <qpr/kernels.hpp>

using namespace qpr;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    std::printf("threads: %d\n\n", kernels::thread_count());
    std::printf("%-28s %12s %12s %9s %6s\n", "kernel", "serial [s]", "parallel [s]", "speedup",
                "equal");

    {
        const std::vector<double> omega = {1.0, 1.6180339887498949, std::sqrt(2.0)};
        const std::int64_t radius = 60;
        kernels::LatticeMinResult rs, rp;
        double ts = seconds([&] { rs = kernels::lattice_min_serial(omega, radius); }, 3);
        double tp = seconds([&] { rp = kernels::lattice_min_parallel(omega, radius); }, 3);
        bool equal = rs.min_abs == rp.min_abs && rs.argmin == rp.argmin &&
                     rs.points_scanned == rp.points_scanned;
        std::printf("%-28s %12.4f %12.4f %8.2fx %6s\n", "lattice_min d=3 r=60", ts, tp, ts / tp,
                    equal ? "yes" : "NO");
    }

    {
        const std::vector<double> omega = {1.0, 1.6180339887498949};
        const std::int64_t radius = 20000;
        kernels::LatticeMinResult rs, rp;
        double ts = seconds([&] { rs = kernels::lattice_min_serial(omega, radius); }, 3);
        double tp = seconds([&] { rp = kernels::lattice_min_parallel(omega, radius); }, 3);
        bool equal = rs.min_abs == rp.min_abs && rs.argmin == rp.argmin &&
                     rs.points_scanned == rp.points_scanned;
        std::printf("%-28s %12.4f %12.4f %8.2fx %6s\n", "lattice_min d=2 r=20000", ts, tp, ts / tp,
                    equal ? "yes" : "NO");
    }

    {
        // A trig polynomial with a few dozen modes on a fine 2-torus grid.
        FourierSeries s(2);
        for (int j = 1; j <= 12; ++j) {
            s.set_coeff({j, 13 - j}, 0.5 / j);
            s.set_coeff({-j, j - 13}, 0.5 / j);
        }
        const int n = 1024;
        double vs = 0.0, vp = 0.0;
        double ts = seconds([&] { vs = kernels::grid_sup_serial(s, n); }, 3);
        double tp = seconds([&] { vp = kernels::grid_sup_parallel(s, n); }, 3);
        std::printf("%-28s %12.4f %12.4f %8.2fx %6s\n", "grid_sup d=2 n=1024", ts, tp, ts / tp,
                    vs == vp ? "yes" : "NO");
    }

    return 0;
}
