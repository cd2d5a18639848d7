// Benchmark: parallel ladder assembly against the serial reference.
// Usage: bench_ladder [k] [1/omega] [gamma]   (defaults: 1 200 4000)

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "mforge/ladder.hpp"
#include "mforge/parallel.hpp"

int main(int argc, char** argv) {
    using namespace mforge;
    const int k = argc > 1 ? std::atoi(argv[1]) : 1;
    const long den = argc > 2 ? std::atol(argv[2]) : 200;
    const long gamma = argc > 3 ? std::atol(argv[3]) : 4000;
    const Rational omega(1, den);

    auto [zeta, alpha] = find_min_alpha(k, omega, gamma);
    LadderParams p = LadderParams::make(k, omega, gamma, zeta);
    std::cout << "k=" << k << " omega=1/" << den << " gamma=" << gamma
              << " zeta=" << zeta << " alpha=" << to_string(alpha)
              << " workers=" << worker_count() << "\n";

    const auto t0 = std::chrono::steady_clock::now();
    auto par = build_ladder(p);
    const auto t1 = std::chrono::steady_clock::now();
    auto ser = build_ladder_serial(p);
    const auto t2 = std::chrono::steady_clock::now();

    const auto ms = [](auto a, auto b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
    };
    std::cout << "parallel: " << ms(t0, t1) << " ms ("
              << par.first.size() + par.second.size() << " points)\n";
    std::cout << "serial:   " << ms(t1, t2) << " ms\n";
    const bool same = par.first == ser.first && par.second == ser.second;
    std::cout << "identical results: " << (same ? "yes" : "NO") << "\n";
    return same ? 0 : 1;
}
