// Acceptance gate: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit 0 only if all pass.

#include <cstdlib>
#include <iostream>
#include <string>

#include "ccg/accept.hpp"
#include "ccg/parallel.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20240817;
    int workers = std::min(8, ccg::par::hardware_workers());
    std::string out = "acceptance-out";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);
        else if (flag == "--workers") workers = std::atoi(argv[i + 1]);
        else if (flag == "--out") out = argv[i + 1];
        else {
            std::cerr << "usage: acceptance [--seed S] [--workers W] [--out DIR]\n";
            return 2;
        }
    }
    const auto res = ccg::accept::run_suite(seed, workers, out, std::cout);
    return res.all_pass ? 0 : 1;
}
