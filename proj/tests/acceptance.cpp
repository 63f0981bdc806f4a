#include <ncglue/acceptance.hpp>

#include <iostream>

// One line per criterion; exit status 1 if any criterion fails.
int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    auto reports = ncglue::run_acceptance([](const ncglue::Report& r) { std::cout << r.line() << std::endl; }, only);
    int failed = 0;
    for (const auto& r : reports) failed += r.verdict == ncglue::Verdict::fail;
    std::cout << reports.size() - failed << "/" << reports.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
