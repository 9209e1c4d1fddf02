// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance [id ...]   (default: all)

#include "splash/validation.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) {
        try {
            ids.push_back(std::stoi(argv[i]));
        } catch (const std::exception&) {
            std::cerr << "acceptance: criterion ids must be integers\n";
            return 2;
        }
    }
    if (ids.empty())
        ids = splash::validation::criteria_for(splash::validation::Level::full);
    int failed = 0;
    for (int id : ids) {
        const auto r = splash::validation::run_criterion(id);
        splash::validation::print_result(std::cout, r);
        std::cout.flush();
        failed += r.passed ? 0 : 1;
    }
    std::cout << ids.size() - std::size_t(failed) << "/" << ids.size() << " criteria passed\n";
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
