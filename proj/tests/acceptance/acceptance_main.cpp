// Runs every acceptance criterion at its reference workload and prints one line each.
// Optional arguments restrict the run to the named criteria (C1 .. C10).
#include "spa/acceptance.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace spa::acceptance;
    std::vector<std::string> only;
    std::string json_path;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--json" && i + 1 < argc) {
            json_path = argv[++i];
        } else {
            only.push_back(arg);
        }
    }

    Context ctx;
    nlohmann::json report = nlohmann::json::array();
    int passed = 0;
    int total = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto result = c.run(ctx);
        std::printf("%s\n", format_line(result).c_str());
        std::fflush(stdout);
        report.push_back(result.to_json());
        ++total;
        if (result.status == Status::pass) ++passed;
    }
    std::printf("%d/%d criteria passed\n", passed, total);
    if (!json_path.empty()) std::ofstream(json_path) << report.dump(2) << '\n';
    return passed == total ? 0 : 1;
}
