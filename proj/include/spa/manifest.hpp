#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spa {

inline constexpr const char* toolkit_version = "0.1.0";

/// Everything needed to regenerate a command's data files.
struct RunManifest {
    std::vector<std::string> command;  // argv
    std::string config;                // format_config snapshot, empty when no model was used
    std::vector<std::uint64_t> seeds;
    std::string mode;
    nlohmann::json horizons = nlohmann::json::array();
    std::vector<std::string> outputs;
    double wall_clock_seconds = 0.0;

    nlohmann::json to_json() const {
        return {{"toolkit_version", toolkit_version},
                {"command", command},
                {"config", config},
                {"seeds", seeds},
                {"mode", mode},
                {"horizons", horizons},
                {"outputs", outputs},
                {"wall_clock_seconds", wall_clock_seconds}};
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << to_json().dump(2) << '\n';
    }
};

}  // namespace spa
